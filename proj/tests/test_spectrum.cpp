#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "semispec/model.hpp"
#include "semispec/spectrum.hpp"

using namespace semispec;

namespace {

TimeSignal tone(double energy, std::size_t n, double dt, cplx amplitude = {1.0, 0.0}) {
    TimeSignal s;
    s.dt = dt;
    s.samples.resize(n);
    for (std::size_t k = 0; k < n; ++k) {
        const double t = dt * static_cast<double>(k);
        s.samples[k] = amplitude * std::exp(cplx(0.0, -energy * t / constants::hbar));
    }
    return s;
}

}  // namespace

TEST_CASE("single tone lands in the right bin") {
    const std::size_t n = 256;
    const double dt = 0.1;
    const auto grid = fft_energy_grid(n, dt);
    const double e0 = grid[40];  // exactly on-grid
    SeparableAccumulator acc(n, dt);
    acc.add(tone(e0, n, dt), 1.0);
    const Spectrum s = acc.finish(1.0);
    std::size_t argmax = 0;
    for (std::size_t k = 1; k < n; ++k)
        if (s.intensities[k] > s.intensities[argmax]) argmax = k;
    CHECK(argmax == 40);
    // all weight in that bin for an on-grid tone
    CHECK(s.intensities[40] == doctest::Approx(dt * dt * n * n).epsilon(1e-12));
    CHECK(s.intensities[41] < 1e-18 * s.intensities[40]);
}

TEST_CASE("accumulation is linear in the weights") {
    const std::size_t n = 128;
    const double dt = 0.2;
    const TimeSignal f = tone(1.3, n, dt);
    SeparableAccumulator whole(n, dt), halves(n, dt);
    whole.add(f, 1.0);
    halves.add(f, 0.5);
    halves.add(f, 0.5);
    const auto a = whole.finish(2.0), b = halves.finish(2.0);
    for (std::size_t k = 0; k < n; ++k)
        CHECK(a.intensities[k] == doctest::Approx(b.intensities[k]).epsilon(1e-15));
}

TEST_CASE("parseval consistency of the accumulated spectrum") {
    const std::size_t n = 512;
    const double dt = 0.37;
    std::mt19937_64 rng(3);
    std::normal_distribution<double> g(0.0, 1.0);
    SeparableAccumulator acc(n, dt);
    double rhs = 0.0;
    const double hbar = constants::hbar;
    for (int j = 0; j < 5; ++j) {
        TimeSignal f;
        f.dt = dt;
        f.samples.resize(n);
        double norm2 = 0.0;
        for (auto& z : f.samples) {
            z = cplx(g(rng), g(rng));
            norm2 += std::norm(z);
        }
        const double w = 0.2 + 0.1 * j;
        acc.add(f, w);
        rhs += w * norm2 * dt;
    }
    const double pref = 0.123;
    const Spectrum s = acc.finish(pref);
    double lhs = 0.0;
    for (double v : s.intensities) lhs += v;
    lhs *= s.bin_width();
    CHECK(lhs == doctest::Approx(pref * 2.0 * std::numbers::pi * hbar * rhs).epsilon(1e-10));
}

TEST_CASE("energy shift subtracts the bath zero point energy once") {
    Spectrum s;
    s.energies = {0.0, 1.0, 2.0};
    s.intensities = {0.0, 1.0, 0.0};

    const BathSpec none{};
    const Spectrum same = shift_energy(s, none);
    CHECK(same.energies[1] == 1.0);

    BathSpec bath;
    bath.count = 1;
    bath.omega = {9.724e-5};
    bath.coupling = {0.0};
    const Spectrum shifted = shift_energy(s, bath);
    CHECK(s.energies[0] - shifted.energies[0] == doctest::Approx(4.862e-5).epsilon(1e-4));
    CHECK_THROWS_WITH((void)shift_energy(shifted, bath), "shift_energy: shift already applied");

    BathSpec two;
    two.count = 2;
    two.omega = {0.5, 1.0};
    two.coupling = {0.0, 0.0};
    const Spectrum s2 = shift_energy(s, two);
    CHECK(s.energies[0] - s2.energies[0] == doctest::Approx(0.75).epsilon(1e-15));
}

TEST_CASE("find_peaks basics") {
    Spectrum flat;
    flat.energies = {0.0, 1.0, 2.0, 3.0};
    flat.intensities = {1.0, 1.0, 1.0, 1.0};
    CHECK(find_peaks(flat, 0.01).empty());

    const std::size_t n = 256;
    const double dt = 0.1;
    const auto grid = fft_energy_grid(n, dt);
    SeparableAccumulator acc(n, dt);
    acc.add(tone(grid[30], n, dt), 1.0);
    const auto peaks = find_peaks(acc.finish(1.0), 1e-3);
    REQUIRE(peaks.size() == 1);
    CHECK(peaks[0].energy == doctest::Approx(grid[30]).epsilon(1e-9));

    CHECK_THROWS((void)find_peaks(flat, 0.0));
    CHECK_THROWS((void)find_peaks(flat, 1.0));
}

TEST_CASE("peak refinement is sub-bin accurate for off-grid tones") {
    const std::size_t n = 1024;
    const double dt = 0.25;
    const auto grid = fft_energy_grid(n, dt);
    const double bin = grid[1] - grid[0];
    std::mt19937_64 rng(17);
    std::uniform_real_distribution<double> offset(-0.499, 0.499);
    std::uniform_int_distribution<int> binIndex(20, static_cast<int>(n) - 20);
    for (int trial = 0; trial < 100; ++trial) {
        const double e0 = grid[static_cast<std::size_t>(binIndex(rng))] + offset(rng) * bin;
        SeparableAccumulator acc(n, dt);
        acc.add(tone(e0, n, dt), 1.0);
        const auto peaks = find_peaks(acc.finish(1.0), 1e-2);
        REQUIRE(!peaks.empty());
        double best = 1e300;
        for (const auto& p : peaks) best = std::min(best, std::abs(p.energy - e0));
        CHECK(best < 0.1 * bin);
    }
}

TEST_CASE("relative drift estimator ignores bounded oscillation") {
    std::vector<double> series(16384);
    for (std::size_t i = 0; i < series.size(); ++i) {
        const double t = static_cast<double>(i);
        series[i] = 1.0 + 0.012 * std::sin(0.63 * t) + 1e-4 * std::sin(0.0063 * t);
    }
    CHECK(relative_drift(series) < 1e-6);
    // a genuine linear drift is seen
    for (std::size_t i = 0; i < series.size(); ++i)
        series[i] += 1e-4 * static_cast<double>(i) / static_cast<double>(series.size());
    CHECK(relative_drift(series) > 5e-5);
}
