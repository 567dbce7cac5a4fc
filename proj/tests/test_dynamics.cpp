#include <doctest.h>

#include <cmath>
#include <numbers>
#include <vector>

#include "semispec/dynamics.hpp"
#include "semispec/spectrum.hpp"

using namespace semispec;

namespace {

ModelSpec harmonic_model(double mass = 1.0, double omega = 1.0) {
    return make_model(SystemPotential::make_harmonic(mass, omega), BathSpec{});
}

ModelSpec iodine_bath_model() {
    const auto sys = SystemPotential::make_morse({0.057, 0.0, 0.983, 1.165e5});
    const auto bath = discretize_bath(1, 0.1 * sys.frequency(), 0.2, sys);
    return make_model(sys, bath);
}

// Closed-form harmonic monodromy blocks.
struct HarmonicMono {
    double qq, qp, pq, pp;
};
HarmonicMono harmonic_monodromy(double mass, double omega, double t) {
    return {std::cos(omega * t), std::sin(omega * t) / (mass * omega),
            -mass * omega * std::sin(omega * t), std::cos(omega * t)};
}

}  // namespace

TEST_CASE("free particle limit is integrated exactly") {
    // vanishing curvature: the force is zero to double precision
    auto freeSys = SystemPotential::make_harmonic(2.0, 1e-12);
    ModelSpec fm = make_model(freeSys, BathSpec{});
    PhasePoint x0{Vec::Zero(1), Vec::Zero(1)};
    x0.q[0] = 0.3;
    x0.p[0] = 1.7;
    Integrator integ(fm, initial_state(fm, x0));
    const double dt = 0.25;
    for (int i = 0; i < 40; ++i) integ.step(dt);
    const double t = 40 * dt;
    CHECK(integ.state().point.p[0] == doctest::Approx(1.7).epsilon(1e-12));
    CHECK(integ.state().point.q[0] == doctest::Approx(0.3 + 1.7 * t / 2.0).epsilon(1e-12));
    CHECK(integ.state().mono.qp(0, 0) == doctest::Approx(t / 2.0).epsilon(1e-12));
}

TEST_CASE("harmonic oscillator returns to the start after one period") {
    const ModelSpec m = harmonic_model();
    PhasePoint x0{Vec::Zero(1), Vec::Zero(1)};
    x0.q[0] = 1.0;
    const double period = 2.0 * std::numbers::pi;

    // The discrete frequency of velocity Verlet is omega*(1 + (w dt)^2/24),
    // so the return error after one period is ~2 pi (w dt)^2/24: 2.6e-6 at
    // dt = T/2000 and 1e-8 only below dt = T/64000.
    double err2000 = 0.0, err64000 = 0.0;
    for (const int n : {2000, 64000}) {
        Integrator integ(m, initial_state(m, x0));
        const double dt = period / n;
        for (int i = 0; i < n; ++i) integ.step(dt);
        const double err = std::abs(integ.state().point.q[0] - 1.0) +
                           std::abs(integ.state().point.p[0]);
        (n == 2000 ? err2000 : err64000) = err;
    }
    CHECK(err2000 < 1e-5);
    CHECK(err64000 < 1e-8);
    CHECK(err2000 / err64000 == doctest::Approx(1024.0).epsilon(0.2));  // O(dt^2)

    Integrator integ(m, initial_state(m, x0));
    const int n = 64000;
    for (int i = 0; i < n; ++i) integ.step(period / n);
    const Monodromy& mono = integ.state().mono;
    CHECK(std::abs(mono.qq(0, 0) - 1.0) < 1e-6);
    CHECK(std::abs(mono.pp(0, 0) - 1.0) < 1e-6);
    CHECK(std::abs(mono.qp(0, 0)) < 1e-6);
    CHECK(std::abs(mono.pq(0, 0)) < 1e-6);
}

TEST_CASE("harmonic monodromy matches the closed form over ten periods") {
    const double mass = 1.3, omega = 0.8;
    const ModelSpec m = harmonic_model(mass, omega);
    PhasePoint x0{Vec::Zero(1), Vec::Zero(1)};
    x0.q[0] = 0.4;
    x0.p[0] = -0.2;
    Integrator integ(m, initial_state(m, x0));
    const double period = 2.0 * std::numbers::pi / omega;
    const int stepsPerPeriod = 131072;
    const double dt = period / stepsPerPeriod;
    for (int p = 0; p < 80; ++p) {
        for (int i = 0; i < stepsPerPeriod / 8; ++i) integ.step(dt);
        const auto ref = harmonic_monodromy(mass, omega, integ.state().t);
        CHECK(std::abs(integ.state().mono.qq(0, 0) - ref.qq) < 1e-6);
        CHECK(std::abs(integ.state().mono.qp(0, 0) - ref.qp) < 1e-6 / (mass * omega));
        CHECK(std::abs(integ.state().mono.pq(0, 0) - ref.pq) < 1e-6 * (mass * omega));
        CHECK(std::abs(integ.state().mono.pp(0, 0) - ref.pp) < 1e-6);
    }
}

TEST_CASE("prefactor phase of the harmonic oscillator is -hbar w t/2") {
    const double mass = 2.0, omega = 0.7;
    const ModelSpec m = harmonic_model(mass, omega);  // gamma = m w by construction
    PhasePoint x0{Vec::Zero(1), Vec::Zero(1)};
    x0.p[0] = std::sqrt(mass * omega);
    const double period = 2.0 * std::numbers::pi / omega;
    const int n = 40000;
    Integrator integ(m, initial_state(m, x0));
    for (int i = 0; i < n; ++i) integ.step(period / n);
    CHECK(integ.state().phi ==
          doctest::Approx(-0.5 * constants::hbar * omega * integ.state().t).epsilon(1e-8));
    // |C_t| stays 1 for the matched width
    CHECK(std::abs(integ.state().lastPrefactor) == doctest::Approx(1.0).epsilon(1e-10));
}

TEST_CASE("prefactor at t = 0 is one and underflow throws") {
    const ModelSpec m = harmonic_model();
    const TrajectoryState s = initial_state(m, PhasePoint{Vec::Zero(1), Vec::Zero(1)});
    CHECK(hk_prefactor(s, m.gamma) == cplx(1.0, 0.0));
    CHECK_THROWS_WITH(continue_sqrt(cplx(0.0, 0.0), cplx(1.0, 0.0)), "prefactor underflow");
}

TEST_CASE("energy of the reference state and escape handling") {
    const ModelSpec m = iodine_bath_model();
    PhasePoint x = m.refCenter;
    x.p[1] = 0.0;  // uncoupled system energy only
    CHECK(energy(m, x) == doctest::Approx(4.862e-4).epsilon(1e-4));

    // an absurd step makes the Morse force blow up
    PhasePoint bad = m.refCenter;
    bad.p[0] = -1e6;
    Integrator integ(m, initial_state(m, bad));
    CHECK_THROWS(integ.step(1e5));
}

TEST_CASE("phase continuity guard") {
    CHECK(phase_increment(cplx(1.0, 0.0), std::polar(1.0, 0.3)) == doctest::Approx(0.3));
    CHECK_THROWS_WITH((void)phase_increment(cplx(1.0, 0.0), cplx(0.0, 1.0)),
                      "time step too large for prefactor continuity");

    // An unstable step size eventually trips one of the guards.
    const ModelSpec m = harmonic_model();
    PhasePoint x0{Vec::Zero(1), Vec::Zero(1)};
    x0.q[0] = 1.0;
    Integrator integ(m, initial_state(m, x0));
    CHECK_THROWS([&] {
        for (int i = 0; i < 5000; ++i) integ.step(2.5);
    }());
}

TEST_CASE("action accumulation is consistent with the Lagrangian") {
    const ModelSpec m = harmonic_model();
    PhasePoint x0{Vec::Zero(1), Vec::Zero(1)};
    x0.q[0] = 0.7;
    x0.p[0] = 0.3;
    // Analytic action for the harmonic oscillator:
    // S_t = (p0^2/(2 m w) - m w q0^2/2) cos sin - p0 q0 sin^2
    auto exact = [&](double t) {
        const double c = std::cos(t), s = std::sin(t);
        return (0.3 * 0.3 / 2.0 - 0.7 * 0.7 / 2.0) * c * s - 0.3 * 0.7 * s * s;
    };
    double errCoarse = 0.0, errFine = 0.0;
    for (const int n : {1000, 10000}) {
        Integrator integ(m, initial_state(m, x0));
        const double dt = 5.0 / n;
        for (int i = 0; i < n; ++i) integ.step(dt);
        const double err = std::abs(integ.state().S - exact(5.0));
        (n == 1000 ? errCoarse : errFine) = err;
    }
    CHECK(errFine < 1e-6);
    CHECK(errCoarse / errFine == doctest::Approx(100.0).epsilon(0.25));
}

TEST_CASE("symplecticity and energy conservation on the 2d model at production settings") {
    const ModelSpec m = iodine_bath_model();
    const double ts = 2.0 * std::numbers::pi / m.system.frequency();
    const double dt = ts / 20.0;
    const std::size_t n = 1 << 14;

    Integrator integ(m, initial_state(m, m.refCenter));
    std::vector<double> energies;
    energies.reserve(n + 1);
    energies.push_back(energy(m, m.refCenter));
    double defect = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        integ.step(dt);
        energies.push_back(energy(m, integ.state().point));
        if (i % 512 == 0) defect = std::max(defect, integ.state().mono.symplectic_defect());
    }
    defect = std::max(defect, integ.state().mono.symplectic_defect());
    CHECK(defect < 1e-6);
    CHECK(relative_drift(energies) < 1e-6);
}
