#include "semispec/spectrum.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "semispec/fft.hpp"

namespace semispec {

double Spectrum::bin_width() const {
    if (energies.size() < 2) throw std::runtime_error("Spectrum: no energy grid");
    return energies[1] - energies[0];
}

std::vector<double> fft_energy_grid(std::size_t n, double dt) {
    std::vector<double> e(n);
    const double de = 2.0 * std::numbers::pi * constants::hbar / (static_cast<double>(n) * dt);
    for (std::size_t k = 0; k < n; ++k) e[k] = de * static_cast<double>(k);
    return e;
}

void KahanVector::add(const std::vector<double>& v) {
    if (v.size() != sum_.size()) throw std::invalid_argument("KahanVector: size mismatch");
    for (std::size_t i = 0; i < v.size(); ++i) {
        const double y = v[i] - comp_[i];
        const double t = sum_[i] + y;
        comp_[i] = (t - sum_[i]) - y;
        sum_[i] = t;
    }
}

void KahanVector::add_scaled(const std::vector<double>& v, double scale) {
    if (v.size() != sum_.size()) throw std::invalid_argument("KahanVector: size mismatch");
    for (std::size_t i = 0; i < v.size(); ++i) {
        const double y = v[i] * scale - comp_[i];
        const double t = sum_[i] + y;
        comp_[i] = (t - sum_[i]) - y;
        sum_[i] = t;
    }
}

SeparableAccumulator::SeparableAccumulator(std::size_t nSamples, double dt)
    : n_(nSamples), dt_(dt), acc_(nSamples), work_(nSamples) {}

void SeparableAccumulator::add(const TimeSignal& signal, double weight) {
    if (signal.samples.size() != n_ || signal.dt != dt_)
        throw std::invalid_argument("SeparableAccumulator: signal length/dt mismatch");
    work_ = signal.samples;
    fft_inplace(work_, +1);
    std::vector<double> contrib(n_);
    for (std::size_t k = 0; k < n_; ++k) contrib[k] = weight * std::norm(work_[k]);
    acc_.add(contrib);
}

void SeparableAccumulator::merge(const SeparableAccumulator& other) {
    if (other.n_ != n_ || other.dt_ != dt_)
        throw std::invalid_argument("SeparableAccumulator: merge mismatch");
    acc_.add(other.acc_.value());
}

Spectrum SeparableAccumulator::finish(double prefactor) const {
    Spectrum s;
    s.energies = fft_energy_grid(n_, dt_);
    s.intensities.resize(n_);
    const double scale = prefactor * dt_ * dt_;
    const auto& v = acc_.value();
    for (std::size_t k = 0; k < n_; ++k) s.intensities[k] = scale * v[k];
    return s;
}

Spectrum shift_energy(const Spectrum& spec, const BathSpec& bath) {
    if (spec.shiftApplied) throw std::runtime_error("shift_energy: shift already applied");
    Spectrum out = spec;
    const double shift = bath.zero_point_energy();
    for (double& e : out.energies) e -= shift;
    out.shiftApplied = true;
    return out;
}

namespace {

// Prominence of the local maximum at index i: height above the higher of the
// two bracketing minima, walking outward until a taller sample is met.
double prominence_at(const std::vector<double>& v, std::size_t i) {
    const double h = v[i];
    double leftMin = h;
    for (std::size_t k = i; k-- > 0;) {
        if (v[k] > h) break;
        leftMin = std::min(leftMin, v[k]);
    }
    double rightMin = h;
    for (std::size_t k = i + 1; k < v.size(); ++k) {
        if (v[k] > h) break;
        rightMin = std::min(rightMin, v[k]);
    }
    return h - std::max(leftMin, rightMin);
}

}  // namespace

std::vector<Peak> find_peaks(const Spectrum& spec, double minProminence) {
    if (!(minProminence > 0.0) || !(minProminence < 1.0))
        throw std::invalid_argument("find_peaks: minProminence must be in (0,1)");
    const auto& v = spec.intensities;
    std::vector<Peak> peaks;
    if (v.size() < 3) return peaks;
    const double vmax = *std::max_element(v.begin(), v.end());
    if (!(vmax > 0.0)) return peaks;
    const double threshold = minProminence * vmax;
    const double de = spec.bin_width();

    for (std::size_t i = 1; i + 1 < v.size(); ++i) {
        if (!(v[i] > 0.0)) continue;  // real-part spectra dip below zero
        if (!(v[i] > v[i - 1]) || !(v[i] >= v[i + 1])) continue;
        if (prominence_at(v, i) < threshold) continue;

        // Sub-bin refinement from the line samples around the maximum.
        // Modulus-squared spectra carry sinc^2-type lines (all positive);
        // real-part spectra carry sinc-type lines whose first sample beyond
        // the true position is negative. Both ratios invert in closed form.
        double delta = 0.0;
        double height = v[i];
        const double negThreshold = -0.02 * v[i];
        if (v[i + 1] < negThreshold || v[i - 1] < negThreshold) {
            // sinc line: I_side/I_0 = -d/(1 - d) on the far side of the peak
            const double r = (v[i + 1] <= v[i - 1]) ? v[i + 1] / v[i] : v[i - 1] / v[i];
            delta = std::clamp(-r / (1.0 - r), -0.5, 0.5);
            if (v[i + 1] > v[i - 1]) delta = -delta;
            // the correction diverges towards half-bin offsets; leave the raw
            // sample height there
            const double x = 2.0 * std::numbers::pi * delta;
            if (std::abs(delta) < 0.45 && std::abs(x) > 1e-12) height = v[i] * x / std::sin(x);
        } else {
            const double a0 = std::sqrt(std::max(v[i], 0.0));
            const double al = std::sqrt(std::max(v[i - 1], 0.0));
            const double ar = std::sqrt(std::max(v[i + 1], 0.0));
            if (ar >= al && a0 > 0.0) {
                const double r = ar / a0;
                delta = r / (1.0 + r);
            } else if (a0 > 0.0) {
                const double r = al / a0;
                delta = -r / (1.0 + r);
            }
            const double x = std::numbers::pi * delta;
            if (std::abs(x) > 1e-12) {
                const double sinc = std::sin(x) / x;
                height = v[i] / (sinc * sinc);
            }
        }
        peaks.push_back({spec.energies[i] + delta * de, height});
    }
    std::sort(peaks.begin(), peaks.end(),
              [](const Peak& a, const Peak& b) { return a.energy < b.energy; });
    return peaks;
}

double relative_drift(const std::vector<double>& series) {
    const std::size_t n = series.size();
    if (n < 8) throw std::invalid_argument("relative_drift: series too short");
    const std::size_t w = n / 4;
    auto hannMean = [w](const double* x) {
        double s = 0.0, norm = 0.0;
        for (std::size_t k = 0; k < w; ++k) {
            const double h =
                0.5 - 0.5 * std::cos(2.0 * std::numbers::pi * (static_cast<double>(k) + 0.5) /
                                     static_cast<double>(w));
            s += h * x[k];
            norm += h;
        }
        return s / norm;
    };
    const double first = hannMean(series.data());
    const double last = hannMean(series.data() + (n - w));
    double mean = 0.0;
    for (double x : series) mean += x;
    mean /= static_cast<double>(n);
    return std::abs(last - first) / std::max(std::abs(mean), 1e-300);
}

}  // namespace semispec
