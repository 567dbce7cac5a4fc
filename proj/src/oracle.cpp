#include "semispec/oracle.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace semispec {

double harmonic_lambda(const HarmonicOracleParams& p) {
    const double mw = p.mass * p.omega;
    return 0.5 * (mw * p.q0 * p.q0 + p.p0 * p.p0 / mw) / constants::hbar;
}

std::vector<SpectralLine> tgwd_harmonic_weights(const HarmonicOracleParams& p, std::size_t kMax) {
    const double lambda = harmonic_lambda(p);
    std::vector<SpectralLine> lines;
    double w = std::exp(-lambda);  // k = 0 term of the Poisson distribution
    for (std::size_t k = 0; k <= kMax; ++k) {
        lines.push_back({constants::hbar * p.omega * (static_cast<double>(k) + 0.5), w});
        w *= lambda / static_cast<double>(k + 1);
    }
    return lines;
}

std::vector<SpectralLine> hybrid_sep_harmonic_weights(const HarmonicOracleParams& p,
                                                      std::size_t kMax) {
    const double lambda = harmonic_lambda(p);
    std::vector<SpectralLine> lines;
    double w = std::exp(-2.0 * lambda);
    for (std::size_t k = 0; k <= kMax; ++k) {
        lines.push_back({constants::hbar * p.omega * (static_cast<double>(k) + 0.5), w});
        const double dk = static_cast<double>(k + 1);
        w *= lambda * lambda / (dk * dk);
    }
    return lines;
}

std::vector<double> morse_eigenvalues(const MorseParams& p, std::size_t nMax) {
    p.validate();
    const double w = p.harmonic_frequency();
    // E_n increases only while n + 1/2 < 2 De / (hbar w).
    const double bound = 2.0 * p.de / (constants::hbar * w) - 0.5;
    std::vector<double> e;
    for (std::size_t n = 0; n <= nMax; ++n) {
        if (static_cast<double>(n) >= bound)
            throw std::invalid_argument("morse_eigenvalues: level above dissociation bound");
        const double x = constants::hbar * w * (static_cast<double>(n) + 0.5);
        e.push_back(x - x * x / (4.0 * p.de));
    }
    return e;
}

Spectrum broaden_lines(const std::vector<SpectralLine>& lines, std::size_t nSamples, double dt) {
    const double hbar = constants::hbar;
    const double T = static_cast<double>(nSamples) * dt;
    Spectrum s;
    s.energies = fft_energy_grid(nSamples, dt);
    s.intensities.assign(nSamples, 0.0);
    const double height = T / (2.0 * std::numbers::pi * hbar);
    for (const auto& line : lines) {
        for (std::size_t k = 0; k < nSamples; ++k) {
            const double x = (s.energies[k] - line.energy) * T / (2.0 * hbar);
            const double sinc = std::abs(x) < 1e-12 ? 1.0 : std::sin(x) / x;
            s.intensities[k] += line.weight * height * sinc * sinc;
        }
    }
    return s;
}

}  // namespace semispec
