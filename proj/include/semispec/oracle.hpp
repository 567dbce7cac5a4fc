#pragma once

#include <cstddef>
#include <vector>

#include "semispec/model.hpp"
#include "semispec/spectrum.hpp"

namespace semispec {

struct HarmonicOracleParams {
    double mass = 1.0;
    double omega = 1.0;
    double p0 = 0.0;
    double q0 = 0.0;
};

struct SpectralLine {
    double energy = 0.0;
    double weight = 0.0;
};

/// lambda = (m w q0^2 + p0^2/(m w)) / (2 hbar), the mean excitation of the
/// displaced reference state.
double harmonic_lambda(const HarmonicOracleParams& p);

/// Exact harmonic comb of the thawed-Gaussian propagation:
/// lines at hbar w (k + 1/2) with Poisson weights e^{-lambda} lambda^k / k!.
std::vector<SpectralLine> tgwd_harmonic_weights(const HarmonicOracleParams& p, std::size_t kMax);

/// Harmonic comb of the separable mixed propagator: same positions, weights
/// e^{-2 lambda} lambda^{2k} / (k!)^2 (squared relative weights).
std::vector<SpectralLine> hybrid_sep_harmonic_weights(const HarmonicOracleParams& p,
                                                      std::size_t kMax);

/// E_n = hbar w_s (n + 1/2) - [hbar w_s (n + 1/2)]^2 / (4 De). Throws when n
/// reaches the dissociation bound.
std::vector<double> morse_eigenvalues(const MorseParams& p, std::size_t nMax);

/// Broadens a line list onto the finite-window energy grid of an N-sample
/// run: each line becomes the |int_0^T|^2 kernel (T/2 pi hbar) sinc^2.
Spectrum broaden_lines(const std::vector<SpectralLine>& lines, std::size_t nSamples, double dt);

}  // namespace semispec
