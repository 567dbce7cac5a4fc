#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "semispec/dynamics.hpp"
#include "semispec/model.hpp"
#include "semispec/spectrum.hpp"
#include "semispec/types.hpp"

namespace semispec {

/// Minimum-uncertainty Gaussian |p, q> with per-DOF widths gamma.
/// Self-overlap is exactly 1.
struct CoherentState {
    PhasePoint center;
    Vec gamma;
};

/// log <bra | ket-center>:
///   sum_i [ -gamma_i/4 (dq_i)^2 - (dp_i)^2/(4 gamma_i hbar^2)
///           + i/(2 hbar) (p_bra,i + p_ket,i)(q_bra,i - q_ket,i) ].
cplx overlap_exponent(const CoherentState& bra, const PhasePoint& ketCenter);
cplx overlap(const CoherentState& bra, const PhasePoint& ketCenter);

/// Subspace variant over the listed DOF indices only.
cplx overlap_exponent_subset(const CoherentState& bra, const PhasePoint& ketCenter,
                             const std::vector<std::size_t>& dofs);

/// Monte Carlo configuration for the phase-space integral. Draws come from
/// the Husimi density of the reference state, restricted to `sampledDofs`
/// (all DOFs for plain HK, system DOFs only for the mixed propagator);
/// unsampled DOFs stay at the reference center.
struct SamplerConfig {
    std::size_t nTrajectories = 0;
    std::uint64_t seed = 0;
    std::vector<std::size_t> sampledDofs;
};

struct SampledPoint {
    PhasePoint point;
    double weight;  // importance weight, already divided by nTrajectories
};

/// Deterministic per-(trajectory, DOF) substreams: the same index yields the
/// same draw for any worker count, and a DOF's stream does not depend on
/// which other DOFs are sampled.
class PhaseSpaceSampler {
  public:
    PhaseSpaceSampler(const SamplerConfig& cfg, const ModelSpec& model);
    SampledPoint draw(std::size_t trajectoryIndex) const;

  private:
    SamplerConfig cfg_;
    const ModelSpec& model_;
};

/// Per-trajectory integrand of the separable time-averaged HK spectrum:
///   f(t_k) = <chi | p(t_k), q(t_k)> exp{ i [S_k + phi_k]/hbar }.
TimeSignal hk_separable_signal(const ModelSpec& model, const PhasePoint& initial,
                               std::size_t nSteps, double dt, const CoherentState& chi,
                               std::size_t substeps = 1, double* maxPrefactorMag = nullptr);

struct RunSettings {
    std::size_t nSteps = 0;
    double dt = 0.0;
    std::size_t substeps = 1;
    std::size_t threads = 1;
};

struct RunDiagnostics {
    double maxPrefactorMag = 1.0;
};

/// Separable time-averaged HK spectrum: Monte Carlo over all sampled DOFs,
/// I(E) = 1/((2 pi hbar)^F 2 pi hbar T) sum_j w_j |int_0^T f_j e^{iEt} dt|^2.
Spectrum hk_separable_spectrum(const ModelSpec& model, const SamplerConfig& cfg,
                               const RunSettings& run, const CoherentState& chi,
                               RunDiagnostics* diag = nullptr);

/// Full time-averaged HK spectrum with the exact double-time prefactor
/// C_{t2}(p(t1), q(t1)), evaluated from the monodromy composed between t1 and
/// t2. O(nSteps^2) per trajectory; warns on stderr above 2^13 steps.
Spectrum hk_full_spectrum(const ModelSpec& model, const SamplerConfig& cfg,
                          const RunSettings& run, const CoherentState& chi,
                          RunDiagnostics* diag = nullptr);

/// Lag kernel K(tau) of one trajectory of the full TA-HK method (exposed for
/// the factorization tests); I(E) = pref * Re DFT+(K) with K(0) half-weighted.
std::vector<cplx> hk_full_lag_kernel(const ModelSpec& model, const PhasePoint& initial,
                                     const RunSettings& run, const CoherentState& chi,
                                     double* maxPrefactorMag = nullptr);

}  // namespace semispec
