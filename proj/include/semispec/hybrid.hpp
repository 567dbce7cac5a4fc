#pragma once

#include <cstddef>
#include <vector>

#include "semispec/dynamics.hpp"
#include "semispec/model.hpp"
#include "semispec/semiclassics.hpp"
#include "semispec/spectrum.hpp"
#include "semispec/types.hpp"

namespace semispec {

/// Split of the F phase-space DOFs into a Herman-Kluk (sampled) subset and a
/// thawed-Gaussian (analytically integrated) subset. The thawed-Gaussian
/// subset may be the whole space (hkDofs empty): the spectrum then comes from
/// the single central trajectory.
struct Partition {
    std::vector<std::size_t> hkDofs;
    std::vector<std::size_t> tgDofs;

    std::size_t f_hk() const { return hkDofs.size(); }
    std::size_t f_tg() const { return tgDofs.size(); }
    void validate(std::size_t fTotal) const;

    static Partition system_bath(const ModelSpec& model);
    static Partition all_tg(const ModelSpec& model);
};

/// Per-step quantities of the mixed propagator: the Gaussian-integration
/// matrix A (2F_tg x 2F_tg, (dp, dq) block order), linear vector b, its
/// modified variant b_m, scalar c, prefactor phase and the system-subspace
/// overlap. Im(A) is time independent, so only Re(A) is stored; the full
/// complex matrix is available through hybrid_A_complex().
struct HybridKernel {
    Mat reA;
    CVec b;
    CVec bm;
    cplx c;
    double phi = 0.0;
    cplx sysOverlapExponent;
};

HybridKernel assemble_kernel(const ModelSpec& model, const Partition& partition,
                             const TrajectoryState& state, const CoherentState& chi);

/// Symmetrized complex A(t) as written out in the derivation; used by the
/// invariant checks (Im(A) constancy, det(A(t1)+A*(t2)) reality).
CMat hybrid_A_complex(const ModelSpec& model, const Partition& partition,
                      const TrajectoryState& state);

struct HybridSeries {
    std::vector<HybridKernel> steps;
    double dt = 0.0;
};

/// Propagates the trajectory started at `initial` and assembles the kernel at
/// every sampled time step (nSteps entries, t = 0 included).
HybridSeries assemble_series(const ModelSpec& model, const Partition& partition,
                             const PhasePoint& initial, const RunSettings& run,
                             const CoherentState& chi, double* maxPrefactorMag = nullptr);

/// 1/4 b^T (2 Re A)^{-1} b for one step (complex bilinear form, not sesquilinear).
cplx gaussian_quadform(const Mat& reA, const CVec& b);

/// Single-time integrand of the separable mixed spectrum:
///   g(t) = <chi_hk|hk(t)> det(A+A*)^{-1/4} exp{ 1/4 b_m^T (A+A*)^{-1} b_m
///          + c_t + i phi_t/hbar }.
TimeSignal mixed_sep_signal(const HybridSeries& series);

/// Lag kernel K(tau) of the double-time mixed spectrum for one trajectory;
/// I(E) = pref * Re DFT-(K), K(0) half-weighted. Throws when A(t1)+A*(t2)
/// is not positive definite.
std::vector<cplx> mixed_full_lag_kernel(const HybridSeries& series);

/// Full mixed spectrum (double time integration, 2F_tg-dimensional Gaussian
/// integral per time pair).
Spectrum mixed_full_spectrum(const ModelSpec& model, const Partition& partition,
                             const SamplerConfig& cfg, const RunSettings& run,
                             const CoherentState& chi, RunDiagnostics* diag = nullptr);

/// Separable mixed spectrum (single time integration).
Spectrum mixed_sep_spectrum(const ModelSpec& model, const Partition& partition,
                            const SamplerConfig& cfg, const RunSettings& run,
                            const CoherentState& chi, RunDiagnostics* diag = nullptr);

}  // namespace semispec
