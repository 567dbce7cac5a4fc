#pragma once

#include <functional>

#include "semispec/model.hpp"
#include "semispec/types.hpp"

namespace semispec {

/// Four F x F blocks of the stability (monodromy) matrix. Block names give
/// numerator/denominator: Mqp = dq(t)/dp(0), etc. At t = 0 the matrix is the
/// identity: Mqq = Mpp = 1, Mqp = Mpq = 0.
struct Monodromy {
    Mat qq, qp, pq, pp;

    static Monodromy identity(std::size_t f);
    // Full 2F x 2F matrix in (q, p) block order.
    Mat full() const;
    // max |M^T J M - J| over all entries, J the standard symplectic form.
    double symplectic_defect() const;
};

/// One trajectory at a point in time: phase-space point, monodromy, classical
/// action and the unwrapped phase of the Herman-Kluk prefactor.
struct TrajectoryState {
    double t = 0.0;
    PhasePoint point;
    Monodromy mono;
    double S = 0.0;              // classical action (a.u.)
    double phi = 0.0;            // unwrapped prefactor phase, phi/hbar = arg C_t
    cplx lastPrefactor{1.0, 0.0};
};

/// Herman-Kluk prefactor of a monodromy matrix:
///   C = sqrt(det[ (G^1/2 Mqq G^-1/2 + G^-1/2 Mpp G^1/2
///                 - i*hbar*G^1/2 Mqp G^1/2 + (i/hbar) G^-1/2 Mpq G^-1/2)/2 ])
/// with G = diag(gamma). The returned value is the principal square root;
/// continuous branch tracking is the caller's job (see step()).
cplx hk_prefactor_squared(const Monodromy& m, const Vec& gamma);
cplx hk_prefactor(const TrajectoryState& state, const Vec& gamma);

/// Square root of `z` on the branch closest to `previous`. Throws
/// "prefactor underflow" when |z| < 1e-300.
cplx continue_sqrt(cplx z, cplx previous);

/// arg(current/previous), the per-step phase increment of the continuously
/// tracked prefactor. Throws "time step too large for prefactor continuity"
/// when the increment reaches pi/2 (the branch choice becomes ambiguous
/// there) or is not finite.
double phase_increment(cplx previous, cplx current);

double energy(const ModelSpec& model, const PhasePoint& point);

TrajectoryState initial_state(const ModelSpec& model, const PhasePoint& point);

/// Propagates classical coordinates with velocity Verlet together with the
/// exactly corresponding discrete tangent map for the monodromy, trapezoidal
/// action accumulation and prefactor phase unwrapping. Keeps force/Hessian
/// evaluations cached between steps.
class Integrator {
  public:
    Integrator(const ModelSpec& model, const TrajectoryState& state);

    void step(double dt);
    const TrajectoryState& state() const { return state_; }
    double max_prefactor_magnitude() const { return maxPrefactorMag_; }

  private:
    const ModelSpec& model_;
    TrajectoryState state_;
    Vec grad_;      // gradient at current q
    Mat hess_;      // Hessian at current q
    double pot_;    // potential at current q
    Vec invMass_;
    Vec newQ_, newP_, newGrad_;
    Mat newHess_, tmp_;
    double maxPrefactorMag_ = 1.0;
};

/// Runs `state` forward `nSteps * substeps` velocity-Verlet steps of size
/// dt/substeps, invoking `record` at t = 0 and after every block of
/// `substeps` steps (nSteps + 1 calls in total).
void propagate(const ModelSpec& model, const PhasePoint& initial, std::size_t nSteps, double dt,
               std::size_t substeps, const std::function<void(const TrajectoryState&)>& record,
               double* maxPrefactorMag = nullptr);

}  // namespace semispec
