#include "semispec/dynamics.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace semispec {

namespace {

// Determinant of a small complex matrix; closed forms for n <= 3.
cplx small_det(const CMat& a) {
    switch (a.rows()) {
        case 1:
            return a(0, 0);
        case 2:
            return a(0, 0) * a(1, 1) - a(0, 1) * a(1, 0);
        case 3:
            return a(0, 0) * (a(1, 1) * a(2, 2) - a(1, 2) * a(2, 1)) -
                   a(0, 1) * (a(1, 0) * a(2, 2) - a(1, 2) * a(2, 0)) +
                   a(0, 2) * (a(1, 0) * a(2, 1) - a(1, 1) * a(2, 0));
        default:
            return a.determinant();
    }
}

}  // namespace

Monodromy Monodromy::identity(std::size_t f) {
    const auto n = static_cast<Eigen::Index>(f);
    Monodromy m;
    m.qq = Mat::Identity(n, n);
    m.pp = Mat::Identity(n, n);
    m.qp = Mat::Zero(n, n);
    m.pq = Mat::Zero(n, n);
    return m;
}

Mat Monodromy::full() const {
    const auto n = qq.rows();
    Mat m(2 * n, 2 * n);
    m.topLeftCorner(n, n) = qq;
    m.topRightCorner(n, n) = qp;
    m.bottomLeftCorner(n, n) = pq;
    m.bottomRightCorner(n, n) = pp;
    return m;
}

double Monodromy::symplectic_defect() const {
    const auto n = qq.rows();
    Mat j = Mat::Zero(2 * n, 2 * n);
    j.topRightCorner(n, n) = Mat::Identity(n, n);
    j.bottomLeftCorner(n, n) = -Mat::Identity(n, n);
    const Mat m = full();
    return (m.transpose() * j * m - j).cwiseAbs().maxCoeff();
}

cplx hk_prefactor_squared(const Monodromy& m, const Vec& gamma) {
    const double hbar = constants::hbar;
    const auto n = gamma.size();
    const Vec sg = gamma.cwiseSqrt();
    CMat b(n, n);
    for (Eigen::Index j = 0; j < n; ++j) {
        for (Eigen::Index k = 0; k < n; ++k) {
            const double re = 0.5 * (sg[j] / sg[k] * m.qq(j, k) + sg[k] / sg[j] * m.pp(j, k));
            const double im =
                0.5 * (m.pq(j, k) / (hbar * sg[j] * sg[k]) - hbar * sg[j] * sg[k] * m.qp(j, k));
            b(j, k) = cplx(re, im);
        }
    }
    return small_det(b);
}

cplx continue_sqrt(cplx z, cplx previous) {
    if (std::abs(z) < 1e-300) throw std::runtime_error("prefactor underflow");
    cplx r = std::sqrt(z);
    if (std::norm(r - previous) > std::norm(r + previous)) r = -r;
    return r;
}

double phase_increment(cplx previous, cplx current) {
    const double dphi = std::arg(current / previous);
    if (!std::isfinite(dphi) || std::abs(dphi) >= 0.5 * std::numbers::pi)
        throw std::runtime_error("time step too large for prefactor continuity");
    return dphi;
}

cplx hk_prefactor(const TrajectoryState& state, const Vec& gamma) {
    return continue_sqrt(hk_prefactor_squared(state.mono, gamma), state.lastPrefactor);
}

double energy(const ModelSpec& model, const PhasePoint& point) {
    return kinetic_energy(model, point.p) + cl_potential(model, point.q);
}

TrajectoryState initial_state(const ModelSpec& model, const PhasePoint& point) {
    TrajectoryState s;
    s.point = point;
    s.mono = Monodromy::identity(model.F);
    return s;
}

Integrator::Integrator(const ModelSpec& model, const TrajectoryState& state)
    : model_(model), state_(state) {
    grad_ = cl_gradient(model_, state_.point.q);
    hess_ = cl_hessian(model_, state_.point.q);
    pot_ = cl_potential(model_, state_.point.q);
    invMass_ = model_.masses.cwiseInverse();
    const auto n = static_cast<Eigen::Index>(model_.F);
    newQ_.resize(n);
    newP_.resize(n);
    newGrad_.resize(n);
    newHess_.resize(n, n);
    tmp_.resize(n, n);
}

void Integrator::step(double dt) {
    if (!(dt > 0.0)) throw std::invalid_argument("Integrator::step: dt must be positive");
    const double half = 0.5 * dt;

    newQ_ = state_.point.q + dt * invMass_.cwiseProduct(state_.point.p) -
            (half * dt) * invMass_.cwiseProduct(grad_);
    if (!newQ_.allFinite()) throw std::runtime_error("trajectory escaped");
    newGrad_ = cl_gradient(model_, newQ_);
    if (!newGrad_.allFinite()) throw std::runtime_error("trajectory escaped");
    newP_ = state_.point.p - half * (grad_ + newGrad_);
    newHess_ = cl_hessian(model_, newQ_);

    // Tangent map of the same velocity-Verlet step.
    Monodromy& m = state_.mono;
    tmp_.noalias() = hess_ * m.qq;
    Mat qq1 = m.qq + dt * invMass_.asDiagonal() * m.pq -
              (half * dt) * invMass_.asDiagonal() * tmp_;
    Mat pq1 = m.pq - half * tmp_;
    tmp_.noalias() = newHess_ * qq1;
    pq1 -= half * tmp_;

    tmp_.noalias() = hess_ * m.qp;
    Mat qp1 = m.qp + dt * invMass_.asDiagonal() * m.pp -
              (half * dt) * invMass_.asDiagonal() * tmp_;
    Mat pp1 = m.pp - half * tmp_;
    tmp_.noalias() = newHess_ * qp1;
    pp1 -= half * tmp_;

    m.qq.swap(qq1);
    m.qp.swap(qp1);
    m.pq.swap(pq1);
    m.pp.swap(pp1);

    // Trapezoidal accumulation of the Lagrangian T - V.
    const double lag0 = kinetic_energy(model_, state_.point.p) - pot_;
    const double newPot = cl_potential(model_, newQ_);
    const double lag1 = kinetic_energy(model_, newP_) - newPot;
    state_.S += half * (lag0 + lag1);

    state_.point.q.swap(newQ_);
    state_.point.p.swap(newP_);
    grad_.swap(newGrad_);
    hess_.swap(newHess_);
    pot_ = newPot;
    state_.t += dt;

    const cplx c = continue_sqrt(hk_prefactor_squared(m, model_.gamma), state_.lastPrefactor);
    const double dphi = phase_increment(state_.lastPrefactor, c);
    state_.phi += constants::hbar * dphi;
    state_.lastPrefactor = c;
    maxPrefactorMag_ = std::max(maxPrefactorMag_, std::abs(c));
}

void propagate(const ModelSpec& model, const PhasePoint& initial, std::size_t nSteps, double dt,
               std::size_t substeps, const std::function<void(const TrajectoryState&)>& record,
               double* maxPrefactorMag) {
    if (substeps < 1) throw std::invalid_argument("propagate: substeps must be >= 1");
    Integrator integ(model, initial_state(model, initial));
    record(integ.state());
    const double h = dt / static_cast<double>(substeps);
    for (std::size_t k = 0; k < nSteps; ++k) {
        for (std::size_t s = 0; s < substeps; ++s) integ.step(h);
        record(integ.state());
    }
    if (maxPrefactorMag) *maxPrefactorMag = std::max(*maxPrefactorMag, integ.max_prefactor_magnitude());
}

}  // namespace semispec
