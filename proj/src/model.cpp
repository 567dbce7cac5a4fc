#include "semispec/model.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace semispec {

void MorseParams::validate() const {
    if (!(de > 0.0)) throw std::invalid_argument("MorseParams: De must be positive");
    if (!(alpha > 0.0)) throw std::invalid_argument("MorseParams: alpha must be positive");
    if (!(mass > 0.0)) throw std::invalid_argument("MorseParams: mass must be positive");
    if (!std::isfinite(harmonic_frequency()))
        throw std::invalid_argument("MorseParams: harmonic frequency not finite");
}

double MorseParams::harmonic_frequency() const {
    return std::sqrt(2.0 * de * alpha * alpha / mass);
}

double morse_energy(const MorseParams& p, double r) {
    const double u = 1.0 - std::exp(-p.alpha * (r - p.re));
    return p.de * u * u;
}

double morse_gradient(const MorseParams& p, double r) {
    const double e = std::exp(-p.alpha * (r - p.re));
    return 2.0 * p.de * p.alpha * e * (1.0 - e);
}

double morse_hessian(const MorseParams& p, double r) {
    const double e = std::exp(-p.alpha * (r - p.re));
    return 2.0 * p.de * p.alpha * p.alpha * e * (2.0 * e - 1.0);
}

SystemPotential SystemPotential::make_morse(const MorseParams& p) {
    p.validate();
    SystemPotential s;
    s.kind = Kind::Morse;
    s.morse = p;
    return s;
}

SystemPotential SystemPotential::make_harmonic(double mass, double omega, double center) {
    if (!(mass > 0.0) || !(omega > 0.0))
        throw std::invalid_argument("SystemPotential: mass and omega must be positive");
    SystemPotential s;
    s.kind = Kind::Harmonic;
    s.harmonicMass = mass;
    s.harmonicOmega = omega;
    s.harmonicCenter = center;
    return s;
}

double SystemPotential::mass() const {
    return kind == Kind::Morse ? morse.mass : harmonicMass;
}

double SystemPotential::equilibrium() const {
    return kind == Kind::Morse ? morse.re : harmonicCenter;
}

double SystemPotential::frequency() const {
    return kind == Kind::Morse ? morse.harmonic_frequency() : harmonicOmega;
}

double SystemPotential::energy(double r) const {
    if (kind == Kind::Morse) return morse_energy(morse, r);
    const double d = r - harmonicCenter;
    return 0.5 * harmonicMass * harmonicOmega * harmonicOmega * d * d;
}

double SystemPotential::gradient(double r) const {
    if (kind == Kind::Morse) return morse_gradient(morse, r);
    return harmonicMass * harmonicOmega * harmonicOmega * (r - harmonicCenter);
}

double SystemPotential::hessian(double r) const {
    if (kind == Kind::Morse) return morse_hessian(morse, r);
    return harmonicMass * harmonicOmega * harmonicOmega;
}

void BathSpec::validate() const {
    if (omega.size() != count || coupling.size() != count)
        throw std::invalid_argument("BathSpec: inconsistent sizes");
    if (etaEff < 0.0) throw std::invalid_argument("BathSpec: etaEff must be non-negative");
    for (std::size_t i = 0; i < count; ++i) {
        if (!(omega[i] > 0.0)) throw std::invalid_argument("BathSpec: frequencies must be positive");
        if (i > 0 && !(omega[i] > omega[i - 1]))
            throw std::invalid_argument("BathSpec: frequencies must be strictly increasing");
    }
}

double BathSpec::zero_point_energy() const {
    double e = 0.0;
    for (double w : omega) e += 0.5 * w;
    return e;
}

std::string BathSpec::convention() {
    return "equidistant: omega_i=i*omega_c/F_bath; "
           "c_i=omega_i*sqrt(2*eta*dw*exp(-omega_i/omega_c)/pi), eta=eta_eff*m_s*omega_s";
}

BathSpec discretize_bath(std::size_t fBath, double omegaCut, double etaEff,
                         const SystemPotential& system) {
    if (fBath < 1) throw std::invalid_argument("discretize_bath: need at least one oscillator");
    if (!(omegaCut > 0.0)) throw std::invalid_argument("discretize_bath: omega_c must be positive");
    if (etaEff < 0.0) throw std::invalid_argument("discretize_bath: eta_eff must be non-negative");

    BathSpec bath;
    bath.count = fBath;
    bath.etaEff = etaEff;
    bath.omegaCut = omegaCut;
    const double dw = omegaCut / static_cast<double>(fBath);
    const double eta = etaEff * system.mass() * system.frequency();
    bath.omega.resize(fBath);
    bath.coupling.resize(fBath);
    for (std::size_t i = 0; i < fBath; ++i) {
        const double w = dw * static_cast<double>(i + 1);
        bath.omega[i] = w;
        bath.coupling[i] =
            w * std::sqrt(2.0 * eta * dw * std::exp(-w / omegaCut) / std::numbers::pi);
    }
    bath.validate();
    return bath;
}

void ModelSpec::validate() const {
    if (F != 1 + bath.count) throw std::invalid_argument("ModelSpec: F must equal 1 + bath count");
    if (static_cast<std::size_t>(gamma.size()) != F ||
        static_cast<std::size_t>(masses.size()) != F ||
        static_cast<std::size_t>(refCenter.q.size()) != F ||
        static_cast<std::size_t>(refCenter.p.size()) != F)
        throw std::invalid_argument("ModelSpec: vector sizes must match F");
    for (std::size_t i = 0; i < F; ++i)
        if (!(gamma[static_cast<Eigen::Index>(i)] > 0.0))
            throw std::invalid_argument("ModelSpec: widths must be positive");
    std::vector<bool> seen(F, false);
    for (std::size_t i : systemDofs) seen.at(i) = true;
    for (std::size_t i : bathDofs) {
        if (seen.at(i)) throw std::invalid_argument("ModelSpec: partition overlaps");
        seen[i] = true;
    }
    for (bool s : seen)
        if (!s) throw std::invalid_argument("ModelSpec: partition must cover all DOFs");
}

ModelSpec make_model(const SystemPotential& system, const BathSpec& bath) {
    bath.validate();
    ModelSpec m;
    m.system = system;
    m.bath = bath;
    m.F = 1 + bath.count;
    m.systemDofs = {0};
    for (std::size_t i = 1; i < m.F; ++i) m.bathDofs.push_back(i);
    const auto n = static_cast<Eigen::Index>(m.F);
    m.masses = Vec::Ones(n);
    m.masses[0] = system.mass();
    m.refCenter.q = Vec::Zero(n);
    m.refCenter.p = Vec::Zero(n);
    m.refCenter.q[0] = system.equilibrium();
    m.refCenter.p[0] = std::sqrt(system.mass() * system.frequency());
    for (std::size_t i = 0; i < bath.count; ++i) {
        // bath at equilibrium position with harmonic zero-point kinetic energy
        m.refCenter.p[static_cast<Eigen::Index>(i + 1)] = std::sqrt(bath.omega[i]);
    }
    m.gamma = default_widths(m);
    m.validate();
    return m;
}

Vec default_widths(const ModelSpec& model) {
    Vec g(static_cast<Eigen::Index>(model.F));
    g[0] = model.system.mass() * model.system.frequency() / constants::hbar;
    for (std::size_t i = 0; i < model.bath.count; ++i)
        g[static_cast<Eigen::Index>(i + 1)] = model.bath.omega[i] / constants::hbar;
    return g;
}

double cl_potential(const ModelSpec& model, const Vec& q) {
    if (static_cast<std::size_t>(q.size()) != model.F)
        throw std::invalid_argument("cl_potential: dimension mismatch");
    const double s = q[0] - model.system.equilibrium();
    double v = model.system.energy(q[0]);
    for (std::size_t i = 0; i < model.bath.count; ++i) {
        const double wi = model.bath.omega[i];
        const double u = wi * q[static_cast<Eigen::Index>(i + 1)] + model.bath.coupling[i] / wi * s;
        v += 0.5 * u * u;
    }
    return v;
}

Vec cl_gradient(const ModelSpec& model, const Vec& q) {
    if (static_cast<std::size_t>(q.size()) != model.F)
        throw std::invalid_argument("cl_gradient: dimension mismatch");
    const double s = q[0] - model.system.equilibrium();
    Vec g = Vec::Zero(q.size());
    g[0] = model.system.gradient(q[0]);
    for (std::size_t i = 0; i < model.bath.count; ++i) {
        const double wi = model.bath.omega[i];
        const double ci = model.bath.coupling[i];
        const double u = wi * q[static_cast<Eigen::Index>(i + 1)] + ci / wi * s;
        g[0] += u * ci / wi;
        g[static_cast<Eigen::Index>(i + 1)] = u * wi;
    }
    return g;
}

Mat cl_hessian(const ModelSpec& model, const Vec& q) {
    if (static_cast<std::size_t>(q.size()) != model.F)
        throw std::invalid_argument("cl_hessian: dimension mismatch");
    Mat h = Mat::Zero(q.size(), q.size());
    h(0, 0) = model.system.hessian(q[0]);
    for (std::size_t i = 0; i < model.bath.count; ++i) {
        const double wi = model.bath.omega[i];
        const double ci = model.bath.coupling[i];
        const auto k = static_cast<Eigen::Index>(i + 1);
        h(0, 0) += ci * ci / (wi * wi);
        h(0, k) = ci;
        h(k, 0) = ci;
        h(k, k) = wi * wi;
    }
    return h;
}

double kinetic_energy(const ModelSpec& model, const Vec& p) {
    double t = 0.0;
    for (Eigen::Index i = 0; i < p.size(); ++i) t += 0.5 * p[i] * p[i] / model.masses[i];
    return t;
}

}  // namespace semispec
