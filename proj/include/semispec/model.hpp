#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "semispec/types.hpp"

namespace semispec {

/// Morse oscillator V(r) = De*(1 - exp(-alpha*(r - re)))^2.
struct MorseParams {
    double de = 0.0;     // dissociation energy (a.u.)
    double re = 0.0;     // equilibrium position (a.u.)
    double alpha = 0.0;  // range parameter (a.u.)
    double mass = 0.0;   // oscillator mass (a.u.)

    void validate() const;
    // Frequency of the harmonic approximation at the well bottom.
    double harmonic_frequency() const;
};

double morse_energy(const MorseParams& p, double r);
double morse_gradient(const MorseParams& p, double r);
double morse_hessian(const MorseParams& p, double r);

/// System potential: the Morse oscillator used throughout, or a plain
/// harmonic well for the analytic benchmark cases.
struct SystemPotential {
    enum class Kind { Morse, Harmonic };

    Kind kind = Kind::Morse;
    MorseParams morse;
    double harmonicOmega = 0.0;  // used when kind == Harmonic
    double harmonicMass = 0.0;
    double harmonicCenter = 0.0;

    static SystemPotential make_morse(const MorseParams& p);
    static SystemPotential make_harmonic(double mass, double omega, double center = 0.0);

    double mass() const;
    double equilibrium() const;
    double frequency() const;  // harmonic (approximation) frequency
    double energy(double r) const;
    double gradient(double r) const;
    double hessian(double r) const;
};

/// Discretized harmonic bath, Ohmic spectral density with exponential cutoff.
/// All bath masses are 1.
struct BathSpec {
    std::size_t count = 0;          // number of bath oscillators
    std::vector<double> omega;      // bath frequencies, strictly increasing (a.u.)
    std::vector<double> coupling;   // linear couplings c_i (a.u.)
    double etaEff = 0.0;            // dimensionless effective coupling
    double omegaCut = 0.0;          // cutoff frequency (a.u.)

    void validate() const;
    // Ground state energy of the uncoupled bath, sum_i omega_i/2.
    double zero_point_energy() const;
    static std::string convention();
};

/// Equidistant discretization omega_i = i*omega_c/F for i = 1..F, with
/// c_i = omega_i * sqrt(2*eta*dw*exp(-omega_i/omega_c)/pi), eta = etaEff*m_s*omega_s.
BathSpec discretize_bath(std::size_t fBath, double omegaCut, double etaEff,
                         const SystemPotential& system);

/// Reference phase-space point (one momentum/position pair per DOF).
struct PhasePoint {
    Vec q;
    Vec p;
};

/// Full model record: system potential plus bath, widths and reference state.
/// DOF 0 is the system coordinate; DOFs 1..F-1 are bath coordinates.
struct ModelSpec {
    SystemPotential system;
    BathSpec bath;
    std::size_t F = 0;           // total degrees of freedom, 1 + bath.count
    std::vector<std::size_t> systemDofs;  // {0}
    std::vector<std::size_t> bathDofs;    // {1, .., F-1}
    Vec masses;                  // per-DOF masses
    Vec gamma;                   // per-DOF coherent-state widths (a.u.)
    PhasePoint refCenter;        // reference-state center

    void validate() const;
};

/// Builds the standard model: system at (p, q) = (sqrt(m_s*omega_s), r_e),
/// bath at equilibrium positions with zero-point momenta sqrt(omega_i),
/// widths gamma_s = m_s*omega_s and gamma_i = omega_i.
ModelSpec make_model(const SystemPotential& system, const BathSpec& bath);

/// Width vector of the harmonic-approximation ground state, one entry per DOF.
Vec default_widths(const ModelSpec& model);

double cl_potential(const ModelSpec& model, const Vec& q);
Vec cl_gradient(const ModelSpec& model, const Vec& q);
Mat cl_hessian(const ModelSpec& model, const Vec& q);

double kinetic_energy(const ModelSpec& model, const Vec& p);

}  // namespace semispec
