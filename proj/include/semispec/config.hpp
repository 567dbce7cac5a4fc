#pragma once

#include <cstdint>
#include <string>

#include "semispec/hybrid.hpp"
#include "semispec/model.hpp"
#include "semispec/quantum.hpp"
#include "semispec/semiclassics.hpp"

namespace semispec {

/// One batch experiment: model, sampling, propagation and output choices.
/// Parsed from a sectioned key-value text file; every field has a documented
/// default (the two-dimensional setup of the reference calculations), but the
/// [model], [sampling] and [propagation] sections must be present.
struct RunConfig {
    // [model]
    std::string systemKind = "morse";  // "morse" | "harmonic"
    double de = 0.057;                 // Morse dissociation energy (a.u.)
    double re = 0.0;                   // equilibrium position (a.u.)
    double alpha = 0.983;              // Morse range parameter (a.u.)
    double mass = 1.165e5;             // system mass (a.u.)
    double omega = 1.0;                // harmonic system frequency (a.u.)
    double center = 0.0;               // harmonic system center (a.u.)
    std::size_t fBath = 1;             // number of bath oscillators
    double omegaC = 0.1;               // cutoff, in multiples of omega_s
    double etaEff = 0.0;               // effective coupling strength
    // [sampling]
    std::size_t trajectories = 10000;
    std::uint64_t seed = 1;
    // [propagation]
    double dtFraction = 0.05;          // time step as fraction of T_s
    std::size_t steps = 16384;
    bool stepsExplicit = true;         // "mixed" defaults to 2^13 when not set
    std::size_t substeps = 1;
    // [run]
    std::string method;                // empty: must come from the command line
    std::string out;
    bool shift = true;                 // subtract the uncoupled bath ZPE
    // [grid] (quantum reference only)
    std::size_t systemPoints = 512;
    double systemMin = -0.8;           // relative to the equilibrium position
    double systemMax = 1.4;
    std::size_t bathPoints = 128;
    double bathSigmas = 9.0;
    std::size_t qmSubsteps = 4;

    bool operator==(const RunConfig&) const = default;
};

/// Strict parse: unknown sections/keys, malformed values and missing required
/// sections raise std::runtime_error with the offending line number.
RunConfig parse_config(const std::string& text);
RunConfig parse_config_file(const std::string& path);

/// Canonical text form; parse_config(serialize_config(c)) == c.
std::string serialize_config(const RunConfig& cfg);

bool method_known(const std::string& method);

ModelSpec build_model(const RunConfig& cfg);
RunSettings build_run_settings(const RunConfig& cfg, const ModelSpec& model,
                               std::size_t threads = 1);
GridSpec build_grid(const RunConfig& cfg, const ModelSpec& model);

}  // namespace semispec
