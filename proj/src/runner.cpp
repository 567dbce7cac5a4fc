#include "semispec/runner.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "semispec/hybrid.hpp"
#include "semispec/oracle.hpp"
#include "semispec/quantum.hpp"

namespace semispec {

namespace {

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.16e", v);
    return buf;
}

HarmonicOracleParams system_oracle_params(const ModelSpec& model) {
    HarmonicOracleParams p;
    p.mass = model.system.mass();
    p.omega = model.system.frequency();
    p.p0 = model.refCenter.p[0];
    p.q0 = model.refCenter.q[0] - model.system.equilibrium();
    return p;
}

}  // namespace

RunOutput run_config(const RunConfig& cfg, std::size_t threads) {
    if (cfg.method.empty()) throw std::runtime_error("run: no method selected");
    if (!method_known(cfg.method)) throw std::runtime_error("run: unknown method " + cfg.method);

    const auto start = std::chrono::steady_clock::now();
    const ModelSpec model = build_model(cfg);
    const RunSettings run = build_run_settings(cfg, model, threads);
    const CoherentState chi{model.refCenter, model.gamma};

    SamplerConfig sampler;
    sampler.nTrajectories = cfg.trajectories;
    sampler.seed = cfg.seed;

    RunOutput out;
    RunDiagnostics diag;
    if (cfg.method == "hk-sep" || cfg.method == "hk-full") {
        for (std::size_t d = 0; d < model.F; ++d) sampler.sampledDofs.push_back(d);
        out.spectrum = cfg.method == "hk-sep"
                           ? hk_separable_spectrum(model, sampler, run, chi, &diag)
                           : hk_full_spectrum(model, sampler, run, chi, &diag);
    } else if (cfg.method == "mixed" || cfg.method == "mixed-sep") {
        const Partition partition = Partition::system_bath(model);
        sampler.sampledDofs = partition.hkDofs;
        out.spectrum = cfg.method == "mixed"
                           ? mixed_full_spectrum(model, partition, sampler, run, chi, &diag)
                           : mixed_sep_spectrum(model, partition, sampler, run, chi, &diag);
    } else if (cfg.method == "qm") {
        out.spectrum = quantum_spectrum(model, build_grid(cfg, model), chi);
    } else if (cfg.method == "oracle-tgwd" || cfg.method == "oracle-hybrid") {
        const auto params = system_oracle_params(model);
        const auto lines = cfg.method == "oracle-tgwd" ? tgwd_harmonic_weights(params, 12)
                                                       : hybrid_sep_harmonic_weights(params, 12);
        out.spectrum = broaden_lines(lines, run.nSteps, run.dt);
        // the peaks of an oracle run are the closed-form lines themselves
        for (const auto& l : lines) out.peaks.push_back({l.energy, l.weight});
    }

    if (cfg.shift && model.bath.count > 0) {
        out.spectrum = shift_energy(out.spectrum, model.bath);
        for (auto& p : out.peaks) p.energy -= model.bath.zero_point_energy();
    }
    if (out.peaks.empty()) out.peaks = find_peaks(out.spectrum, 1e-3);

    const auto stop = std::chrono::steady_clock::now();
    const double wall = std::chrono::duration<double>(stop - start).count();

    auto& md = out.spectrum.metadata;
    md["method"] = cfg.method;
    md["seed"] = std::to_string(cfg.seed);
    md["trajectories"] = std::to_string(cfg.trajectories);
    md["steps"] = std::to_string(cfg.steps);
    md["substeps"] = std::to_string(cfg.substeps);
    md["dt_au"] = format_double(run.dt);
    md["system"] = cfg.systemKind;
    md["omega_s_au"] = format_double(model.system.frequency());
    md["f_bath"] = std::to_string(model.bath.count);
    md["eta_eff"] = format_double(cfg.etaEff);
    if (model.bath.count > 0) {
        md["omega_c_au"] = format_double(model.bath.omegaCut);
        md["bath_convention"] = BathSpec::convention();
    }
    md["shift"] = out.spectrum.shiftApplied ? "1" : "0";
    if (out.spectrum.shiftApplied)
        md["shift_au"] = format_double(model.bath.zero_point_energy());
    md["max_prefactor_mag"] = format_double(diag.maxPrefactorMag);
    md["threads"] = std::to_string(threads);
    md["walltime_s"] = format_double(wall);
    return out;
}

void write_spectrum(const std::string& path, const Spectrum& spec) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open output file " + path);
    out << "# semispec spectrum v1\n";
    for (const auto& [k, v] : spec.metadata) out << "# " << k << " = " << v << "\n";
    out << "energy,intensity\n";
    for (std::size_t i = 0; i < spec.energies.size(); ++i)
        out << format_double(spec.energies[i]) << "," << format_double(spec.intensities[i])
            << "\n";
}

void write_peaks(const std::string& path, const std::vector<Peak>& peaks,
                 const Spectrum& source) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open output file " + path);
    out << "# semispec peaks v1\n";
    for (const auto& [k, v] : source.metadata) out << "# " << k << " = " << v << "\n";
    out << "energy,intensity\n";
    for (const auto& p : peaks)
        out << format_double(p.energy) << "," << format_double(p.intensity) << "\n";
}

Spectrum read_spectrum(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open spectrum file " + path);
    Spectrum s;
    std::string line;
    bool header = true;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        if (line[0] == '#') {
            const auto eq = line.find('=');
            if (eq != std::string::npos) {
                auto trim = [](std::string x) {
                    const auto a = x.find_first_not_of(" \t#");
                    const auto b = x.find_last_not_of(" \t\r");
                    return a == std::string::npos ? std::string() : x.substr(a, b - a + 1);
                };
                s.metadata[trim(line.substr(0, eq))] = trim(line.substr(eq + 1));
            }
            continue;
        }
        if (header && line.find("energy") == 0) {
            header = false;
            continue;
        }
        const auto comma = line.find(',');
        if (comma == std::string::npos)
            throw std::runtime_error("malformed spectrum row in " + path);
        s.energies.push_back(std::stod(line.substr(0, comma)));
        s.intensities.push_back(std::stod(line.substr(comma + 1)));
    }
    if (s.energies.size() < 2) throw std::runtime_error("spectrum file too short: " + path);
    if (auto it = s.metadata.find("shift"); it != s.metadata.end())
        s.shiftApplied = it->second == "1";
    return s;
}

CompareReport compare_spectra(const Spectrum& a, const Spectrum& b, double tolBins,
                              double minProminence) {
    const double binA = a.bin_width();
    const double binB = b.bin_width();
    if (std::abs(binA - binB) > 1e-9 * binA)
        throw std::runtime_error("compare: energy grids differ");
    if (a.shiftApplied != b.shiftApplied)
        throw std::runtime_error("compare: energy shift conventions differ");

    CompareReport rep;
    rep.binWidth = binA;
    const auto peaksA = find_peaks(a, minProminence);
    const auto peaksB = find_peaks(b, minProminence);

    // Greedy matching by proximity: accept closest pairs first.
    struct Pair {
        std::size_t ia, ib;
        double dist;
    };
    std::vector<Pair> pairs;
    for (std::size_t i = 0; i < peaksA.size(); ++i)
        for (std::size_t j = 0; j < peaksB.size(); ++j)
            pairs.push_back({i, j, std::abs(peaksA[i].energy - peaksB[j].energy)});
    std::sort(pairs.begin(), pairs.end(), [](const Pair& x, const Pair& y) { return x.dist < y.dist; });
    std::vector<bool> usedA(peaksA.size(), false), usedB(peaksB.size(), false);
    for (const auto& p : pairs) {
        if (usedA[p.ia] || usedB[p.ib]) continue;
        if (p.dist > tolBins * binA) continue;  // beyond tolerance: leave unmatched
        usedA[p.ia] = true;
        usedB[p.ib] = true;
        rep.matches.push_back({peaksA[p.ia].energy, peaksB[p.ib].energy, p.dist / binA,
                               peaksB[p.ib].intensity / peaksA[p.ia].intensity});
    }
    for (std::size_t i = 0; i < peaksA.size(); ++i)
        if (!usedA[i]) rep.unmatchedA.push_back(peaksA[i]);
    for (std::size_t j = 0; j < peaksB.size(); ++j)
        if (!usedB[j]) rep.unmatchedB.push_back(peaksB[j]);

    std::sort(rep.matches.begin(), rep.matches.end(),
              [](const PeakMatch& x, const PeakMatch& y) { return x.energyA < y.energyA; });
    rep.withinTolerance = rep.unmatchedA.empty() && rep.unmatchedB.empty();
    return rep;
}

std::string format_report(const CompareReport& rep) {
    std::ostringstream out;
    out.precision(10);
    out << "bin width: " << rep.binWidth << " a.u.\n";
    out << "matched peaks: " << rep.matches.size() << "\n";
    for (const auto& m : rep.matches)
        out << "  A " << m.energyA << "  B " << m.energyB << "  |dE| " << m.deltaBins
            << " bins  I_B/I_A " << m.intensityRatio << "\n";
    for (const auto& p : rep.unmatchedA)
        out << "  unmatched in A: E " << p.energy << "  I " << p.intensity << "\n";
    for (const auto& p : rep.unmatchedB)
        out << "  unmatched in B: E " << p.energy << "  I " << p.intensity << "\n";
    out << (rep.withinTolerance ? "PASS" : "FAIL") << "\n";
    return out.str();
}

}  // namespace semispec
