#include "semispec/config.hpp"

#include <array>
#include <charconv>
#include <cmath>
#include <fstream>
#include <numbers>
#include <sstream>
#include <stdexcept>

namespace semispec {

namespace {

[[noreturn]] void fail(std::size_t line, const std::string& what) {
    throw std::runtime_error("config: line " + std::to_string(line) + ": " + what);
}

std::string trim(const std::string& s) {
    const auto a = s.find_first_not_of(" \t\r");
    if (a == std::string::npos) return "";
    const auto b = s.find_last_not_of(" \t\r");
    return s.substr(a, b - a + 1);
}

double parse_double(const std::string& v, std::size_t line) {
    double out = 0.0;
    const char* end = v.data() + v.size();
    auto [ptr, ec] = std::from_chars(v.data(), end, out);
    if (ec != std::errc{} || ptr != end) fail(line, "expected a number, got '" + v + "'");
    return out;
}

std::size_t parse_count(const std::string& v, std::size_t line) {
    if (!v.empty() && v[0] == '-') fail(line, "expected a non-negative integer, got '" + v + "'");
    std::size_t out = 0;
    const char* end = v.data() + v.size();
    auto [ptr, ec] = std::from_chars(v.data(), end, out);
    if (ec != std::errc{} || ptr != end)
        fail(line, "expected a non-negative integer, got '" + v + "'");
    return out;
}

std::uint64_t parse_u64(const std::string& v, std::size_t line) {
    if (!v.empty() && v[0] == '-') fail(line, "expected a non-negative integer, got '" + v + "'");
    std::uint64_t out = 0;
    const char* end = v.data() + v.size();
    auto [ptr, ec] = std::from_chars(v.data(), end, out);
    if (ec != std::errc{} || ptr != end)
        fail(line, "expected a non-negative integer, got '" + v + "'");
    return out;
}

bool parse_bool(const std::string& v, std::size_t line) {
    if (v == "true" || v == "1") return true;
    if (v == "false" || v == "0") return false;
    fail(line, "expected true/false, got '" + v + "'");
}

}  // namespace

bool method_known(const std::string& method) {
    static const std::array<const char*, 7> names = {
        "hk-sep", "hk-full", "mixed", "mixed-sep", "qm", "oracle-tgwd", "oracle-hybrid"};
    for (const char* n : names)
        if (method == n) return true;
    return false;
}

RunConfig parse_config(const std::string& text) {
    RunConfig cfg;
    cfg.stepsExplicit = false;

    std::istringstream in(text);
    std::string rawLine;
    std::string section;
    bool sawModel = false, sawSampling = false, sawPropagation = false;
    std::size_t lineNo = 0;

    while (std::getline(in, rawLine)) {
        ++lineNo;
        std::string line = rawLine;
        if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
        line = trim(line);
        if (line.empty()) continue;

        if (line.front() == '[') {
            if (line.back() != ']') fail(lineNo, "malformed section header");
            section = trim(line.substr(1, line.size() - 2));
            if (section == "model") sawModel = true;
            else if (section == "sampling") sawSampling = true;
            else if (section == "propagation") sawPropagation = true;
            else if (section != "run" && section != "grid")
                fail(lineNo, "unknown section [" + section + "]");
            continue;
        }

        const auto eq = line.find('=');
        if (eq == std::string::npos) fail(lineNo, "expected 'key = value'");
        const std::string key = trim(line.substr(0, eq));
        const std::string val = trim(line.substr(eq + 1));
        if (key.empty() || val.empty()) fail(lineNo, "expected 'key = value'");
        if (section.empty()) fail(lineNo, "key '" + key + "' outside any section");

        if (section == "model") {
            if (key == "system") {
                if (val != "morse" && val != "harmonic")
                    fail(lineNo, "system must be 'morse' or 'harmonic'");
                cfg.systemKind = val;
            } else if (key == "de") cfg.de = parse_double(val, lineNo);
            else if (key == "re") cfg.re = parse_double(val, lineNo);
            else if (key == "alpha") cfg.alpha = parse_double(val, lineNo);
            else if (key == "mass") cfg.mass = parse_double(val, lineNo);
            else if (key == "omega") cfg.omega = parse_double(val, lineNo);
            else if (key == "center") cfg.center = parse_double(val, lineNo);
            else if (key == "f_bath") cfg.fBath = parse_count(val, lineNo);
            else if (key == "omega_c") cfg.omegaC = parse_double(val, lineNo);
            else if (key == "eta_eff") cfg.etaEff = parse_double(val, lineNo);
            else fail(lineNo, "unknown key '" + key + "' in section [model]");
        } else if (section == "sampling") {
            if (key == "trajectories") cfg.trajectories = parse_count(val, lineNo);
            else if (key == "seed") cfg.seed = parse_u64(val, lineNo);
            else fail(lineNo, "unknown key '" + key + "' in section [sampling]");
        } else if (section == "propagation") {
            if (key == "dt") cfg.dtFraction = parse_double(val, lineNo);
            else if (key == "steps") {
                cfg.steps = parse_count(val, lineNo);
                cfg.stepsExplicit = true;
            } else if (key == "substeps") cfg.substeps = parse_count(val, lineNo);
            else fail(lineNo, "unknown key '" + key + "' in section [propagation]");
        } else if (section == "run") {
            if (key == "method") {
                if (!method_known(val)) fail(lineNo, "unknown method '" + val + "'");
                cfg.method = val;
            } else if (key == "out") cfg.out = val;
            else if (key == "shift") cfg.shift = parse_bool(val, lineNo);
            else fail(lineNo, "unknown key '" + key + "' in section [run]");
        } else if (section == "grid") {
            if (key == "system_points") cfg.systemPoints = parse_count(val, lineNo);
            else if (key == "system_min") cfg.systemMin = parse_double(val, lineNo);
            else if (key == "system_max") cfg.systemMax = parse_double(val, lineNo);
            else if (key == "bath_points") cfg.bathPoints = parse_count(val, lineNo);
            else if (key == "bath_sigmas") cfg.bathSigmas = parse_double(val, lineNo);
            else if (key == "qm_substeps") cfg.qmSubsteps = parse_count(val, lineNo);
            else fail(lineNo, "unknown key '" + key + "' in section [grid]");
        }
    }

    std::string missing;
    if (!sawModel) missing += " [model]";
    if (!sawSampling) missing += " [sampling]";
    if (!sawPropagation) missing += " [propagation]";
    if (!missing.empty())
        throw std::runtime_error("config: missing required section(s):" + missing);

    if (!cfg.stepsExplicit && cfg.method == "mixed") {
        cfg.steps = 8192;  // double time integration: half the steps by default
        cfg.stepsExplicit = true;
    } else if (!cfg.stepsExplicit) {
        cfg.stepsExplicit = true;
    }

    if (cfg.trajectories < 1) throw std::runtime_error("config: trajectories must be >= 1");
    if (!(cfg.dtFraction > 0.0)) throw std::runtime_error("config: dt must be positive");
    if (cfg.steps < 2) throw std::runtime_error("config: steps must be >= 2");
    if (cfg.substeps < 1) throw std::runtime_error("config: substeps must be >= 1");
    if (!(cfg.omegaC > 0.0)) throw std::runtime_error("config: omega_c must be positive");
    if (cfg.etaEff < 0.0) throw std::runtime_error("config: eta_eff must be non-negative");
    return cfg;
}

RunConfig parse_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("config: cannot open '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_config(buf.str());
}

std::string serialize_config(const RunConfig& cfg) {
    std::ostringstream out;
    out.precision(17);
    out << "[model]\n";
    out << "system = " << cfg.systemKind << "\n";
    if (cfg.systemKind == "morse") {
        out << "de = " << cfg.de << "\n";
        out << "re = " << cfg.re << "\n";
        out << "alpha = " << cfg.alpha << "\n";
        out << "mass = " << cfg.mass << "\n";
    } else {
        out << "omega = " << cfg.omega << "\n";
        out << "mass = " << cfg.mass << "\n";
        out << "center = " << cfg.center << "\n";
    }
    out << "f_bath = " << cfg.fBath << "\n";
    out << "omega_c = " << cfg.omegaC << "\n";
    out << "eta_eff = " << cfg.etaEff << "\n";
    out << "\n[sampling]\n";
    out << "trajectories = " << cfg.trajectories << "\n";
    out << "seed = " << cfg.seed << "\n";
    out << "\n[propagation]\n";
    out << "dt = " << cfg.dtFraction << "\n";
    out << "steps = " << cfg.steps << "\n";
    out << "substeps = " << cfg.substeps << "\n";
    out << "\n[run]\n";
    if (!cfg.method.empty()) out << "method = " << cfg.method << "\n";
    if (!cfg.out.empty()) out << "out = " << cfg.out << "\n";
    out << "shift = " << (cfg.shift ? "true" : "false") << "\n";
    out << "\n[grid]\n";
    out << "system_points = " << cfg.systemPoints << "\n";
    out << "system_min = " << cfg.systemMin << "\n";
    out << "system_max = " << cfg.systemMax << "\n";
    out << "bath_points = " << cfg.bathPoints << "\n";
    out << "bath_sigmas = " << cfg.bathSigmas << "\n";
    out << "qm_substeps = " << cfg.qmSubsteps << "\n";
    return out.str();
}

ModelSpec build_model(const RunConfig& cfg) {
    SystemPotential sys;
    if (cfg.systemKind == "morse") {
        MorseParams p;
        p.de = cfg.de;
        p.re = cfg.re;
        p.alpha = cfg.alpha;
        p.mass = cfg.mass;
        sys = SystemPotential::make_morse(p);
    } else {
        sys = SystemPotential::make_harmonic(cfg.mass, cfg.omega, cfg.center);
    }
    BathSpec bath;  // empty when fBath == 0
    if (cfg.fBath > 0)
        bath = discretize_bath(cfg.fBath, cfg.omegaC * sys.frequency(), cfg.etaEff, sys);
    return make_model(sys, bath);
}

RunSettings build_run_settings(const RunConfig& cfg, const ModelSpec& model, std::size_t threads) {
    RunSettings run;
    run.nSteps = cfg.steps;
    run.dt = cfg.dtFraction * 2.0 * std::numbers::pi / model.system.frequency();
    run.substeps = cfg.substeps;
    run.threads = threads;
    return run;
}

GridSpec build_grid(const RunConfig& cfg, const ModelSpec& model) {
    RunSettings run = build_run_settings(cfg, model);
    GridSpec g = default_grid(model, run.nSteps, run.dt, cfg.systemPoints, cfg.bathPoints,
                              cfg.bathSigmas);
    g.axes[0].qMin = model.system.equilibrium() + cfg.systemMin;
    g.axes[0].qMax = model.system.equilibrium() + cfg.systemMax;
    g.substeps = cfg.qmSubsteps;
    return g;
}

}  // namespace semispec
