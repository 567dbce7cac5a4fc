// Batch front end: spectrum runs, spectrum comparisons and the closed-form
// harmonic/Morse reference lines.

#include <cstdio>
#include <exception>
#include <string>

#include <CLI11.hpp>

#include "semispec/oracle.hpp"
#include "semispec/runner.hpp"

namespace {

int cmd_run(const std::string& configPath, const std::string& method, const std::string& outPath,
            std::int64_t seed, std::int64_t trajectories, std::int64_t steps, std::size_t threads) {
    semispec::RunConfig cfg = semispec::parse_config_file(configPath);
    if (!method.empty()) cfg.method = method;
    if (!outPath.empty()) cfg.out = outPath;
    if (seed >= 0) cfg.seed = static_cast<std::uint64_t>(seed);
    if (trajectories > 0) cfg.trajectories = static_cast<std::size_t>(trajectories);
    if (steps > 0) {
        cfg.steps = static_cast<std::size_t>(steps);
        cfg.stepsExplicit = true;
    }
    if (cfg.method.empty())
        throw std::runtime_error("no method: set [run] method in the config or pass --method");
    if (cfg.out.empty())
        throw std::runtime_error("no output path: set [run] out in the config or pass --out");

    const semispec::RunOutput result = semispec::run_config(cfg, threads);
    semispec::write_spectrum(cfg.out, result.spectrum);
    semispec::write_peaks(cfg.out + ".peaks", result.peaks, result.spectrum);
    std::printf("%s: %zu energy bins, %zu peaks -> %s\n", cfg.method.c_str(),
                result.spectrum.energies.size(), result.peaks.size(), cfg.out.c_str());
    return 0;
}

int cmd_compare(const std::string& pathA, const std::string& pathB, double tolBins,
                double prominence) {
    const semispec::Spectrum a = semispec::read_spectrum(pathA);
    const semispec::Spectrum b = semispec::read_spectrum(pathB);
    const semispec::CompareReport rep = semispec::compare_spectra(a, b, tolBins, prominence);
    std::fputs(semispec::format_report(rep).c_str(), stdout);
    return rep.withinTolerance ? 0 : 1;
}

int cmd_oracle(const std::string& kind, double mass, double omega, double p0, double q0,
               std::size_t kMax, const std::string& outPath) {
    semispec::HarmonicOracleParams params{mass, omega, p0, q0};
    const auto lines = kind == "tgwd" ? semispec::tgwd_harmonic_weights(params, kMax)
                                      : semispec::hybrid_sep_harmonic_weights(params, kMax);
    if (outPath.empty()) {
        for (const auto& l : lines) std::printf("%.16e,%.16e\n", l.energy, l.weight);
    } else {
        std::FILE* f = std::fopen(outPath.c_str(), "w");
        if (!f) throw std::runtime_error("cannot open " + outPath);
        std::fprintf(f, "# semispec oracle %s\nenergy,intensity\n", kind.c_str());
        for (const auto& l : lines) std::fprintf(f, "%.16e,%.16e\n", l.energy, l.weight);
        std::fclose(f);
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"vibrational power spectra of system-bath models via a hierarchy of "
                 "semiclassical propagators"};
    app.require_subcommand(1);

    std::string configPath, method, outPath;
    std::int64_t seed = -1, trajectories = -1, steps = -1;
    std::size_t threads = 1;
    auto* run = app.add_subcommand("run", "run one spectrum calculation from a config file");
    run->add_option("--config", configPath, "config file")->required();
    run->add_option("--method", method,
                    "hk-sep | hk-full | mixed | mixed-sep | qm | oracle-tgwd | oracle-hybrid");
    run->add_option("--out", outPath, "output spectrum file (peaks written alongside)");
    run->add_option("--seed", seed, "override sampling seed");
    run->add_option("--trajectories", trajectories, "override trajectory count");
    run->add_option("--steps", steps, "override step count");
    run->add_option("--threads", threads, "worker threads (default 1)");

    std::string pathA, pathB;
    double tolBins = 2.0, prominence = 1e-3;
    auto* cmp = app.add_subcommand("compare", "match peaks of two spectrum files");
    cmp->add_option("a", pathA, "first spectrum file")->required();
    cmp->add_option("b", pathB, "second spectrum file")->required();
    cmp->add_option("--tol-bins", tolBins, "match tolerance in energy bins");
    cmp->add_option("--prominence", prominence, "peak prominence threshold (fraction of max)");

    std::string kind = "tgwd", oracleOut;
    double mass = 1.0, omega = 1.0, p0 = 1.0, q0 = 0.0;
    std::size_t kMax = 10;
    auto* orc = app.add_subcommand("oracle", "closed-form harmonic line lists");
    orc->add_option("--kind", kind, "tgwd | hybrid")
        ->check(CLI::IsMember({"tgwd", "hybrid"}));
    orc->add_option("--mass", mass, "oscillator mass (a.u.)");
    orc->add_option("--omega", omega, "oscillator frequency (a.u.)");
    orc->add_option("--p0", p0, "reference momentum (a.u.)");
    orc->add_option("--q0", q0, "reference displacement (a.u.)");
    orc->add_option("--kmax", kMax, "highest line index");
    orc->add_option("--out", oracleOut, "write lines to file instead of stdout");

    CLI11_PARSE(app, argc, argv);

    try {
        if (run->parsed())
            return cmd_run(configPath, method, outPath, seed, trajectories, steps, threads);
        if (cmp->parsed()) return cmd_compare(pathA, pathB, tolBins, prominence);
        if (orc->parsed()) return cmd_oracle(kind, mass, omega, p0, q0, kMax, oracleOut);
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    }
    return 0;
}
