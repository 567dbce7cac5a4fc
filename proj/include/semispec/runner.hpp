#pragma once

#include <map>
#include <string>
#include <vector>

#include "semispec/config.hpp"
#include "semispec/spectrum.hpp"

namespace semispec {

struct RunOutput {
    Spectrum spectrum;
    std::vector<Peak> peaks;
};

/// Dispatches the configured method and fills spectrum metadata (method,
/// seed, trajectory count, bath convention, wall time, ...).
RunOutput run_config(const RunConfig& cfg, std::size_t threads = 1);

/// '#'-prefixed metadata header followed by "energy,intensity" rows at 17
/// significant digits.
void write_spectrum(const std::string& path, const Spectrum& spec);
void write_peaks(const std::string& path, const std::vector<Peak>& peaks,
                 const Spectrum& source);
Spectrum read_spectrum(const std::string& path);

struct PeakMatch {
    double energyA = 0.0, energyB = 0.0;
    double deltaBins = 0.0;
    double intensityRatio = 0.0;  // B / A
};

struct CompareReport {
    std::vector<PeakMatch> matches;
    std::vector<Peak> unmatchedA, unmatchedB;
    double binWidth = 0.0;
    bool withinTolerance = false;
};

/// Greedy proximity matching of the two peak lists; `withinTolerance` holds
/// when every peak found a partner within tolBins.
CompareReport compare_spectra(const Spectrum& a, const Spectrum& b, double tolBins,
                              double minProminence = 1e-3);
std::string format_report(const CompareReport& report);

}  // namespace semispec
