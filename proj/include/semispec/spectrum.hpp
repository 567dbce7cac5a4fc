#pragma once

#include <cstddef>
#include <map>
#include <string>
#include <vector>

#include "semispec/model.hpp"
#include "semispec/types.hpp"

namespace semispec {

/// Complex-valued per-trajectory integrand samples over the simulation window.
struct TimeSignal {
    std::vector<cplx> samples;
    double dt = 0.0;
};

/// Power spectrum on a uniform energy grid (a.u.).
struct Spectrum {
    std::vector<double> energies;
    std::vector<double> intensities;
    bool shiftApplied = false;  // bath zero-point energy already subtracted
    std::map<std::string, std::string> metadata;

    double bin_width() const;
};

/// Energy grid matching an N-sample window: E_k = 2*pi*hbar*k/(N*dt).
std::vector<double> fft_energy_grid(std::size_t n, double dt);

/// Kahan-compensated accumulation of double vectors.
class KahanVector {
  public:
    explicit KahanVector(std::size_t n) : sum_(n, 0.0), comp_(n, 0.0) {}
    void add(const std::vector<double>& v);
    void add_scaled(const std::vector<double>& v, double scale);
    const std::vector<double>& value() const { return sum_; }

  private:
    std::vector<double> sum_, comp_;
};

/// I(E_k) = prefactor * sum_j w_j |DFT+ f_j|_k^2 * dt^2 on the fft_energy_grid,
/// where DFT+ uses the e^{+i E t} sign convention.
class SeparableAccumulator {
  public:
    SeparableAccumulator(std::size_t nSamples, double dt);
    void add(const TimeSignal& signal, double weight);
    void merge(const SeparableAccumulator& other);
    Spectrum finish(double prefactor) const;

  private:
    std::size_t n_;
    double dt_;
    KahanVector acc_;
    std::vector<cplx> work_;
};

/// Subtracts the uncoupled bath ground state energy sum_i omega_i/2 from the
/// energy axis. Throws when called twice.
Spectrum shift_energy(const Spectrum& spec, const BathSpec& bath);

struct Peak {
    double energy = 0.0;
    double intensity = 0.0;
};

/// Local maxima with prominence above `minProminence * max(I)`, positions
/// refined to sub-bin accuracy from the two largest bins of the line (exact
/// for the rectangular-window line shape all methods produce here).
/// Sorted by energy.
std::vector<Peak> find_peaks(const Spectrum& spec, double minProminence);

/// Drift of a sampled conserved quantity: difference of Hann-weighted means
/// of the first and last quarter windows, relative to the overall mean
/// magnitude. Insensitive to the bounded oscillation any fixed-step
/// integrator puts on top of a conserved energy.
double relative_drift(const std::vector<double>& series);

}  // namespace semispec
