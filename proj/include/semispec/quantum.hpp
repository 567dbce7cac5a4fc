#pragma once

#include <cstddef>
#include <vector>

#include "semispec/model.hpp"
#include "semispec/semiclassics.hpp"
#include "semispec/spectrum.hpp"
#include "semispec/types.hpp"

namespace semispec {

/// Position grid for the exact reference propagation, one axis per DOF.
struct GridAxis {
    double qMin = 0.0;
    double qMax = 0.0;
    std::size_t points = 0;  // power of two, >= 64
};

struct GridSpec {
    std::vector<GridAxis> axes;
    double dt = 0.0;          // sampling step of the autocorrelation
    std::size_t nSteps = 0;   // autocorrelation samples (t = 0 included)
    std::size_t substeps = 4; // internal split-operator steps per sample

    void validate() const;
    std::size_t total_points() const;
};

/// Default grids for a model: the system axis spans [-0.6, +1.2] around the
/// equilibrium position, bath axes span +-6 sigma of their ground Gaussians.
GridSpec default_grid(const ModelSpec& model, std::size_t nSteps, double dt,
                      std::size_t systemPoints = 512, std::size_t bathPoints = 128,
                      double bathHalfWidthSigmas = 9.0);

struct GridDiagnostics {
    double maxNormError = 0.0;   // |<psi|psi> - 1| over the run
    double maxEdgeAmplitude = 0.0;
    double energyStart = 0.0;    // <H> at t = 0 and at the end
    double energyEnd = 0.0;
};

/// Strang-split propagation of the reference coherent state; returns the
/// autocorrelation <chi|psi(t_k)> for k = 0..nSteps-1. Checks norm
/// conservation (1e-8) and grid-edge amplitude (1e-8) throughout the run.
TimeSignal propagate_grid(const ModelSpec& model, const GridSpec& grid, const CoherentState& chi,
                          GridDiagnostics* diag = nullptr);

/// I(E) = (1/2 pi hbar) FT of the autocorrelation symmetrized by the
/// t -> -t conjugate extension, on the fft_energy_grid of the window.
Spectrum spectrum_from_autocorrelation(const TimeSignal& signal);

/// Convenience: propagate + transform.
Spectrum quantum_spectrum(const ModelSpec& model, const GridSpec& grid, const CoherentState& chi);

}  // namespace semispec
