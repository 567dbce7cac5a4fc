#include "semispec/quantum.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "semispec/fft.hpp"

namespace semispec {

void GridSpec::validate() const {
    if (axes.empty() || axes.size() > 3)
        throw std::invalid_argument("GridSpec: 1 to 3 dimensions supported");
    for (const auto& a : axes) {
        if (a.points < 64) throw std::invalid_argument("GridSpec: need at least 64 points per axis");
        if ((a.points & (a.points - 1)) != 0)
            throw std::invalid_argument("GridSpec: points must be a power of two");
        if (!(a.qMax > a.qMin)) throw std::invalid_argument("GridSpec: empty axis extent");
    }
    if (!(dt > 0.0) || nSteps < 1 || substeps < 1)
        throw std::invalid_argument("GridSpec: bad time parameters");
}

std::size_t GridSpec::total_points() const {
    std::size_t n = 1;
    for (const auto& a : axes) n *= a.points;
    return n;
}

GridSpec default_grid(const ModelSpec& model, std::size_t nSteps, double dt,
                      std::size_t systemPoints, std::size_t bathPoints,
                      double bathHalfWidthSigmas) {
    GridSpec g;
    g.dt = dt;
    g.nSteps = nSteps;
    const double re = model.system.equilibrium();
    g.axes.push_back({re - 0.8, re + 1.4, systemPoints});
    for (std::size_t i = 0; i < model.bath.count; ++i) {
        const double sigma = 1.0 / std::sqrt(model.gamma[static_cast<Eigen::Index>(i + 1)]);
        g.axes.push_back({-bathHalfWidthSigmas * sigma, bathHalfWidthSigmas * sigma, bathPoints});
    }
    return g;
}

namespace {

struct GridGeometry {
    std::vector<int> dims;
    std::vector<std::vector<double>> x;  // coordinates per axis
    std::vector<std::vector<double>> k;  // FFT wavenumbers per axis
    double dV = 1.0;
    std::size_t total = 1;
};

GridGeometry make_geometry(const GridSpec& grid) {
    GridGeometry geo;
    for (const auto& a : grid.axes) {
        const auto n = a.points;
        geo.dims.push_back(static_cast<int>(n));
        const double dx = (a.qMax - a.qMin) / static_cast<double>(n);
        geo.dV *= dx;
        geo.total *= n;
        std::vector<double> xs(n), ks(n);
        const double dk = 2.0 * std::numbers::pi / (a.qMax - a.qMin);
        for (std::size_t j = 0; j < n; ++j) {
            xs[j] = a.qMin + dx * static_cast<double>(j);
            const auto sj = static_cast<std::ptrdiff_t>(j);
            const auto half = static_cast<std::ptrdiff_t>(n / 2);
            ks[j] = dk * static_cast<double>(sj < half ? sj : sj - static_cast<std::ptrdiff_t>(n));
        }
        geo.x.push_back(std::move(xs));
        geo.k.push_back(std::move(ks));
    }
    return geo;
}

// Decomposes a flat row-major index into per-axis indices.
inline void unflatten(std::size_t idx, const std::vector<int>& dims, std::size_t* sub) {
    for (std::size_t d = dims.size(); d-- > 0;) {
        sub[d] = idx % static_cast<std::size_t>(dims[d]);
        idx /= static_cast<std::size_t>(dims[d]);
    }
}

std::vector<std::size_t> edge_indices(const GridGeometry& geo) {
    std::vector<std::size_t> edges;
    const std::size_t nd = geo.dims.size();
    std::size_t sub[3];
    for (std::size_t i = 0; i < geo.total; ++i) {
        unflatten(i, geo.dims, sub);
        for (std::size_t d = 0; d < nd; ++d) {
            if (sub[d] == 0 || sub[d] + 1 == static_cast<std::size_t>(geo.dims[d])) {
                edges.push_back(i);
                break;
            }
        }
    }
    return edges;
}

}  // namespace

TimeSignal propagate_grid(const ModelSpec& model, const GridSpec& grid, const CoherentState& chi,
                          GridDiagnostics* diag) {
    grid.validate();
    if (grid.axes.size() != model.F)
        throw std::invalid_argument("propagate_grid: grid dimension must match model");
    const double hbar = constants::hbar;
    const GridGeometry geo = make_geometry(grid);
    const std::size_t total = geo.total;
    const std::size_t nd = geo.dims.size();

    // Initial state: product coherent state on the grid.
    std::vector<cplx> psi(total);
    Vec q(static_cast<Eigen::Index>(nd));
    std::size_t sub[3];
    double normConst = 1.0;
    for (std::size_t d = 0; d < nd; ++d)
        normConst *= std::pow(chi.gamma[static_cast<Eigen::Index>(d)] / std::numbers::pi, 0.25);
    for (std::size_t i = 0; i < total; ++i) {
        unflatten(i, geo.dims, sub);
        double re = 0.0, im = 0.0;
        for (std::size_t d = 0; d < nd; ++d) {
            const auto di = static_cast<Eigen::Index>(d);
            const double dx = geo.x[d][sub[d]] - chi.center.q[di];
            re -= 0.5 * chi.gamma[di] * dx * dx;
            im += chi.center.p[di] * dx / hbar;
        }
        psi[i] = normConst * std::exp(cplx(re, im));
    }

    auto norm2 = [&](const std::vector<cplx>& v) {
        double s = 0.0;
        for (const auto& z : v) s += std::norm(z);
        return s * geo.dV;
    };
    const double n0 = norm2(psi);
    if (std::abs(n0 - 1.0) > 1e-8)
        throw std::runtime_error("propagate_grid: initial state norm off grid tolerance");

    // Phase tables for one internal step.
    const double dtIn = grid.dt / static_cast<double>(grid.substeps);
    std::vector<cplx> expVHalf(total), expT(total);
    std::vector<double> vGrid(total), tGrid(total);
    for (std::size_t i = 0; i < total; ++i) {
        unflatten(i, geo.dims, sub);
        for (std::size_t d = 0; d < nd; ++d) q[static_cast<Eigen::Index>(d)] = geo.x[d][sub[d]];
        vGrid[i] = cl_potential(model, q);
        expVHalf[i] = std::exp(cplx(0.0, -0.5 * dtIn * vGrid[i] / hbar));
        double t = 0.0;
        for (std::size_t d = 0; d < nd; ++d) {
            const double pk = hbar * geo.k[d][sub[d]];
            t += 0.5 * pk * pk / model.masses[static_cast<Eigen::Index>(d)];
        }
        tGrid[i] = t;
        expT[i] = std::exp(cplx(0.0, -dtIn * t / hbar));
    }

    auto energy_expectation = [&](const std::vector<cplx>& state) {
        double v = 0.0;
        for (std::size_t i = 0; i < total; ++i) v += std::norm(state[i]) * vGrid[i];
        std::vector<cplx> hat = state;
        fft_inplace_nd(hat, geo.dims, -1);
        double t = 0.0;
        for (std::size_t i = 0; i < total; ++i) t += std::norm(hat[i]) * tGrid[i];
        return (v + t / static_cast<double>(total)) * geo.dV;
    };

    const std::vector<cplx> chiGrid = psi;  // <chi| is the initial state
    const double invN = 1.0 / static_cast<double>(total);
    const std::vector<std::size_t> edges = edge_indices(geo);

    TimeSignal sig;
    sig.dt = grid.dt;
    sig.samples.reserve(grid.nSteps);
    auto record = [&]() {
        cplx a(0.0, 0.0);
        for (std::size_t i = 0; i < total; ++i) a += std::conj(chiGrid[i]) * psi[i];
        sig.samples.push_back(a * geo.dV);
    };
    record();
    GridDiagnostics local;
    local.maxNormError = std::abs(n0 - 1.0);
    local.energyStart = energy_expectation(psi);

    for (std::size_t stepIdx = 1; stepIdx < grid.nSteps; ++stepIdx) {
        for (std::size_t s = 0; s < grid.substeps; ++s) {
            for (std::size_t i = 0; i < total; ++i) psi[i] *= expVHalf[i];
            fft_inplace_nd(psi, geo.dims, -1);
            for (std::size_t i = 0; i < total; ++i) psi[i] *= expT[i] * invN;
            fft_inplace_nd(psi, geo.dims, +1);
            for (std::size_t i = 0; i < total; ++i) psi[i] *= expVHalf[i];
        }
        const double n = norm2(psi);
        local.maxNormError = std::max(local.maxNormError, std::abs(n - 1.0));
        if (std::abs(n - 1.0) > 1e-8) throw std::runtime_error("propagate_grid: dt too large");
        double edgeAmp = 0.0;
        for (std::size_t i : edges) edgeAmp = std::max(edgeAmp, std::abs(psi[i]));
        local.maxEdgeAmplitude = std::max(local.maxEdgeAmplitude, edgeAmp);
        if (edgeAmp > 1e-8) throw std::runtime_error("propagate_grid: grid too small");
        record();
    }
    local.energyEnd = energy_expectation(psi);
    if (diag) *diag = local;
    return sig;
}

Spectrum spectrum_from_autocorrelation(const TimeSignal& signal) {
    const std::size_t n = signal.samples.size();
    if (n == 0) throw std::invalid_argument("spectrum_from_autocorrelation: empty signal");
    std::vector<cplx> work = signal.samples;
    fft_inplace(work, +1);  // e^{+i E t}
    const double hbar = constants::hbar;
    const double scale = signal.dt / (2.0 * std::numbers::pi * hbar);
    Spectrum s;
    s.energies = fft_energy_grid(n, signal.dt);
    s.intensities.resize(n);
    const double a0 = signal.samples[0].real();
    for (std::size_t k = 0; k < n; ++k)
        s.intensities[k] = scale * (2.0 * work[k].real() - a0);
    return s;
}

Spectrum quantum_spectrum(const ModelSpec& model, const GridSpec& grid, const CoherentState& chi) {
    return spectrum_from_autocorrelation(propagate_grid(model, grid, chi));
}

}  // namespace semispec
