#include "semispec/semiclassics.hpp"

#include <cmath>
#include <cstdio>
#include <memory>
#include <mutex>
#include <numbers>
#include <stdexcept>

#include "semispec/fft.hpp"
#include "semispec/parallel.hpp"

namespace semispec {

cplx overlap_exponent(const CoherentState& bra, const PhasePoint& ketCenter) {
    if (bra.center.q.size() != ketCenter.q.size())
        throw std::invalid_argument("overlap: dimension mismatch");
    const double hbar = constants::hbar;
    double re = 0.0, im = 0.0;
    for (Eigen::Index i = 0; i < bra.gamma.size(); ++i) {
        const double dq = bra.center.q[i] - ketCenter.q[i];
        const double dp = bra.center.p[i] - ketCenter.p[i];
        re -= 0.25 * bra.gamma[i] * dq * dq + 0.25 * dp * dp / (bra.gamma[i] * hbar * hbar);
        im += 0.5 * (bra.center.p[i] + ketCenter.p[i]) * dq / hbar;
    }
    return {re, im};
}

cplx overlap(const CoherentState& bra, const PhasePoint& ketCenter) {
    return std::exp(overlap_exponent(bra, ketCenter));
}

cplx overlap_exponent_subset(const CoherentState& bra, const PhasePoint& ketCenter,
                             const std::vector<std::size_t>& dofs) {
    const double hbar = constants::hbar;
    double re = 0.0, im = 0.0;
    for (std::size_t d : dofs) {
        const auto i = static_cast<Eigen::Index>(d);
        const double dq = bra.center.q[i] - ketCenter.q[i];
        const double dp = bra.center.p[i] - ketCenter.p[i];
        re -= 0.25 * bra.gamma[i] * dq * dq + 0.25 * dp * dp / (bra.gamma[i] * hbar * hbar);
        im += 0.5 * (bra.center.p[i] + ketCenter.p[i]) * dq / hbar;
    }
    return {re, im};
}

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

// Two standard normals from a (seed, trajectory, dof) substream; Box-Muller
// on explicitly constructed uniforms keeps the draws platform-independent.
void normal_pair(std::uint64_t seed, std::uint64_t traj, std::uint64_t dof, double& z1,
                 double& z2) {
    std::uint64_t s = splitmix64(seed ^ splitmix64(traj ^ splitmix64(dof)));
    auto uniform = [&s]() {
        s = splitmix64(s);
        return (static_cast<double>(s >> 11) + 0.5) * 0x1.0p-53;
    };
    const double u1 = uniform();
    const double u2 = uniform();
    const double r = std::sqrt(-2.0 * std::log(u1));
    z1 = r * std::cos(2.0 * std::numbers::pi * u2);
    z2 = r * std::sin(2.0 * std::numbers::pi * u2);
}

}  // namespace

PhaseSpaceSampler::PhaseSpaceSampler(const SamplerConfig& cfg, const ModelSpec& model)
    : cfg_(cfg), model_(model) {
    if (cfg_.nTrajectories < 1)
        throw std::invalid_argument("PhaseSpaceSampler: need at least one trajectory");
    for (std::size_t d : cfg_.sampledDofs)
        if (d >= model.F) throw std::invalid_argument("PhaseSpaceSampler: DOF index out of range");
}

SampledPoint PhaseSpaceSampler::draw(std::size_t trajectoryIndex) const {
    const double hbar = constants::hbar;
    SampledPoint out;
    out.point = model_.refCenter;
    double logw = 0.0;
    for (std::size_t d : cfg_.sampledDofs) {
        const auto i = static_cast<Eigen::Index>(d);
        double z1, z2;
        normal_pair(cfg_.seed, trajectoryIndex, d, z1, z2);
        const double sigmaQ = 1.0 / std::sqrt(model_.gamma[i]);
        const double sigmaP = hbar * std::sqrt(model_.gamma[i]);
        const double dq = sigmaQ * z1;
        const double dp = sigmaP * z2;
        out.point.q[i] += dq;
        out.point.p[i] += dp;
        // 1 / (normalized Husimi density); the (2 pi hbar)^{n_sampled}
        // normalization is folded into the spectrum prefactors.
        logw += 0.5 * model_.gamma[i] * dq * dq + 0.5 * dp * dp / (model_.gamma[i] * hbar * hbar);
    }
    out.weight = std::exp(logw) / static_cast<double>(cfg_.nTrajectories);
    return out;
}

TimeSignal hk_separable_signal(const ModelSpec& model, const PhasePoint& initial,
                               std::size_t nSteps, double dt, const CoherentState& chi,
                               std::size_t substeps, double* maxPrefactorMag) {
    TimeSignal sig;
    sig.dt = dt;
    sig.samples.reserve(nSteps);
    const double hbar = constants::hbar;
    propagate(
        model, initial, nSteps, dt, substeps,
        [&](const TrajectoryState& st) {
            if (sig.samples.size() >= nSteps) return;  // drop the final record
            const cplx expo = overlap_exponent(chi, st.point) + cplx(0.0, (st.S + st.phi) / hbar);
            sig.samples.push_back(std::exp(expo));
        },
        maxPrefactorMag);
    return sig;
}

namespace {

struct MaxReduce {
    double value = 1.0;
    std::mutex m;
    void update(double v) {
        std::lock_guard lock(m);
        value = std::max(value, v);
    }
};

}  // namespace

Spectrum hk_separable_spectrum(const ModelSpec& model, const SamplerConfig& cfg,
                               const RunSettings& run, const CoherentState& chi,
                               RunDiagnostics* diag) {
    PhaseSpaceSampler sampler(cfg, model);
    const std::size_t blockSize = default_block_size();
    const std::size_t nBlocks = (cfg.nTrajectories + blockSize - 1) / blockSize;
    std::vector<std::unique_ptr<SeparableAccumulator>> partials(nBlocks);
    MaxReduce maxMag;

    parallel_blocks(cfg.nTrajectories, blockSize, run.threads,
                    [&](std::size_t b, std::size_t begin, std::size_t end) {
                        auto acc = std::make_unique<SeparableAccumulator>(run.nSteps, run.dt);
                        double mag = 1.0;
                        for (std::size_t j = begin; j < end; ++j) {
                            const SampledPoint s = sampler.draw(j);
                            const TimeSignal f = hk_separable_signal(model, s.point, run.nSteps,
                                                                     run.dt, chi, run.substeps, &mag);
                            acc->add(f, s.weight);
                        }
                        maxMag.update(mag);
                        partials[b] = std::move(acc);
                    });

    SeparableAccumulator total(run.nSteps, run.dt);
    for (auto& p : partials) total.merge(*p);

    const double hbar = constants::hbar;
    const double T = static_cast<double>(run.nSteps) * run.dt;
    // The (2 pi hbar)^F normalization of the phase-space integral cancels
    // against the normalization of the Husimi importance density.
    const double pref = 1.0 / (2.0 * std::numbers::pi * hbar * T);
    if (diag) diag->maxPrefactorMag = maxMag.value;
    return total.finish(pref);
}

namespace {

// Symplectic inverse of a monodromy matrix: for M = [[A,B],[C,D]] in (q,p)
// block order, M^{-1} = [[D^T, -B^T], [-C^T, A^T]].
Monodromy symplectic_inverse(const Monodromy& m) {
    Monodromy inv;
    inv.qq = m.pp.transpose();
    inv.qp = -m.qp.transpose();
    inv.pq = -m.pq.transpose();
    inv.pp = m.qq.transpose();
    return inv;
}

Monodromy compose(const Monodromy& later, const Monodromy& earlierInv) {
    Monodromy c;
    c.qq = later.qq * earlierInv.qq + later.qp * earlierInv.pq;
    c.qp = later.qq * earlierInv.qp + later.qp * earlierInv.pp;
    c.pq = later.pq * earlierInv.qq + later.pp * earlierInv.pq;
    c.pp = later.pq * earlierInv.qp + later.pp * earlierInv.pp;
    return c;
}

}  // namespace

std::vector<cplx> hk_full_lag_kernel(const ModelSpec& model, const PhasePoint& initial,
                                     const RunSettings& run, const CoherentState& chi,
                                     double* maxPrefactorMag) {
    const double hbar = constants::hbar;
    const std::size_t n = run.nSteps;

    std::vector<Monodromy> monos;
    std::vector<cplx> f;  // <chi|g(t)> e^{i S_t/hbar}
    monos.reserve(n);
    f.reserve(n);
    propagate(model, initial, n, run.dt, run.substeps, [&](const TrajectoryState& st) {
        if (f.size() >= n) return;
        monos.push_back(st.mono);
        f.push_back(std::exp(overlap_exponent(chi, st.point) + cplx(0.0, st.S / hbar)));
    });

    std::vector<Monodromy> inv;
    inv.reserve(n);
    for (const auto& m : monos) inv.push_back(symplectic_inverse(m));

    const double dt2 = run.dt * run.dt;
    double maxMag = 1.0;
    std::vector<cplx> kernel(n, cplx(0.0, 0.0));
    for (std::size_t t1 = 0; t1 < n; ++t1) {
        cplx cPrev(1.0, 0.0);
        kernel[0] += 0.5 * dt2 * f[t1] * std::conj(f[t1]);  // C_{t1->t1} = 1
        for (std::size_t t2 = t1 + 1; t2 < n; ++t2) {
            const Monodromy seg = compose(monos[t2], inv[t1]);
            const cplx c = continue_sqrt(hk_prefactor_squared(seg, model.gamma), cPrev);
            cPrev = c;
            maxMag = std::max(maxMag, std::abs(c));
            kernel[t2 - t1] += dt2 * c * f[t2] * std::conj(f[t1]);
        }
    }
    if (maxPrefactorMag) *maxPrefactorMag = std::max(*maxPrefactorMag, maxMag);
    return kernel;
}

Spectrum hk_full_spectrum(const ModelSpec& model, const SamplerConfig& cfg,
                          const RunSettings& run, const CoherentState& chi,
                          RunDiagnostics* diag) {
    if (run.nSteps > 8192)
        std::fprintf(stderr,
                     "hk_full_spectrum: %zu steps implies %zu^2 prefactor compositions; "
                     "expect a long run\n",
                     run.nSteps, run.nSteps);
    PhaseSpaceSampler sampler(cfg, model);
    const std::size_t blockSize = default_block_size();
    const std::size_t nBlocks = (cfg.nTrajectories + blockSize - 1) / blockSize;
    std::vector<std::vector<cplx>> partials(nBlocks);
    MaxReduce maxMag;

    parallel_blocks(cfg.nTrajectories, blockSize, run.threads,
                    [&](std::size_t b, std::size_t begin, std::size_t end) {
                        std::vector<cplx> acc(run.nSteps, cplx(0.0, 0.0));
                        double mag = 1.0;
                        for (std::size_t j = begin; j < end; ++j) {
                            const SampledPoint s = sampler.draw(j);
                            const auto k = hk_full_lag_kernel(model, s.point, run, chi, &mag);
                            for (std::size_t i = 0; i < run.nSteps; ++i) acc[i] += s.weight * k[i];
                        }
                        maxMag.update(mag);
                        partials[b] = std::move(acc);
                    });

    // Merge block partials in fixed order (compensated, real/imag separately).
    KahanVector re(run.nSteps), im(run.nSteps);
    std::vector<double> tmp(run.nSteps);
    for (const auto& p : partials) {
        for (std::size_t i = 0; i < run.nSteps; ++i) tmp[i] = p[i].real();
        re.add(tmp);
        for (std::size_t i = 0; i < run.nSteps; ++i) tmp[i] = p[i].imag();
        im.add(tmp);
    }
    std::vector<cplx> kernel(run.nSteps);
    for (std::size_t i = 0; i < run.nSteps; ++i) kernel[i] = {re.value()[i], im.value()[i]};

    fft_inplace(kernel, +1);  // e^{+i E tau}

    const double hbar = constants::hbar;
    const double T = static_cast<double>(run.nSteps) * run.dt;
    // as in the separable case, the (2 pi hbar)^F factor cancels against the
    // importance-density normalization
    const double pref = 1.0 / (std::numbers::pi * hbar * T);
    Spectrum s;
    s.energies = fft_energy_grid(run.nSteps, run.dt);
    s.intensities.resize(run.nSteps);
    for (std::size_t i = 0; i < run.nSteps; ++i) s.intensities[i] = pref * kernel[i].real();
    if (diag) diag->maxPrefactorMag = maxMag.value;
    return s;
}

}  // namespace semispec
