#include "semispec/hybrid.hpp"

#include <cmath>
#include <memory>
#include <mutex>
#include <numbers>
#include <stdexcept>

#include <Eigen/Cholesky>

#include "semispec/fft.hpp"
#include "semispec/parallel.hpp"

namespace semispec {

void Partition::validate(std::size_t fTotal) const {
    if (f_hk() + f_tg() != fTotal)
        throw std::invalid_argument("Partition: subsets must cover all DOFs");
    std::vector<bool> seen(fTotal, false);
    for (std::size_t i : hkDofs) {
        if (i >= fTotal || seen[i]) throw std::invalid_argument("Partition: bad hk index");
        seen[i] = true;
    }
    for (std::size_t i : tgDofs) {
        if (i >= fTotal || seen[i]) throw std::invalid_argument("Partition: bad tg index");
        seen[i] = true;
    }
}

Partition Partition::system_bath(const ModelSpec& model) {
    Partition p;
    p.hkDofs = model.systemDofs;
    p.tgDofs = model.bathDofs;
    p.validate(model.F);
    return p;
}

Partition Partition::all_tg(const ModelSpec& model) {
    Partition p;
    for (std::size_t i = 0; i < model.F; ++i) p.tgDofs.push_back(i);
    p.validate(model.F);
    return p;
}

namespace {

// Bath columns of the monodromy blocks (F x F_tg): m11 = dp/dp_tg,
// m12 = dp/dq_tg, m21 = dq/dp_tg, m22 = dq/dq_tg.
struct BathColumns {
    Mat m11, m12, m21, m22;
};

BathColumns bath_columns(const Monodromy& m, const std::vector<std::size_t>& tg) {
    const auto f = m.qq.rows();
    const auto nt = static_cast<Eigen::Index>(tg.size());
    BathColumns c;
    c.m11.resize(f, nt);
    c.m12.resize(f, nt);
    c.m21.resize(f, nt);
    c.m22.resize(f, nt);
    for (Eigen::Index j = 0; j < nt; ++j) {
        const auto col = static_cast<Eigen::Index>(tg[static_cast<std::size_t>(j)]);
        c.m11.col(j) = m.pp.col(col);
        c.m12.col(j) = m.pq.col(col);
        c.m21.col(j) = m.qp.col(col);
        c.m22.col(j) = m.qq.col(col);
    }
    return c;
}

}  // namespace

HybridKernel assemble_kernel(const ModelSpec& model, const Partition& partition,
                             const TrajectoryState& state, const CoherentState& chi) {
    const double hbar = constants::hbar;
    const auto nt = static_cast<Eigen::Index>(partition.f_tg());
    const BathColumns mc = bath_columns(state.mono, partition.tgDofs);
    const Vec& g = model.gamma;
    const Vec ginv = g.cwiseInverse();

    HybridKernel k;
    k.phi = state.phi;
    k.sysOverlapExponent = overlap_exponent_subset(chi, state.point, partition.hkDofs);

    // Second-order coefficients, symmetrized: only the symmetric part of A
    // enters the quadratic form. Real parts are Gram-type blocks, the
    // imaginary part is the constant i/(4 hbar) on the off-diagonal blocks.
    const Mat gm21 = g.asDiagonal() * mc.m21;
    const Mat gm22 = g.asDiagonal() * mc.m22;
    const Mat gim11 = ginv.asDiagonal() * mc.m11;
    const Mat gim12 = ginv.asDiagonal() * mc.m12;
    const double h2 = 1.0 / (hbar * hbar);
    k.reA.resize(2 * nt, 2 * nt);
    k.reA.topLeftCorner(nt, nt) = 0.25 * (mc.m21.transpose() * gm21 + h2 * mc.m11.transpose() * gim11);
    k.reA.topRightCorner(nt, nt) = 0.25 * (mc.m21.transpose() * gm22 + h2 * mc.m11.transpose() * gim12);
    k.reA.bottomRightCorner(nt, nt) =
        0.25 * (mc.m22.transpose() * gm22 + h2 * mc.m12.transpose() * gim12);
    k.reA.bottomLeftCorner(nt, nt) = k.reA.topRightCorner(nt, nt).transpose();

    // First-order coefficients against the full-dimensional displacements of
    // the central trajectory.
    const Vec dq = state.point.q - chi.center.q;
    const Vec dp = state.point.p - chi.center.p;
    const Vec gdq = g.cwiseProduct(dq);
    const Vec gidp = ginv.cwiseProduct(dp);
    k.b.resize(2 * nt);
    k.bm.resize(2 * nt);
    for (Eigen::Index j = 0; j < nt; ++j) {
        const cplx b1(-0.5 * mc.m21.col(j).dot(gdq) - 0.5 * h2 * mc.m11.col(j).dot(gidp),
                      0.5 / hbar * (mc.m21.col(j).dot(dp) - mc.m11.col(j).dot(dq)));
        cplx b2(-0.5 * mc.m22.col(j).dot(gdq) - 0.5 * h2 * mc.m12.col(j).dot(gidp),
                0.5 / hbar * (mc.m22.col(j).dot(dp) - mc.m12.col(j).dot(dq)));
        k.b[j] = b1;
        k.bm[j] = b1;
        k.bm[nt + j] = b2;
        const double ptg0 = chi.center.p[static_cast<Eigen::Index>(partition.tgDofs[static_cast<std::size_t>(j)])];
        b2 -= cplx(0.0, ptg0 / hbar);
        k.b[nt + j] = b2;
    }

    // Zeroth order: action phase plus the bath-subspace overlap exponent.
    k.c = cplx(0.0, state.S / hbar) + overlap_exponent_subset(chi, state.point, partition.tgDofs);
    return k;
}

CMat hybrid_A_complex(const ModelSpec& model, const Partition& partition,
                      const TrajectoryState& state) {
    const HybridKernel k = assemble_kernel(model, partition, state,
                                           CoherentState{model.refCenter, model.gamma});
    const auto nt = static_cast<Eigen::Index>(partition.f_tg());
    CMat a = k.reA.cast<cplx>();
    const double quarter = 0.25 / constants::hbar;
    for (Eigen::Index j = 0; j < nt; ++j) {
        a(j, nt + j) += cplx(0.0, quarter);
        a(nt + j, j) += cplx(0.0, quarter);
    }
    return a;
}

namespace {

// 1/4 v^T M^{-1} v (complex bilinear form) for real symmetric positive
// definite M.
cplx quadform_inverse(const Mat& M, const CVec& v) {
    const auto n = M.rows();
    if (n == 0) return {0.0, 0.0};
    if (n == 2) {
        const double det = M(0, 0) * M(1, 1) - M(0, 1) * M(0, 1);
        if (!(det > 0.0) || !(M(0, 0) > 0.0))
            throw std::runtime_error("hybrid: A + A* not positive definite");
        const cplx v0 = v[0], v1 = v[1];
        return 0.25 * (M(1, 1) * v0 * v0 - 2.0 * M(0, 1) * v0 * v1 + M(0, 0) * v1 * v1) / det;
    }
    Eigen::LLT<Mat> llt(M);
    if (llt.info() != Eigen::Success)
        throw std::runtime_error("hybrid: A + A* not positive definite");
    const Vec vr = v.real();
    const Vec vi = v.imag();
    const Vec xr = llt.solve(vr);
    const Vec xi = llt.solve(vi);
    return 0.25 * cplx(vr.dot(xr) - vi.dot(xi), 2.0 * vr.dot(xi));
}

double symmetric_det(const Mat& M) {
    switch (M.rows()) {
        case 0:
            return 1.0;
        case 1:
            return M(0, 0);
        case 2:
            return M(0, 0) * M(1, 1) - M(0, 1) * M(0, 1);
        default: {
            Eigen::LLT<Mat> llt(M);
            if (llt.info() != Eigen::Success)
                throw std::runtime_error("hybrid: A + A* not positive definite");
            const Mat l = llt.matrixL();
            double d = 1.0;
            for (Eigen::Index i = 0; i < M.rows(); ++i) d *= l(i, i);
            return d * d;
        }
    }
}

}  // namespace

cplx gaussian_quadform(const Mat& reA, const CVec& b) {
    return quadform_inverse(Mat(2.0 * reA), b);
}

HybridSeries assemble_series(const ModelSpec& model, const Partition& partition,
                             const PhasePoint& initial, const RunSettings& run,
                             const CoherentState& chi, double* maxPrefactorMag) {
    HybridSeries series;
    series.dt = run.dt;
    series.steps.reserve(run.nSteps);
    propagate(
        model, initial, run.nSteps, run.dt, run.substeps,
        [&](const TrajectoryState& st) {
            if (series.steps.size() >= run.nSteps) return;
            series.steps.push_back(assemble_kernel(model, partition, st, chi));
        },
        maxPrefactorMag);
    return series;
}

TimeSignal mixed_sep_signal(const HybridSeries& series) {
    const double hbar = constants::hbar;
    TimeSignal sig;
    sig.dt = series.dt;
    sig.samples.reserve(series.steps.size());
    for (const auto& k : series.steps) {
        const cplx expo = k.sysOverlapExponent + k.c + cplx(0.0, k.phi / hbar) +
                          gaussian_quadform(k.reA, k.bm);
        const double det = symmetric_det(2.0 * k.reA);
        if (!(det > 0.0)) throw std::runtime_error("hybrid: A + A* not positive definite");
        sig.samples.push_back(std::exp(expo) / std::sqrt(std::sqrt(det)));
    }
    return sig;
}

std::vector<cplx> mixed_full_lag_kernel(const HybridSeries& series) {
    const double hbar = constants::hbar;
    const std::size_t n = series.steps.size();
    const double dt2 = series.dt * series.dt;
    std::vector<cplx> kernel(n, cplx(0.0, 0.0));
    const auto nt = n ? series.steps[0].reA.rows() : 0;

    // u(t) = exp(<chi|hk(t)> exponent + c_t + i phi_t/hbar); pair terms then
    // need only the cross quadratic form and the determinant.
    std::vector<cplx> u(n);
    for (std::size_t i = 0; i < n; ++i) {
        const auto& k = series.steps[i];
        u[i] = std::exp(k.sysOverlapExponent + k.c + cplx(0.0, k.phi / hbar));
    }

    if (nt == 2) {
        // Hot path for a single thawed-Gaussian DOF. The pair matrix
        // A(t1) + A*(t2) is real symmetric: Re A(t1) + Re A(t2).
        std::vector<double> a00(n), a01(n), a11(n), b0r(n), b0i(n), b1r(n), b1i(n);
        for (std::size_t i = 0; i < n; ++i) {
            const auto& k = series.steps[i];
            a00[i] = k.reA(0, 0);
            a01[i] = k.reA(0, 1);
            a11[i] = k.reA(1, 1);
            b0r[i] = k.b[0].real();
            b0i[i] = k.b[0].imag();
            b1r[i] = k.b[1].real();
            b1i[i] = k.b[1].imag();
        }
        for (std::size_t t1 = 0; t1 < n; ++t1) {
            const cplx u1 = u[t1];
            for (std::size_t t2 = t1; t2 < n; ++t2) {
                const double g00 = a00[t1] + a00[t2];
                const double g01 = a01[t1] + a01[t2];
                const double g11 = a11[t1] + a11[t2];
                const double det = g00 * g11 - g01 * g01;
                if (!(det > 0.0) || !(g00 > 0.0))
                    throw std::runtime_error("hybrid: A + A* not positive definite");
                const double v0r = b0r[t1] + b0r[t2], v0i = b0i[t1] - b0i[t2];
                const double v1r = b1r[t1] + b1r[t2], v1i = b1i[t1] - b1i[t2];
                // q = (g11 v0^2 - 2 g01 v0 v1 + g00 v1^2) / (4 det)
                const double v00r = v0r * v0r - v0i * v0i, v00i = 2.0 * v0r * v0i;
                const double v01r = v0r * v1r - v0i * v1i, v01i = v0r * v1i + v0i * v1r;
                const double v11r = v1r * v1r - v1i * v1i, v11i = 2.0 * v1r * v1i;
                const double s = 0.25 / det;
                const double qr = s * (g11 * v00r - 2.0 * g01 * v01r + g00 * v11r);
                const double qi = s * (g11 * v00i - 2.0 * g01 * v01i + g00 * v11i);
                const double w = (t2 == t1) ? 0.5 : 1.0;
                const double mag = w * dt2 * std::exp(qr) / std::sqrt(det);
                const double cs = std::cos(qi), sn = std::sin(qi);
                const cplx uu = u1 * std::conj(u[t2]);
                kernel[t2 - t1] += mag * cplx(uu.real() * cs - uu.imag() * sn,
                                              uu.real() * sn + uu.imag() * cs);
            }
        }
        return kernel;
    }

    // Generic dimension.
    CVec v(nt);
    Mat G(nt, nt);
    for (std::size_t t1 = 0; t1 < n; ++t1) {
        for (std::size_t t2 = t1; t2 < n; ++t2) {
            const auto& k1 = series.steps[t1];
            const auto& k2 = series.steps[t2];
            G = k1.reA + k2.reA;
            v = k1.b + k2.b.conjugate();
            const double det = symmetric_det(G);
            if (!(det > 0.0)) throw std::runtime_error("hybrid: A + A* not positive definite");
            const cplx q = quadform_inverse(G, v);
            const double weight = (t2 == t1) ? 0.5 : 1.0;
            kernel[t2 - t1] +=
                weight * dt2 * u[t1] * std::conj(u[t2]) * std::exp(q) / std::sqrt(det);
        }
    }
    return kernel;
}

namespace {

Spectrum finish_lag_spectrum(std::vector<cplx>&& kernel, const Partition& partition,
                             const RunSettings& run) {
    fft_inplace(kernel, -1);  // e^{-i E tau}
    const double hbar = constants::hbar;
    const double T = static_cast<double>(run.nSteps) * run.dt;
    const double pref = std::pow(2.0 * hbar, -static_cast<double>(partition.f_tg())) /
                        (std::numbers::pi * hbar * T);
    Spectrum s;
    s.energies = fft_energy_grid(run.nSteps, run.dt);
    s.intensities.resize(run.nSteps);
    for (std::size_t i = 0; i < run.nSteps; ++i) s.intensities[i] = pref * kernel[i].real();
    return s;
}

struct MaxReduce {
    double value = 1.0;
    std::mutex m;
    void update(double v) {
        std::lock_guard lock(m);
        value = std::max(value, v);
    }
};

}  // namespace

Spectrum mixed_full_spectrum(const ModelSpec& model, const Partition& partition,
                             const SamplerConfig& cfg, const RunSettings& run,
                             const CoherentState& chi, RunDiagnostics* diag) {
    partition.validate(model.F);
    const std::size_t blockSize = default_block_size();
    const std::size_t nBlocks = (cfg.nTrajectories + blockSize - 1) / blockSize;
    std::vector<std::vector<cplx>> partials(nBlocks);
    MaxReduce maxMag;
    PhaseSpaceSampler sampler(cfg, model);

    parallel_blocks(cfg.nTrajectories, blockSize, run.threads,
                    [&](std::size_t b, std::size_t begin, std::size_t end) {
                        std::vector<cplx> acc(run.nSteps, cplx(0.0, 0.0));
                        double mag = 1.0;
                        for (std::size_t j = begin; j < end; ++j) {
                            const SampledPoint s = sampler.draw(j);
                            const HybridSeries series =
                                assemble_series(model, partition, s.point, run, chi, &mag);
                            const auto k = mixed_full_lag_kernel(series);
                            for (std::size_t i = 0; i < run.nSteps; ++i) acc[i] += s.weight * k[i];
                        }
                        maxMag.update(mag);
                        partials[b] = std::move(acc);
                    });

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
    if (diag) diag->maxPrefactorMag = maxMag.value;
    return finish_lag_spectrum(std::move(kernel), partition, run);
}

Spectrum mixed_sep_spectrum(const ModelSpec& model, const Partition& partition,
                            const SamplerConfig& cfg, const RunSettings& run,
                            const CoherentState& chi, RunDiagnostics* diag) {
    partition.validate(model.F);
    const double hbar = constants::hbar;
    const std::size_t blockSize = default_block_size();
    const std::size_t nBlocks = (cfg.nTrajectories + blockSize - 1) / blockSize;
    std::vector<std::unique_ptr<SeparableAccumulator>> partials(nBlocks);
    MaxReduce maxMag;
    PhaseSpaceSampler sampler(cfg, model);
    const bool pureHk = partition.f_tg() == 0;

    parallel_blocks(cfg.nTrajectories, blockSize, run.threads,
                    [&](std::size_t b, std::size_t begin, std::size_t end) {
                        auto acc = std::make_unique<SeparableAccumulator>(run.nSteps, run.dt);
                        double mag = 1.0;
                        for (std::size_t j = begin; j < end; ++j) {
                            const SampledPoint s = sampler.draw(j);
                            // Empty Gaussian integral contributes a factor 1:
                            // the signal is exactly the separable HK one.
                            const TimeSignal g =
                                pureHk ? hk_separable_signal(model, s.point, run.nSteps, run.dt,
                                                             chi, run.substeps, &mag)
                                       : mixed_sep_signal(assemble_series(model, partition,
                                                                          s.point, run, chi, &mag));
                            acc->add(g, s.weight);
                        }
                        maxMag.update(mag);
                        partials[b] = std::move(acc);
                    });

    SeparableAccumulator total(run.nSteps, run.dt);
    for (auto& p : partials) total.merge(*p);
    const double T = static_cast<double>(run.nSteps) * run.dt;
    const double pref = std::pow(2.0 * hbar, -static_cast<double>(partition.f_tg())) /
                        (2.0 * std::numbers::pi * hbar * T);
    if (diag) diag->maxPrefactorMag = maxMag.value;
    return total.finish(pref);
}

}  // namespace semispec
