#include "gscap/solver.hpp"

#include "gscap/approxinv.hpp"
#include "gscap/fftw_lock.hpp"

#include <Eigen/Dense>
#include <fftw3.h>

#include <cmath>
#include <sstream>

namespace gscap {

SeqD seed_1d_radial(const GSParams& p, SeedForm form) {
    const double l1 = p.l1f();
    if (!(l1 > 0.0 && l1 < 2.0 / 9.0))
        throw std::invalid_argument("seed_1d_radial: need 0 < lambda1 < 2/9");
    const double Q = std::sqrt(1.0 - 9.0 * l1 / 2.0);
    const double d = p.grid.d;
    const int M = 2 * (p.grid.N0 + 1);
    const double h = 2.0 * d / M;

    std::vector<double> samples(static_cast<size_t>(M) * M);
    for (int j = 0; j < M; ++j)
        for (int k = 0; k < M; ++k) {
            const double x = -d + j * h, y = -d + k * h;
            const double r = std::sqrt(x * x + y * y);
            const double arg = (form == SeedForm::SqrtArg) ? std::sqrt(r / l1)
                                                           : r / std::sqrt(l1);
            samples[static_cast<size_t>(j) * M + k] = 3.0 / (1.0 + Q * std::cosh(arg));
        }

    const int nc = M / 2 + 1;
    std::vector<fftw_complex> freq(static_cast<size_t>(M) * nc);
    fftw_plan plan;
    {
        std::lock_guard<std::mutex> lock(fftw_lock());
        plan = fftw_plan_dft_r2c_2d(M, M, samples.data(), freq.data(), FFTW_ESTIMATE);
    }
    fftw_execute(plan);
    {
        std::lock_guard<std::mutex> lock(fftw_lock());
        fftw_destroy_plan(plan);
    }

    // c_n = (-1)^{n1+n2} DFT[n]/M^2 (grid starts at -d)
    const double scale = 1.0 / (static_cast<double>(M) * M);
    FullGrid g(p.grid.N0);
    for (int n1 = -p.grid.N0; n1 <= p.grid.N0; ++n1)
        for (int n2 = -p.grid.N0; n2 <= p.grid.N0; ++n2) {
            const int i1 = (n1 + M) % M;
            int i2 = (n2 + M) % M;
            double re;
            if (i2 < nc) {
                re = freq[static_cast<size_t>(i1) * nc + i2][0];
            } else {
                // r2c stores the half-spectrum; use conjugate symmetry
                const int j1 = (M - i1) % M, j2 = M - i2;
                re = freq[static_cast<size_t>(j1) * nc + j2][0];
            }
            const double sgn = ((n1 + n2) % 2 == 0) ? 1.0 : -1.0;
            g.at(n1, n2) = sgn * re * scale;
        }
    return fold_full(g, 1e-9);
}

namespace {

double galerkin_residual(const GSParams& p, const PairD& u, PairD& f_out) {
    f_out = F_full(p, u, p.grid.N0);
    return pair_norm_l2(f_out);
}

} // namespace

NewtonResult newton_solve(const GSParams& p, PairD& u, const NewtonConfig& cfg) {
    if (cfg.tol <= 0.0) throw std::invalid_argument("NewtonConfig: tol must be positive");
    const int N0 = p.grid.N0, L = seq_len(N0);
    NewtonResult res;
    PairD f;
    double rnorm = galerkin_residual(p, u, f);
    res.history.push_back(rnorm);
    const auto xi2 = freq_sq_f(p, N0);
    const double l21 = sym_l21_f(p);
    for (int it = 0; it < cfg.max_iter; ++it) {
        if (rnorm <= cfg.tol) {
            res.converged = true;
            res.iters = it;
            res.residual = rnorm;
            return res;
        }
        const DGDataD dg = dg_sequences(p, u);
        const auto V1m = convmat_f(dg.v1, N0, N0);
        const auto V2m = convmat_f(dg.v2, N0, N0);
        Eigen::MatrixXd A = Eigen::MatrixXd::Identity(L, L);
        Eigen::VectorXd rhs(L);
        for (int i = 0; i < L; ++i) {
            for (int j = 0; j < L; ++j) {
                const double l11j = sym_l11_f(p, xi2[j]);
                const double l22j = sym_l22_f(p, xi2[j]);
                const size_t ij = static_cast<size_t>(i) * L + j;
                A(i, j) += V1m[ij] / l11j - V2m[ij] * l21 / (l22j * l11j);
            }
            // z2 = -F2; rhs = -F1 - W2 z2 with (W2)_{ij} = V2_{ij}/l22(j)
            double acc = -f.u1.c[i];
            for (int j = 0; j < L; ++j)
                acc += V2m[static_cast<size_t>(i) * L + j] * f.u2.c[j] /
                       sym_l22_f(p, xi2[j]);
            rhs(i) = acc;
        }
        const Eigen::VectorXd z1 = Eigen::PartialPivLU<Eigen::MatrixXd>(A).solve(rhs);
        // delta = L^{-1} z
        PairD z{SeqD(N0), SeqD(N0)};
        for (int i = 0; i < L; ++i) {
            z.u1.c[i] = z1(i);
            z.u2.c[i] = -f.u2.c[i];
        }
        const PairD delta = apply_L_inv(p, z);
        for (int i = 0; i < L; ++i) {
            u.u1.c[i] += cfg.damping * delta.u1.c[i];
            u.u2.c[i] += cfg.damping * delta.u2.c[i];
        }
        rnorm = galerkin_residual(p, u, f);
        res.history.push_back(rnorm);
        if (!std::isfinite(rnorm) || rnorm > 1e6 * (res.history.front() + 1.0)) {
            std::ostringstream os;
            os << "newton_solve: diverged at iteration " << it + 1
               << ", residual " << rnorm;
            throw std::runtime_error(os.str());
        }
    }
    if (rnorm <= cfg.tol) {
        res.converged = true;
        res.residual = rnorm;
        res.iters = cfg.max_iter;
        return res;
    }
    std::ostringstream os;
    os << "newton_solve: no convergence after " << cfg.max_iter
       << " iterations, residual " << rnorm;
    throw std::runtime_error(os.str());
}

NewtonResult newton_solve_reduced(const GSParams& p, SeqD& u, const NewtonConfig& cfg) {
    if (cfg.tol <= 0.0) throw std::invalid_argument("NewtonConfig: tol must be positive");
    const int N0 = p.grid.N0, L = seq_len(N0);
    const auto xi2 = freq_sq_f(p, N0);
    const double l1 = p.l1f();
    auto resid = [&](const SeqD& v, SeqD& f_out) {
        const SeqD sq = conv(v, v, N0);
        const SeqD cu = conv(conv(v, v, 2 * v.order), v, N0);
        f_out = SeqD(N0);
        for (int i = 0; i < L; ++i) {
            const double li = (i < seq_len(v.order)) ? v.c[i] : 0.0;
            f_out.c[i] = sym_l11_f(p, xi2[i]) * li + sq.c[i] - l1 * cu.c[i];
        }
        return seq_norm_l2(f_out);
    };
    NewtonResult res;
    SeqD f;
    double rnorm = resid(u, f);
    res.history.push_back(rnorm);
    for (int it = 0; it < cfg.max_iter; ++it) {
        if (rnorm <= cfg.tol) {
            res.converged = true;
            res.iters = it;
            res.residual = rnorm;
            return res;
        }
        // V0 = 2u - 3 l1 u*u
        const SeqD sq = conv(u, u);
        SeqD v0(sq.order);
        for (int i = 0; i < seq_len(sq.order); ++i) {
            double acc = -3.0 * l1 * sq.c[i];
            if (i < seq_len(u.order)) acc += 2.0 * u.c[i];
            v0.c[i] = acc;
        }
        const auto V0m = convmat_f(v0, N0, N0);
        Eigen::MatrixXd A = Eigen::MatrixXd::Identity(L, L);
        Eigen::VectorXd rhs(L);
        for (int i = 0; i < L; ++i) {
            for (int j = 0; j < L; ++j)
                A(i, j) += V0m[static_cast<size_t>(i) * L + j] / sym_l11_f(p, xi2[j]);
            rhs(i) = -f.c[i];
        }
        const Eigen::VectorXd z = Eigen::PartialPivLU<Eigen::MatrixXd>(A).solve(rhs);
        SeqD nu = u;
        if (nu.order < N0) {
            SeqD tmp(N0);
            for (int i = 0; i < seq_len(nu.order); ++i) tmp.c[i] = nu.c[i];
            nu = tmp;
        }
        for (int i = 0; i < L; ++i) nu.c[i] += cfg.damping * z(i) / sym_l11_f(p, xi2[i]);
        u = nu;
        rnorm = resid(u, f);
        res.history.push_back(rnorm);
        if (!std::isfinite(rnorm) || rnorm > 1e6 * (res.history.front() + 1.0)) {
            std::ostringstream os;
            os << "newton_solve_reduced: diverged at iteration " << it + 1
               << ", residual " << rnorm;
            throw std::runtime_error(os.str());
        }
    }
    if (rnorm <= cfg.tol) {
        res.converged = true;
        res.residual = rnorm;
        res.iters = cfg.max_iter;
        return res;
    }
    std::ostringstream os;
    os << "newton_solve_reduced: no convergence after " << cfg.max_iter
       << " iterations, residual " << rnorm;
    throw std::runtime_error(os.str());
}

std::vector<ContinuationEntry> continue_lambda2(const GSParams& from, const PairD& u_start,
                                                const ContinuationConfig& cfg) {
    if (cfg.steps <= 0) throw std::invalid_argument("continue_lambda2: steps must be > 0");
    std::vector<ContinuationEntry> chain;
    GSParams cur = from;
    PairD u = u_start;
    {
        NewtonConfig nc = cfg.newton;
        newton_solve(cur, u, nc);
        chain.push_back({cur, u});
    }
    const double l2_from = from.l2f();
    if (cfg.lambda2_to == l2_from) return chain;
    double step = (cfg.lambda2_to - l2_from) / cfg.steps;
    double l2 = l2_from;
    int halvings = 0;
    while (std::fabs(l2 - cfg.lambda2_to) > 1e-12) {
        double next = l2 + step;
        if ((step > 0 && next > cfg.lambda2_to) || (step < 0 && next < cfg.lambda2_to))
            next = cfg.lambda2_to;
        GSParams trial = cur;
        trial.lambda2 = Interval(next);
        PairD u_trial = u;
        try {
            newton_solve(trial, u_trial, cfg.newton);
        } catch (const std::runtime_error&) {
            if (++halvings > cfg.max_halvings)
                throw std::runtime_error(
                    "continue_lambda2: step failure persists after halving; "
                    "partial chain has " + std::to_string(chain.size()) + " entries");
            step *= 0.5;
            continue;
        }
        cur = trial;
        u = u_trial;
        l2 = next;
        chain.push_back({cur, u});
    }
    return chain;
}

namespace {

double boundary_sup(const SeqD& u, double d, int samples = 64) {
    double mx = 0.0;
    for (int i = 0; i < samples; ++i) {
        const double t = -d + (2.0 * d) * (i + 0.5) / samples;
        // evaluate the trig sum on the boundary edge x1 = d (open-domain
        // indicator does not apply: this measures the periodic extension)
        double s = 0.0;
        for (int n1 = 0; n1 <= u.order; ++n1)
            for (int n2 = 0; n2 <= n1; ++n2) {
                const double v = u.at(n1, n2);
                if (v == 0.0) continue;
                double e = 0.0;
                for (const auto& g : orbit(n1, n2))
                    e += std::cos(M_PI * (g[0] * d + g[1] * t) / d);
                s += v * e;
            }
        mx = std::fmax(mx, std::fabs(s));
    }
    return mx;
}

std::vector<double> dvec_l11(const GSParams& p, int order) {
    const auto xi2 = freq_sq_f(p, order);
    std::vector<double> out(xi2.size());
    for (size_t i = 0; i < xi2.size(); ++i) out[i] = 1.0 / sym_l11_f(p, xi2[i]);
    return out;
}

} // namespace

TraceReport build_u0(const GSParams& p, PairD& u, double boundary_tol) {
    TraceReport rep;
    const int N0 = u.u1.order;
    const auto xi2 = freq_sq_f(p, N0);
    const double l21 = sym_l21_f(p);
    PairD f;
    rep.f_residual_before = galerkin_residual(p, u, f);
    const double scale = std::fmax(seq_norm_l1(u.u1), 1e-300);
    rep.boundary_before =
        std::fmax(boundary_sup(u.u1, p.grid.d), boundary_sup(u.u2, p.grid.d)) / scale;
    if (rep.boundary_before > boundary_tol)
        throw std::runtime_error(
            "build_u0: boundary residual too large; increase d (relative residual " +
            std::to_string(rep.boundary_before) + ")");
    std::vector<double> d11(seq_len(N0)), d21(seq_len(N0)), d22(seq_len(N0));
    for (int i = 0; i < seq_len(N0); ++i) {
        const double l11i = sym_l11_f(p, xi2[i]);
        const double l22i = sym_l22_f(p, xi2[i]);
        d11[i] = 1.0 / l11i;
        d21[i] = -l21 / (l11i * l22i);
        d22[i] = 1.0 / l22i;
    }
    trace_project_pair(u, d11, d21, d22);
    rep.boundary_after =
        std::fmax(boundary_sup(u.u1, p.grid.d), boundary_sup(u.u2, p.grid.d)) / scale;
    rep.f_residual_after = galerkin_residual(p, u, f);
    return rep;
}

TraceReport build_u0_reduced(const GSParams& p, SeqD& u, double boundary_tol) {
    TraceReport rep;
    auto resid = [&](const SeqD& v) {
        const auto xi2 = freq_sq_f(p, v.order);
        const SeqD s2 = conv(v, v, v.order);
        const SeqD s3 = conv(conv(v, v, 2 * v.order), v, v.order);
        SeqD fr(v.order);
        for (int i = 0; i < seq_len(v.order); ++i)
            fr.c[i] = sym_l11_f(p, xi2[i]) * v.c[i] + s2.c[i] - p.l1f() * s3.c[i];
        return seq_norm_l2(fr);
    };
    rep.f_residual_before = resid(u);
    const double scale = std::fmax(seq_norm_l1(u), 1e-300);
    rep.boundary_before = boundary_sup(u, p.grid.d) / scale;
    if (rep.boundary_before > boundary_tol)
        throw std::runtime_error(
            "build_u0_reduced: boundary residual too large; increase d (relative residual " +
            std::to_string(rep.boundary_before) + ")");
    trace_project_scalar(u, dvec_l11(p, u.order));
    rep.boundary_after = boundary_sup(u, p.grid.d) / scale;
    rep.f_residual_after = resid(u);
    return rep;
}

} // namespace gscap
