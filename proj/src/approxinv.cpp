#include "gscap/approxinv.hpp"

#include <Eigen/Dense>

namespace gscap {

IMatrix convmat(const SeqI& V, int row_order, int col_order) {
    IMatrix M(seq_len(row_order), seq_len(col_order));
    for (int k1 = 0; k1 <= col_order; ++k1)
        for (int k2 = 0; k2 <= k1; ++k2) {
            const int col = seq_pos(k1, k2);
            for (const auto& g : orbit(k1, k2)) {
                int row = 0;
                for (int m1 = 0; m1 <= row_order; ++m1)
                    for (int m2 = 0; m2 <= m1; ++m2, ++row) {
                        const auto r = reduce_index(m1 - g[0], m2 - g[1]);
                        if (r[0] > V.order) continue;
                        const Interval& v = V.c[seq_pos(r[0], r[1])];
                        if (v.lo == 0.0 && v.hi == 0.0) continue;
                        M.at(row, col) += v;
                    }
            }
        }
    return M;
}

std::vector<double> convmat_f(const SeqD& V, int row_order, int col_order) {
    const int R = seq_len(row_order), C = seq_len(col_order);
    std::vector<double> M(static_cast<size_t>(R) * C, 0.0);
    for (int k1 = 0; k1 <= col_order; ++k1)
        for (int k2 = 0; k2 <= k1; ++k2) {
            const int col = seq_pos(k1, k2);
            for (const auto& g : orbit(k1, k2)) {
                int row = 0;
                for (int m1 = 0; m1 <= row_order; ++m1)
                    for (int m2 = 0; m2 <= m1; ++m2, ++row)
                        M[static_cast<size_t>(row) * C + col] += V.full(m1 - g[0], m2 - g[1]);
            }
        }
    return M;
}

namespace {

ApproxInverse finish_build(const GSParams& p, Eigen::MatrixXd& T11,
                           const Eigen::MatrixXd* T12, int threads, int squarings) {
    const int L = static_cast<int>(T11.rows());
    ApproxInverse inv;
    inv.N = p.grid.N;

    Eigen::PartialPivLU<Eigen::MatrixXd> lu(T11);
    const Eigen::MatrixXd B11 = lu.inverse();
    const Eigen::MatrixXd R = Eigen::MatrixXd::Identity(L, L) - B11 * T11;
    inv.residual_inf = R.cwiseAbs().rowwise().sum().maxCoeff();
    if (!std::isfinite(inv.residual_inf) || inv.residual_inf > 1e-6) {
        const double cond_est = B11.cwiseAbs().rowwise().sum().maxCoeff() *
                                T11.cwiseAbs().rowwise().sum().maxCoeff();
        throw std::runtime_error(
            "approximate inverse: finite block numerically singular, cond ~ " +
            std::to_string(cond_est));
    }

    inv.b11f.resize(static_cast<size_t>(L) * L);
    for (int i = 0; i < L; ++i)
        for (int j = 0; j < L; ++j) inv.b11f[static_cast<size_t>(i) * L + j] = B11(i, j);
    inv.b11 = IMatrix::from_doubles(inv.b11f, L, L);

    if (T12) {
        const Eigen::MatrixXd B12 = -B11 * (*T12);
        inv.b12f.resize(static_cast<size_t>(L) * L);
        for (int i = 0; i < L; ++i)
            for (int j = 0; j < L; ++j) inv.b12f[static_cast<size_t>(i) * L + j] = B12(i, j);
        inv.b12 = IMatrix::from_doubles(inv.b12f, L, L);
    }

    const auto w = alpha_weights(inv.N);
    inv.b11_norm = opnorm_via_gram(inv.b11, w, w, squarings, threads);
    inv.b11_norm_max1 = imax(Interval(1.0), inv.b11_norm);
    return inv;
}

} // namespace

ApproxInverse build_BN(const GSParams& p, const PairD& u0, int threads, int squarings) {
    p.check();
    const int N = p.grid.N, L = seq_len(N);
    const DGDataD dg = dg_sequences(p, u0);
    const auto V1m = convmat_f(dg.v1, N, N);
    const auto V2m = convmat_f(dg.v2, N, N);
    const auto xi2 = freq_sq_f(p, N);
    const double l21 = sym_l21_f(p);

    Eigen::MatrixXd T11 = Eigen::MatrixXd::Identity(L, L);
    Eigen::MatrixXd T12 = Eigen::MatrixXd::Zero(L, L);
    for (int i = 0; i < L; ++i)
        for (int j = 0; j < L; ++j) {
            const double l11j = sym_l11_f(p, xi2[j]);
            const double l22j = sym_l22_f(p, xi2[j]);
            const size_t ij = static_cast<size_t>(i) * L + j;
            T11(i, j) += V1m[ij] / l11j - V2m[ij] * l21 / (l22j * l11j);
            T12(i, j) = V2m[ij] / l22j;
        }
    return finish_build(p, T11, &T12, threads, squarings);
}

ApproxInverse reduced_build_Br(const GSParams& p, const SeqD& u0, int threads,
                               int squarings) {
    p.check();
    const int N = p.grid.N, L = seq_len(N);
    // V0 = 2 u0 - 3 lambda1 u0*u0
    const SeqD sq = conv(u0, u0);
    SeqD v0(sq.order);
    for (int i = 0; i < seq_len(sq.order); ++i) {
        double acc = -3.0 * p.l1f() * sq.c[i];
        if (i < seq_len(u0.order)) acc += 2.0 * u0.c[i];
        v0.c[i] = acc;
    }
    const auto V0m = convmat_f(v0, N, N);
    const auto xi2 = freq_sq_f(p, N);
    Eigen::MatrixXd T11 = Eigen::MatrixXd::Identity(L, L);
    for (int i = 0; i < L; ++i)
        for (int j = 0; j < L; ++j)
            T11(i, j) += V0m[static_cast<size_t>(i) * L + j] / sym_l11_f(p, xi2[j]);
    ApproxInverse inv = finish_build(p, T11, nullptr, threads, squarings);
    inv.reduced = true;
    return inv;
}

Interval b11_norm_ub(const ApproxInverse& inv) { return inv.b11_norm_max1; }

} // namespace gscap
