#pragma once

#include "gscap/imatrix.hpp"
#include "gscap/model.hpp"

namespace gscap {

// Matrix of the discrete convolution operator W -> V*W on the window
// I^row_order x I^col_order: entry (m,k) = sum_{j in orb(k)} V_full(m - j).
IMatrix convmat(const SeqI& V, int row_order, int col_order);
// Float shadow, row-major seq_len(row) x seq_len(col).
std::vector<double> convmat_f(const SeqD& V, int row_order, int col_order);

// Finite blocks of the approximate inverse B^N = [[B11, B12], [0, pi^N]].
struct ApproxInverse {
    int N = 0;
    std::vector<double> b11f, b12f;  // float shadows, row-major L x L
    IMatrix b11, b12;                // point-interval promotions
    Interval b11_norm{0.0};          // rigorous bound of ||B11^N||_2 (weighted)
    Interval b11_norm_max1{1.0};     // max{1, b11_norm}
    double residual_inf = 0.0;       // float residual ||I - B11 T11||_inf
    bool reduced = false;

    int L() const { return seq_len(N); }
};

// B11^N = inv(pi^N (I + V1 L11^-1 - V2 L22^-1 L21 L11^-1) pi^N),
// B12^N = -B11^N pi^N (V2 L22^-1) pi^N.
ApproxInverse build_BN(const GSParams& p, const PairD& u0, int threads = 1,
                       int squarings = 2);

// Scalar variant: B_r^N = inv(pi^N (I + V0 L11^-1) pi^N), V0 = 2u0 - 3 l1 u0^2.
ApproxInverse reduced_build_Br(const GSParams& p, const SeqD& u0, int threads = 1,
                               int squarings = 2);

// max{1, ||B11^N||}: the operator norm of the extended inverse.
Interval b11_norm_ub(const ApproxInverse& inv);

} // namespace gscap
