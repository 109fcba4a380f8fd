#pragma once

#include "gscap/interval.hpp"

#include <vector>

namespace gscap {

// Dense rectangular matrix of intervals, row-major.
struct IMatrix {
    int rows = 0;
    int cols = 0;
    std::vector<Interval> a;

    IMatrix() = default;
    IMatrix(int r, int c) : rows(r), cols(c), a(static_cast<size_t>(r) * c) {}

    Interval& at(int i, int j) { return a[static_cast<size_t>(i) * cols + j]; }
    const Interval& at(int i, int j) const { return a[static_cast<size_t>(i) * cols + j]; }

    static IMatrix identity(int n);
    static IMatrix from_doubles(const std::vector<double>& v, int r, int c);
};

IMatrix operator+(const IMatrix& A, const IMatrix& B);
IMatrix operator-(const IMatrix& A, const IMatrix& B);

// C = A * B, outward rounded; rows of C are computed independently so the
// result is identical for any thread count.
IMatrix matmul(const IMatrix& A, const IMatrix& B, int threads = 1);

std::vector<Interval> matvec(const IMatrix& A, const std::vector<Interval>& x);

// Adjoint in the weighted inner product (x,y) = sum_i w_i x_i y_i:
// (A*)_{ij} = (w_j / w_i) A_{ji}.  wrow/wcol are the weights of A's
// row/column index sets; the result has A's shape transposed.
IMatrix weighted_adjoint(const IMatrix& A, const std::vector<double>& wrow,
                         const std::vector<double>& wcol);

// Upper bound of the weighted-l2 operator norm of a self-adjoint matrix P
// (P = P* in the weighted inner product): row-sum norm of the conjugated
// matrix W^{1/2} P W^{-1/2}.
Interval opnorm_rowsum_selfadj(const IMatrix& P, const std::vector<double>& w);

// Like the above but tightened by k Gram squarings:
// ||P|| <= rowsum(P^(2^k))^(1/2^k) for self-adjoint PSD P.
Interval opnorm_selfadj_powered(const IMatrix& P, const std::vector<double>& w,
                                int squarings, int threads = 1);

// sqrt(||A~||_1 ||A~||_inf) for a general rectangular block.
Interval opnorm_l1linf(const IMatrix& A, const std::vector<double>& wrow,
                       const std::vector<double>& wcol);

// ||A|| <= sqrt(||A A*||) via the powered self-adjoint bound on the Gram
// matrix; the tight route for non-normal blocks such as B11.
Interval opnorm_via_gram(const IMatrix& A, const std::vector<double>& wrow,
                         const std::vector<double>& wcol, int squarings,
                         int threads = 1);

} // namespace gscap
