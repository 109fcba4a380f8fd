#pragma once

#include "gscap/interval.hpp"

#include <array>
#include <cmath>
#include <string>
#include <utility>
#include <vector>

namespace gscap {

// Problem grid: domain (-d,d)^2, coefficient order N0, operator order N.
struct Grid {
    double d = 1.0;
    int N0 = 0;
    int N = 0;

    void check() const {
        if (!(d >= 1.0) || N <= 0 || N > N0)
            throw std::invalid_argument("Grid: need d >= 1 and 0 < N <= N0");
    }
};

// Reduced index set {(n1,n2) : 0 <= n2 <= n1 <= order}, n1-major storage:
// linear position of (n1,n2) is n1(n1+1)/2 + n2.
inline int seq_len(int order) { return (order + 1) * (order + 2) / 2; }
inline int seq_pos(int n1, int n2) { return n1 * (n1 + 1) / 2 + n2; }
std::pair<int, int> seq_idx(int pos);

// Size of the dihedral orbit of a reduced index: 1, 4 or 8.
int orbit_size(int n1, int n2);
// The distinct images of (n1,n2) under the 8 symmetries of the square.
std::vector<std::array<int, 2>> orbit(int n1, int n2);
// Canonical (reduced) representative of an arbitrary Z^2 index.
inline std::array<int, 2> reduce_index(int m1, int m2) {
    int a = std::abs(m1), b = std::abs(m2);
    if (a < b) std::swap(a, b);
    return {a, b};
}

// alpha_n per linear position (and duplicated for two-component vectors).
std::vector<double> alpha_weights(int order);
std::vector<double> pair_alpha_weights(int order);

template <typename T>
struct Seq {
    int order = 0;
    std::vector<T> c;

    Seq() : c(1) {}
    explicit Seq(int ord) : order(ord), c(seq_len(ord)) {}

    T& at(int n1, int n2) { return c[seq_pos(n1, n2)]; }
    const T& at(int n1, int n2) const { return c[seq_pos(n1, n2)]; }

    // Value of the unfolded Z^2 sequence at (m1,m2); zero outside support.
    T full(int m1, int m2) const {
        const auto r = reduce_index(m1, m2);
        if (r[0] > order) return T{};
        return c[seq_pos(r[0], r[1])];
    }
};

using SeqD = Seq<double>;
using SeqI = Seq<Interval>;

template <typename T>
struct Pair {
    Seq<T> u1, u2;
};
using PairD = Pair<double>;
using PairI = Pair<Interval>;

SeqI to_interval(const SeqD& u);
SeqD midpoints(const SeqI& u);
PairI to_interval(const PairD& u);

// head: zero entries with n1 > M; tail: zero entries with n1 <= M.
template <typename T>
Seq<T> project_head(const Seq<T>& u, int M) {
    Seq<T> r(u.order);
    for (int n1 = 0; n1 <= std::min(M, u.order); ++n1)
        for (int n2 = 0; n2 <= n1; ++n2) r.at(n1, n2) = u.at(n1, n2);
    return r;
}

template <typename T>
Seq<T> project_tail(const Seq<T>& u, int M) {
    Seq<T> r(u.order);
    for (int n1 = M + 1; n1 <= u.order; ++n1)
        for (int n2 = 0; n2 <= n1; ++n2) r.at(n1, n2) = u.at(n1, n2);
    return r;
}

// Reduced representation of the full Z^2 convolution of the unfolded
// sequences. out_order < 0 means a.order + b.order (exact support).
SeqD conv(const SeqD& a, const SeqD& b, int out_order = -1);
SeqI conv(const SeqI& a, const SeqI& b, int out_order = -1);
// Direct loop, skipping zero entries of `a`; used by both conv overloads.
SeqD conv_direct(const SeqD& a, const SeqD& b, int out_order);

double seq_norm_l1(const SeqD& u);
double seq_norm_l2(const SeqD& u);
Interval seq_norm_l1(const SeqI& u);
Interval seq_norm_l2(const SeqI& u);
double inner2(const SeqD& u, const SeqD& v);
Interval inner2(const SeqI& u, const SeqI& v);

double pair_norm_l2(const PairD& u);
Interval pair_norm_l2(const PairI& u);

// gamma^dagger evaluation at a physical point; zero outside (-d,d)^2.
double eval_point(const SeqD& u, double d, double x, double y);

// Full (2*order+1)^2 grid of unfolded coefficients, row-major, index
// (m1,m2) at position (m1+order)*(2*order+1) + (m2+order).
struct FullGrid {
    int order = 0;
    std::vector<double> v;

    FullGrid() = default;
    explicit FullGrid(int ord)
        : order(ord), v(static_cast<size_t>(2 * ord + 1) * (2 * ord + 1)) {}

    double& at(int m1, int m2) {
        return v[static_cast<size_t>(m1 + order) * (2 * order + 1) + (m2 + order)];
    }
    double at(int m1, int m2) const {
        return v[static_cast<size_t>(m1 + order) * (2 * order + 1) + (m2 + order)];
    }
};

FullGrid unfold(const SeqD& u);
// Requires D4 symmetry up to tol * max|entry|; averages over each orbit.
SeqD fold_full(const FullGrid& g, double tol);

// Interval grid variant: symmetrizes by orbit averaging; the result hulls
// every orbit member, so it encloses any truly symmetric underlying value.
struct FullGridI {
    int order = 0;
    std::vector<Interval> v;

    FullGridI() = default;
    explicit FullGridI(int ord)
        : order(ord), v(static_cast<size_t>(2 * ord + 1) * (2 * ord + 1)) {}

    Interval& at(int m1, int m2) {
        return v[static_cast<size_t>(m1 + order) * (2 * order + 1) + (m2 + order)];
    }
    const Interval& at(int m1, int m2) const {
        return v[static_cast<size_t>(m1 + order) * (2 * order + 1) + (m2 + order)];
    }
};
SeqI fold_full(const FullGridI& g);

// Fourier coefficients of 1_{Omega0}(x) (cosh(2a x1) + cosh(2a x2))/2 on the
// reduced set, supported on the axis, via the closed-form 1D integrals.
SeqI cosh_box_coeffs(const Interval& a, const Interval& d, int order);

// Scalar trace matrix: (N0+1) x seq_len(N0), integer entries
// alpha~_{n} (-1)^{n1}; row k collects the 1D boundary mode k.
std::vector<double> trace_matrix_scalar(int N0);
// Residuals T u per boundary mode.
std::vector<double> trace_apply(const SeqD& u);

// Projects onto ker T along the weighted directions D (diagonal per index):
// scalar mode uses d11 only; pair mode uses the 2x2 lower-triangular blocks
// (d11, d21, d22). A follow-up pass re-zeroes each row through its private
// diagonal entry so residuals land at the round-off floor.
void trace_project_scalar(SeqD& u, const std::vector<double>& d11);
void trace_project_pair(PairD& u, const std::vector<double>& d11,
                        const std::vector<double>& d21,
                        const std::vector<double>& d22);

// Coefficient file (JSON, decimal strings, storage order documented above).
struct CoeffFile {
    double lambda1 = 0.0;
    double lambda2 = 0.0;
    std::string lambda1_str, lambda2_str;  // as given, may be rational "p/q"
    double d = 1.0;
    int order = 0;
    int component_count = 1;
    std::vector<SeqD> comps;
};

void save_coeffs(const std::string& path, const CoeffFile& f);
CoeffFile load_coeffs(const std::string& path);

} // namespace gscap
