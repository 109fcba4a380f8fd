#include "gscap/imatrix.hpp"

#include "gscap/rounding_kernels.hpp"

#include <algorithm>
#include <functional>
#include <stdexcept>
#include <thread>

namespace gscap {

IMatrix IMatrix::identity(int n) {
    IMatrix I(n, n);
    for (int i = 0; i < n; ++i) I.at(i, i) = Interval(1.0);
    return I;
}

IMatrix IMatrix::from_doubles(const std::vector<double>& v, int r, int c) {
    if (v.size() != static_cast<size_t>(r) * c)
        throw std::invalid_argument("from_doubles: size mismatch");
    IMatrix M(r, c);
    for (size_t i = 0; i < v.size(); ++i) M.a[i] = Interval(v[i]);
    return M;
}

IMatrix operator+(const IMatrix& A, const IMatrix& B) {
    if (A.rows != B.rows || A.cols != B.cols)
        throw std::invalid_argument("IMatrix add: shape mismatch");
    IMatrix C(A.rows, A.cols);
    for (size_t i = 0; i < A.a.size(); ++i) C.a[i] = A.a[i] + B.a[i];
    return C;
}

IMatrix operator-(const IMatrix& A, const IMatrix& B) {
    if (A.rows != B.rows || A.cols != B.cols)
        throw std::invalid_argument("IMatrix sub: shape mismatch");
    IMatrix C(A.rows, A.cols);
    for (size_t i = 0; i < A.a.size(); ++i) C.a[i] = A.a[i] - B.a[i];
    return C;
}

namespace {

void mul_rows(const IMatrix& A, const IMatrix& B, IMatrix& C, int r0, int r1) {
    // fenv is thread-local; each worker holds its own upward scope
    rounding::UpwardScope up;
    const int n = B.cols, K = A.cols;
    std::vector<kernel::Acc> acc(n);
    for (int i = r0; i < r1; ++i) {
        for (auto& s : acc) s = kernel::Acc{};
        for (int k = 0; k < K; ++k) {
            const Interval& aik = A.at(i, k);
            if (aik.lo == 0.0 && aik.hi == 0.0) continue;
            const Interval* brow = &B.at(k, 0);
            for (int j = 0; j < n; ++j) acc[j].add(aik, brow[j]);
        }
        for (int j = 0; j < n; ++j) C.at(i, j) = acc[j].get();
    }
}

void parallel_rows(int rows, int threads, const std::function<void(int, int)>& fn) {
    if (threads <= 1 || rows < 2 * threads) {
        fn(0, rows);
        return;
    }
    std::vector<std::thread> pool;
    const int chunk = (rows + threads - 1) / threads;
    for (int t = 0; t < threads; ++t) {
        const int r0 = t * chunk, r1 = std::min(rows, r0 + chunk);
        if (r0 >= r1) break;
        pool.emplace_back([&fn, r0, r1] { fn(r0, r1); });
    }
    for (auto& th : pool) th.join();
}

} // namespace

IMatrix matmul(const IMatrix& A, const IMatrix& B, int threads) {
    if (A.cols != B.rows) throw std::invalid_argument("matmul: shape mismatch");
    IMatrix C(A.rows, B.cols);
    parallel_rows(A.rows, threads,
                  [&](int r0, int r1) { mul_rows(A, B, C, r0, r1); });
    return C;
}

std::vector<Interval> matvec(const IMatrix& A, const std::vector<Interval>& x) {
    if (A.cols != static_cast<int>(x.size()))
        throw std::invalid_argument("matvec: shape mismatch");
    std::vector<Interval> y(A.rows);
    rounding::UpwardScope up;
    for (int i = 0; i < A.rows; ++i) {
        kernel::Acc acc;
        for (int j = 0; j < A.cols; ++j) acc.add(A.at(i, j), x[j]);
        y[i] = acc.get();
    }
    return y;
}

IMatrix weighted_adjoint(const IMatrix& A, const std::vector<double>& wrow,
                         const std::vector<double>& wcol) {
    if (static_cast<int>(wrow.size()) != A.rows || static_cast<int>(wcol.size()) != A.cols)
        throw std::invalid_argument("weighted_adjoint: weight size mismatch");
    IMatrix T(A.cols, A.rows);
    for (int i = 0; i < A.rows; ++i)
        for (int j = 0; j < A.cols; ++j)
            T.at(j, i) = A.at(i, j) * (Interval(wrow[i]) / Interval(wcol[j]));
    return T;
}

namespace {

// Per-position index into the table of distinct weight values, plus upper
// bounds of sqrt(vi/vj) for every distinct pair. The alpha weights take
// only the values {1,4,8}, so the table stays tiny.
struct RatioTable {
    std::vector<double> vals;
    std::vector<int> idx;
    std::vector<double> ratio_hi;  // vals.size()^2

    explicit RatioTable(const std::vector<double>& w) {
        idx.resize(w.size());
        for (size_t i = 0; i < w.size(); ++i) {
            auto it = std::find(vals.begin(), vals.end(), w[i]);
            if (it == vals.end()) {
                vals.push_back(w[i]);
                it = vals.end() - 1;
            }
            idx[i] = static_cast<int>(it - vals.begin());
        }
        const size_t n = vals.size();
        ratio_hi.resize(n * n);
        for (size_t i = 0; i < n; ++i)
            for (size_t j = 0; j < n; ++j)
                ratio_hi[i * n + j] = sqrt(Interval(vals[i]) / Interval(vals[j])).hi;
    }

    double operator()(size_t i, size_t j) const {
        return ratio_hi[static_cast<size_t>(idx[i]) * vals.size() + idx[j]];
    }
};

// Cross table for rectangular blocks: upper bounds of sqrt(wrow_i/wcol_j).
struct CrossRatioTable {
    std::vector<double> rvals, cvals;
    std::vector<int> ridx, cidx;
    std::vector<double> ratio_hi;

    CrossRatioTable(const std::vector<double>& wrow, const std::vector<double>& wcol) {
        auto index = [](const std::vector<double>& w, std::vector<double>& vals,
                        std::vector<int>& idx) {
            idx.resize(w.size());
            for (size_t i = 0; i < w.size(); ++i) {
                auto it = std::find(vals.begin(), vals.end(), w[i]);
                if (it == vals.end()) {
                    vals.push_back(w[i]);
                    it = vals.end() - 1;
                }
                idx[i] = static_cast<int>(it - vals.begin());
            }
        };
        index(wrow, rvals, ridx);
        index(wcol, cvals, cidx);
        ratio_hi.resize(rvals.size() * cvals.size());
        for (size_t i = 0; i < rvals.size(); ++i)
            for (size_t j = 0; j < cvals.size(); ++j)
                ratio_hi[i * cvals.size() + j] =
                    sqrt(Interval(rvals[i]) / Interval(cvals[j])).hi;
    }

    double operator()(size_t i, size_t j) const {
        return ratio_hi[static_cast<size_t>(ridx[i]) * cvals.size() + cidx[j]];
    }
};

} // namespace

Interval opnorm_rowsum_selfadj(const IMatrix& P, const std::vector<double>& w) {
    if (P.rows != P.cols || static_cast<int>(w.size()) != P.rows)
        throw std::invalid_argument("opnorm_rowsum_selfadj: shape mismatch");
    const RatioTable rt(w);
    rounding::UpwardScope up;
    double best = 0.0;
    for (int i = 0; i < P.rows; ++i) {
        double s = 0.0;
        for (int j = 0; j < P.cols; ++j) {
            const double m = P.at(i, j).mag();
            if (m == 0.0) continue;
            s = kernel::kadd_up(s, kernel::kmul_up(m, rt(i, j)));
        }
        best = std::fmax(best, s);
    }
    return Interval(0.0, best);
}

Interval opnorm_selfadj_powered(const IMatrix& P, const std::vector<double>& w,
                                int squarings, int threads) {
    Interval best = opnorm_rowsum_selfadj(P, w);
    IMatrix Q = P;
    double expo = 1.0;
    for (int s = 0; s < squarings; ++s) {
        Q = matmul(Q, Q, threads);
        expo *= 2.0;
        Interval b = opnorm_rowsum_selfadj(Q, w);
        // ||P|| <= b^(1/2^s); take log-free nested sqrt
        for (double e = expo; e > 1.0; e /= 2.0) b = sqrt(b);
        best = imin(best, b);
    }
    return Interval(0.0, best.hi);
}

Interval opnorm_l1linf(const IMatrix& A, const std::vector<double>& wrow,
                       const std::vector<double>& wcol) {
    const CrossRatioTable rt(wrow, wcol);
    rounding::UpwardScope up;
    // conjugated entries sqrt(wrow_i) A_ij / sqrt(wcol_j)
    double ninf = 0.0;
    std::vector<double> colsum(A.cols, 0.0);
    for (int i = 0; i < A.rows; ++i) {
        double rsum = 0.0;
        for (int j = 0; j < A.cols; ++j) {
            const double m = A.at(i, j).mag();
            if (m == 0.0) continue;
            const double e = kernel::kmul_up(m, rt(i, j));
            rsum = kernel::kadd_up(rsum, e);
            colsum[j] = kernel::kadd_up(colsum[j], e);
        }
        ninf = std::fmax(ninf, rsum);
    }
    double n1 = 0.0;
    for (double c : colsum) n1 = std::fmax(n1, c);
    return sqrt(Interval(0.0, kernel::kmul_up(n1, ninf)));
}

Interval opnorm_via_gram(const IMatrix& A, const std::vector<double>& wrow,
                         const std::vector<double>& wcol, int squarings,
                         int threads) {
    const IMatrix At = weighted_adjoint(A, wrow, wcol);
    const IMatrix G = matmul(A, At, threads);  // self-adjoint PSD in w-ip
    const Interval g = opnorm_selfadj_powered(G, wrow, squarings, threads);
    return sqrt(Interval(0.0, g.hi));
}

} // namespace gscap
