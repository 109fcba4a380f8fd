#pragma once

#include "gscap/interval.hpp"

#include <vector>

namespace gscap::dd {

// Unevaluated sum hi + lo with |lo| <= ulp(hi)/2. Error-free transforms
// require round-to-nearest; every public entry point guards the mode.
struct Double2 {
    double hi = 0.0;
    double lo = 0.0;
};

// Interval with Double2 endpoints. Used where plain double intervals lose
// to catastrophic cancellation (boundary-strip Gram forms). Each operation
// runs the double-double kernel in round-to-nearest and then pads the
// endpoints outward by a proven per-op error bound.
class DDInterval {
  public:
    DDInterval() = default;
    explicit DDInterval(double v) : lo_{v, 0.0}, hi_{v, 0.0} {}
    DDInterval(Double2 lo, Double2 hi) : lo_(lo), hi_(hi) {}
    explicit DDInterval(const Interval& x) : lo_{x.lo, 0.0}, hi_{x.hi, 0.0} {}

    Interval to_interval() const;
    Double2 lo() const { return lo_; }
    Double2 hi() const { return hi_; }

    friend DDInterval operator+(const DDInterval& a, const DDInterval& b);
    friend DDInterval operator-(const DDInterval& a, const DDInterval& b);
    friend DDInterval operator-(const DDInterval& a);
    friend DDInterval operator*(const DDInterval& a, const DDInterval& b);
    friend DDInterval operator/(const DDInterval& a, const DDInterval& b);

    DDInterval& operator+=(const DDInterval& o) { return *this = *this + o; }

    // intersect with [0, inf); PSD quadratic forms use it before sqrt
    DDInterval clamp_nonneg() const;

  private:
    Double2 lo_, hi_;
};

DDInterval dd_pi();
// sin on a point-ish small interval; |argument| may be large (reduced mod 2pi)
DDInterval dd_sin(const DDInterval& x);

// Guard asserting round-to-nearest for a block of dd kernels (cheap nesting).
class NearestScope {
  public:
    NearestScope();
    ~NearestScope();
    NearestScope(const NearestScope&) = delete;

  private:
    int old_;
    bool switched_;
};

using DDVec = std::vector<DDInterval>;
using DDMat = std::vector<DDVec>;  // row-major dense

// y = M * x
DDVec matvec(const DDMat& M, const DDVec& x);
// C = A * B
DDMat matmul(const DDMat& A, const DDMat& B);
// sum_ij A[i][j] * B[i][j]
DDInterval dot_all(const DDMat& A, const DDMat& B);

} // namespace gscap::dd
