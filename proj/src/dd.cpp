#include "gscap/dd.hpp"

#include <cfenv>
#include <cmath>

namespace gscap::dd {

NearestScope::NearestScope() : old_(fegetround()), switched_(old_ != FE_TONEAREST) {
    if (switched_) fesetround(FE_TONEAREST);
}
NearestScope::~NearestScope() {
    if (switched_) fesetround(old_);
}

namespace {

// Error-free transforms (round-to-nearest assumed by the caller).
inline Double2 two_sum(double a, double b) {
    const double s = a + b;
    const double bb = s - a;
    const double e = (a - (s - bb)) + (b - bb);
    return {s, e};
}

inline Double2 quick_two_sum(double a, double b) {  // requires |a| >= |b|
    const double s = a + b;
    return {s, b - (s - a)};
}

// Veltkamp split + Dekker product (exact, no fma dependence).
inline void split(double a, double& hi, double& lo) {
    const double c = 134217729.0 * a;  // 2^27 + 1
    hi = c - (c - a);
    lo = a - hi;
}

inline Double2 two_prod(double a, double b) {
    const double p = a * b;
    double ah, al, bh, bl;
    split(a, ah, al);
    split(b, bh, bl);
    const double e = ((ah * bh - p) + ah * bl + al * bh) + al * bl;
    return {p, e};
}

inline Double2 add_rn(Double2 x, Double2 y) {
    Double2 s = two_sum(x.hi, y.hi);
    Double2 t = two_sum(x.lo, y.lo);
    s.lo += t.hi;
    s = quick_two_sum(s.hi, s.lo);
    s.lo += t.lo;
    return quick_two_sum(s.hi, s.lo);
}

inline Double2 mul_rn(Double2 x, Double2 y) {
    Double2 p = two_prod(x.hi, y.hi);
    p.lo += x.hi * y.lo + x.lo * y.hi;
    return quick_two_sum(p.hi, p.lo);
}

inline Double2 neg(Double2 x) { return {-x.hi, -x.lo}; }

inline Double2 div_rn(Double2 x, Double2 y) {
    const double q1 = x.hi / y.hi;
    Double2 p = mul_rn({q1, 0.0}, y);
    Double2 r = add_rn(x, neg(p));       // r = x - q1*y
    const double q2 = r.hi / y.hi;
    p = mul_rn({q2, 0.0}, y);
    r = add_rn(r, neg(p));
    const double q3 = r.hi / y.hi;
    Double2 q = two_sum(q1, q2);
    return add_rn(q, {q3, 0.0});
}

// Relative error of one add/mul/div kernel above is < 2^-99 for normalized
// inputs; padding uses 2^-88 for ample margin plus an absolute floor.
constexpr double kRelPad = 0x1p-88;
constexpr double kAbsPad = 1e-290;

inline double mag_of(Double2 a, Double2 b) {
    return std::fmax(std::fabs(a.hi), std::fabs(b.hi));
}

// Moves endpoint down (toward -inf) by at least `pad` (pad > 0).
inline Double2 nudge_down(Double2 x, double pad) {
    return add_rn(x, {-2.0 * pad, 0.0});
}
inline Double2 nudge_up(Double2 x, double pad) {
    return add_rn(x, {2.0 * pad, 0.0});
}

inline double le_val(Double2 x) { return x.hi; }  // compare by leading word

} // namespace

DDInterval operator+(const DDInterval& a, const DDInterval& b) {
    NearestScope rn;
    Double2 l = add_rn(a.lo(), b.lo());
    Double2 h = add_rn(a.hi(), b.hi());
    const double pad = kRelPad * mag_of(l, h) + kAbsPad;
    return {nudge_down(l, pad), nudge_up(h, pad)};
}

DDInterval operator-(const DDInterval& a) {
    return {neg(a.hi()), neg(a.lo())};
}

DDInterval operator-(const DDInterval& a, const DDInterval& b) { return a + (-b); }

DDInterval operator*(const DDInterval& a, const DDInterval& b) {
    NearestScope rn;
    const Double2 c[4] = {mul_rn(a.lo(), b.lo()), mul_rn(a.lo(), b.hi()),
                          mul_rn(a.hi(), b.lo()), mul_rn(a.hi(), b.hi())};
    Double2 l = c[0], h = c[0];
    for (int i = 1; i < 4; ++i) {
        if (le_val(c[i]) < le_val(l) ||
            (le_val(c[i]) == le_val(l) && c[i].lo < l.lo)) l = c[i];
        if (le_val(c[i]) > le_val(h) ||
            (le_val(c[i]) == le_val(h) && c[i].lo > h.lo)) h = c[i];
    }
    const double pad = kRelPad * mag_of(l, h) + kAbsPad;
    return {nudge_down(l, pad), nudge_up(h, pad)};
}

DDInterval operator/(const DDInterval& a, const DDInterval& b) {
    NearestScope rn;
    if (b.lo().hi <= 0.0 && b.hi().hi >= 0.0)
        throw std::domain_error("DDInterval division by interval containing zero");
    const Double2 c[4] = {div_rn(a.lo(), b.lo()), div_rn(a.lo(), b.hi()),
                          div_rn(a.hi(), b.lo()), div_rn(a.hi(), b.hi())};
    Double2 l = c[0], h = c[0];
    for (int i = 1; i < 4; ++i) {
        if (le_val(c[i]) < le_val(l) ||
            (le_val(c[i]) == le_val(l) && c[i].lo < l.lo)) l = c[i];
        if (le_val(c[i]) > le_val(h) ||
            (le_val(c[i]) == le_val(h) && c[i].lo > h.lo)) h = c[i];
    }
    const double pad = kRelPad * mag_of(l, h) + kAbsPad;
    return {nudge_down(l, pad), nudge_up(h, pad)};
}

Interval DDInterval::to_interval() const {
    NearestScope rn;
    double l = lo_.hi + lo_.lo;
    double h = hi_.hi + hi_.lo;
    l = std::nextafter(std::nextafter(l, -HUGE_VAL), -HUGE_VAL);
    h = std::nextafter(std::nextafter(h, HUGE_VAL), HUGE_VAL);
    return Interval(l, h);
}

DDInterval DDInterval::clamp_nonneg() const {
    DDInterval r = *this;
    if (r.lo_.hi < 0.0 || (r.lo_.hi == 0.0 && r.lo_.lo < 0.0)) r.lo_ = {0.0, 0.0};
    if (r.hi_.hi < 0.0) throw std::domain_error("clamp_nonneg: interval entirely negative");
    return r;
}

DDInterval dd_pi() {
    // double-double decomposition of pi, |pi - (hi+lo)| < 2^-107
    const Double2 p{3.141592653589793116, 1.2246467991473531772e-16};
    NearestScope rn;
    return {nudge_down(p, 1e-30), nudge_up(p, 1e-30)};
}

namespace {

// sin at a Double2 point with |x| <= ~3.2, Taylor with remainder.
DDInterval dd_sin_reduced(const DDInterval& x) {
    constexpr int K = 21;  // highest kept term x^(2K+1)/(2K+1)!
    DDInterval x2 = x * x;
    DDInterval s(1.0);
    for (int j = K; j >= 1; --j) {
        DDInterval denom(static_cast<double>((2 * j) * (2 * j + 1)));
        s = DDInterval(1.0) - x2 * s / denom;
    }
    s = x * s;
    // |R| <= |x|^(2K+3)/(2K+3)!; |x| <= 3.3 -> < 1e-30, folded into a pad
    Interval ax = (x * x).to_interval();
    double m = std::sqrt(std::fmax(ax.hi, 0.0)) + 1e-10;
    double r = 1.0;
    for (int j = 1; j <= 2 * K + 3; ++j) r = r * m / j;
    r *= 2.0;  // covers round-to-nearest slop in the bound itself
    return s + DDInterval(Interval(-r, r));
}

} // namespace

DDInterval dd_sin(const DDInterval& x) {
    NearestScope rn;
    // reduce mod 2pi to |t| <= pi + slack
    const double mid = x.lo().hi;
    const double k = std::nearbyint(mid / 6.283185307179586);
    DDInterval t = x - DDInterval(Interval(2.0 * k)) * dd_pi();
    if (std::fabs(t.lo().hi) > 3.3)
        throw std::domain_error("dd_sin: reduction failed");
    return dd_sin_reduced(t);
}

DDVec matvec(const DDMat& M, const DDVec& x) {
    DDVec y(M.size());
    for (size_t i = 0; i < M.size(); ++i) {
        DDInterval acc(0.0);
        for (size_t j = 0; j < x.size(); ++j) acc += M[i][j] * x[j];
        y[i] = acc;
    }
    return y;
}

DDMat matmul(const DDMat& A, const DDMat& B) {
    const size_t n = A.size(), m = B[0].size(), k = B.size();
    DDMat C(n, DDVec(m));
    for (size_t i = 0; i < n; ++i)
        for (size_t j = 0; j < m; ++j) {
            DDInterval acc(0.0);
            for (size_t l = 0; l < k; ++l) acc += A[i][l] * B[l][j];
            C[i][j] = acc;
        }
    return C;
}

DDInterval dot_all(const DDMat& A, const DDMat& B) {
    DDInterval acc(0.0);
    for (size_t i = 0; i < A.size(); ++i)
        for (size_t j = 0; j < A[i].size(); ++j) acc += A[i][j] * B[i][j];
    return acc;
}

} // namespace gscap::dd
