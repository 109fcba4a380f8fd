#include "gscap/interval.hpp"

#include <cfenv>
#include <cstdio>
#include <cstdlib>

namespace gscap {

namespace rounding {

UpwardScope::UpwardScope() : old_(fegetround()), switched_(old_ != FE_UPWARD) {
    if (switched_) fesetround(FE_UPWARD);
}
UpwardScope::~UpwardScope() {
    if (switched_) fesetround(old_);
}

} // namespace rounding

namespace {

// Defeats constant folding across rounding-mode changes.
inline double opaque(double x) {
    volatile double v = x;
    return v;
}

// All helpers below require the current rounding mode to be FE_UPWARD.
// Lower bounds come from the negation trick: down(a op b) = -up(-(a op b)).
inline double add_up(double a, double b) { return opaque(a) + b; }
inline double sub_up(double a, double b) { return opaque(a) - b; }
inline double mul_up(double a, double b) { return opaque(a) * b; }
inline double div_up(double a, double b) { return opaque(a) / b; }
inline double add_dn(double a, double b) { return -(opaque(-a) - b); }
inline double sub_dn(double a, double b) { return -(opaque(b) - a); }
inline double mul_dn(double a, double b) { return -(opaque(-a) * b); }
inline double div_dn(double a, double b) { return -(opaque(-a) / b); }

} // namespace

double Interval::width() const {
    rounding::UpwardScope up;
    return sub_up(hi, lo);
}

Interval operator+(const Interval& a, const Interval& b) {
    rounding::UpwardScope up;
    return {add_dn(a.lo, b.lo), add_up(a.hi, b.hi)};
}

Interval operator-(const Interval& a, const Interval& b) {
    rounding::UpwardScope up;
    return {sub_dn(a.lo, b.hi), sub_up(a.hi, b.lo)};
}

Interval operator*(const Interval& a, const Interval& b) {
    rounding::UpwardScope up;
    const double l1 = mul_dn(a.lo, b.lo), l2 = mul_dn(a.lo, b.hi);
    const double l3 = mul_dn(a.hi, b.lo), l4 = mul_dn(a.hi, b.hi);
    const double u1 = mul_up(a.lo, b.lo), u2 = mul_up(a.lo, b.hi);
    const double u3 = mul_up(a.hi, b.lo), u4 = mul_up(a.hi, b.hi);
    return {std::fmin(std::fmin(l1, l2), std::fmin(l3, l4)),
            std::fmax(std::fmax(u1, u2), std::fmax(u3, u4))};
}

Interval operator*(const Interval& a, double b) {
    rounding::UpwardScope up;
    if (b >= 0.0) return {mul_dn(a.lo, b), mul_up(a.hi, b)};
    return {mul_dn(a.hi, b), mul_up(a.lo, b)};
}

Interval operator/(const Interval& a, const Interval& b) {
    if (b.contains_zero())
        throw std::domain_error("Interval division by interval containing zero");
    rounding::UpwardScope up;
    const double l1 = div_dn(a.lo, b.lo), l2 = div_dn(a.lo, b.hi);
    const double l3 = div_dn(a.hi, b.lo), l4 = div_dn(a.hi, b.hi);
    const double u1 = div_up(a.lo, b.lo), u2 = div_up(a.lo, b.hi);
    const double u3 = div_up(a.hi, b.lo), u4 = div_up(a.hi, b.hi);
    return {std::fmin(std::fmin(l1, l2), std::fmin(l3, l4)),
            std::fmax(std::fmax(u1, u2), std::fmax(u3, u4))};
}

Interval sqr(const Interval& x) {
    rounding::UpwardScope up;
    const double m = x.mig(), M = x.mag();
    return {mul_dn(m, m), mul_up(M, M)};
}

Interval sqrt(const Interval& x) {
    if (x.lo < 0.0) throw std::domain_error("Interval sqrt of negative interval");
    rounding::UpwardScope up;
    const double hi = std::sqrt(opaque(x.hi));  // hardware sqrt, rounded up
    double lo = std::sqrt(opaque(x.lo));        // rounded up; nudge one ulp down
    lo = std::nextafter(lo, -HUGE_VAL);
    if (lo < 0.0) lo = 0.0;
    return {lo, hi};
}

Interval abs(const Interval& x) { return {x.mig(), x.mag()}; }

bool intersect(const Interval& a, const Interval& b, Interval& out) {
    const double lo = std::fmax(a.lo, b.lo), hi = std::fmin(a.hi, b.hi);
    if (lo > hi) return false;
    out = Interval(lo, hi);
    return true;
}

namespace {
// 2-ulp enclosure around the correctly rounded double of a constant.
inline Interval around(double v) {
    return {std::nextafter(v, -HUGE_VAL), std::nextafter(v, HUGE_VAL)};
}
} // namespace

Interval pi() { return around(3.141592653589793238462643383279503); }
Interval ln2() { return around(0.693147180559945309417232121458177); }

Interval powi(const Interval& x, int n) {
    if (n < 0) throw std::domain_error("powi: negative exponent");
    if (n == 0) return Interval(1.0);
    Interval acc(1.0);
    Interval base = x;
    int e = n;
    while (true) {
        if (e & 1) acc = acc * base;
        e >>= 1;
        if (e == 0) break;
        base = sqr(base);
    }
    if (n % 2 == 0 && acc.lo < 0.0) acc.lo = 0.0;
    return acc;
}

namespace {

// exp at a point, via x = k*ln2 + r and a Taylor tail bound on |r| <~ 0.35.
Interval exp_point(double x) {
    if (x > 709.0) throw std::domain_error("interval exp overflow");
    if (x < -744.0) return {0.0, 5e-324};
    const double k = std::nearbyint(x / 0.6931471805599453);
    const Interval r = Interval(x) - Interval(k) * ln2();
    constexpr int K = 18;
    Interval s(1.0);
    for (int j = K; j >= 1; --j) s = 1.0 + r * s / static_cast<double>(j);
    // tail: |r|^(K+1)/(K+1)! / (1 - |r|/(K+2))
    const Interval am(abs(r).hi);
    double fact = 1.0;
    for (int j = 2; j <= K + 1; ++j) fact *= j;
    Interval rem = powi(am, K + 1) / fact;
    rem = rem / (1.0 - am / static_cast<double>(K + 2));
    s = s + Interval(-rem.hi, rem.hi);
    const int ki = static_cast<int>(k);
    double lo = std::ldexp(s.lo, ki), hi = std::ldexp(s.hi, ki);  // exact scaling
    if (!std::isfinite(hi)) throw std::domain_error("interval exp overflow");
    if (lo < 0.0) lo = 0.0;
    return {lo, hi};
}

// log at a point > 0 via the atanh series on the mantissa in [sqrt2/2, sqrt2).
Interval log_point(double x) {
    if (x <= 0.0) throw std::domain_error("interval log of non-positive value");
    int e = 0;
    double m = std::frexp(x, &e);
    if (m < 0.70710678118654752) { m *= 2.0; e -= 1; }
    const Interval t = (Interval(m) - 1.0) / (Interval(m) + 1.0);  // |t| <= 0.172
    constexpr int K = 13;
    const Interval t2 = sqr(t);
    Interval s(0.0);
    for (int j = K; j >= 0; --j) s = 1.0 / Interval(static_cast<double>(2 * j + 1)) + t2 * s;
    s = 2.0 * t * s;
    const Interval am(abs(t).hi);
    Interval rem = 2.0 * powi(am, 2 * K + 3) /
                   (Interval(static_cast<double>(2 * K + 3)) * (1.0 - sqr(am)));
    s = s + Interval(-rem.hi, rem.hi);
    return s + Interval(static_cast<double>(e)) * ln2();
}

// sinh at a point; Taylor for small |x| avoids the exp cancellation.
Interval sinh_point(double x) {
    const double ax = std::fabs(x);
    if (ax < 0.5) {
        const Interval x2 = sqr(Interval(x));
        constexpr int K = 10;
        Interval s(1.0);
        for (int j = K; j >= 1; --j)
            s = 1.0 + x2 * s / static_cast<double>((2 * j) * (2 * j + 1));
        s = Interval(x) * s;
        const Interval am(ax);
        double fact = 1.0;
        for (int j = 2; j <= 2 * K + 3; ++j) fact *= j;
        // tail of the odd series, ratio bound (2K+4)(2K+5) >= 600
        Interval rem = powi(am, 2 * K + 3) / fact / (1.0 - sqr(am) * (1.0 / 600.0));
        return s + Interval(-rem.hi, rem.hi);
    }
    const Interval e = exp_point(x), em = exp_point(-x);
    return (e - em) * 0.5;
}

Interval cosh_point(double x) {
    const Interval e = exp_point(x), em = exp_point(-x);
    return (e + em) * 0.5;
}

} // namespace

Interval exp(const Interval& x) { return {exp_point(x.lo).lo, exp_point(x.hi).hi}; }

Interval log(const Interval& x) {
    if (x.lo <= 0.0) throw std::domain_error("interval log needs positive lower bound");
    return {log_point(x.lo).lo, log_point(x.hi).hi};
}

Interval sinh(const Interval& x) { return {sinh_point(x.lo).lo, sinh_point(x.hi).hi}; }

Interval cosh(const Interval& x) {
    if (x.contains_zero())
        return {1.0, std::fmax(cosh_point(x.lo).hi, cosh_point(x.hi).hi)};
    const double a = std::fmin(std::fabs(x.lo), std::fabs(x.hi));
    const double b = std::fmax(std::fabs(x.lo), std::fabs(x.hi));
    return {cosh_point(a).lo, cosh_point(b).hi};
}

Interval from_ratio(double p, double q) { return Interval(p) / Interval(q); }

Interval enclose_decimal(const std::string& s) {
    char* end = nullptr;
    const double v = std::strtod(s.c_str(), &end);
    if (end == s.c_str() || !std::isfinite(v))
        throw std::domain_error("enclose_decimal: cannot parse '" + s + "'");
    return {std::nextafter(v, -HUGE_VAL), std::nextafter(v, HUGE_VAL)};
}

Interval parse_number(const std::string& s) {
    const auto slash = s.find('/');
    if (slash != std::string::npos) {
        const double p = std::strtod(s.substr(0, slash).c_str(), nullptr);
        const double q = std::strtod(s.substr(slash + 1).c_str(), nullptr);
        if (q == 0.0) throw std::domain_error("parse_number: zero denominator");
        return from_ratio(p, q);
    }
    return enclose_decimal(s);
}

std::string to_string(const Interval& x) {
    char buf[80];
    std::snprintf(buf, sizeof(buf), "[%.17g, %.17g]", x.lo, x.hi);
    return buf;
}

} // namespace gscap
