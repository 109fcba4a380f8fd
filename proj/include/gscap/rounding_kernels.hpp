#pragma once

#include "gscap/interval.hpp"

namespace gscap::kernel {

// Raw upward-mode helpers for hot loops. The caller must hold a
// rounding::UpwardScope for the whole loop; lower bounds use the negation
// trick down(x) = -up(-x).
inline double kopaque(double x) {
    volatile double v = x;
    return v;
}

inline double kadd_up(double a, double b) { return kopaque(a) + b; }
inline double kmul_up(double a, double b) { return kopaque(a) * b; }

// Accumulates acc += a*b where acc is kept as (neg_lo, hi).
struct Acc {
    double neg_lo = 0.0;  // = -lower bound
    double hi = 0.0;

    void add(const Interval& a, const Interval& b) {
        const double ll = kmul_up(-a.lo, b.lo), lh = kmul_up(-a.lo, b.hi);
        const double hl = kmul_up(-a.hi, b.lo), hh = kmul_up(-a.hi, b.hi);
        neg_lo = kadd_up(neg_lo, std::fmax(std::fmax(ll, lh), std::fmax(hl, hh)));
        const double ul = kmul_up(a.lo, b.lo), uh = kmul_up(a.lo, b.hi);
        const double vl = kmul_up(a.hi, b.lo), vh = kmul_up(a.hi, b.hi);
        hi = kadd_up(hi, std::fmax(std::fmax(ul, uh), std::fmax(vl, vh)));
    }

    void add(const Interval& x) {
        neg_lo = kadd_up(neg_lo, -x.lo);
        hi = kadd_up(hi, x.hi);
    }

    Interval get() const { return Interval(-neg_lo, hi); }
};

} // namespace gscap::kernel
