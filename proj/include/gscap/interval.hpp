#pragma once

#include <cmath>
#include <stdexcept>
#include <string>

namespace gscap {

// Closed interval [lo, hi] of doubles with outward-rounded arithmetic.
// Invariant: lo <= hi, both finite. Every operation returns an interval
// containing the exact real result for all points of the operands.
struct Interval {
    double lo = 0.0;
    double hi = 0.0;

    Interval() = default;
    explicit Interval(double v) : lo(v), hi(v) { check(); }
    Interval(double l, double h) : lo(l), hi(h) { check(); }

    void check() const {
        if (!(lo <= hi) || !std::isfinite(lo) || !std::isfinite(hi))
            throw std::domain_error("Interval: invalid endpoints");
    }

    double mid() const { return 0.5 * (lo + hi); }
    double width() const;                    // upper bound of hi - lo
    double rad() const { return 0.5 * width(); }
    double mag() const { return std::fmax(std::fabs(lo), std::fabs(hi)); }
    // mignitude: min |x| over the interval
    double mig() const { return (lo > 0.0) ? lo : (hi < 0.0 ? -hi : 0.0); }

    bool contains(double x) const { return lo <= x && x <= hi; }
    bool contains(const Interval& o) const { return lo <= o.lo && o.hi <= hi; }
    bool contains_zero() const { return lo <= 0.0 && 0.0 <= hi; }
    bool is_point() const { return lo == hi; }
};

Interval operator+(const Interval& a, const Interval& b);
Interval operator-(const Interval& a, const Interval& b);
Interval operator*(const Interval& a, const Interval& b);
Interval operator/(const Interval& a, const Interval& b);
inline Interval operator-(const Interval& a) { return Interval(-a.hi, -a.lo); }

inline Interval operator+(const Interval& a, double b) { return a + Interval(b); }
inline Interval operator+(double a, const Interval& b) { return Interval(a) + b; }
inline Interval operator-(const Interval& a, double b) { return a - Interval(b); }
inline Interval operator-(double a, const Interval& b) { return Interval(a) - b; }
Interval operator*(const Interval& a, double b);
inline Interval operator*(double a, const Interval& b) { return b * a; }
inline Interval operator/(const Interval& a, double b) { return a / Interval(b); }
inline Interval operator/(double a, const Interval& b) { return Interval(a) / b; }

inline Interval& operator+=(Interval& a, const Interval& b) { return a = a + b; }
inline Interval& operator-=(Interval& a, const Interval& b) { return a = a - b; }
inline Interval& operator*=(Interval& a, const Interval& b) { return a = a * b; }

Interval sqr(const Interval& x);             // tight x^2 (handles 0 in x)
Interval sqrt(const Interval& x);            // requires x.lo >= 0
Interval exp(const Interval& x);
Interval log(const Interval& x);             // requires x.lo > 0
Interval sinh(const Interval& x);
Interval cosh(const Interval& x);
Interval abs(const Interval& x);
Interval powi(const Interval& x, int n);     // n >= 0
Interval pi();                               // width 1 ulp
Interval ln2();

inline Interval hull(const Interval& a, const Interval& b) {
    return Interval(std::fmin(a.lo, b.lo), std::fmax(a.hi, b.hi));
}
// Enclosure of max/min over the operand intervals.
inline Interval imax(const Interval& a, const Interval& b) {
    return Interval(std::fmax(a.lo, b.lo), std::fmax(a.hi, b.hi));
}
inline Interval imin(const Interval& a, const Interval& b) {
    return Interval(std::fmin(a.lo, b.lo), std::fmin(a.hi, b.hi));
}
bool intersect(const Interval& a, const Interval& b, Interval& out);

// Enclosure of the rational p/q.
Interval from_ratio(double p, double q);
// Enclosure of a decimal literal (1 ulp pad around strtod's result).
Interval enclose_decimal(const std::string& s);
// Parses "p/q", decimal, or hex-float forms into an enclosure.
Interval parse_number(const std::string& s);

std::string to_string(const Interval& x);

namespace rounding {
// Scoped switch to round-upward; nesting is cheap. All interval kernels
// compute both endpoints in upward mode via the negation trick.
class UpwardScope {
  public:
    UpwardScope();
    ~UpwardScope();
    UpwardScope(const UpwardScope&) = delete;
    UpwardScope& operator=(const UpwardScope&) = delete;

  private:
    int old_;
    bool switched_;
};
} // namespace rounding

} // namespace gscap
