#pragma once

#include "gscap/approxinv.hpp"

namespace gscap {

// Norm constants of the quadratic/cubic terms and the mixed product.
struct KappaSet {
    Interval kappa2{0.0}, kappa3{0.0}, kappa0{0.0};
};
KappaSet kappas(const GSParams& p);

// Exponential-decay constants of the fundamental solutions (Bessel-kernel
// envelopes) and the boundary-integral constants built from them.
struct DecayConstants {
    Interval c0_f11{0.0}, c0_f22{0.0};
    Interval c11_f11{0.0}, c12_f11{0.0}, c11_f22{0.0}, c12_f22{0.0};
    Interval cj_1{0.0}, cj_2{0.0};    // C_j  = sqrt(d^2/(16 a^2 pi^5) + a^-4 + d a^-3)
    Interval cc1_1{0.0}, cc1_2{0.0};  // C_{1,j}
    Interval cc2_1{0.0}, cc2_2{0.0};  // C_{2,j}
};
DecayConstants decay_constants(const GSParams& p);

// min{max(x1,x4)+max(x2,x3), sqrt(x1^2+x2^2+x3^2+x4^2)}; block-operator
// norm majorant.
Interval phi(const Interval& x1, const Interval& x2, const Interval& x3,
             const Interval& x4);

// Enclosures of ||1_{(d-1,d)^2} w||_2, ||1_{(d-1,d)^2} dx1 w||_2 and
// ||1_{(d-1,d)} w(d,.)||_2 for a finite coefficient sequence, via
// Fourier-squared Gram forms in double-double intervals.
struct StripNorms {
    Interval l2{0.0};
    Interval dx1_l2{0.0};
    Interval line_l2{0.0};
};
StripNorms strip_norms(const SeqI& w, const GSParams& p);
// C(w) = |O|^{-1/2} (0.5 ||dx1 w|| ||w|| + ||w(d,.)||^2)^{1/2} on the strip.
Interval strip_c_of(const StripNorms& s, const GSParams& p);

// (V, E_a * V)_2 where E_a are the coefficients of the box-restricted
// (cosh(2a x1)+cosh(2a x2))/2. Evaluated as a double-double Gram form with
// the common sinh factor pulled out, which survives the e^{2ad}-scale
// cancellation the direct convolution sum cannot. b2 = (2a)^2 supplied
// separately so rational parameters stay tight.
Interval e_weighted_ip(const SeqI& v, const Interval& a, const Interval& b2,
                       const GSParams& p);

// sup over the tail {n1 > N} of the decreasing symbol expressions, evaluated
// at the minimizing frequency (N+1)/(2d) on the axis.
Interval tail_sup_inv_l11(const GSParams& p, int N);
Interval tail_sup_inv_l22(const GSParams& p, int N);
// sqrt((sqrt(m1)/|l11| + |l21| sqrt(m2)/|l22 l11|)^2 + m2/|l22|^2) at the tail
Interval tail_z12_form(const GSParams& p, int N, const Interval& m1, const Interval& m2);
// same shape with l1 norms in place of sqrt(norms)
Interval tail_z14_form(const GSParams& p, int N, const Interval& v1_l1,
                       const Interval& v2_l1);

// Riemann-sum bound of sup_{q >= d} (1/4q^2) sum_n g(n/2q)^2 for the
// catalogued symbol families.
enum class TailFamily { InvL11, InvL22 };
Interval riemann_tail(TailFamily fam, const GSParams& p);

struct BoundReport {
    Interval y0{0.0};
    Interval z11{0.0}, z12{0.0}, z13{0.0}, z14{0.0}, z1_finite{0.0};
    Interval zu11{0.0}, zu12{0.0}, zu13{0.0}, zu1{0.0};
    Interval zu21{0.0}, zu22{0.0}, zu23{0.0}, zu2{0.0};
    Interval zu{0.0};
    Interval v_tail_term{0.0};  // phi(...) * sqrt(sum of tail l1 norms^2)
    Interval z1_total{0.0};
    Interval z21{0.0}, z22{0.0}, z23{0.0};
    Interval z2_intercept{0.0}, z2_slope{0.0};  // Z2(r) = intercept + slope r
    Interval z2_at_r{0.0};
    double r_probe = 0.0;
    // reduced-mode extra: (||B U0conv||^2 + ||U0||_1^2)^{1/2}, reused by the
    // periodic-branch variant with the kappa-hat constants
    Interval u0_op_term{0.0};

    Interval z2_at(double r) const { return z2_intercept + z2_slope * Interval(r); }
};

// Full-system bounds at the candidate u0 (coefficients are exact doubles).
BoundReport compute_bounds(const GSParams& p, const PairD& u0,
                           const ApproxInverse& inv, double r_probe,
                           int threads = 1, int squarings = 2);

// Individual stages, exposed for tests and cross-checks.
Interval bound_Y0(const GSParams& p, const PairI& u0, const ApproxInverse& inv);
void bound_Z2_parts(const GSParams& p, const DGDataI& dg, const PairI& u0,
                    const ApproxInverse& inv, BoundReport& rep, int threads,
                    int squarings);
void bound_Z1_finite(const GSParams& p, const DGDataI& dg, const ApproxInverse& inv,
                     BoundReport& rep, int threads, int squarings);
void bound_Zu1(const GSParams& p, const DGDataI& dg, BoundReport& rep);
void bound_Zu2(const GSParams& p, const DGDataI& dg, BoundReport& rep);
void bound_Z1_total(const GSParams& p, const DGDataI& dg, const ApproxInverse& inv,
                    BoundReport& rep);

} // namespace gscap
