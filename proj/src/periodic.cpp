#include "gscap/periodic.hpp"

namespace gscap {

KappaHats kappa_hats(const GSParams& p) {
    p.check();
    if (p.grid.d < 1.0) throw std::invalid_argument("kappa_hats: need d >= 1");
    KappaHats k;
    const Interval pi_ = pi();
    const Interval d = p.dI();
    const Interval t1 = 1.0 / (4.0 * pi_ * p.lambda1) + 1.0 / (4.0 * sqr(d)) +
                        (1.0 / (2.0 * d)) * (pi_ / sqrt(p.lambda1));
    k.kappa2 = sqrt(t1);
    const Interval t2 = 1.0 / (4.0 * pi_ * p.lambda2) +
                        1.0 / (4.0 * sqr(d) * sqr(p.lambda2)) +
                        (1.0 / (2.0 * d)) * (pi_ / sqrt(p.lambda2));
    k.kappa3 = sqrt(Interval(2.0)) * imin(sqr(k.kappa2) / p.lambda2, k.kappa2 * sqrt(t2));
    const Interval k01 = sqrt(sqr(p.lambda1 * k.kappa2 + sqrt(t2)) + t2);
    const Interval k02 = sqrt(Interval(2.0)) * sqrt(t2);
    k.kappa0 = imin(imax(k01, k02),
                    k.kappa2 * (1.0 / p.lambda2) * sqrt(sqr(1.0 - p.lambda2 * p.lambda1) + 1.0));
    return k;
}

PeriodicReport periodic_condition(bool reduced_mode, const GSParams& p,
                                  const BoundReport& rep, const ApproxInverse& inv,
                                  double r) {
    PeriodicReport out;
    out.hats = kappa_hats(p);
    out.r = r;
    out.z1_hat = rep.z1_total + inv.b11_norm_max1 * rep.zu;
    const Interval rI(r);
    if (reduced_mode) {
        out.z2_hat_at_r = inv.b11_norm_max1 *
                              (2.0 * out.hats.kappa2 +
                               3.0 * p.lambda1 * sqr(out.hats.kappa2) * rI) +
                          6.0 * p.lambda1 * rep.u0_op_term * out.hats.kappa2;
    } else {
        out.z2_hat_at_r = 2.0 * sqrt(phi(rep.z21, rep.z22, rep.z22, rep.z23)) *
                              sqrt(sqr(out.hats.kappa2) + 4.0 * sqr(out.hats.kappa0)) +
                          3.0 * out.hats.kappa3 * inv.b11_norm_max1 * rI;
    }
    out.quad_at_r =
        0.5 * out.z2_hat_at_r * sqr(rI) - (1.0 - out.z1_hat) * rI + rep.y0;
    out.contraction_at_r = out.z1_hat + out.z2_hat_at_r * rI;
    out.verdict = (out.quad_at_r.hi < 0.0) && (out.contraction_at_r.hi < 1.0);
    return out;
}

} // namespace gscap
