#pragma once

#include "gscap/bounds.hpp"

namespace gscap {

// Constants of the periodic-branch criterion: the kappa values recomputed
// uniformly over all periods 2q, q in [d, inf).
struct KappaHats {
    Interval kappa2{0.0}, kappa3{0.0}, kappa0{0.0};
};
KappaHats kappa_hats(const GSParams& p);

struct PeriodicReport {
    KappaHats hats;
    Interval z1_hat{0.0};
    Interval z2_hat_at_r{0.0};
    Interval quad_at_r{0.0};      // (1/2) Z2h r^2 - (1-Z1h) r + Y0
    Interval contraction_at_r{0.0};  // Z1h + Z2h r
    double r = 0.0;
    bool verdict = false;
};

// Evaluates the branch-of-periodic-solutions condition at radius r from the
// already-computed localized-pattern bounds.
PeriodicReport periodic_condition(bool reduced_mode, const GSParams& p,
                                  const BoundReport& rep, const ApproxInverse& inv,
                                  double r);

} // namespace gscap
