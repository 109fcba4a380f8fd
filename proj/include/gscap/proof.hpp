#pragma once

#include "gscap/periodic.hpp"
#include "gscap/reduced.hpp"

#include <optional>
#include <string>

namespace gscap {

struct RadiiResult {
    double r0 = 0.0;
    bool verified = false;
    Interval quad{0.0};              // (1/2) Z2(r0) r0^2 - (1 - Z1) r0 + Y0
    Interval contraction{0.0};       // Z1 + Z2(r0) r0
    double best_margin = 1e300;      // signed margin (quad upper end) at best probe
};

// Finds (or verifies at a supplied probe) a radius satisfying both
// inequalities with strict interval separation. Z2(r) = intercept + slope*r.
RadiiResult radii_find(const Interval& y0, const Interval& z1,
                       const Interval& z2_slope, const Interval& z2_intercept,
                       double probe = 0.0);

struct Certificate {
    std::string schema = "gscap-certificate/1";
    std::string mode;                 // "full" or "reduced"
    std::string lambda1, lambda2;     // as given (decimal or p/q)
    double d = 0.0;
    int N = 0;
    int N0 = 0;
    std::string candidate_digest;     // sha256 of the coefficient file bytes
    KappaSet kappa;
    DecayConstants decay;
    Interval b11_norm{0.0};
    BoundReport bounds;
    bool periodic_checked = false;
    PeriodicReport periodic;
    double r0 = 0.0;
    bool localized_verdict = false;
    bool periodic_verdict = false;
    std::string toolchain;
};

struct ProveOptions {
    double probe = 0.0;       // 0: search automatically
    bool periodic = true;     // also check the branch-of-periodic-solutions
    bool apply_trace = false; // project the candidate instead of rejecting it
    double boundary_tol = 1e-4;  // only used when apply_trace is set
    int threads = 1;
    int squarings = 2;
};

Certificate prove_full(const GSParams& p, PairD u0, const std::string& digest,
                       const ProveOptions& opt);
Certificate prove_reduced(const GSParams& p, SeqD u0, const std::string& digest,
                          const ProveOptions& opt);

void save_certificate(const std::string& path, const Certificate& c);
// Re-validates the stored verdicts against the stored bounds; throws on
// malformed documents or on verdicts that do not reproduce.
Certificate load_certificate(const std::string& path);

std::string sha256_file(const std::string& path);

// 0: localized and periodic verified; 10: localized only; 20: failure.
int certificate_exit_code(const Certificate& c);

} // namespace gscap
