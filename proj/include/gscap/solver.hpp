#pragma once

#include "gscap/model.hpp"

namespace gscap {

enum class SeedForm { SqrtArg, LinearArg };

struct NewtonConfig {
    double tol = 1e-14;
    int max_iter = 40;
    double damping = 1.0;
};

struct NewtonResult {
    bool converged = false;
    int iters = 0;
    double residual = 0.0;
    std::vector<double> history;
};

// Radial lift of the exact 1D pulse, sampled on a 2(N0+1) grid and folded
// into D4 coefficients. Requires lambda1 < 2/9.
SeqD seed_1d_radial(const GSParams& p, SeedForm form = SeedForm::SqrtArg);

// Galerkin Newton on pi^{N0}; throws on divergence, returns the last
// residual history otherwise.
NewtonResult newton_solve(const GSParams& p, PairD& u, const NewtonConfig& cfg = {});
NewtonResult newton_solve_reduced(const GSParams& p, SeqD& u, const NewtonConfig& cfg = {});

struct ContinuationConfig {
    double lambda2_to = 0.0;
    int steps = 4;
    int max_halvings = 4;
    NewtonConfig newton;
};

struct ContinuationEntry {
    GSParams params;
    PairD u;
};

// Natural-parameter stepping in lambda2 with step halving on failure.
// Partial results are returned inside the exception message context by the
// caller keeping what was already produced.
std::vector<ContinuationEntry> continue_lambda2(const GSParams& from, const PairD& u_start,
                                                const ContinuationConfig& cfg);

struct TraceReport {
    double boundary_before = 0.0;  // max |u(d,t)| over samples, relative
    double boundary_after = 0.0;
    double f_residual_before = 0.0;
    double f_residual_after = 0.0;
};

// Projects the candidate into ker T (null boundary trace); errors out when
// the boundary values are too large for the projection to be harmless.
// The default tolerance admits the d=4 spike whose boundary sits near 2e-5.
TraceReport build_u0(const GSParams& p, PairD& u, double boundary_tol = 1e-4);
TraceReport build_u0_reduced(const GSParams& p, SeqD& u, double boundary_tol = 1e-4);

} // namespace gscap
