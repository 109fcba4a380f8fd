#pragma once

#include "gscap/bounds.hpp"

namespace gscap {

// Scalar problem at lambda1*lambda2 = 1: the second component vanishes and
// the system collapses to l1 Lap u + u^2 - l1 u^3 - u = 0.
GSParams make_reduced_params(const Interval& lambda1, const Grid& grid);

// G_r(U) = U*U - lambda1 U*U*U; F_r = L11 U + G_r(U). out_order < 0 keeps
// the full support 3*order.
SeqD reduced_G(const GSParams& p, const SeqD& u, int out_order = -1);
SeqI reduced_G(const GSParams& p, const SeqI& u, int out_order = -1);
SeqD reduced_F(const GSParams& p, const SeqD& u, int out_order = -1);
SeqI reduced_F(const GSParams& p, const SeqI& u, int out_order = -1);

// V0 = 2u0 - 3 lambda1 u0*u0 (order 2*order(u0)).
SeqI reduced_v0(const GSParams& p, const SeqI& u0);

// All reduced bounds; N0 = N in this mode.
BoundReport reduced_bounds(const GSParams& p, const SeqD& u0, const ApproxInverse& inv,
                           double s_probe, int threads = 1, int squarings = 2);

} // namespace gscap
