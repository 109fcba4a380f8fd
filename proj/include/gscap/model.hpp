#pragma once

#include "gscap/d4seq.hpp"
#include "gscap/interval.hpp"

namespace gscap {

// Problem configuration. lambda1/lambda2 are enclosures so rational inputs
// (e.g. 1/9) are honored exactly by the certified computations; the float
// pipeline uses the midpoints.
struct GSParams {
    Interval lambda1{1.0};
    Interval lambda2{1.0};
    Grid grid;

    double l1f() const { return lambda1.mid(); }
    double l2f() const { return lambda2.mid(); }
    Interval dI() const { return Interval(grid.d); }
    Interval a1() const { return sqrt(1.0 / lambda1); }
    Interval a2() const { return sqrt(lambda2); }

    void check() const {
        if (lambda1.lo <= 0.0 || lambda2.lo <= 0.0)
            throw std::invalid_argument("GSParams: lambda1, lambda2 must be positive");
        grid.check();
    }
};

// lambda2 = thetaF/(thetaF+thetaK)^2, lambda1 = (thetaF+thetaK) deltaV/deltaU.
GSParams params_from_physical(const Interval& thetaF, const Interval& thetaK,
                              const Interval& deltaU, const Interval& deltaV,
                              const Grid& grid);

// |2 pi n/(2d)|^2 per reduced index position, up to `order`.
std::vector<Interval> freq_sq(const GSParams& p, int order);
std::vector<double> freq_sq_f(const GSParams& p, int order);

// Symbol entries at one frequency-squared value.
inline Interval sym_l11(const GSParams& p, const Interval& xi2) { return -(p.lambda1 * xi2) - 1.0; }
inline Interval sym_l22(const GSParams& p, const Interval& xi2) { return -xi2 - p.lambda2; }
inline Interval sym_l21(const GSParams& p) { return p.lambda2 * p.lambda1 - 1.0; }
inline double sym_l11_f(const GSParams& p, double xi2) { return -p.l1f() * xi2 - 1.0; }
inline double sym_l22_f(const GSParams& p, double xi2) { return -xi2 - p.l2f(); }
inline double sym_l21_f(const GSParams& p) { return p.l2f() * p.l1f() - 1.0; }

PairD apply_L(const GSParams& p, const PairD& u);
PairI apply_L(const GSParams& p, const PairI& u);
PairD apply_L_inv(const GSParams& p, const PairD& u);
PairI apply_L_inv(const GSParams& p, const PairI& u);

// G(U) = [(U2 + delta00 - lambda1 U1) * U1 * U1, 0]; out_order < 0 keeps the
// full support 3*order(U1).
PairD G_full(const GSParams& p, const PairD& u, int out_order = -1);
PairI G_full(const GSParams& p, const PairI& u, int out_order = -1);
PairD F_full(const GSParams& p, const PairD& u, int out_order = -1);
PairI F_full(const GSParams& p, const PairI& u, int out_order = -1);

// Linearization data at U0:
//   V1 = 2 U2*U1 + 2 U1 - 3 lambda1 U1*U1,  V2 = U1*U1,
//   Q  = U2 + delta00 - 3 lambda1 U1,       ViN = head of Vi at order 2N.
template <typename T>
struct DGData {
    Seq<T> v1, v2, q, v1N, v2N;
};
using DGDataD = DGData<double>;
using DGDataI = DGData<Interval>;

DGDataD dg_sequences(const GSParams& p, const PairD& u0);
DGDataI dg_sequences(const GSParams& p, const PairI& u0);

// DG(U0) H = [V1*H1 + V2*H2, 0].
PairD dg_action(const DGDataD& dg, const PairD& h, int out_order = -1);

} // namespace gscap
