#include "gscap/model.hpp"

namespace gscap {

GSParams params_from_physical(const Interval& thetaF, const Interval& thetaK,
                              const Interval& deltaU, const Interval& deltaV,
                              const Grid& grid) {
    if (thetaF.lo <= 0.0 || thetaK.lo <= 0.0 || deltaU.lo <= 0.0 || deltaV.lo <= 0.0)
        throw std::invalid_argument("params_from_physical: inputs must be positive");
    GSParams p;
    const Interval s = thetaF + thetaK;
    p.lambda2 = thetaF / sqr(s);
    p.lambda1 = s * deltaV / deltaU;
    p.grid = grid;
    return p;
}

std::vector<Interval> freq_sq(const GSParams& p, int order) {
    std::vector<Interval> out(seq_len(order));
    const Interval f = sqr(pi() / p.dI());
    for (int n1 = 0; n1 <= order; ++n1)
        for (int n2 = 0; n2 <= n1; ++n2)
            out[seq_pos(n1, n2)] = f * static_cast<double>(n1 * n1 + n2 * n2);
    return out;
}

std::vector<double> freq_sq_f(const GSParams& p, int order) {
    std::vector<double> out(seq_len(order));
    const double f = M_PI * M_PI / (p.grid.d * p.grid.d);
    for (int n1 = 0; n1 <= order; ++n1)
        for (int n2 = 0; n2 <= n1; ++n2)
            out[seq_pos(n1, n2)] = f * (n1 * n1 + n2 * n2);
    return out;
}

PairD apply_L(const GSParams& p, const PairD& u) {
    const int ord = std::max(u.u1.order, u.u2.order);
    const auto xi2 = freq_sq_f(p, ord);
    const double l21 = sym_l21_f(p);
    PairD r{SeqD(ord), SeqD(ord)};
    for (int i = 0; i < seq_len(ord); ++i) {
        const double a = (i < seq_len(u.u1.order)) ? u.u1.c[i] : 0.0;
        const double b = (i < seq_len(u.u2.order)) ? u.u2.c[i] : 0.0;
        r.u1.c[i] = sym_l11_f(p, xi2[i]) * a;
        r.u2.c[i] = l21 * a + sym_l22_f(p, xi2[i]) * b;
    }
    return r;
}

PairI apply_L(const GSParams& p, const PairI& u) {
    const int ord = std::max(u.u1.order, u.u2.order);
    const auto xi2 = freq_sq(p, ord);
    const Interval l21 = sym_l21(p);
    PairI r{SeqI(ord), SeqI(ord)};
    for (int i = 0; i < seq_len(ord); ++i) {
        const Interval a = (i < seq_len(u.u1.order)) ? u.u1.c[i] : Interval(0.0);
        const Interval b = (i < seq_len(u.u2.order)) ? u.u2.c[i] : Interval(0.0);
        r.u1.c[i] = sym_l11(p, xi2[i]) * a;
        r.u2.c[i] = l21 * a + sym_l22(p, xi2[i]) * b;
    }
    return r;
}

PairD apply_L_inv(const GSParams& p, const PairD& u) {
    const int ord = std::max(u.u1.order, u.u2.order);
    const auto xi2 = freq_sq_f(p, ord);
    const double l21 = sym_l21_f(p);
    PairD r{SeqD(ord), SeqD(ord)};
    for (int i = 0; i < seq_len(ord); ++i) {
        const double a = (i < seq_len(u.u1.order)) ? u.u1.c[i] : 0.0;
        const double b = (i < seq_len(u.u2.order)) ? u.u2.c[i] : 0.0;
        const double y1 = a / sym_l11_f(p, xi2[i]);
        r.u1.c[i] = y1;
        r.u2.c[i] = (b - l21 * y1) / sym_l22_f(p, xi2[i]);
    }
    return r;
}

PairI apply_L_inv(const GSParams& p, const PairI& u) {
    const int ord = std::max(u.u1.order, u.u2.order);
    const auto xi2 = freq_sq(p, ord);
    const Interval l21 = sym_l21(p);
    PairI r{SeqI(ord), SeqI(ord)};
    for (int i = 0; i < seq_len(ord); ++i) {
        const Interval a = (i < seq_len(u.u1.order)) ? u.u1.c[i] : Interval(0.0);
        const Interval b = (i < seq_len(u.u2.order)) ? u.u2.c[i] : Interval(0.0);
        const Interval y1 = a / sym_l11(p, xi2[i]);
        r.u1.c[i] = y1;
        r.u2.c[i] = (b - l21 * y1) / sym_l22(p, xi2[i]);
    }
    return r;
}

namespace {

template <typename T, typename Lam>
Pair<T> g_full_impl(const Pair<T>& u, const Lam& lambda1, int out_order) {
    if (out_order < 0) out_order = 3 * u.u1.order;
    // the outer convolution pulls squares up to out_order + order(w)
    const int sq_order =
        std::min(2 * u.u1.order, out_order + std::max(u.u1.order, u.u2.order));
    const Seq<T> sq = conv(u.u1, u.u1, sq_order);
    Seq<T> w(std::max(u.u1.order, u.u2.order));
    for (int i = 0; i < seq_len(w.order); ++i) {
        T acc{};
        if (i < seq_len(u.u2.order)) acc = acc + u.u2.c[i];
        if (i < seq_len(u.u1.order)) acc = acc - lambda1 * u.u1.c[i];
        w.c[i] = acc;
    }
    w.c[0] = w.c[0] + T(1.0);
    Pair<T> r;
    r.u1 = conv(w, sq, out_order);
    r.u2 = Seq<T>(out_order);
    return r;
}

template <typename T>
Pair<T> f_full_impl(const GSParams& p, const Pair<T>& u, int out_order) {
    Pair<T> g = G_full(p, u, out_order);
    const Pair<T> lu = apply_L(p, u);
    for (int i = 0; i < seq_len(std::min(lu.u1.order, g.u1.order)); ++i) {
        g.u1.c[i] = g.u1.c[i] + lu.u1.c[i];
        g.u2.c[i] = g.u2.c[i] + lu.u2.c[i];
    }
    return g;
}

template <typename T, typename Lam>
DGData<T> dg_impl(const Pair<T>& u0, const Lam& lambda1, int N) {
    DGData<T> d;
    const int p = u0.u1.order;
    d.v2 = conv(u0.u1, u0.u1);
    const Seq<T> u21 = conv(u0.u2, u0.u1, 2 * p);
    d.v1 = Seq<T>(2 * p);
    for (int i = 0; i < seq_len(2 * p); ++i) {
        T acc = T(2.0) * u21.c[i] - T(3.0) * (lambda1 * d.v2.c[i]);
        if (i < seq_len(p)) acc = acc + T(2.0) * u0.u1.c[i];
        d.v1.c[i] = acc;
    }
    d.q = Seq<T>(p);
    for (int i = 0; i < seq_len(p); ++i)
        d.q.c[i] = u0.u2.c[i] - T(3.0) * (lambda1 * u0.u1.c[i]);
    d.q.c[0] = d.q.c[0] + T(1.0);
    d.v1N = project_head(d.v1, 2 * N);
    d.v2N = project_head(d.v2, 2 * N);
    return d;
}

} // namespace

PairD G_full(const GSParams& p, const PairD& u, int out_order) {
    return g_full_impl<double>(u, p.l1f(), out_order);
}

PairI G_full(const GSParams& p, const PairI& u, int out_order) {
    return g_full_impl<Interval>(u, p.lambda1, out_order);
}

PairD F_full(const GSParams& p, const PairD& u, int out_order) {
    return f_full_impl(p, u, out_order);
}

PairI F_full(const GSParams& p, const PairI& u, int out_order) {
    return f_full_impl(p, u, out_order);
}

DGDataD dg_sequences(const GSParams& p, const PairD& u0) {
    return dg_impl<double>(u0, p.l1f(), p.grid.N);
}

DGDataI dg_sequences(const GSParams& p, const PairI& u0) {
    return dg_impl<Interval>(u0, p.lambda1, p.grid.N);
}

PairD dg_action(const DGDataD& dg, const PairD& h, int out_order) {
    if (out_order < 0)
        out_order = std::max(dg.v1.order + h.u1.order, dg.v2.order + h.u2.order);
    const SeqD a = conv(dg.v1, h.u1, out_order);
    const SeqD b = conv(dg.v2, h.u2, out_order);
    PairD r{SeqD(out_order), SeqD(out_order)};
    for (int i = 0; i < seq_len(out_order); ++i) r.u1.c[i] = a.c[i] + b.c[i];
    return r;
}

} // namespace gscap
