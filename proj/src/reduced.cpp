#include "gscap/reduced.hpp"

namespace gscap {

GSParams make_reduced_params(const Interval& lambda1, const Grid& grid) {
    GSParams p;
    p.lambda1 = lambda1;
    p.lambda2 = 1.0 / lambda1;
    p.grid = grid;
    p.check();
    return p;
}

namespace {

template <typename T, typename Lam>
Seq<T> reduced_g_impl(const Seq<T>& u, const Lam& lambda1, int out_order) {
    if (out_order < 0) out_order = 3 * u.order;
    const int sq_order = std::min(2 * u.order, out_order + u.order);
    const Seq<T> sq = conv(u, u, sq_order);
    const Seq<T> cu = conv(sq, u, out_order);
    Seq<T> r(out_order);
    for (int i = 0; i < seq_len(out_order); ++i) {
        T acc = -(lambda1 * cu.c[i]);
        if (i < seq_len(sq.order)) acc = acc + sq.c[i];
        r.c[i] = acc;
    }
    return r;
}

template <typename T>
Seq<T> reduced_f_impl(const GSParams& p, const Seq<T>& u, int out_order) {
    Seq<T> g = reduced_G(p, u, out_order);
    if constexpr (std::is_same_v<T, double>) {
        const auto xi2 = freq_sq_f(p, u.order);
        for (int i = 0; i < seq_len(u.order) && i < seq_len(g.order); ++i)
            g.c[i] += sym_l11_f(p, xi2[i]) * u.c[i];
    } else {
        const auto xi2 = freq_sq(p, u.order);
        for (int i = 0; i < seq_len(u.order) && i < seq_len(g.order); ++i)
            g.c[i] += sym_l11(p, xi2[i]) * u.c[i];
    }
    return g;
}

} // namespace

SeqD reduced_G(const GSParams& p, const SeqD& u, int out_order) {
    return reduced_g_impl<double>(u, p.l1f(), out_order);
}

SeqI reduced_G(const GSParams& p, const SeqI& u, int out_order) {
    return reduced_g_impl<Interval>(u, p.lambda1, out_order);
}

SeqD reduced_F(const GSParams& p, const SeqD& u, int out_order) {
    return reduced_f_impl(p, u, out_order);
}

SeqI reduced_F(const GSParams& p, const SeqI& u, int out_order) {
    return reduced_f_impl(p, u, out_order);
}

SeqI reduced_v0(const GSParams& p, const SeqI& u0) {
    const SeqI sq = conv(u0, u0);
    SeqI v0(sq.order);
    for (int i = 0; i < seq_len(sq.order); ++i) {
        Interval acc = -(Interval(3.0) * p.lambda1 * sq.c[i]);
        if (i < seq_len(u0.order)) acc += Interval(2.0) * u0.c[i];
        v0.c[i] = acc;
    }
    return v0;
}

BoundReport reduced_bounds(const GSParams& p, const SeqD& u0f, const ApproxInverse& inv,
                           double s_probe, int threads, int squarings) {
    p.check();
    if (!inv.reduced)
        throw std::invalid_argument("reduced_bounds: approximate inverse is not reduced");
    const int N = p.grid.N;
    const int L = seq_len(N);
    const auto wN = alpha_weights(N);
    BoundReport rep;
    rep.r_probe = s_probe;

    const SeqI u0 = to_interval(u0f);
    const SeqI v0 = reduced_v0(p, u0);
    const Interval a1 = p.a1();
    const Interval sqrt_area = 2.0 * p.dI();

    // Y0 = sqrt|O| (||B F_r||^2 + ||(pi^{3N}-pi^N) G_r||^2)^{1/2}
    {
        const SeqI f = reduced_F(p, u0);
        std::vector<Interval> head(L);
        for (int i = 0; i < L; ++i) head[i] = f.c[i];
        const auto y = matvec(inv.b11, head);
        Interval head_sq(0.0);
        for (int i = 0; i < L; ++i) head_sq += sqr(y[i]) * wN[i];
        Interval tail_sq(0.0);
        for (int n1 = N + 1; n1 <= f.order; ++n1)
            for (int n2 = 0; n2 <= n1; ++n2)
                tail_sq += sqr(f.at(n1, n2)) * static_cast<double>(orbit_size(n1, n2));
        rep.y0 = sqrt_area * sqrt(head_sq + tail_sq);
    }

    // Z2(s) = max{1,||B||}(2 k2 + 3 l1 k2^2 s) + 6 l1 k2 (||B U0conv||^2 + ||U0||_1^2)^{1/2}
    const KappaSet ks = kappas(p);
    {
        const auto w2N = alpha_weights(2 * N);
        const IMatrix U0m = convmat(u0, N, 2 * N);
        const IMatrix Y = matmul(inv.b11, U0m, threads);
        const Interval bu = opnorm_via_gram(Y, wN, w2N, squarings, threads);
        rep.u0_op_term = sqrt(sqr(bu) + sqr(seq_norm_l1(u0)));
        rep.z2_intercept = inv.b11_norm_max1 * 2.0 * ks.kappa2 +
                           6.0 * p.lambda1 * ks.kappa2 * rep.u0_op_term;
        rep.z2_slope = inv.b11_norm_max1 * 3.0 * p.lambda1 * sqr(ks.kappa2);
        rep.z2_at_r = rep.z2_at(s_probe);
    }

    // finite Z1 parts with the single symbol l11
    const auto xi2 = freq_sq(p, N);
    std::vector<Interval> inv_l11(L);
    for (int i = 0; i < L; ++i) inv_l11[i] = 1.0 / sym_l11(p, xi2[i]);
    {
        // Z11
        const IMatrix V0m = convmat(v0, N, N);
        IMatrix M(L, L);
        for (int i = 0; i < L; ++i)
            for (int j = 0; j < L; ++j) M.at(i, j) = V0m.at(i, j) * inv_l11[j];
        M = IMatrix::identity(L) + M;
        const IMatrix R = IMatrix::identity(L) - matmul(inv.b11, M, threads);
        const IMatrix Rs = weighted_adjoint(R, wN, wN);
        rep.z11 = sqrt(opnorm_selfadj_powered(matmul(R, Rs, threads), wN, squarings, threads));
    }
    {
        // Z12 = max_tail 1/|l11| * sqrt(||B V0 pi_N V0 B*||)
        const int wide = 3 * N;
        const auto wWide = alpha_weights(wide);
        IMatrix Vm = convmat(v0, N, wide);
        for (int i = 0; i < Vm.rows; ++i)
            for (int j = 0; j < L; ++j) Vm.at(i, j) = Interval(0.0);
        const IMatrix Y = matmul(inv.b11, Vm, threads);
        const IMatrix Ys = weighted_adjoint(Y, wN, wWide);
        const Interval m = opnorm_selfadj_powered(matmul(Y, Ys, threads), wN, squarings, threads);
        rep.z12 = tail_sup_inv_l11(p, N) * sqrt(imax(m, Interval(0.0)));
    }
    {
        // Z13 via H = pi_N V0 L11^-1 pi^N
        const int wide = 3 * N;
        const auto wWide = alpha_weights(wide);
        IMatrix Vt = convmat(v0, wide, N);
        for (int i = 0; i < L; ++i)
            for (int j = 0; j < Vt.cols; ++j) Vt.at(i, j) = Interval(0.0);
        IMatrix H(Vt.rows, Vt.cols);
        for (int i = 0; i < Vt.rows; ++i)
            for (int j = 0; j < Vt.cols; ++j) H.at(i, j) = Vt.at(i, j) * inv_l11[j];
        const IMatrix Hs = weighted_adjoint(H, wWide, wN);
        rep.z13 = sqrt(opnorm_selfadj_powered(matmul(Hs, H, threads), wN, squarings, threads));
    }
    rep.z14 = tail_sup_inv_l11(p, N) * seq_norm_l1(v0);
    rep.z1_finite = phi(rep.z11, rep.z12, rep.z13, rep.z14);

    // unbounded-domain terms with V0 and E1
    const DecayConstants dc = decay_constants(p);
    {
        const Interval ip = e_weighted_ip(v0, a1, 4.0 / p.lambda1, p);
        const Interval q = sqrt(sqrt(2.0 * pi()));
        const Interval a34 = sqrt(a1 * sqrt(a1));
        rep.zu1 = sqrt(Interval(2.0)) * dc.c0_f11 * q * exp(-(a1 * p.dI())) * sqrt_area /
                  a34 * sqrt(ip);
        const Interval cv0 = strip_c_of(strip_norms(v0, p), p);
        const Interval flux =
            imin(dc.cc1_1 * sqrt(ip) + dc.cc2_1 * cv0,
                 pi() * sqr(a1) * exp(-(a1 * p.dI())) * sqrt_area * sqrt(ip));
        rep.zu2 = (4.0 * dc.cj_1 / sqrt_area) * flux;
        rep.zu = sqrt(sqr(rep.zu1) + sqr(rep.zu2));
    }
    rep.z1_total = rep.z1_finite + inv.b11_norm_max1 * rep.zu;
    return rep;
}

} // namespace gscap
