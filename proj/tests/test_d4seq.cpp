#include "doctest.h"

#include "gscap/d4seq.hpp"

#include <cmath>
#include <random>

using namespace gscap;

namespace {

SeqD random_seq(std::mt19937& rng, int order, bool integer = false) {
    SeqD u(order);
    std::uniform_int_distribution<int> di(-3, 3);
    std::uniform_real_distribution<double> dr(-1.0, 1.0);
    for (auto& v : u.c) v = integer ? static_cast<double>(di(rng)) : dr(rng);
    return u;
}

// brute-force full-grid convolution oracle
FullGrid full_conv(const FullGrid& a, const FullGrid& b) {
    FullGrid c(a.order + b.order);
    for (int m1 = -c.order; m1 <= c.order; ++m1)
        for (int m2 = -c.order; m2 <= c.order; ++m2) {
            double s = 0.0;
            for (int k1 = -a.order; k1 <= a.order; ++k1)
                for (int k2 = -a.order; k2 <= a.order; ++k2) {
                    const int j1 = m1 - k1, j2 = m2 - k2;
                    if (std::abs(j1) > b.order || std::abs(j2) > b.order) continue;
                    s += a.at(k1, k2) * b.at(j1, j2);
                }
            c.at(m1, m2) = s;
        }
    return c;
}

} // namespace

TEST_CASE("orbit sizes per the four cases") {
    CHECK(orbit_size(0, 0) == 1);
    CHECK(orbit_size(3, 0) == 4);
    CHECK(orbit_size(2, 2) == 4);
    CHECK(orbit_size(2, 1) == 8);
    CHECK_THROWS_AS(orbit_size(1, 2), std::invalid_argument);
}

TEST_CASE("orbit members are distinct and closed") {
    CHECK(orbit(0, 0).size() == 1);
    const auto ax = orbit(1, 0);
    CHECK(ax.size() == 4);
    for (const auto& m : {std::array<int, 2>{1, 0}, {-1, 0}, {0, 1}, {0, -1}})
        CHECK(std::find(ax.begin(), ax.end(), m) != ax.end());
    const auto gen = orbit(2, 1);
    CHECK(gen.size() == 8);
    for (const auto& m : gen) {
        const auto r = reduce_index(m[0], m[1]);
        CHECK(r[0] == 2);
        CHECK(r[1] == 1);
    }
}

TEST_CASE("seq_idx inverts seq_pos") {
    for (int n1 = 0; n1 <= 12; ++n1)
        for (int n2 = 0; n2 <= n1; ++n2) {
            const auto [a, b] = seq_idx(seq_pos(n1, n2));
            CHECK(a == n1);
            CHECK(b == n2);
        }
}

TEST_CASE("projections: head + tail reconstruct") {
    std::mt19937 rng(1);
    const SeqD u = random_seq(rng, 7);
    const SeqD h = project_head(u, 4), t = project_tail(u, 4);
    for (size_t i = 0; i < u.c.size(); ++i) CHECK(h.c[i] + t.c[i] == u.c[i]);

    SeqD delta(6);
    delta.at(0, 0) = 1.0;
    CHECK(project_head(delta, 5).at(0, 0) == 1.0);
    SeqD d6(6);
    d6.at(6, 0) = 1.0;
    CHECK(project_head(d6, 5).at(6, 0) == 0.0);
}

TEST_CASE("convolution identity and the axis example") {
    std::mt19937 rng(2);
    const SeqD v = random_seq(rng, 5);
    SeqD delta(0);
    delta.at(0, 0) = 1.0;
    const SeqD r = conv(delta, v);
    for (int n1 = 0; n1 <= 5; ++n1)
        for (int n2 = 0; n2 <= n1; ++n2)
            CHECK(r.at(n1, n2) == doctest::Approx(v.at(n1, n2)).epsilon(1e-14));

    // u_(0,0)=1, u_(1,0)=1: (U*U)_(0,0) = 1 + 4 = 5
    SeqD u(1);
    u.at(0, 0) = 1.0;
    u.at(1, 0) = 1.0;
    const SeqD uu = conv(u, u);
    CHECK(uu.at(0, 0) == doctest::Approx(5.0));
}

TEST_CASE("convolution equals the unfolded full-grid oracle") {
    std::mt19937 rng(3);
    for (int trial = 0; trial < 200; ++trial) {
        const int pa = 1 + trial % 6, pb = 1 + (trial / 2) % 6;
        const SeqD a = random_seq(rng, pa, true), b = random_seq(rng, pb, true);
        const SeqD c = conv(a, b);
        const FullGrid oracle = full_conv(unfold(a), unfold(b));
        for (int n1 = 0; n1 <= c.order; ++n1)
            for (int n2 = 0; n2 <= n1; ++n2)
                CHECK(c.at(n1, n2) == oracle.at(n1, n2));  // integer data: exact
    }
}

TEST_CASE("interval convolution contains the float one") {
    std::mt19937 rng(4);
    const SeqD a = random_seq(rng, 4), b = random_seq(rng, 5);
    const SeqI ci = conv(to_interval(a), to_interval(b));
    const FullGrid oracle = full_conv(unfold(a), unfold(b));
    for (int n1 = 0; n1 <= ci.order; ++n1)
        for (int n2 = 0; n2 <= n1; ++n2) {
            const Interval v = ci.at(n1, n2);
            const double ref = oracle.at(n1, n2);
            CHECK(v.lo <= ref + 1e-12);
            CHECK(v.hi >= ref - 1e-12);
        }
}

TEST_CASE("weighted Parseval: l2 norm equals unfolded sum of squares") {
    std::mt19937 rng(5);
    for (int trial = 0; trial < 30; ++trial) {
        const SeqD u = random_seq(rng, 6);
        const FullGrid g = unfold(u);
        double s = 0.0;
        for (double v : g.v) s += v * v;
        CHECK(seq_norm_l2(u) == doctest::Approx(std::sqrt(s)).epsilon(1e-12));
    }
}

TEST_CASE("Young's inequality on random pairs") {
    std::mt19937 rng(6);
    for (int trial = 0; trial < 100; ++trial) {
        const SeqD a = random_seq(rng, 5), b = random_seq(rng, 4);
        CHECK(seq_norm_l2(conv(a, b)) <=
              seq_norm_l2(a) * seq_norm_l1(b) + 1e-12);
    }
}

TEST_CASE("norm examples with alpha weights") {
    SeqD d10(1);
    d10.at(1, 0) = 1.0;
    CHECK(seq_norm_l2(d10) == doctest::Approx(2.0));
    SeqD d00(0);
    d00.at(0, 0) = 1.0;
    CHECK(seq_norm_l1(d00) == doctest::Approx(1.0));
    CHECK(inner2(d00, d00) == doctest::Approx(1.0));
    CHECK(inner2(d10, d10) == doctest::Approx(4.0));
}

TEST_CASE("inner2 is bilinear") {
    std::mt19937 rng(7);
    const SeqD a = random_seq(rng, 4), b = random_seq(rng, 4), c = random_seq(rng, 4);
    SeqD apb(4);
    for (size_t i = 0; i < apb.c.size(); ++i) apb.c[i] = a.c[i] + 2.5 * b.c[i];
    CHECK(inner2(apb, c) ==
          doctest::Approx(inner2(a, c) + 2.5 * inner2(b, c)).epsilon(1e-12));
    CHECK(inner2(a, a) == doctest::Approx(std::pow(seq_norm_l2(a), 2)).epsilon(1e-12));
}

TEST_CASE("eval_point basics and D4 invariance") {
    SeqD d00(0);
    d00.at(0, 0) = 1.0;
    CHECK(eval_point(d00, 2.0, 0.3, -0.7) == doctest::Approx(1.0));
    SeqD d10(1);
    d10.at(1, 0) = 1.0;
    CHECK(eval_point(d10, 2.0, 0.0, 0.0) == doctest::Approx(4.0));
    CHECK(eval_point(d10, 2.0, 5.0, 0.0) == 0.0);  // outside the domain

    std::mt19937 rng(8);
    const SeqD u = random_seq(rng, 5);
    std::uniform_real_distribution<double> un(-1.9, 1.9);
    for (int i = 0; i < 40; ++i) {
        const double x = un(rng), y = un(rng);
        const double ref = eval_point(u, 2.0, x, y);
        for (const double v : {eval_point(u, 2.0, -x, y), eval_point(u, 2.0, x, -y),
                               eval_point(u, 2.0, y, x)})
            CHECK(v == doctest::Approx(ref).epsilon(1e-10));
    }
}

TEST_CASE("fold/unfold round trips and asymmetry detection") {
    std::mt19937 rng(9);
    const SeqD u = random_seq(rng, 5);
    const SeqD back = fold_full(unfold(u), 1e-12);
    for (size_t i = 0; i < u.c.size(); ++i) CHECK(back.c[i] == doctest::Approx(u.c[i]));

    FullGrid g = unfold(u);
    g.at(1, 0) += 1.0;  // break the swap symmetry
    CHECK_THROWS_AS(fold_full(g, 1e-12), std::domain_error);
}

TEST_CASE("cosh box coefficients: closed form and limits") {
    const Interval a(0.75), d(4.0);
    const SeqI e = cosh_box_coeffs(a, d, 12);
    // E_(0,0) = sinh(2ad)/(2ad)
    const Interval ref = sinh(2.0 * a * d) / (2.0 * a * d);
    CHECK(e.at(0, 0).lo <= ref.hi);
    CHECK(e.at(0, 0).hi >= ref.lo);
    // off-axis entries vanish
    CHECK(e.at(5, 3).lo == 0.0);
    CHECK(e.at(5, 3).hi == 0.0);
    // a -> 0 limit: E_(0,0) -> 1
    const SeqI e0 = cosh_box_coeffs(Interval(1e-8), d, 2);
    CHECK(Interval(0.999999, 1.000001).contains(e0.at(0, 0)));
}

TEST_CASE("cosh box Parseval check against quadrature") {
    // (E, delta00)_2 = mean of the function over the box
    const double a = 0.5, d = 3.0;
    const SeqI e = cosh_box_coeffs(Interval(a), Interval(d), 8);
    // Simpson quadrature of (cosh(2a x)+cosh(2a y))/2 over the box / area:
    // separable, mean = sinh(2ad)/(2ad)
    const int n = 4000;
    double acc = 0.0;
    for (int i = 0; i <= n; ++i) {
        const double x = -d + 2.0 * d * i / n;
        const double w = (i == 0 || i == n) ? 1.0 : (i % 2 ? 4.0 : 2.0);
        acc += w * std::cosh(2.0 * a * x);
    }
    acc *= (2.0 * d / n) / 3.0 / (2.0 * d);
    CHECK(e.at(0, 0).mid() == doctest::Approx(acc).epsilon(1e-8));
}

TEST_CASE("trace matrix: alpha-tilde weights and delta rows") {
    const auto T = trace_matrix_scalar(3);
    const int L = seq_len(3);
    // row 0, column (0,0): weight 1
    CHECK(T[0 * L + seq_pos(0, 0)] == 1.0);
    // alpha~(1,0) = 2 at row 0: entry (1,0) contributes 2*(-1)^1
    CHECK(T[0 * L + seq_pos(1, 0)] == -2.0);
    // alpha~(1,1) = 4 at row 1
    CHECK(T[1 * L + seq_pos(1, 1)] == -4.0);
    // delta at (0,0): T(delta) has single entry 1 in row 0
    SeqD delta(3);
    delta.at(0, 0) = 1.0;
    const auto r = trace_apply(delta);
    CHECK(r[0] == 1.0);
    CHECK(r[1] == 0.0);
    CHECK(r[2] == 0.0);
}

TEST_CASE("trace rows vanish iff the boundary function vanishes") {
    // a sequence in ker T evaluates to ~0 on the edge x1 = d
    std::mt19937 rng(10);
    SeqD u = random_seq(rng, 6);
    std::vector<double> d11(seq_len(6), 1.0);
    trace_project_scalar(u, d11);
    const auto res = trace_apply(u);
    for (double v : res) CHECK(std::fabs(v) < 1e-13);
    const double d = 2.5;
    for (int i = 0; i < 32; ++i) {
        const double t = -d + 2.0 * d * (i + 0.5) / 32;
        double s = 0.0;
        for (int n1 = 0; n1 <= u.order; ++n1)
            for (int n2 = 0; n2 <= n1; ++n2) {
                double e = 0.0;
                for (const auto& g : orbit(n1, n2))
                    e += std::cos(M_PI * (g[0] * d + g[1] * t) / d);
                s += u.at(n1, n2) * e;
            }
        CHECK(std::fabs(s) < 1e-9 * std::max(1.0, seq_norm_l1(u)));
    }
}

TEST_CASE("trace projection is idempotent and fixes kernel points") {
    std::mt19937 rng(11);
    SeqD u = random_seq(rng, 5);
    std::vector<double> d11(seq_len(5));
    for (size_t i = 0; i < d11.size(); ++i) d11[i] = 1.0 / (1.0 + 0.3 * i);
    trace_project_scalar(u, d11);
    SeqD v = u;
    trace_project_scalar(v, d11);
    for (size_t i = 0; i < u.c.size(); ++i)
        CHECK(v.c[i] == doctest::Approx(u.c[i]).epsilon(1e-10));
}

TEST_CASE("coefficient file round trip") {
    std::mt19937 rng(12);
    CoeffFile f;
    f.lambda1 = 1.0 / 9.0;
    f.lambda1_str = "1/9";
    f.lambda2 = 9.0;
    f.lambda2_str = "9";
    f.d = 4.0;
    f.order = 5;
    f.component_count = 2;
    f.comps.push_back(random_seq(rng, 5));
    f.comps.push_back(random_seq(rng, 5));
    const std::string path = "/tmp/gscap_test_coeffs.json";
    save_coeffs(path, f);
    const CoeffFile g = load_coeffs(path);
    CHECK(g.order == 5);
    CHECK(g.component_count == 2);
    for (int c = 0; c < 2; ++c)
        for (size_t i = 0; i < f.comps[c].c.size(); ++i)
            CHECK(g.comps[c].c[i] == f.comps[c].c[i]);  // bit-exact via %.17g
}

TEST_CASE("interval fold hulls orbit members") {
    FullGridI g(1);
    for (auto& v : g.v) v = Interval(0.0);
    // a symmetric value known to lie in [0.9, 1.1] on the (1,0) orbit
    for (const auto& m : orbit(1, 0)) g.at(m[0], m[1]) = Interval(0.9, 1.1);
    g.at(0, 0) = Interval(2.0);
    const SeqI u = fold_full(g);
    CHECK(u.at(0, 0).contains(2.0));
    CHECK(u.at(1, 0).contains(1.0));
    CHECK(u.at(1, 0).lo >= 0.9 - 1e-15);
    CHECK(u.at(1, 0).hi <= 1.1 + 1e-15);
}
