#include "doctest.h"

#include "gscap/periodic.hpp"
#include "gscap/proof.hpp"
#include "gscap/solver.hpp"

#include <cmath>
#include <random>

using namespace gscap;

namespace {

bool within(const Interval& got, double reference, double disp_ulp) {
    return got.lo >= reference - disp_ulp && got.hi <= reference + disp_ulp;
}

SeqD random_seq(std::mt19937& rng, int order, double scale = 1.0) {
    SeqD u(order);
    std::uniform_real_distribution<double> dr(-scale, scale);
    for (auto& v : u.c) v = dr(rng);
    return u;
}

} // namespace

TEST_CASE("reduced F on trivial and constant inputs") {
    GSParams p = make_reduced_params(parse_number("1/9"), Grid{4.0, 8, 8});
    SeqD zero(4);
    const SeqD fz = reduced_F(p, zero);
    for (double v : fz.c) CHECK(v == 0.0);

    const double c = 0.4;
    SeqD cst(0);
    cst.at(0, 0) = c;
    const SeqD fc = reduced_F(p, cst);
    CHECK(fc.at(0, 0) == doctest::Approx(c * c - p.l1f() * c * c * c - c));
    for (int n1 = 1; n1 <= fc.order; ++n1)
        for (int n2 = 0; n2 <= n1; ++n2) CHECK(fc.at(n1, n2) == 0.0);
}

TEST_CASE("full G with zero second component reproduces reduced G at l1 l2 = 1") {
    GSParams p = make_reduced_params(parse_number("1/9"), Grid{4.0, 6, 6});
    std::mt19937 rng(31);
    const SeqD u = random_seq(rng, 4, 0.3);
    const SeqD gr = reduced_G(p, u);
    const PairD g2 = G_full(p, PairD{u, SeqD(4)});
    REQUIRE(gr.order == g2.u1.order);
    for (size_t i = 0; i < gr.c.size(); ++i)
        CHECK(gr.c[i] == doctest::Approx(g2.u1.c[i]).epsilon(1e-12));
}

TEST_CASE("reduced and full bound formulas agree on a shared fixture") {
    // lambda1*lambda2 = 1, U2 = 0, V2 forced to zero: the full-system parts
    // specialize to the reduced ones (float shadows, 1e-10 relative)
    GSParams p = make_reduced_params(parse_number("1/9"), Grid{4.0, 10, 10});
    SeqD u = seed_1d_radial(p, SeedForm::LinearArg);
    NewtonConfig nc;
    nc.tol = 1e-12;
    newton_solve_reduced(p, u, nc);
    build_u0_reduced(p, u, 1e-2);

    const ApproxInverse inv_r = reduced_build_Br(p, u, 1);
    const BoundReport rep_r = reduced_bounds(p, u, inv_r, 5e-4, 1, 2);

    // specialize the full system to V2 = 0 (and l21 = 0 at lambda1 lambda2
    // = 1): the matching approximate inverse has B11 = Br and B12 = 0
    const PairI ui = to_interval(PairD{u, SeqD(p.grid.N0)});
    ApproxInverse inv_f = inv_r;
    inv_f.reduced = false;
    inv_f.b12 = IMatrix(inv_f.L(), inv_f.L());
    inv_f.b12f.assign(static_cast<size_t>(inv_f.L()) * inv_f.L(), 0.0);
    DGDataI dg = dg_sequences(p, ui);
    dg.v2 = SeqI(dg.v2.order);
    dg.v2N = SeqI(dg.v2N.order);
    BoundReport rep_f;
    rep_f.y0 = bound_Y0(p, ui, inv_f);
    bound_Z1_finite(p, dg, inv_f, rep_f, 1, 2);
    bound_Zu1(p, dg, rep_f);
    bound_Zu2(p, dg, rep_f);

    CHECK(rep_f.y0.mid() == doctest::Approx(rep_r.y0.mid()).epsilon(1e-10));
    CHECK(rep_f.z11.mid() == doctest::Approx(rep_r.z11.mid()).epsilon(1e-8));
    CHECK(rep_f.z12.mid() == doctest::Approx(rep_r.z12.mid()).epsilon(1e-8));
    CHECK(rep_f.z13.mid() == doctest::Approx(rep_r.z13.mid()).epsilon(1e-8));
    CHECK(rep_f.z14.mid() == doctest::Approx(rep_r.z14.mid()).epsilon(1e-10));
    CHECK(rep_f.zu11.mid() == doctest::Approx(rep_r.zu1.mid()).epsilon(1e-9));
    CHECK(rep_f.zu21.mid() == doctest::Approx(rep_r.zu2.mid()).epsilon(1e-9));
}

TEST_CASE("Z2 is affine in the probe radius") {
    GSParams p = make_reduced_params(parse_number("1/9"), Grid{4.0, 8, 8});
    SeqD u = seed_1d_radial(p, SeedForm::LinearArg);
    NewtonConfig nc;
    nc.tol = 1e-11;
    newton_solve_reduced(p, u, nc);
    build_u0_reduced(p, u, 1e-2);
    const ApproxInverse inv = reduced_build_Br(p, u, 1);
    const BoundReport rep = reduced_bounds(p, u, inv, 1e-4, 1, 1);
    const double s = 1e-4;
    const double d1 = rep.z2_at(2 * s).mid() - rep.z2_at(s).mid();
    const double d2 = rep.z2_at(3 * s).mid() - rep.z2_at(2 * s).mid();
    CHECK(d1 == doctest::Approx(d2).epsilon(1e-9));
}

TEST_CASE("kappa hats reproduce the reference values") {
    {
        GSParams p = make_reduced_params(parse_number("1/9"), Grid{4.0, 4, 4});
        CHECK(within(kappa_hats(p).kappa2, 1.382, 1e-3));
    }
    {
        GSParams p;
        p.lambda1 = parse_number("1/9");
        p.lambda2 = Interval(10.0);
        p.grid = Grid{8.0, 4, 4};
        const KappaHats h = kappa_hats(p);
        CHECK(within(h.kappa2, 1.14419, 1e-5));
        CHECK(within(h.kappa3, 0.185143, 1e-6));
        CHECK(within(h.kappa0, 0.115123, 1e-6));
    }
    {
        GSParams p;
        p.lambda1 = Interval(0.0567);
        p.lambda2 = Interval(3.73);
        p.grid = Grid{10.0, 4, 4};
        const KappaHats h = kappa_hats(p);
        CHECK(within(h.kappa2, 1.43724, 1e-5));
        CHECK(within(h.kappa3, 0.651838, 1e-6));
        CHECK(within(h.kappa0, 0.490695, 1e-6));
    }
}

TEST_CASE("kappa hat converges to kappa as d grows") {
    GSParams p;
    p.lambda1 = parse_number("1/9");
    p.lambda2 = Interval(10.0);
    p.grid = Grid{1e6, 4, 4};
    const KappaHats h = kappa_hats(p);
    const KappaSet k = kappas(p);
    CHECK(std::fabs(h.kappa2.mid() - k.kappa2.mid()) <= 10.0 / 1e6);
    CHECK(std::fabs(h.kappa3.mid() - k.kappa3.mid()) <= 10.0 / 1e6);
    CHECK(std::fabs(h.kappa0.mid() - k.kappa0.mid()) <= 10.0 / 1e6);
}

TEST_CASE("periodic condition: hat bounds dominate and an impossible Z1 fails") {
    GSParams p = make_reduced_params(parse_number("1/9"), Grid{4.0, 12, 12});
    SeqD u = seed_1d_radial(p, SeedForm::LinearArg);
    NewtonConfig nc;
    nc.tol = 1e-12;
    newton_solve_reduced(p, u, nc);
    build_u0_reduced(p, u, 1e-2);
    const ApproxInverse inv = reduced_build_Br(p, u, 1);
    const BoundReport rep = reduced_bounds(p, u, inv, 5e-4, 1, 2);
    const PeriodicReport pr = periodic_condition(true, p, rep, inv, 5e-4);
    CHECK(pr.z1_hat.hi >= rep.z1_total.lo);

    BoundReport fake = rep;
    fake.z1_total = Interval(1.2);
    const PeriodicReport bad = periodic_condition(true, p, fake, inv, 5e-4);
    CHECK_FALSE(bad.verdict);
}
