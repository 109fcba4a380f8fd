#include "doctest.h"

#include "gscap/proof.hpp"
#include "gscap/solver.hpp"

#include <cstdio>
#include <fstream>
#include <random>
#include <sstream>

using namespace gscap;

namespace {

Certificate reduced_fixture(double probe) {
    GSParams p = make_reduced_params(parse_number("1/9"), Grid{4.0, 20, 20});
    SeqD u = seed_1d_radial(p, SeedForm::LinearArg);
    NewtonConfig nc;
    nc.tol = 1e-13;
    newton_solve_reduced(p, u, nc);
    build_u0_reduced(p, u);
    ProveOptions opt;
    opt.probe = probe;
    opt.threads = 2;
    return prove_reduced(p, u, "fixture-digest", opt);
}

} // namespace

TEST_CASE("radii_find on the hand-computed quadratic") {
    // p(r) = r^2 - 0.5 r + 0.01: roots 0.02087 and 0.47913
    const RadiiResult rr = radii_find(Interval(0.01), Interval(0.5), Interval(0.0),
                                      Interval(2.0), 0.03);
    CHECK(rr.verified);
    CHECK(rr.quad.hi < 0.0);
    CHECK(rr.contraction.hi < 1.0);
    CHECK(rr.contraction.contains(0.5 + 2.0 * 0.03));

    // automatic search lands between the roots
    const RadiiResult as = radii_find(Interval(0.01), Interval(0.5), Interval(0.0),
                                      Interval(2.0));
    CHECK(as.verified);
    CHECK(as.r0 > 0.0208);
    CHECK(as.r0 < 0.48);
}

TEST_CASE("radii_find trivial and impossible cases") {
    const RadiiResult tiny =
        radii_find(Interval(0.0), Interval(0.5), Interval(0.0), Interval(2.0));
    CHECK(tiny.verified);
    CHECK(tiny.r0 > 0.0);
    CHECK_THROWS_AS(radii_find(Interval(0.0), Interval(1.01), Interval(0.0),
                               Interval(2.0)),
                    std::runtime_error);
    // probe outside the verifiable window fails without throwing
    const RadiiResult bad = radii_find(Interval(0.01), Interval(0.5), Interval(0.0),
                                       Interval(2.0), 0.001);
    CHECK_FALSE(bad.verified);
}

TEST_CASE("certificate round trip preserves endpoints and verdicts") {
    const Certificate c = reduced_fixture(5e-4);
    CHECK(c.localized_verdict);
    const std::string path = "/tmp/gscap_test_cert.json";
    save_certificate(path, c);
    const Certificate r = load_certificate(path);
    CHECK(r.localized_verdict == c.localized_verdict);
    CHECK(r.periodic_verdict == c.periodic_verdict);
    CHECK(r.bounds.y0.lo == c.bounds.y0.lo);
    CHECK(r.bounds.y0.hi == c.bounds.y0.hi);
    CHECK(r.bounds.z1_total.hi == c.bounds.z1_total.hi);
    CHECK(r.r0 == c.r0);
    CHECK(r.candidate_digest == c.candidate_digest);
    // the verified radius satisfies both inequalities strictly
    const Interval rI(r.r0);
    const Interval z2r = r.bounds.z2_intercept + r.bounds.z2_slope * rI;
    CHECK((0.5 * z2r * sqr(rI) - (1.0 - r.bounds.z1_total) * rI + r.bounds.y0).hi < 0.0);
    CHECK((r.bounds.z1_total + z2r * rI).hi < 1.0);
    // uniqueness-radius consistency: r0 < (1 - Z1)/Z2(r0)
    CHECK(Interval(r.r0).hi < ((1.0 - r.bounds.z1_total) / z2r).lo);
}

TEST_CASE("tampered certificates are rejected on load") {
    const Certificate c = reduced_fixture(5e-4);
    const std::string path = "/tmp/gscap_test_cert2.json";
    save_certificate(path, c);
    std::ifstream in(path);
    std::stringstream ss;
    ss << in.rdbuf();
    std::string text = ss.str();
    // blow up the stored Y0 so the stored verdict cannot re-verify
    char needle[64], repl[64];
    std::snprintf(needle, sizeof(needle), "%.17g", c.bounds.y0.hi);
    std::snprintf(repl, sizeof(repl), "%.17g", 0.9);
    const auto pos = text.find(needle);
    REQUIRE(pos != std::string::npos);
    text.replace(pos, std::string(needle).size(), repl);
    std::ofstream out(path);
    out << text;
    out.close();
    CHECK_THROWS(load_certificate(path));
}

TEST_CASE("prove rejects candidates outside the trace kernel") {
    GSParams p = make_reduced_params(parse_number("1/9"), Grid{4.0, 10, 10});
    // the coarse fixture carries a larger boundary wiggle; allow it
    SeqD u = seed_1d_radial(p, SeedForm::LinearArg);
    NewtonConfig nc;
    nc.tol = 1e-11;
    newton_solve_reduced(p, u, nc);  // converged but NOT traced
    ProveOptions opt;
    opt.probe = 5e-4;
    CHECK_THROWS_WITH_AS(prove_reduced(p, u, "x", opt),
                         doctest::Contains("trace"), std::runtime_error);
    // with consent the trace is applied and the pipeline completes
    opt.apply_trace = true;
    opt.boundary_tol = 1e-2;
    const Certificate c = prove_reduced(p, u, "x", opt);
    CHECK(c.bounds.y0.hi > 0.0);
}

TEST_CASE("exit codes reflect the verdicts") {
    Certificate c;
    c.localized_verdict = false;
    CHECK(certificate_exit_code(c) == 20);
    c.localized_verdict = true;
    c.periodic_checked = false;
    CHECK(certificate_exit_code(c) == 10);
    c.periodic_checked = true;
    c.periodic_verdict = true;
    CHECK(certificate_exit_code(c) == 0);
}

TEST_CASE("sha256 digest of a known file") {
    const std::string path = "/tmp/gscap_digest_test.txt";
    std::ofstream(path) << "abc";
    CHECK(sha256_file(path) ==
          "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
}

TEST_CASE("thread count does not change the certificate") {
    GSParams p = make_reduced_params(parse_number("1/9"), Grid{4.0, 12, 12});
    SeqD u = seed_1d_radial(p, SeedForm::LinearArg);
    NewtonConfig nc;
    nc.tol = 1e-12;
    newton_solve_reduced(p, u, nc);
    build_u0_reduced(p, u, 1e-2);
    ProveOptions o1, o4;
    o1.probe = o4.probe = 5e-4;
    o1.threads = 1;
    o4.threads = 4;
    const Certificate c1 = prove_reduced(p, u, "t", o1);
    const Certificate c4 = prove_reduced(p, u, "t", o4);
    CHECK(c1.bounds.y0.hi == c4.bounds.y0.hi);
    CHECK(c1.bounds.z1_total.hi == c4.bounds.z1_total.hi);
    CHECK(c1.bounds.z2_at_r.hi == c4.bounds.z2_at_r.hi);
    CHECK(c1.b11_norm.hi == c4.b11_norm.hi);
}
