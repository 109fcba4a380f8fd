#include "gscap/proof.hpp"

#include "gscap/solver.hpp"

#include <nlohmann/json.hpp>
#include <openssl/evp.h>

#include <cmath>
#include <cstdio>
#include <fstream>

namespace gscap {

namespace {

struct Check {
    Interval quad{0.0}, contraction{0.0};
    bool ok = false;
};

Check check_radius(const Interval& y0, const Interval& z1, const Interval& slope,
                   const Interval& intercept, double r) {
    Check c;
    const Interval rI(r);
    const Interval z2r = intercept + slope * rI;
    c.quad = 0.5 * z2r * sqr(rI) - (1.0 - z1) * rI + y0;
    c.contraction = z1 + z2r * rI;
    c.ok = (c.quad.hi < 0.0) && (c.contraction.hi < 1.0);
    return c;
}

} // namespace

RadiiResult radii_find(const Interval& y0, const Interval& z1, const Interval& z2_slope,
                       const Interval& z2_intercept, double probe) {
    RadiiResult res;
    if (z1.hi >= 1.0)
        throw std::runtime_error("radii_find: Z1 >= 1, condition unsatisfiable");

    auto attempt = [&](double r) {
        if (!(r > 0.0) || !std::isfinite(r)) return false;
        const Check c = check_radius(y0, z1, z2_slope, z2_intercept, r);
        if (c.quad.hi < res.best_margin) res.best_margin = c.quad.hi;
        if (c.ok) {
            res.r0 = r;
            res.verified = true;
            res.quad = c.quad;
            res.contraction = c.contraction;
        }
        return c.ok;
    };

    if (probe > 0.0) {
        attempt(probe);
        return res;
    }

    // roots of (1/2) z2(r_est) r^2 - (1-z1) r + y0, one fixed-point pass in r
    const double one_m_z1 = 1.0 - z1.hi;
    double z2e = z2_intercept.hi;
    double rlow = y0.hi / std::fmax(one_m_z1, 1e-300);  // first-order root guess
    for (int pass = 0; pass < 2; ++pass) {
        z2e = z2_intercept.hi + z2_slope.hi * rlow;
        const double disc = one_m_z1 * one_m_z1 - 2.0 * z2e * y0.hi;
        if (disc <= 0.0) break;
        rlow = (one_m_z1 - std::sqrt(disc)) / z2e;
    }
    const double disc = one_m_z1 * one_m_z1 - 2.0 * z2e * y0.hi;
    double rhigh;
    if (disc > 0.0) {
        rhigh = std::fmin((one_m_z1 + std::sqrt(disc)) / z2e, one_m_z1 / z2e);
    } else {
        rhigh = one_m_z1 / std::fmax(z2e, 1e-300);
    }
    rlow *= 1.0 + 1e-9;  // outward pad of the low root
    const double candidates[] = {0.5 * (rlow + rhigh),
                                 std::sqrt(std::fmax(rlow, 1e-300) * rhigh),
                                 2.0 * rlow,
                                 10.0 * rlow,
                                 1.05 * rlow,
                                 0.5 * rhigh};
    for (double r : candidates)
        if (attempt(r)) return res;
    return res;
}

namespace {

std::string compiler_tag() {
    return std::string("g++ ") + __VERSION__;
}

Certificate assemble(const GSParams& p, const std::string& mode,
                     const std::string& digest, const ApproxInverse& inv,
                     const BoundReport& rep, const ProveOptions& opt) {
    Certificate c;
    c.mode = mode;
    c.lambda1 = to_string(p.lambda1);
    c.lambda2 = to_string(p.lambda2);
    c.d = p.grid.d;
    c.N = p.grid.N;
    c.N0 = p.grid.N0;
    c.candidate_digest = digest;
    c.kappa = kappas(p);
    c.decay = decay_constants(p);
    c.b11_norm = inv.b11_norm;
    c.bounds = rep;
    c.toolchain = compiler_tag();

    const RadiiResult rr = radii_find(rep.y0, rep.z1_total, rep.z2_slope,
                                      rep.z2_intercept, opt.probe);
    c.r0 = rr.verified ? rr.r0 : (opt.probe > 0 ? opt.probe : 0.0);
    c.localized_verdict = rr.verified;
    if (!rr.verified && opt.probe <= 0.0)
        c.r0 = 0.0;
    c.periodic_checked = opt.periodic;
    if (opt.periodic && rr.verified) {
        c.periodic = periodic_condition(mode == "reduced", p, rep, inv, c.r0);
        c.periodic_verdict = c.periodic.verdict;
    }
    return c;
}

void require_traced(const std::vector<const SeqD*>& comps, bool apply,
                    const char* what) {
    if (apply) return;
    for (const SeqD* u : comps) {
        const auto r = trace_apply(*u);
        double mx = 0.0;
        for (double v : r) mx = std::fmax(mx, std::fabs(v));
        if (mx > 1e-9 * std::fmax(seq_norm_l1(*u), 1e-300))
            throw std::runtime_error(std::string(what) +
                                     ": candidate is not in the trace kernel "
                                     "(boundary nonzero); rerun with trace enabled");
    }
}

} // namespace

Certificate prove_full(const GSParams& p, PairD u0, const std::string& digest,
                       const ProveOptions& opt) {
    p.check();
    if (opt.apply_trace) {
        build_u0(p, u0, opt.boundary_tol);
    } else {
        require_traced({&u0.u1, &u0.u2}, false, "prove(full)");
    }
    const ApproxInverse inv = build_BN(p, u0, opt.threads, opt.squarings);
    const BoundReport rep =
        compute_bounds(p, u0, inv, opt.probe > 0 ? opt.probe : 1e-6, opt.threads,
                       opt.squarings);
    return assemble(p, "full", digest, inv, rep, opt);
}

Certificate prove_reduced(const GSParams& p, SeqD u0, const std::string& digest,
                          const ProveOptions& opt) {
    p.check();
    if (p.grid.N0 != p.grid.N)
        throw std::invalid_argument("prove_reduced: reduced mode uses N0 = N");
    if (opt.apply_trace) {
        build_u0_reduced(p, u0, opt.boundary_tol);
    } else {
        require_traced({&u0}, false, "prove(reduced)");
    }
    const ApproxInverse inv = reduced_build_Br(p, u0, opt.threads, opt.squarings);
    const BoundReport rep = reduced_bounds(p, u0, inv, opt.probe > 0 ? opt.probe : 1e-6,
                                           opt.threads, opt.squarings);
    return assemble(p, "reduced", digest, inv, rep, opt);
}

// ---------------------------------------------------------------------------
// serialization

namespace {

using nlohmann::json;

std::string dstr(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

json jiv(const Interval& x) { return json{{"lo", dstr(x.lo)}, {"hi", dstr(x.hi)}}; }

Interval ivj(const json& j) {
    const double lo = std::strtod(j.at("lo").get<std::string>().c_str(), nullptr);
    const double hi = std::strtod(j.at("hi").get<std::string>().c_str(), nullptr);
    return Interval(lo, hi);
}

json jbounds(const BoundReport& b) {
    json j;
    j["y0"] = jiv(b.y0);
    j["z11"] = jiv(b.z11);
    j["z12"] = jiv(b.z12);
    j["z13"] = jiv(b.z13);
    j["z14"] = jiv(b.z14);
    j["z1_finite"] = jiv(b.z1_finite);
    j["zu11"] = jiv(b.zu11);
    j["zu12"] = jiv(b.zu12);
    j["zu13"] = jiv(b.zu13);
    j["zu1"] = jiv(b.zu1);
    j["zu21"] = jiv(b.zu21);
    j["zu22"] = jiv(b.zu22);
    j["zu23"] = jiv(b.zu23);
    j["zu2"] = jiv(b.zu2);
    j["zu"] = jiv(b.zu);
    j["v_tail_term"] = jiv(b.v_tail_term);
    j["z1_total"] = jiv(b.z1_total);
    j["z21"] = jiv(b.z21);
    j["z22"] = jiv(b.z22);
    j["z23"] = jiv(b.z23);
    j["z2_intercept"] = jiv(b.z2_intercept);
    j["z2_slope"] = jiv(b.z2_slope);
    j["z2_at_r"] = jiv(b.z2_at_r);
    j["r_probe"] = dstr(b.r_probe);
    j["u0_op_term"] = jiv(b.u0_op_term);
    return j;
}

BoundReport bounds_from(const json& j) {
    BoundReport b;
    b.y0 = ivj(j.at("y0"));
    b.z11 = ivj(j.at("z11"));
    b.z12 = ivj(j.at("z12"));
    b.z13 = ivj(j.at("z13"));
    b.z14 = ivj(j.at("z14"));
    b.z1_finite = ivj(j.at("z1_finite"));
    b.zu11 = ivj(j.at("zu11"));
    b.zu12 = ivj(j.at("zu12"));
    b.zu13 = ivj(j.at("zu13"));
    b.zu1 = ivj(j.at("zu1"));
    b.zu21 = ivj(j.at("zu21"));
    b.zu22 = ivj(j.at("zu22"));
    b.zu23 = ivj(j.at("zu23"));
    b.zu2 = ivj(j.at("zu2"));
    b.zu = ivj(j.at("zu"));
    b.v_tail_term = ivj(j.at("v_tail_term"));
    b.z1_total = ivj(j.at("z1_total"));
    b.z21 = ivj(j.at("z21"));
    b.z22 = ivj(j.at("z22"));
    b.z23 = ivj(j.at("z23"));
    b.z2_intercept = ivj(j.at("z2_intercept"));
    b.z2_slope = ivj(j.at("z2_slope"));
    b.z2_at_r = ivj(j.at("z2_at_r"));
    b.r_probe = std::strtod(j.at("r_probe").get<std::string>().c_str(), nullptr);
    b.u0_op_term = ivj(j.at("u0_op_term"));
    return b;
}

} // namespace

void save_certificate(const std::string& path, const Certificate& c) {
    json j;
    j["schema"] = c.schema;
    j["mode"] = c.mode;
    j["lambda1"] = c.lambda1;
    j["lambda2"] = c.lambda2;
    j["d"] = dstr(c.d);
    j["N"] = c.N;
    j["N0"] = c.N0;
    j["candidate_digest"] = c.candidate_digest;
    j["kappa2"] = jiv(c.kappa.kappa2);
    j["kappa3"] = jiv(c.kappa.kappa3);
    j["kappa0"] = jiv(c.kappa.kappa0);
    j["c0_f11"] = jiv(c.decay.c0_f11);
    j["c0_f22"] = jiv(c.decay.c0_f22);
    j["c11_f11"] = jiv(c.decay.c11_f11);
    j["c12_f11"] = jiv(c.decay.c12_f11);
    j["c11_f22"] = jiv(c.decay.c11_f22);
    j["c12_f22"] = jiv(c.decay.c12_f22);
    j["b11_norm"] = jiv(c.b11_norm);
    j["bounds"] = jbounds(c.bounds);
    j["r0"] = dstr(c.r0);
    j["localized_verdict"] = c.localized_verdict;
    j["periodic_checked"] = c.periodic_checked;
    if (c.periodic_checked) {
        j["periodic"] = {
            {"kappa2_hat", jiv(c.periodic.hats.kappa2)},
            {"kappa3_hat", jiv(c.periodic.hats.kappa3)},
            {"kappa0_hat", jiv(c.periodic.hats.kappa0)},
            {"z1_hat", jiv(c.periodic.z1_hat)},
            {"z2_hat_at_r", jiv(c.periodic.z2_hat_at_r)},
            {"quad_at_r", jiv(c.periodic.quad_at_r)},
            {"contraction_at_r", jiv(c.periodic.contraction_at_r)},
            {"r", dstr(c.periodic.r)},
        };
        j["periodic_verdict"] = c.periodic_verdict;
    }
    j["toolchain"] = c.toolchain;
    std::ofstream out(path);
    if (!out) throw std::runtime_error("save_certificate: cannot open " + path);
    out << j.dump(1) << "\n";
}

Certificate load_certificate(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("load_certificate: cannot open " + path);
    json j;
    try {
        in >> j;
    } catch (const json::exception& e) {
        throw std::runtime_error(std::string("load_certificate: malformed JSON: ") + e.what());
    }
    Certificate c;
    c.schema = j.at("schema").get<std::string>();
    if (c.schema != "gscap-certificate/1")
        throw std::runtime_error("load_certificate: unknown schema " + c.schema);
    c.mode = j.at("mode").get<std::string>();
    c.lambda1 = j.at("lambda1").get<std::string>();
    c.lambda2 = j.at("lambda2").get<std::string>();
    c.d = std::strtod(j.at("d").get<std::string>().c_str(), nullptr);
    c.N = j.at("N").get<int>();
    c.N0 = j.at("N0").get<int>();
    c.candidate_digest = j.at("candidate_digest").get<std::string>();
    c.kappa.kappa2 = ivj(j.at("kappa2"));
    c.kappa.kappa3 = ivj(j.at("kappa3"));
    c.kappa.kappa0 = ivj(j.at("kappa0"));
    c.decay.c0_f11 = ivj(j.at("c0_f11"));
    c.decay.c0_f22 = ivj(j.at("c0_f22"));
    c.decay.c11_f11 = ivj(j.at("c11_f11"));
    c.decay.c12_f11 = ivj(j.at("c12_f11"));
    c.decay.c11_f22 = ivj(j.at("c11_f22"));
    c.decay.c12_f22 = ivj(j.at("c12_f22"));
    c.b11_norm = ivj(j.at("b11_norm"));
    c.bounds = bounds_from(j.at("bounds"));
    c.r0 = std::strtod(j.at("r0").get<std::string>().c_str(), nullptr);
    c.localized_verdict = j.at("localized_verdict").get<bool>();
    c.periodic_checked = j.at("periodic_checked").get<bool>();
    if (c.periodic_checked && j.contains("periodic")) {
        const auto& pj = j.at("periodic");
        c.periodic.hats.kappa2 = ivj(pj.at("kappa2_hat"));
        c.periodic.hats.kappa3 = ivj(pj.at("kappa3_hat"));
        c.periodic.hats.kappa0 = ivj(pj.at("kappa0_hat"));
        c.periodic.z1_hat = ivj(pj.at("z1_hat"));
        c.periodic.z2_hat_at_r = ivj(pj.at("z2_hat_at_r"));
        c.periodic.quad_at_r = ivj(pj.at("quad_at_r"));
        c.periodic.contraction_at_r = ivj(pj.at("contraction_at_r"));
        c.periodic.r = std::strtod(pj.at("r").get<std::string>().c_str(), nullptr);
        c.periodic_verdict = j.at("periodic_verdict").get<bool>();
    }
    c.toolchain = j.value("toolchain", "");

    // re-validate the verdicts from the stored bounds
    if (c.localized_verdict) {
        const Check chk = check_radius(c.bounds.y0, c.bounds.z1_total, c.bounds.z2_slope,
                                       c.bounds.z2_intercept, c.r0);
        if (!chk.ok)
            throw std::runtime_error(
                "load_certificate: stored localized verdict does not re-verify");
    }
    if (c.periodic_checked && c.periodic_verdict) {
        const Interval rI(c.periodic.r);
        const Interval q =
            0.5 * c.periodic.z2_hat_at_r * sqr(rI) - (1.0 - c.periodic.z1_hat) * rI +
            c.bounds.y0;
        const Interval ctr = c.periodic.z1_hat + c.periodic.z2_hat_at_r * rI;
        if (!(q.hi < 0.0 && ctr.hi < 1.0))
            throw std::runtime_error(
                "load_certificate: stored periodic verdict does not re-verify");
    }
    return c;
}

std::string sha256_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("sha256_file: cannot open " + path);
    EVP_MD_CTX* ctx = EVP_MD_CTX_new();
    EVP_DigestInit_ex(ctx, EVP_sha256(), nullptr);
    char buf[65536];
    while (in.good()) {
        in.read(buf, sizeof(buf));
        EVP_DigestUpdate(ctx, buf, static_cast<size_t>(in.gcount()));
    }
    unsigned char md[EVP_MAX_MD_SIZE];
    unsigned int len = 0;
    EVP_DigestFinal_ex(ctx, md, &len);
    EVP_MD_CTX_free(ctx);
    std::string hex;
    for (unsigned int i = 0; i < len; ++i) {
        char b[3];
        std::snprintf(b, sizeof(b), "%02x", md[i]);
        hex += b;
    }
    return hex;
}

int certificate_exit_code(const Certificate& c) {
    if (!c.localized_verdict) return 20;
    if (c.periodic_checked && c.periodic_verdict) return 0;
    return 10;
}

} // namespace gscap
