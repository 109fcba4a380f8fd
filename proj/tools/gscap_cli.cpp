// Command-line front end: approximate solutions, continuation, certified
// proofs and grid export for the Gray-Scott localized-pattern pipeline.
#include "gscap/proof.hpp"
#include "gscap/solver.hpp"

#include <CLI11.hpp>

#include <cstdio>

namespace {

using namespace gscap;

struct CommonOpts {
    std::string mode = "reduced";
    std::string lambda1 = "1/9";
    std::string lambda2;
    double d = 4.0;
    int N = 20;
    int N0 = -1;
    int threads = 1;
    std::string out;
};

GSParams make_params(const CommonOpts& c) {
    GSParams p;
    p.lambda1 = parse_number(c.lambda1);
    if (c.mode == "reduced" || c.lambda2.empty()) {
        p.lambda2 = 1.0 / p.lambda1;
    } else {
        p.lambda2 = parse_number(c.lambda2);
    }
    p.grid.d = c.d;
    p.grid.N = c.N;
    p.grid.N0 = (c.N0 > 0) ? c.N0 : c.N;
    if (c.mode == "reduced") p.grid.N0 = p.grid.N;
    p.check();
    return p;
}

CoeffFile to_file(const GSParams& p, const std::string& l1s, const std::string& l2s,
                  std::vector<SeqD> comps) {
    CoeffFile f;
    f.lambda1 = p.l1f();
    f.lambda2 = p.l2f();
    f.lambda1_str = l1s;
    f.lambda2_str = l2s;
    f.d = p.grid.d;
    f.order = p.grid.N0;
    f.component_count = static_cast<int>(comps.size());
    f.comps = std::move(comps);
    return f;
}

int cmd_approx(const CommonOpts& c, const std::string& seed_form, double tol,
               int max_iter, double boundary_tol, bool dry_run) {
    GSParams p = make_params(c);
    const SeedForm form =
        (seed_form == "linear") ? SeedForm::LinearArg : SeedForm::SqrtArg;
    SeqD u = seed_1d_radial(p, form);
    NewtonConfig nc;
    nc.tol = tol;
    nc.max_iter = max_iter;
    const std::string l2s = c.lambda2;
    if (dry_run) {
        if (c.mode == "reduced")
            save_coeffs(c.out, to_file(p, c.lambda1, l2s, {u}));
        else
            save_coeffs(c.out, to_file(p, c.lambda1, l2s, {u, SeqD(p.grid.N0)}));
        std::printf("wrote %s (seed only)\n", c.out.c_str());
        return 0;
    }
    if (c.mode == "reduced") {
        NewtonResult res;
        try {
            res = newton_solve_reduced(p, u, nc);
        } catch (const std::exception& e) {
            if (form == SeedForm::SqrtArg) {
                std::fprintf(stderr, "seed form 'sqrt' failed (%s); retrying 'linear'\n",
                             e.what());
                u = seed_1d_radial(p, SeedForm::LinearArg);
                res = newton_solve_reduced(p, u, nc);
            } else {
                throw;
            }
        }
        std::printf("newton: %d iterations, residual %.3e\n", res.iters, res.residual);
        const TraceReport tr = build_u0_reduced(p, u, boundary_tol);
        std::printf("boundary residual: %.3e -> %.3e\n", tr.boundary_before,
                    tr.boundary_after);
        std::printf("F residual: %.3e -> %.3e\n", tr.f_residual_before,
                    tr.f_residual_after);
        save_coeffs(c.out, to_file(p, c.lambda1, l2s, {u}));
    } else {
        PairD up{u, SeqD(p.grid.N0)};
        NewtonResult res;
        try {
            res = newton_solve(p, up, nc);
        } catch (const std::exception& e) {
            if (form == SeedForm::SqrtArg) {
                std::fprintf(stderr, "seed form 'sqrt' failed (%s); retrying 'linear'\n",
                             e.what());
                up = PairD{seed_1d_radial(p, SeedForm::LinearArg), SeqD(p.grid.N0)};
                res = newton_solve(p, up, nc);
            } else {
                throw;
            }
        }
        std::printf("newton: %d iterations, residual %.3e\n", res.iters, res.residual);
        const TraceReport tr = build_u0(p, up, boundary_tol);
        std::printf("boundary residual: %.3e -> %.3e\n", tr.boundary_before,
                    tr.boundary_after);
        std::printf("F residual: %.3e -> %.3e\n", tr.f_residual_before,
                    tr.f_residual_after);
        save_coeffs(c.out, to_file(p, c.lambda1, l2s, {up.u1, up.u2}));
    }
    std::printf("wrote %s\n", c.out.c_str());
    return 0;
}

int cmd_continue(const CommonOpts& c, const std::string& from, double lambda2_to,
                 int steps, double tol) {
    const CoeffFile f = load_coeffs(from);
    GSParams p;
    p.lambda1 = parse_number(f.lambda1_str);
    p.lambda2 = f.lambda2_str.empty() ? 1.0 / p.lambda1 : parse_number(f.lambda2_str);
    p.grid = Grid{f.d, f.order, std::min(c.N, f.order)};
    PairD u{f.comps[0], f.component_count > 1 ? f.comps[1] : SeqD(f.order)};
    ContinuationConfig cc;
    cc.lambda2_to = lambda2_to;
    cc.steps = steps;
    cc.newton.tol = tol;
    std::vector<ContinuationEntry> chain;
    bool failed = false;
    try {
        chain = continue_lambda2(p, u, cc);
    } catch (const std::exception& e) {
        std::fprintf(stderr, "continuation stopped: %s\n", e.what());
        failed = true;
    }
    int idx = 0;
    for (const auto& entry : chain) {
        char suffix[32], l2[32];
        std::snprintf(suffix, sizeof(suffix), ".%03d.json", idx++);
        std::snprintf(l2, sizeof(l2), "%.17g", entry.params.l2f());
        save_coeffs(c.out + suffix,
                    to_file(entry.params, f.lambda1_str, l2, {entry.u.u1, entry.u.u2}));
    }
    std::printf("wrote %d candidate(s) under %s.*.json\n", idx, c.out.c_str());
    return failed || chain.empty() ? 1 : 0;
}

int cmd_prove(const CommonOpts& c, const std::string& candidate, double r0,
              bool periodic, bool apply_trace, const std::string& cert_out) {
    const CoeffFile f = load_coeffs(candidate);
    GSParams p;
    p.lambda1 = parse_number(f.lambda1_str);
    p.lambda2 = f.lambda2_str.empty() ? 1.0 / p.lambda1 : parse_number(f.lambda2_str);
    p.grid = Grid{f.d, f.order, c.N};
    ProveOptions opt;
    opt.probe = r0;
    opt.periodic = periodic;
    opt.apply_trace = apply_trace;
    opt.threads = c.threads;
    const std::string digest = sha256_file(candidate);
    Certificate cert;
    if (c.mode == "reduced" || f.component_count == 1) {
        cert = prove_reduced(p, f.comps[0], digest, opt);
    } else {
        cert = prove_full(p, PairD{f.comps[0], f.comps[1]}, digest, opt);
    }
    if (!cert_out.empty()) save_certificate(cert_out, cert);

    auto row = [](const char* name, const Interval& v) {
        std::printf("  %-10s <= %.6g\n", name, v.hi);
    };
    std::printf("mode %s  lambda1=%s lambda2=%s  d=%g N=%d N0=%d\n", cert.mode.c_str(),
                cert.lambda1.c_str(), cert.lambda2.c_str(), cert.d, cert.N, cert.N0);
    row("||B11||", cert.b11_norm);
    row("Y0", cert.bounds.y0);
    row("Z1", cert.bounds.z1_finite);
    row("Zu1", cert.bounds.zu1);
    row("Zu2", cert.bounds.zu2);
    row("Z1 total", cert.bounds.z1_total);
    row("Z2(r0)", cert.bounds.z2_at(cert.r0));
    std::printf("  r0 = %.6g\n", cert.r0);
    std::printf("  localized pattern: %s\n", cert.localized_verdict ? "verified" : "FAILED");
    if (cert.periodic_checked) {
        row("Z1 hat", cert.periodic.z1_hat);
        row("Z2 hat", cert.periodic.z2_hat_at_r);
        std::printf("  periodic branch:   %s\n",
                    cert.periodic_verdict ? "verified" : "FAILED");
    }
    return certificate_exit_code(cert);
}

int cmd_export_grid(const std::string& candidate, int resolution, const std::string& out) {
    const CoeffFile f = load_coeffs(candidate);
    std::FILE* fp = std::fopen(out.c_str(), "w");
    if (!fp) throw std::runtime_error("cannot open " + out);
    std::fprintf(fp, "x,y,u1,u2\n");
    const double d = f.d;
    for (int i = 0; i <= resolution; ++i) {
        const double x = -d + 2.0 * d * i / resolution;
        for (int j = 0; j <= resolution; ++j) {
            const double y = -d + 2.0 * d * j / resolution;
            const double u1 = eval_point(f.comps[0], d, x, y);
            const double u2 =
                f.component_count > 1 ? eval_point(f.comps[1], d, x, y) : 0.0;
            std::fprintf(fp, "%.17g,%.17g,%.17g,%.17g\n", x, y, u1, u2);
        }
    }
    std::fclose(fp);
    std::printf("wrote %s\n", out.c_str());
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Certified localized patterns in the 2D Gray-Scott system"};
    app.require_subcommand(1);

    CommonOpts c;

    auto add_common = [&](CLI::App* sub, bool with_grid = true) {
        sub->add_option("--mode", c.mode, "reduced | full")
            ->check(CLI::IsMember({"reduced", "full"}));
        sub->add_option("--lambda1", c.lambda1, "lambda1 (decimal or p/q)");
        sub->add_option("--lambda2", c.lambda2,
                        "lambda2 (decimal or p/q); reduced mode implies 1/lambda1");
        if (with_grid) {
            sub->add_option("--d", c.d, "half period of the computational box");
            sub->add_option("--N", c.N, "operator truncation order");
            sub->add_option("--N0", c.N0, "coefficient order (defaults to N)");
        }
        sub->add_option("--threads", c.threads, "worker threads");
        sub->add_option("--out", c.out, "output path");
    };

    auto* approx = app.add_subcommand("approx", "seed + Newton + trace -> coefficient file");
    std::string seed_form = "sqrt";
    double tol = 1e-14, boundary_tol = 1e-4;
    int max_iter = 60;
    bool dry_run = false;
    add_common(approx);
    approx->add_option("--seed-form", seed_form, "sqrt | linear")
        ->check(CLI::IsMember({"sqrt", "linear"}));
    approx->add_option("--tol", tol, "Newton residual tolerance");
    approx->add_option("--max-iter", max_iter, "Newton iteration cap");
    approx->add_option("--boundary-tol", boundary_tol, "relative boundary residual cap");
    approx->add_flag("--dry-run", dry_run, "write the raw seed without Newton");

    auto* cont = app.add_subcommand("continue", "natural-parameter continuation in lambda2");
    std::string from;
    double lambda2_to = 10.0;
    int steps = 4;
    double ctol = 1e-13;
    add_common(cont);
    cont->add_option("--from", from, "starting coefficient file")->required();
    cont->add_option("--lambda2-to", lambda2_to, "target lambda2")->required();
    cont->add_option("--steps", steps, "number of steps");
    cont->add_option("--tol", ctol, "Newton tolerance per step");

    auto* prove = app.add_subcommand("prove", "certified existence proof from a candidate");
    std::string candidate, cert_out;
    double r0 = 0.0;
    bool periodic_on = true, apply_trace = false;
    add_common(prove);
    prove->add_option("candidate", candidate, "coefficient file")->required();
    prove->add_option("--r0", r0, "probe radius (0: search)");
    prove->add_flag("--periodic,!--no-periodic", periodic_on,
                    "check the periodic branch (default on)");
    prove->add_flag("--apply-trace", apply_trace,
                    "project the candidate into the trace kernel first");
    prove->add_option("--cert", cert_out, "certificate output path");

    auto* expg = app.add_subcommand("export-grid", "sample gamma^dagger(U) on a CSV grid");
    std::string gcandidate, gout = "grid.csv";
    int resolution = 64;
    expg->add_option("candidate", gcandidate, "coefficient file")->required();
    expg->add_option("--resolution", resolution, "cells per dimension");
    expg->add_option("--out", gout, "CSV output path");

    CLI11_PARSE(app, argc, argv);

    try {
        if (*approx) {
            if (c.out.empty()) c.out = "candidate.json";
            return cmd_approx(c, seed_form, tol, max_iter, boundary_tol, dry_run);
        }
        if (*cont) {
            if (c.out.empty()) c.out = "chain";
            return cmd_continue(c, from, lambda2_to, steps, ctol);
        }
        if (*prove) {
            return cmd_prove(c, candidate, r0, periodic_on, apply_trace, cert_out);
        }
        if (*expg) return cmd_export_grid(gcandidate, resolution, gout);
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 20;
    }
    return 0;
}
