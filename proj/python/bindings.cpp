// pybind11 surface: the main operations of the certified Gray-Scott
// pipeline, for scripting and smoke tests.
#include "gscap/proof.hpp"
#include "gscap/solver.hpp"

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

namespace py = pybind11;
using namespace gscap;

namespace {

py::dict interval_dict(const Interval& x) {
    py::dict d;
    d["lo"] = x.lo;
    d["hi"] = x.hi;
    return d;
}

py::dict cert_dict(const Certificate& c) {
    py::dict d;
    d["mode"] = c.mode;
    d["r0"] = c.r0;
    d["localized_verdict"] = c.localized_verdict;
    d["periodic_checked"] = c.periodic_checked;
    d["periodic_verdict"] = c.periodic_verdict;
    d["b11_norm"] = interval_dict(c.b11_norm);
    d["y0"] = interval_dict(c.bounds.y0);
    d["z1"] = interval_dict(c.bounds.z1_finite);
    d["z1_total"] = interval_dict(c.bounds.z1_total);
    d["zu1"] = interval_dict(c.bounds.zu1);
    d["zu2"] = interval_dict(c.bounds.zu2);
    d["z2_at_r0"] = interval_dict(c.bounds.z2_at(c.r0));
    d["kappa2"] = interval_dict(c.kappa.kappa2);
    d["kappa3"] = interval_dict(c.kappa.kappa3);
    d["kappa0"] = interval_dict(c.kappa.kappa0);
    if (c.periodic_checked) {
        d["z1_hat"] = interval_dict(c.periodic.z1_hat);
        d["z2_hat_at_r0"] = interval_dict(c.periodic.z2_hat_at_r);
        d["kappa2_hat"] = interval_dict(c.periodic.hats.kappa2);
    }
    return d;
}

GSParams params_of(const std::string& lambda1, const std::string& lambda2, double d,
                   int N, int N0) {
    GSParams p;
    p.lambda1 = parse_number(lambda1);
    p.lambda2 = lambda2.empty() ? 1.0 / p.lambda1 : parse_number(lambda2);
    p.grid = Grid{d, N0 > 0 ? N0 : N, N};
    p.check();
    return p;
}

} // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Certified localized patterns in the 2D Gray-Scott system";

    m.def("orbit_size", [](int n1, int n2) { return orbit_size(n1, n2); });
    m.def("orbit", [](int n1, int n2) {
        py::list out;
        for (const auto& g : orbit(n1, n2)) out.append(py::make_tuple(g[0], g[1]));
        return out;
    });

    m.def("interval_add", [](double alo, double ahi, double blo, double bhi) {
        const Interval r = Interval(alo, ahi) + Interval(blo, bhi);
        return py::make_tuple(r.lo, r.hi);
    });
    m.def("interval_mul", [](double alo, double ahi, double blo, double bhi) {
        const Interval r = Interval(alo, ahi) * Interval(blo, bhi);
        return py::make_tuple(r.lo, r.hi);
    });
    m.def("interval_cosh", [](double x) {
        const Interval r = cosh(Interval(x));
        return py::make_tuple(r.lo, r.hi);
    });

    m.def(
        "conv",
        [](int order_a, std::vector<double> a, int order_b, std::vector<double> b) {
            SeqD A(order_a), B(order_b);
            if (a.size() != A.c.size() || b.size() != B.c.size())
                throw std::invalid_argument("conv: coefficient count mismatch");
            A.c = std::move(a);
            B.c = std::move(b);
            const SeqD r = conv(A, B);
            return py::make_tuple(r.order, r.c);
        },
        "reduced D4 convolution of two coefficient vectors (n1-major order)");

    m.def("seq_norm_l2", [](int order, std::vector<double> a) {
        SeqD A(order);
        A.c = std::move(a);
        return seq_norm_l2(A);
    });

    m.def(
        "eval_point",
        [](int order, std::vector<double> a, double d, double x, double y) {
            SeqD A(order);
            A.c = std::move(a);
            return eval_point(A, d, x, y);
        },
        "gamma^dagger evaluation at a point");

    m.def(
        "approx_reduced",
        [](const std::string& lambda1, double d, int N, double tol, const std::string& out) {
            GSParams p = params_of(lambda1, "", d, N, N);
            SeqD u = seed_1d_radial(p, SeedForm::LinearArg);
            NewtonConfig nc;
            nc.tol = tol;
            const NewtonResult res = newton_solve_reduced(p, u, nc);
            build_u0_reduced(p, u);
            CoeffFile f;
            f.lambda1 = p.l1f();
            f.lambda2 = p.l2f();
            f.lambda1_str = lambda1;
            f.d = d;
            f.order = N;
            f.component_count = 1;
            f.comps = {u};
            save_coeffs(out, f);
            py::dict r;
            r["iters"] = res.iters;
            r["residual"] = res.residual;
            return r;
        },
        py::arg("lambda1"), py::arg("d"), py::arg("N"), py::arg("tol") = 1e-13,
        py::arg("out") = "candidate.json");

    m.def(
        "prove",
        [](const std::string& candidate, const std::string& mode, int N, double r0,
           bool periodic, int threads, const std::string& cert_out) {
            const CoeffFile f = load_coeffs(candidate);
            GSParams p;
            p.lambda1 = parse_number(f.lambda1_str);
            p.lambda2 =
                f.lambda2_str.empty() ? 1.0 / p.lambda1 : parse_number(f.lambda2_str);
            p.grid = Grid{f.d, f.order, N};
            ProveOptions opt;
            opt.probe = r0;
            opt.periodic = periodic;
            opt.threads = threads;
            const std::string digest = sha256_file(candidate);
            Certificate c;
            if (mode == "reduced" || f.component_count == 1)
                c = prove_reduced(p, f.comps[0], digest, opt);
            else
                c = prove_full(p, PairD{f.comps[0], f.comps[1]}, digest, opt);
            if (!cert_out.empty()) save_certificate(cert_out, c);
            return cert_dict(c);
        },
        py::arg("candidate"), py::arg("mode") = "reduced", py::arg("N") = 20,
        py::arg("r0") = 0.0, py::arg("periodic") = true, py::arg("threads") = 1,
        py::arg("cert_out") = "");

    m.def("load_certificate", [](const std::string& path) {
        return cert_dict(load_certificate(path));
    });

    m.def("kappa_values", [](const std::string& lambda1, const std::string& lambda2,
                             double d) {
        GSParams p = params_of(lambda1, lambda2, d, 1, 1);
        const KappaSet k = kappas(p);
        const KappaHats h = kappa_hats(p);
        py::dict r;
        r["kappa2"] = interval_dict(k.kappa2);
        r["kappa3"] = interval_dict(k.kappa3);
        r["kappa0"] = interval_dict(k.kappa0);
        r["kappa2_hat"] = interval_dict(h.kappa2);
        r["kappa3_hat"] = interval_dict(h.kappa3);
        r["kappa0_hat"] = interval_dict(h.kappa0);
        return r;
    });
}
