#include "gscap/d4seq.hpp"

#include "gscap/rounding_kernels.hpp"

#include <Eigen/Dense>
#include <fftw3.h>
#include <nlohmann/json.hpp>

#include "gscap/fftw_lock.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>

namespace gscap {

std::pair<int, int> seq_idx(int pos) {
    const int n1 = static_cast<int>((std::sqrt(8.0 * pos + 1.0) - 1.0) / 2.0);
    int a = n1;
    while (seq_pos(a + 1, 0) <= pos) ++a;
    while (seq_pos(a, 0) > pos) --a;
    return {a, pos - seq_pos(a, 0)};
}

int orbit_size(int n1, int n2) {
    if (n1 < 0 || n2 < 0 || n2 > n1)
        throw std::invalid_argument("orbit_size: index outside reduced set");
    if (n1 == 0 && n2 == 0) return 1;
    if (n1 == n2 || n2 == 0) return 4;
    return 8;
}

std::vector<std::array<int, 2>> orbit(int n1, int n2) {
    if (n1 < 0 || n2 < 0 || n2 > n1)
        throw std::invalid_argument("orbit: index outside reduced set");
    std::vector<std::array<int, 2>> out;
    const int s1[2] = {1, -1};
    for (int swap = 0; swap < 2; ++swap)
        for (int e1 : s1)
            for (int e2 : s1) {
                const int a = swap ? n2 : n1, b = swap ? n1 : n2;
                const std::array<int, 2> m = {e1 * a, e2 * b};
                if (std::find(out.begin(), out.end(), m) == out.end()) out.push_back(m);
            }
    return out;
}

std::vector<double> alpha_weights(int order) {
    std::vector<double> w(seq_len(order));
    for (int n1 = 0; n1 <= order; ++n1)
        for (int n2 = 0; n2 <= n1; ++n2)
            w[seq_pos(n1, n2)] = static_cast<double>(orbit_size(n1, n2));
    return w;
}

std::vector<double> pair_alpha_weights(int order) {
    auto w = alpha_weights(order);
    std::vector<double> w2 = w;
    w2.insert(w2.end(), w.begin(), w.end());
    return w2;
}

SeqI to_interval(const SeqD& u) {
    SeqI r(u.order);
    for (size_t i = 0; i < u.c.size(); ++i) r.c[i] = Interval(u.c[i]);
    return r;
}

SeqD midpoints(const SeqI& u) {
    SeqD r(u.order);
    for (size_t i = 0; i < u.c.size(); ++i) r.c[i] = u.c[i].mid();
    return r;
}

PairI to_interval(const PairD& u) { return {to_interval(u.u1), to_interval(u.u2)}; }

namespace {

// shared loop skeleton: accumulate a_k * b_full(n - g k) over a's support
template <typename T, typename AddFn>
void conv_loop(const Seq<T>& a, int out_order, AddFn&& add) {
    for (int k1 = 0; k1 <= a.order; ++k1)
        for (int k2 = 0; k2 <= k1; ++k2) {
            const T& av = a.at(k1, k2);
            if constexpr (std::is_same_v<T, double>) {
                if (av == 0.0) continue;
            } else {
                if (av.lo == 0.0 && av.hi == 0.0) continue;
            }
            for (const auto& g : orbit(k1, k2))
                for (int n1 = 0; n1 <= out_order; ++n1)
                    for (int n2 = 0; n2 <= n1; ++n2) add(n1, n2, av, g);
        }
}

} // namespace

SeqD conv_direct(const SeqD& a, const SeqD& b, int out_order) {
    SeqD r(out_order);
    conv_loop(a, out_order, [&](int n1, int n2, double av, const std::array<int, 2>& g) {
        r.at(n1, n2) += av * b.full(n1 - g[0], n2 - g[1]);
    });
    return r;
}

namespace {

// cyclic FFT convolution of the unfolded grids, exact support extraction
SeqD conv_fft(const SeqD& a, const SeqD& b, int out_order) {
    const int full = a.order + b.order;
    const int M = 2 * full + 2;
    std::vector<double> ga(static_cast<size_t>(M) * M, 0.0), gb(ga), gc(ga);
    auto put = [&](std::vector<double>& g, const SeqD& s) {
        for (int m1 = -s.order; m1 <= s.order; ++m1)
            for (int m2 = -s.order; m2 <= s.order; ++m2) {
                const double v = s.full(m1, m2);
                if (v != 0.0)
                    g[static_cast<size_t>((m1 + M) % M) * M + ((m2 + M) % M)] = v;
            }
    };
    put(ga, a);
    put(gb, b);
    const int nc = M / 2 + 1;
    std::vector<fftw_complex> fa(static_cast<size_t>(M) * nc), fb(fa.size());
    fftw_plan pf, pb2, pinv;
    {
        std::lock_guard<std::mutex> lock(fftw_lock());
        pf = fftw_plan_dft_r2c_2d(M, M, ga.data(), fa.data(), FFTW_ESTIMATE);
        pb2 = fftw_plan_dft_r2c_2d(M, M, gb.data(), fb.data(), FFTW_ESTIMATE);
        pinv = fftw_plan_dft_c2r_2d(M, M, fa.data(), gc.data(), FFTW_ESTIMATE);
    }
    fftw_execute(pf);
    fftw_execute(pb2);
    for (size_t i = 0; i < fa.size(); ++i) {
        const double re = fa[i][0] * fb[i][0] - fa[i][1] * fb[i][1];
        const double im = fa[i][0] * fb[i][1] + fa[i][1] * fb[i][0];
        fa[i][0] = re;
        fa[i][1] = im;
    }
    fftw_execute(pinv);
    {
        std::lock_guard<std::mutex> lock(fftw_lock());
        fftw_destroy_plan(pf);
        fftw_destroy_plan(pb2);
        fftw_destroy_plan(pinv);
    }
    const double scale = 1.0 / (static_cast<double>(M) * M);
    SeqD r(out_order);
    for (int n1 = 0; n1 <= out_order; ++n1)
        for (int n2 = 0; n2 <= n1; ++n2)
            r.at(n1, n2) = gc[static_cast<size_t>((n1 + M) % M) * M + ((n2 + M) % M)] * scale;
    return r;
}

} // namespace

SeqD conv(const SeqD& a, const SeqD& b, int out_order) {
    if (out_order < 0) out_order = a.order + b.order;
    const SeqD& small = (a.order <= b.order) ? a : b;
    const SeqD& big = (a.order <= b.order) ? b : a;
    const double direct_cost =
        8.0 * seq_len(out_order) * static_cast<double>(seq_len(small.order));
    if (direct_cost > 2.5e9) return conv_fft(a, b, out_order);
    return conv_direct(small, big, out_order);
}

SeqI conv(const SeqI& a, const SeqI& b, int out_order) {
    if (out_order < 0) out_order = a.order + b.order;
    const SeqI& s = (a.order <= b.order) ? a : b;
    const SeqI& big = (a.order <= b.order) ? b : a;
    SeqI r(out_order);
    // negated-lo accumulators, single upward pass
    std::vector<double> neg_lo(r.c.size(), 0.0), hi(r.c.size(), 0.0);
    rounding::UpwardScope up;
    for (int k1 = 0; k1 <= s.order; ++k1)
        for (int k2 = 0; k2 <= k1; ++k2) {
            const Interval& av = s.at(k1, k2);
            if (av.lo == 0.0 && av.hi == 0.0) continue;
            for (const auto& g : orbit(k1, k2)) {
                int pos = 0;
                for (int n1 = 0; n1 <= out_order; ++n1)
                    for (int n2 = 0; n2 <= n1; ++n2, ++pos) {
                        const auto rr = reduce_index(n1 - g[0], n2 - g[1]);
                        if (rr[0] > big.order) continue;
                        const Interval& bv = big.c[seq_pos(rr[0], rr[1])];
                        if (bv.lo == 0.0 && bv.hi == 0.0) continue;
                        const double ll = kernel::kmul_up(-av.lo, bv.lo),
                                     lh = kernel::kmul_up(-av.lo, bv.hi),
                                     hl = kernel::kmul_up(-av.hi, bv.lo),
                                     hh = kernel::kmul_up(-av.hi, bv.hi);
                        neg_lo[pos] = kernel::kadd_up(
                            neg_lo[pos], std::fmax(std::fmax(ll, lh), std::fmax(hl, hh)));
                        const double ul = kernel::kmul_up(av.lo, bv.lo),
                                     uh = kernel::kmul_up(av.lo, bv.hi),
                                     vl = kernel::kmul_up(av.hi, bv.lo),
                                     vh = kernel::kmul_up(av.hi, bv.hi);
                        hi[pos] = kernel::kadd_up(
                            hi[pos], std::fmax(std::fmax(ul, uh), std::fmax(vl, vh)));
                    }
            }
        }
    for (size_t i = 0; i < r.c.size(); ++i) r.c[i] = Interval(-neg_lo[i], hi[i]);
    return r;
}

double seq_norm_l1(const SeqD& u) {
    double s = 0.0;
    for (int n1 = 0; n1 <= u.order; ++n1)
        for (int n2 = 0; n2 <= n1; ++n2)
            s += orbit_size(n1, n2) * std::fabs(u.at(n1, n2));
    return s;
}

double seq_norm_l2(const SeqD& u) {
    double s = 0.0;
    for (int n1 = 0; n1 <= u.order; ++n1)
        for (int n2 = 0; n2 <= n1; ++n2) {
            const double v = u.at(n1, n2);
            s += orbit_size(n1, n2) * v * v;
        }
    return std::sqrt(s);
}

Interval seq_norm_l1(const SeqI& u) {
    Interval s(0.0);
    for (int n1 = 0; n1 <= u.order; ++n1)
        for (int n2 = 0; n2 <= n1; ++n2)
            s += abs(u.at(n1, n2)) * static_cast<double>(orbit_size(n1, n2));
    return s;
}

Interval seq_norm_l2(const SeqI& u) {
    Interval s(0.0);
    for (int n1 = 0; n1 <= u.order; ++n1)
        for (int n2 = 0; n2 <= n1; ++n2)
            s += sqr(u.at(n1, n2)) * static_cast<double>(orbit_size(n1, n2));
    return sqrt(s);
}

double inner2(const SeqD& u, const SeqD& v) {
    double s = 0.0;
    const int m = std::min(u.order, v.order);
    for (int n1 = 0; n1 <= m; ++n1)
        for (int n2 = 0; n2 <= n1; ++n2)
            s += orbit_size(n1, n2) * u.at(n1, n2) * v.at(n1, n2);
    return s;
}

Interval inner2(const SeqI& u, const SeqI& v) {
    Interval s(0.0);
    const int m = std::min(u.order, v.order);
    for (int n1 = 0; n1 <= m; ++n1)
        for (int n2 = 0; n2 <= n1; ++n2)
            s += u.at(n1, n2) * v.at(n1, n2) * static_cast<double>(orbit_size(n1, n2));
    return s;
}

double pair_norm_l2(const PairD& u) {
    const double a = seq_norm_l2(u.u1), b = seq_norm_l2(u.u2);
    return std::sqrt(a * a + b * b);
}

Interval pair_norm_l2(const PairI& u) {
    return sqrt(sqr(seq_norm_l2(u.u1)) + sqr(seq_norm_l2(u.u2)));
}

double eval_point(const SeqD& u, double d, double x, double y) {
    if (std::fabs(x) >= d || std::fabs(y) >= d) return 0.0;
    const double f = M_PI / d;
    double s = 0.0;
    for (int n1 = 0; n1 <= u.order; ++n1)
        for (int n2 = 0; n2 <= n1; ++n2) {
            const double v = u.at(n1, n2);
            if (v == 0.0) continue;
            double e = 0.0;
            for (const auto& g : orbit(n1, n2)) e += std::cos(f * (g[0] * x + g[1] * y));
            s += v * e;
        }
    return s;
}

FullGrid unfold(const SeqD& u) {
    FullGrid g(u.order);
    for (int m1 = -u.order; m1 <= u.order; ++m1)
        for (int m2 = -u.order; m2 <= u.order; ++m2) g.at(m1, m2) = u.full(m1, m2);
    return g;
}

SeqD fold_full(const FullGrid& g, double tol) {
    double mx = 0.0;
    for (double v : g.v) mx = std::fmax(mx, std::fabs(v));
    SeqD r(g.order);
    for (int n1 = 0; n1 <= g.order; ++n1)
        for (int n2 = 0; n2 <= n1; ++n2) {
            const auto orb = orbit(n1, n2);
            double sum = 0.0, lo = HUGE_VAL, hi = -HUGE_VAL;
            for (const auto& m : orb) {
                const double v = g.at(m[0], m[1]);
                sum += v;
                lo = std::fmin(lo, v);
                hi = std::fmax(hi, v);
            }
            if (hi - lo > tol * std::fmax(mx, 1e-300))
                throw std::domain_error("fold_full: input not D4-symmetric within tolerance");
            r.at(n1, n2) = sum / static_cast<double>(orb.size());
        }
    return r;
}

SeqI fold_full(const FullGridI& g) {
    SeqI r(g.order);
    for (int n1 = 0; n1 <= g.order; ++n1)
        for (int n2 = 0; n2 <= n1; ++n2) {
            const auto orb = orbit(n1, n2);
            Interval h = g.at(orb[0][0], orb[0][1]);
            for (size_t k = 1; k < orb.size(); ++k) h = hull(h, g.at(orb[k][0], orb[k][1]));
            r.at(n1, n2) = h;
        }
    return r;
}

SeqI cosh_box_coeffs(const Interval& a, const Interval& d, int order) {
    if (a.lo <= 0.0) throw std::invalid_argument("cosh_box_coeffs: need a > 0");
    SeqI r(order);
    const Interval b = 2.0 * a;
    const Interval sb = sinh(b * d);
    const Interval pid = pi() / d;
    // ghat_n = b (-1)^n sinh(bd) / (d (b^2 + (pi n / d)^2))
    for (int n = 0; n <= order; ++n) {
        const Interval c = pid * static_cast<double>(n);
        Interval ghat = b * sb / (d * (sqr(b) + sqr(c)));
        if (n % 2 == 1) ghat = -ghat;
        r.at(n, 0) = (n == 0) ? ghat : ghat * 0.5;
    }
    return r;
}

namespace {

inline double alpha_tilde(int n1, int n2) {
    if (n1 == 0 && n2 == 0) return 1.0;
    if (n1 == n2) return 4.0;
    if (n2 == 0) return 2.0;
    return 4.0;
}

inline double sign_pm(int k) { return (k % 2 == 0) ? 1.0 : -1.0; }

} // namespace

std::vector<double> trace_matrix_scalar(int N0) {
    const int L = seq_len(N0);
    std::vector<double> T(static_cast<size_t>(N0 + 1) * L, 0.0);
    for (int k = 0; k <= N0; ++k) {
        // indices (a,k), a >= k: weight alpha~_{a,k} (-1)^a
        for (int a = k; a <= N0; ++a)
            T[static_cast<size_t>(k) * L + seq_pos(a, k)] += alpha_tilde(a, k) * sign_pm(a);
        // indices (k,b), b < k: weight alpha~_{k,b} (-1)^b
        for (int b = 0; b < k; ++b)
            T[static_cast<size_t>(k) * L + seq_pos(k, b)] += alpha_tilde(k, b) * sign_pm(b);
    }
    return T;
}

std::vector<double> trace_apply(const SeqD& u) {
    const auto T = trace_matrix_scalar(u.order);
    const int L = seq_len(u.order);
    std::vector<double> r(u.order + 1, 0.0);
    for (int k = 0; k <= u.order; ++k) {
        double s = 0.0;
        for (int j = 0; j < L; ++j) s += T[static_cast<size_t>(k) * L + j] * u.c[j];
        r[k] = s;
    }
    return r;
}

namespace {

// Compensated (Neumaier) row residual; error ~ n * eps^2 * sum|terms|.
double row_residual(const SeqD& u, int k) {
    double s = 0.0, comp = 0.0;
    auto acc = [&](double term) {
        const double t = s + term;
        if (std::fabs(s) >= std::fabs(term))
            comp += (s - t) + term;
        else
            comp += (term - t) + s;
        s = t;
    };
    for (int a = k; a <= u.order; ++a) acc(alpha_tilde(a, k) * sign_pm(a) * u.at(a, k));
    for (int b = 0; b < k; ++b) acc(alpha_tilde(k, b) * sign_pm(b) * u.at(k, b));
    return s + comp;
}

// One projection onto ker T along diag(D) directions for a single component
// is done by the caller; this pass drives each row residual to the round-off
// floor through the row's private diagonal entry (k,k).
void refine_rows(SeqD& u) {
    for (int pass = 0; pass < 3; ++pass)
        for (int k = 0; k <= u.order; ++k) {
            const double r = row_residual(u, k);
            if (r == 0.0) continue;
            u.at(k, k) -= r / (alpha_tilde(k, k) * sign_pm(k));
        }
}

} // namespace

void trace_project_scalar(SeqD& u, const std::vector<double>& d11) {
    const int N0 = u.order, L = seq_len(N0);
    const auto T = trace_matrix_scalar(N0);
    Eigen::MatrixXd Tm(N0 + 1, L);
    for (int i = 0; i <= N0; ++i)
        for (int j = 0; j < L; ++j) Tm(i, j) = T[static_cast<size_t>(i) * L + j];
    Eigen::VectorXd uv(L);
    for (int j = 0; j < L; ++j) uv(j) = u.c[j];
    const auto D = Eigen::Map<const Eigen::VectorXd>(d11.data(), L);
    const Eigen::MatrixXd M = Tm * D.asDiagonal() * Tm.transpose();
    Eigen::PartialPivLU<Eigen::MatrixXd> lu(M);
    const Eigen::VectorXd rhs = Tm * uv;
    const Eigen::VectorXd y = lu.solve(rhs);
    if ((M * y - rhs).norm() > 1e-6 * (rhs.norm() + 1.0))
        throw std::runtime_error("trace_project: T D T^T numerically singular");
    const Eigen::VectorXd corr = D.asDiagonal() * (Tm.transpose() * y);
    for (int j = 0; j < L; ++j) u.c[j] -= corr(j);
    refine_rows(u);
}

void trace_project_pair(PairD& u, const std::vector<double>& d11,
                        const std::vector<double>& d21,
                        const std::vector<double>& d22) {
    const int N0 = u.u1.order, L = seq_len(N0);
    if (u.u2.order != N0) throw std::invalid_argument("trace_project_pair: order mismatch");
    const auto T = trace_matrix_scalar(N0);
    Eigen::MatrixXd Tm(N0 + 1, L);
    for (int i = 0; i <= N0; ++i)
        for (int j = 0; j < L; ++j) Tm(i, j) = T[static_cast<size_t>(i) * L + j];
    const auto D11 = Eigen::Map<const Eigen::VectorXd>(d11.data(), L);
    const auto D21 = Eigen::Map<const Eigen::VectorXd>(d21.data(), L);
    const auto D22 = Eigen::Map<const Eigen::VectorXd>(d22.data(), L);
    // M = [[T D11 T^t, 0], [T D21 T^t, T D22 T^t]]
    const int R = N0 + 1;
    Eigen::MatrixXd M = Eigen::MatrixXd::Zero(2 * R, 2 * R);
    M.topLeftCorner(R, R) = Tm * D11.asDiagonal() * Tm.transpose();
    M.bottomLeftCorner(R, R) = Tm * D21.asDiagonal() * Tm.transpose();
    M.bottomRightCorner(R, R) = Tm * D22.asDiagonal() * Tm.transpose();
    Eigen::VectorXd rhs(2 * R);
    Eigen::VectorXd u1v(L), u2v(L);
    for (int j = 0; j < L; ++j) {
        u1v(j) = u.u1.c[j];
        u2v(j) = u.u2.c[j];
    }
    rhs.head(R) = Tm * u1v;
    rhs.tail(R) = Tm * u2v;
    Eigen::PartialPivLU<Eigen::MatrixXd> lu(M);
    const Eigen::VectorXd y = lu.solve(rhs);
    if ((M * y - rhs).norm() > 1e-6 * (rhs.norm() + 1.0))
        throw std::runtime_error("trace_project: T D T^T numerically singular");
    const Eigen::VectorXd w1 = Tm.transpose() * y.head(R);
    const Eigen::VectorXd w2 = Tm.transpose() * y.tail(R);
    for (int j = 0; j < L; ++j) {
        u.u1.c[j] -= d11[j] * w1(j);
        u.u2.c[j] -= d21[j] * w1(j) + d22[j] * w2(j);
    }
    refine_rows(u.u1);
    refine_rows(u.u2);
}

void save_coeffs(const std::string& path, const CoeffFile& f) {
    nlohmann::json j;
    auto numstr = [](double v) {
        char buf[32];
        std::snprintf(buf, sizeof(buf), "%.17g", v);
        return std::string(buf);
    };
    j["lambda1"] = f.lambda1_str.empty() ? numstr(f.lambda1) : f.lambda1_str;
    j["lambda2"] = f.lambda2_str.empty() ? numstr(f.lambda2) : f.lambda2_str;
    j["d"] = numstr(f.d);
    j["order"] = f.order;
    j["component_count"] = f.component_count;
    nlohmann::json comps = nlohmann::json::array();
    for (const auto& s : f.comps) {
        nlohmann::json arr = nlohmann::json::array();
        for (double v : s.c) arr.push_back(numstr(v));
        comps.push_back(arr);
    }
    j["coeffs"] = comps;
    std::ofstream out(path);
    if (!out) throw std::runtime_error("save_coeffs: cannot open " + path);
    out << j.dump(1) << "\n";
}

CoeffFile load_coeffs(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("load_coeffs: cannot open " + path);
    nlohmann::json j;
    in >> j;
    CoeffFile f;
    f.lambda1_str = j.at("lambda1").get<std::string>();
    f.lambda2_str = j.at("lambda2").get<std::string>();
    f.lambda1 = parse_number(f.lambda1_str).mid();
    f.lambda2 = parse_number(f.lambda2_str).mid();
    f.d = std::strtod(j.at("d").get<std::string>().c_str(), nullptr);
    f.order = j.at("order").get<int>();
    f.component_count = j.at("component_count").get<int>();
    const auto& comps = j.at("coeffs");
    if (static_cast<int>(comps.size()) != f.component_count)
        throw std::runtime_error("load_coeffs: component count mismatch");
    for (const auto& arr : comps) {
        SeqD s(f.order);
        if (arr.size() != s.c.size())
            throw std::runtime_error("load_coeffs: coefficient count mismatch");
        for (size_t i = 0; i < s.c.size(); ++i)
            s.c[i] = std::strtod(arr[i].get<std::string>().c_str(), nullptr);
        f.comps.push_back(std::move(s));
    }
    return f;
}

} // namespace gscap
