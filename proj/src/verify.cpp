#include "frackac/verify.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <sstream>

#include <unsupported/Eigen/FFT>
#include <json.hpp>

#include "frackac/analysis.hpp"
#include "frackac/config.hpp"
#include "frackac/errors.hpp"
#include "frackac/fk_solver.hpp"
#include "frackac/frac_calc.hpp"
#include "frackac/gaussian_field.hpp"
#include "frackac/kernels.hpp"
#include "frackac/parallel.hpp"
#include "frackac/stoch_integral.hpp"

namespace frackac {

bool VerifyReport::pass() const {
    return std::all_of(checks.begin(), checks.end(), [](const Check& c) { return c.pass; });
}

bool VerifyReport::criterion_pass(int n) const {
    bool any = false;
    for (const auto& c : checks)
        if (c.criterion == n) {
            any = true;
            if (!c.pass) return false;
        }
    return any;
}

namespace {

struct Ctx {
    const VerifyOptions& opt;
    VerifyReport& rep;
    int criterion;

    double tol(const std::string& k) const {
        auto it = opt.tolerances.find(k);
        if (it != opt.tolerances.end()) return it->second;
        return default_tolerances().at(k);
    }
    RngSeed seed(std::uint64_t stream) const { return RngSeed{opt.seed, 0}.child(1000 * criterion + stream); }

    Check& add(std::string id, double target, double observed, double tolerance, const std::string& relation,
               std::string note = "") {
        Check c;
        c.id = std::move(id);
        c.criterion = criterion;
        c.target = target;
        c.observed = observed;
        c.tolerance = tolerance;
        c.relation = relation;
        c.note = std::move(note);
        if (relation == "abs_diff_le") c.pass = std::abs(observed - target) <= tolerance;
        else if (relation == "ge") c.pass = observed >= target - tolerance;
        else if (relation == "le") c.pass = observed <= target + tolerance;
        else if (relation == "in_band") c.pass = std::abs(observed - target) <= tolerance;
        else throw std::logic_error("unknown relation " + relation);
        if (!std::isfinite(observed)) c.pass = false;
        rep.checks.push_back(c);
        return rep.checks.back();
    }
    void point(const std::string& id, double x, double y) { rep.points.push_back({id, x, y}); }
    void fit_points(const std::string& id, const RateFit& f) {
        for (auto [x, y] : f.points) point(id, std::exp(x), std::exp(y));
    }
};

HolderPath linear_path(double t) { return HolderPath::sample([](double s) { return s; }, t, 1).with_alpha(1.0); }

std::vector<double> ladder(int k0, int k1) {
    std::vector<double> v;
    for (int k = k0; k <= k1; ++k) v.push_back(std::ldexp(1.0, -k));
    return v;
}

// ---- 1: constant kernel closed forms ----
void c1(Ctx& c) {
    NormalStream ns(c.seed(1));
    double worst = 0.0;
    for (int i = 0; i < 20; ++i) {
        double t = 0.2 + 1.8 * ns.uniform();
        double H = 0.05 + 0.44 * ns.uniform();
        std::size_t n = 4 + static_cast<std::size_t>(12 * ns.uniform());
        std::vector<double> g(n + 1), v(n + 1);
        for (std::size_t k = 0; k <= n; ++k) {
            g[k] = t * static_cast<double>(k) / static_cast<double>(n);
            v[k] = ns.normal();
        }
        HolderPath phi(g, v);
        double val = variance_closed(phi, t, HurstParams(H), make_constant(1.0));
        worst = std::max(worst, std::abs(val - std::pow(t, 2 * H)));
    }
    c.add("c1.variance_closed_q1", 0.0, worst, c.tol("closed_form"), "abs_diff_le", "max over 20 random (t, H, phi)");

    std::size_t n = c.opt.quick ? 10000 : 100000;
    double cc = 0.7, t = 1.0, H = 0.3;
    double x[1] = {0.0};
    FkOptions fo;
    fo.workers = c.opt.workers;
    fo.dt = 1.0 / 64;
    auto m = u_mean(t, x, InitialCondition::constant(1.0), n, HurstParams(H), make_constant(cc), c.seed(2), fo);
    double exact = std::exp(0.5 * cc * std::pow(t, 2 * H));
    double k = c.tol("stderr_factor");
    c.add("c1.u_mean_constant", exact, m.mean, k * m.std_error + 1e-12 * exact, "abs_diff_le",
          "u0 = 1; every sample equals the closed form, so the stderr is 0");
    auto u0 = InitialCondition::gaussian(1.0);
    auto mg = u_mean(t, x, u0, n, HurstParams(H), make_constant(cc), c.seed(3), fo);
    double exact_g = exact * heat_semigroup(u0, t, 0.0);
    c.add("c1.u_mean_constant_gaussian_u0", exact_g, mg.mean, k * mg.std_error, "abs_diff_le",
          "u0 = exp(-y^2): closed form times the heat semigroup");
}

// Aitken extrapolation of a geometric ladder; error from the shift by one rung
struct Extrap {
    double value, error;
};
Extrap extrapolate(const std::vector<double>& c) {
    auto aitken = [&](std::size_t i) {
        double d1 = c[i + 1] - c[i], d2 = c[i + 2] - c[i + 1];
        double r = d2 / d1;
        return c[i + 2] + d2 * r / (1 - r);
    };
    std::size_t n = c.size();
    double a = aitken(n - 3), b = aitken(n - 4);
    return {a, std::abs(a - b)};
}

// ---- 2: variance oracle triangle ----
void c2(Ctx& c) {
    struct Case {
        const char* name;
        double H;
        SpatialKernel q;
    };
    std::vector<Case> cases{{"smooth", 0.3, make_smooth(1.0)}, {"fbm_space", 0.35, make_fbm_space(0.4)}};
    double t = 0.5, k = c.tol("stderr_factor");
    double eps_mc = std::ldexp(1.0, -6), ds = eps_mc / 4;
    std::size_t draws = c.opt.quick ? 10000 : 100000;
    std::uint64_t stream = 10;
    for (auto& cs : cases) {
        std::string id = std::string("c2.") + cs.name;
        HurstParams h(cs.H);
        HolderPath phi = linear_path(t);
        double v = variance_closed(phi, t, h, cs.q);
        std::vector<double> eps = ladder(4, 12), cm;
        for (double e : eps) {
            cm.push_back(cross_moment(phi, t, e, e, h, cs.q));
            c.point(id + ".ladder", e, cm.back());
        }
        Extrap L = extrapolate(cm);
        c.add(id + ".closed_vs_ladder", v, L.value, k * L.error + 1e-9, "abs_diff_le",
              "Aitken limit of cross_moment(eps, eps), eps = 2^-4..2^-12");

        // pathwise draws of integral_eps at eps_mc; path nodes sit on field sites
        auto n_t = static_cast<long>(std::llround(t / ds)), pad = static_cast<long>(std::llround(eps_mc / ds));
        GridSpec g = GridSpec::uniform(ds, -pad, n_t + pad, 0.0, t, static_cast<std::size_t>(n_t) + 1, h, cs.q);
        FieldSimulator sim(g);
        FunctionalSampler fs(sim, {integral_eps_functional(g, phi, t, eps_mc)});
        std::vector<double> sq(draws);
        RngSeed base = c.seed(stream++);
        parallel_for(draws, c.opt.workers, [&](std::size_t i) {
            double x = fs.pathwise(base.child(i))[0];
            sq[i] = x * x;
        });
        MCEstimate mc = summarize(sq, base);
        double cm_mc = cross_moment(phi, t, eps_mc, eps_mc, h, cs.q);
        auto n = static_cast<std::size_t>(n_t);
        double d1 = discrete_moment(phi, t, n, phi, t, n, eps_mc, h, cs.q);
        double d2 = discrete_moment(phi, t, 2 * n, phi, t, 2 * n, eps_mc, h, cs.q);
        double grid_err = std::abs(d1 - d2);
        double e_mc = std::sqrt(mc.std_error * mc.std_error + grid_err * grid_err);
        c.add(id + ".mc_vs_ladder", cm_mc, mc.mean, k * e_mc, "abs_diff_le",
              "MC E[I_eps^2] at eps = 2^-6 against cross_moment at the same eps; error: stderr and grid step halving");
        double corrected = mc.mean + (L.value - cm_mc);
        c.add(id + ".closed_vs_mc", v, corrected, k * std::sqrt(e_mc * e_mc + L.error * L.error) + 1e-9,
              "abs_diff_le", "MC shifted by the deterministic ladder correction limit - cross_moment(2^-6)");
    }
}

// ---- 3: convergence rate ----
void c3(Ctx& c) {
    struct Case {
        const char* name;
        double H;
        SpatialKernel q;
    };
    std::vector<Case> cases{{"fbm_space_H0.35_g0.8", 0.35, make_fbm_space(0.4)},
                            {"smooth_H0.3_g1", 0.3, make_smooth(1.0)},
                            {"fbm_space_H0.45_g0.6", 0.45, make_fbm_space(0.3)}};
    for (auto& cs : cases) {
        auto r = convergence_experiment(linear_path(1.0), 1.0, HurstParams(cs.H), cs.q, ladder(4, 12),
                                        c.tol("alpha_factor"), c.tol("slope"));
        std::string id = std::string("c3.") + cs.name;
        c.fit_points(id, r.fit);
        c.add(id, r.target, r.fit.slope, c.tol("slope"), "ge", "log-log slope of |cross_moment - variance_closed|");
    }
}

// ---- 4: explicit-constant bound ----
void c4(Ctx& c) {
    HurstParams h(0.3);
    HolderPath phi = linear_path(1.0);
    std::vector<std::pair<const char*, SpatialKernel>> ks{
        {"constant", make_constant(1.0)}, {"fbm_space", make_fbm_space(0.4)}, {"smooth", make_smooth(1.0)}};
    for (auto& [name, q] : ks) {
        BoundCheck b = dctrl2_check(h, q, phi, 1.0, c.tol("dctrl2_constant"));
        c.add(std::string("c4.dctrl2_") + name, 1.0, b.max_ratio, 0.0, "le",
              "max over a 10x10 (eps, delta) grid of lhs / (C |psi|_inf (eps+delta)^{2H})");
    }
}

// ---- 5: appendix kernel suite ----
void c5(Ctx& c) {
    auto rep = kernel_bound_suite(1000000, c.seed(1), c.tol("f_bound"), c.tol("g_small"), c.tol("g_large"));
    c.add("c5.f_eps_bound", 1.0, rep.f_ratio, 0.0, "le", "max |f_eps| / (C r^{beta-2}) over 10^6 draws");
    c.add("c5.g_eps_small_u", 1.0, rep.g_small_ratio, 0.0, "le",
          "u < 2 eps: max |g_eps| / (C u^{2H-2}); unbounded near u = eps, see the split check");
    c.add("c5.g_eps_large_u", 1.0, rep.g_large_ratio, 0.0, "le",
          "u > 2 eps: max |g_eps| / ((1-2H) u^{2H-2}); this bound does not hold, see the shifted check");
    c.add("c5.f_eps_limit_rate", 2.0, rep.limit_slope, c.tol("limit_slope"), "ge",
          "slope of |f_eps(1) - beta(beta-1)| against eps, beta in {0.55, 0.8, 1.5}");
    Ctx s{c.opt, c.rep, 0};
    s.add("c5.g_eps_large_u_shifted", 1.0, rep.g_large_shifted_ratio, 0.0, "le",
          "u > 2 eps: max |g_eps| / ((1-2H)(u-eps)^{2H-2}), the bound the convexity argument gives");
    s.add("c5.g_eps_small_u_split", 1.0, rep.g_small_split_ratio, 0.0, "le",
          "u < 2 eps: max |g_eps| / (u^{2H-2} + |u-eps|^{2H-1}/u), integrable singularity at u = eps");
}

// exact fBm on n uniform steps of [0, T] by circulant embedding; two paths per FFT
class FbmSampler {
public:
    FbmSampler(std::size_t n, double T, HurstParams h) : n_(n), step_(T / static_cast<double>(n)) {
        std::size_t m = 2 * n;
        std::vector<std::complex<double>> row(m), lam;
        double H2 = 2 * h.h;
        auto gam = [&](double k) {
            return 0.5 * (std::pow(std::abs(k + 1), H2) - 2 * std::pow(std::abs(k), H2) + std::pow(std::abs(k - 1), H2));
        };
        for (std::size_t j = 0; j < m; ++j) row[j] = gam(static_cast<double>(j <= n ? j : m - j));
        fft_.fwd(lam, row);
        sq_.resize(m);
        for (std::size_t j = 0; j < m; ++j) {
            double l = lam[j].real();
            if (l < -1e-10) throw NumericalError("circulant embedding: negative eigenvalue");
            sq_[j] = std::sqrt(std::max(l, 0.0) / static_cast<double>(m));
        }
        scale_ = std::pow(step_, h.h);
    }
    // B at 0, step, ..., n step for both paths
    void sample(NormalStream& ns, std::vector<double>& b1, std::vector<double>& b2) {
        std::size_t m = 2 * n_;
        std::vector<std::complex<double>> z(m), x;
        for (std::size_t j = 0; j < m; ++j) {
            double a = ns.normal(), b = ns.normal();
            z[j] = sq_[j] * std::complex<double>(a, b);
        }
        fft_.fwd(x, z);
        b1.assign(n_ + 1, 0.0);
        b2.assign(n_ + 1, 0.0);
        for (std::size_t j = 0; j < n_; ++j) {
            b1[j + 1] = b1[j] + scale_ * x[j].real();
            b2[j + 1] = b2[j] + scale_ * x[j].imag();
        }
    }

private:
    std::size_t n_;
    double step_, scale_ = 1;
    std::vector<double> sq_;
    Eigen::FFT<double> fft_;
};

// ---- 6: inner-product identities ----
void c6(Ctx& c) {
    NormalStream ns(c.seed(1));
    double worst = 0.0;
    for (int rep = 0; rep < 10; ++rep) {
        double H = 0.05 + 0.44 * ns.uniform();
        HurstParams h(H);
        int m = 1 + static_cast<int>(5 * ns.uniform());
        std::vector<double> tk{0.0}, a;
        for (int i = 0; i < m; ++i) {
            tk.push_back(tk.back() + 0.1 + ns.uniform());
            a.push_back(ns.normal());
        }
        double s = tk.back();
        double t = s * (0.3 + 1.4 * ns.uniform());
        auto phi = [&](double r) {
            for (int i = 0; i < m; ++i)
                if (r < tk[static_cast<std::size_t>(i) + 1]) return a[static_cast<std::size_t>(i)];
            return a.back();
        };
        double exact = 0.0;
        for (int i = 0; i < m; ++i) {
            double lo = tk[static_cast<std::size_t>(i)], hi = tk[static_cast<std::size_t>(i) + 1];
            exact += a[static_cast<std::size_t>(i)] * 0.5 *
                     (std::pow(hi, 2 * H) - std::pow(lo, 2 * H) + std::pow(std::abs(t - lo), 2 * H) -
                      std::pow(std::abs(t - hi), 2 * H));
        }
        std::vector<double> br(tk.begin() + 1, tk.end() - 1);
        double val = inner_step(phi, s, t, h, br);
        worst = std::max(worst, std::abs(val - exact));
    }
    c.add("c6.inner_step_step_functions", 0.0, worst, c.tol("inner_step"), "abs_diff_le",
          "max over 10 random step functions of |inner_step - closed step sum|");

    // E[(sum phi(r_i) dB_i on [0, s]) (B_t - B_u)] for phi(r) = r, u=0.2, s=0.5, t=1, H=0.3
    HurstParams h(0.3);
    const std::size_t n = 20480;  // 5 * 2^12 so that 0.2 and 0.5 are grid nodes
    std::size_t iu = n / 5, is = n / 2;
    double step = 1.0 / static_cast<double>(n);
    HolderPath phi = linear_path(1.0);
    double exact = inner_interval(phi, 0.5, 0.2, 1.0, h);
    std::size_t batches = c.opt.quick ? 1000 : 10000;
    std::vector<double> prod(2 * batches);
    FbmSampler fbm(n, 1.0, h);
    RngSeed base = c.seed(2);
    // one sampler per worker chunk would change nothing numerically; keep it serial per batch
    std::vector<double> b1, b2;
    for (std::size_t i = 0; i < batches; ++i) {
        NormalStream s(base.child(i));
        fbm.sample(s, b1, b2);
        for (int w = 0; w < 2; ++w) {
            const auto& b = w == 0 ? b1 : b2;
            double x = 0.0;
            for (std::size_t j = 0; j < is; ++j) x += (static_cast<double>(j) * step) * (b[j + 1] - b[j]);
            prod[2 * i + static_cast<std::size_t>(w)] = x * (b[n] - b[iu]);
        }
    }
    MCEstimate mc = summarize(prod, base);
    c.add("c6.inner_interval_gaussian_mc", exact, mc.mean, c.tol("stderr_factor") * mc.std_error, "abs_diff_le",
          "exact fBm on a 20480-step grid by circulant embedding");
    double lin = inner_interval(phi, 0.5, 0.2, 1.0, h) - (inner_step(phi, 0.5, 1.0, h) - inner_step(phi, 0.5, 0.2, h));
    c.add("c6.inner_interval_linearity", 0.0, std::abs(lin), c.tol("inner_step"), "abs_diff_le");
}

// ---- 7: fractional calculus ----
void c7(Ctx& c) {
    double tp = c.tol("frac_power");
    double worst_i = 0, worst_d = 0;
    struct Pw {
        double lambda;
        std::size_t n;
        double grading;
    };
    for (Pw p : {Pw{0.0, 8, 1}, Pw{1.0, 8, 1}, Pw{2.0, 32768, 1}, Pw{0.7, 16384, 3}}) {
        auto f = [&](double y) { return p.lambda == 0.0 ? 1.0 : std::pow(y, p.lambda); };
        SampledFunction sf = p.grading == 1 ? SampledFunction::sample(f, 0.0, 1.0, p.n)
                                            : SampledFunction::sample_graded(f, 0.0, 1.0, p.n, p.grading);
        sf = sf.with_exponent(p.lambda == 0.0 ? 1.0 : std::min(1.0, p.lambda));
        for (double alpha : {0.3, 0.6})
            for (double x : {0.37, 0.8}) {
                double gi = gamma_fn(p.lambda + 1) / gamma_fn(p.lambda + 1 + alpha) * std::pow(x, p.lambda + alpha);
                worst_i = std::max(worst_i, std::abs(frac_integral(sf, alpha, Side::Left, x) - gi));
                if (alpha < sf.gate_exponent()) {
                    double gd = gamma_fn(p.lambda + 1) / gamma_fn(p.lambda + 1 - alpha) * std::pow(x, p.lambda - alpha);
                    worst_d = std::max(worst_d, std::abs(frac_deriv(sf, alpha, Side::Left, x) - gd));
                }
            }
    }
    // right side: (1 - y)^2
    {
        auto sf = SampledFunction::sample([](double y) { return (1 - y) * (1 - y); }, 0.0, 1.0, 32768).with_exponent(1.0);
        for (double alpha : {0.3, 0.6}) {
            double x = 0.4, d = 1 - x;
            worst_i = std::max(worst_i, std::abs(frac_integral(sf, alpha, Side::Right, x) -
                                                 2.0 / gamma_fn(3 + alpha) * std::pow(d, 2 + alpha)));
            worst_d = std::max(worst_d, std::abs(frac_deriv(sf, alpha, Side::Right, x) -
                                                 2.0 / gamma_fn(3 - alpha) * std::pow(d, 2 - alpha)));
        }
    }
    c.add("c7.power_rule_integral", 0.0, worst_i, tp, "abs_diff_le");
    c.add("c7.power_rule_derivative", 0.0, worst_d, tp, "abs_diff_le");

    double worst_ibp = 0;
    auto f = SampledFunction::sample([](double y) { return std::sin(2 * y) + 1.0; }, 0.0, 1.0, 64).with_exponent(1.0);
    auto g = SampledFunction::sample([](double y) { return std::exp(-y); }, 0.0, 1.0, 64).with_exponent(1.0);
    for (double alpha : {0.3, 0.6}) worst_ibp = std::max(worst_ibp, ibp_residual(f, g, alpha));
    c.add("c7.ibp_residual", 0.0, worst_ibp, c.tol("ibp"), "abs_diff_le", "f = sin(2y)+1, g = exp(-y), 64 samples");

    double worst_z = 0;
    struct Pair {
        std::function<double(double)> f, g;
    };
    std::vector<Pair> pairs{{[](double y) { return y; }, [](double y) { return y * y; }},
                            {[](double y) { return std::cos(y); }, [](double y) { return std::sin(3 * y); }}};
    for (auto& p : pairs) {
        auto fs = SampledFunction::sample(p.f, 0.0, 1.0, 256).with_exponent(1.0);
        auto gs = SampledFunction::sample(p.g, 0.0, 1.0, 256).with_exponent(1.0);
        double z = zahle_integral(fs, gs, 0.6);
        double rs = riemann_stieltjes_sum(p.f, p.g, 0.0, 1.0, 1u << 20);
        worst_z = std::max(worst_z, std::abs(z - rs));
    }
    c.add("c7.zahle_vs_riemann_stieltjes", 0.0, worst_z, c.tol("zahle"), "abs_diff_le",
          "alpha = 0.6, 256-cell samples, left-point sums on 2^20 cells");
}

// ---- 8: Wick identities ----
void c8(Ctx& c) {
    std::size_t n = c.opt.quick ? 10000 : 100000;
    double k = c.tol("stderr_factor");
    FkOptions fo;
    fo.workers = c.opt.workers;
    fo.dt = 1.0 / 64;
    auto u0 = InitialCondition::gaussian(1.0);
    struct Case {
        const char* name;
        double H;
        SpatialKernel q;
    };
    std::vector<Case> cases{{"constant", 0.3, make_constant(1.0)},
                            {"fbm_space", 0.35, make_fbm_space(0.4)},
                            {"smooth", 0.3, make_smooth(1.0)}};
    std::vector<std::pair<double, double>> tx{{0.25, 0.0}, {0.5, 0.3}, {1.0, -0.5}, {1.5, 1.0}, {2.0, 0.1}};
    std::uint64_t stream = 1;
    for (auto& cs : cases)
        for (auto [t, x] : tx) {
            double xs[1] = {x};
            auto w = wick_moments(t, xs, xs, u0, n, HurstParams(cs.H), cs.q, c.seed(stream++), fo, false);
            std::ostringstream id;
            id << "c8.wick_mean_" << cs.name << "_t" << t << "_x" << x;
            c.add(id.str(), heat_semigroup(u0, t, x), w.mean_x.mean, k * w.mean_x.std_error, "abs_diff_le");
        }
    double cc = 0.8, t = 1.0, H = 0.3;
    double xs[1] = {0.0};
    auto w = wick_moments(t, xs, xs, InitialCondition::constant(1.0), n, HurstParams(H), make_constant(cc),
                          c.seed(stream++), fo, true);
    double exact = std::exp(cc * std::pow(t, 2 * H));
    c.add("c8.wick_second_moment_constant", exact, w.second_moment_xy.mean,
          k * w.second_moment_xy.std_error + 1e-12 * exact, "abs_diff_le");
}

// ---- 9: Hoelder experiments ----
void c9(Ctx& c) {
    double H = 0.3;
    std::vector<double> lags{0.125, 0.0625, 0.03125, 0.015625, 0.0078125};
    auto r = holder_integral(linear_path(1.0), 0.25, lags, std::ldexp(1.0, -14), HurstParams(H), make_constant(1.0),
                             c.tol("holder_integral"));
    c.fit_points("c9.integral_q1", r.fit);
    c.add("c9.integral_q1", r.target, r.fit.slope, c.tol("holder_integral"), "in_band");

    HolderSolutionParams p;
    p.n_pairs = c.opt.quick ? 200 : 2000;
    p.workers = c.opt.workers;
    p.tol = c.tol("holder_solution");
    auto s = holder_solution(InitialCondition::gaussian(1.0), HurstParams(0.45), make_smooth(1.0), p, c.seed(1));
    c.fit_points("c9.solution_smooth", s.fit);
    c.add("c9.solution_smooth_H0.45", s.target, s.fit.slope, p.tol, "ge", s.note);
}

// ---- 10: weak residual ----
void c10(Ctx& c) {
    std::size_t n_fields = c.opt.quick ? 4 : 32, n_paths = c.opt.quick ? 64 : 256;
    double t = 0.25, k = c.tol("stderr_factor");
    HurstParams h(0.45);
    auto g = GridSpec::covering(t, std::ldexp(1.0, -6), std::ldexp(1.0, -10), -4.0, 4.0, 257, h, make_smooth(1.0));
    FieldSimulator sim(g);
    std::vector<double> xg;
    for (int j = 0; j <= 64; ++j) xg.push_back(-1.0 + j / 32.0);
    auto tf = TestFunction::bump(0.0, 1.0);
    auto u0 = InitialCondition::gaussian(1.0);
    std::vector<double> eps{std::ldexp(1.0, -6), std::ldexp(1.0, -7), std::ldexp(1.0, -8)};
    std::vector<double> mean_res(eps.size(), 0.0), bar2(eps.size(), 0.0);
    double worst = 0;
    std::string worst_where;
    for (std::size_t f = 0; f < n_fields; ++f) {
        FieldSample fs = sim.sample(c.seed(100 + f));
        for (std::size_t e = 0; e < eps.size(); ++e) {
            auto w = weak_residual(fs, u0, tf, t, eps[e], n_paths, xg, c.seed(1000 + 10 * f + e), c.opt.workers);
            double ratio = w.residual / w.error_bar();
            if (ratio > worst) {
                worst = ratio;
                worst_where = "field " + std::to_string(f) + ", eps 2^-" + std::to_string(6 + e);
            }
            mean_res[e] += w.residual / static_cast<double>(n_fields);
            bar2[e] += w.error_bar() * w.error_bar();
            c.point("c10.residual_eps" + std::to_string(6 + e), static_cast<double>(f), w.residual);
        }
    }
    c.add("c10.residual_within_error_bar", 0.0, worst, k, "le",
          "max over fields and eps of residual / error bar; worst at " + worst_where);
    for (std::size_t e = 0; e < eps.size(); ++e) c.point("c10.mean_residual", eps[e], mean_res[e]);
    double nf = static_cast<double>(n_fields);
    double slack = 2.0 * std::sqrt(bar2.front() + bar2.back()) / nf;
    c.add("c10.residual_trend", mean_res.front(), mean_res.back(), slack, "le",
          "field-mean residual at eps = 2^-8 against 2^-6, slack two combined error bars");
}

}  // namespace

void run_criterion(int n, const VerifyOptions& opt, VerifyReport& rep) {
    Ctx c{opt, rep, n};
    switch (n) {
        case 1: c1(c); break;
        case 2: c2(c); break;
        case 3: c3(c); break;
        case 4: c4(c); break;
        case 5: c5(c); break;
        case 6: c6(c); break;
        case 7: c7(c); break;
        case 8: c8(c); break;
        case 9: c9(c); break;
        case 10: c10(c); break;
        default: throw ConfigError("no criterion " + std::to_string(n));
    }
}

VerifyReport run_verify(const VerifyOptions& opt, const std::vector<int>& criteria) {
    VerifyReport rep;
    std::vector<int> which = criteria;
    if (which.empty())
        for (int i = 1; i <= kCriteria; ++i) which.push_back(i);
    for (int n : which) run_criterion(n, opt, rep);
    return rep;
}

std::string report_json(const VerifyReport& rep, const std::vector<std::pair<std::string, std::string>>& config_echo,
                        std::uint64_t seed) {
    nlohmann::ordered_json j;
    j["tool"] = "frackac";
    j["version"] = FRACKAC_VERSION;
    j["seed"] = seed;
    nlohmann::ordered_json cfg = nlohmann::ordered_json::object();
    for (auto& [k, v] : config_echo) cfg[k] = v;
    j["config"] = cfg;
    j["pass"] = rep.pass();
    nlohmann::ordered_json checks = nlohmann::ordered_json::array();
    for (const auto& c : rep.checks) {
        nlohmann::ordered_json o;
        o["check_id"] = c.id;
        o["criterion"] = c.criterion;
        o["target"] = c.target;
        o["observed"] = c.observed;
        o["tolerance"] = c.tolerance;
        o["relation"] = c.relation;
        o["pass"] = c.pass;
        o["note"] = c.note;
        checks.push_back(o);
    }
    j["checks"] = checks;
    return j.dump(2) + "\n";
}

std::string points_csv(const VerifyReport& rep) {
    std::string s = "check_id,x,y\n";
    for (const auto& p : rep.points) s += p.id + "," + format_double(p.x) + "," + format_double(p.y) + "\n";
    return s;
}

}  // namespace frackac
