#include "frackac/stoch_integral.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>
#include <utility>

#include "frackac/errors.hpp"
#include "frackac/parallel.hpp"

namespace frackac {

QuadratureSpec stoch_default_spec() {
    QuadratureSpec s;
    s.n_panels = 16;
    s.rule_order = 10;
    s.target_abs_tol = 1e-9;
    return s;
}

double integral_eps(const FieldSample& field, const HolderPath& phi, double t, double eps) {
    return integral_eps_functional(*field.spec, phi, t, eps).apply(field.values);
}

void require_integral_gate(const HolderPath& phi, HurstParams h, const SpatialKernel& q, const char* who) {
    // Q2 holds for every gamma when Q is constant, so no path regularity is needed.
    if (q.kind == KernelKind::Constant) return;
    double lhs = q.gamma * phi.alpha_est(), rhs = 1.0 - 2.0 * h.h;
    if (!(lhs > rhs)) {
        std::ostringstream os;
        os << who << ": need gamma * alpha > 1 - 2H (gamma * alpha = " << lhs << ", 1 - 2H = " << rhs << ")";
        throw GateError(os.str());
    }
}

namespace {

// (position, singular exponent) pairs -> pieces on [lo, hi]; duplicates keep
// the stronger singularity
std::vector<Piece> pieces_from(std::vector<std::pair<double, double>> pts, double lo, double hi) {
    pts.emplace_back(lo, kRegular);
    pts.emplace_back(hi, kRegular);
    std::sort(pts.begin(), pts.end());
    double tol = 1e-14 * std::max(1.0, hi - lo);
    std::vector<double> b, e;
    for (auto [x, p] : pts) {
        if (x < lo - tol || x > hi + tol) continue;
        x = std::clamp(x, lo, hi);
        if (!b.empty() && x - b.back() <= tol) {
            e.back() = std::min(e.back(), p);
        } else {
            b.push_back(x);
            e.push_back(p);
        }
    }
    if (b.size() < 2) return {};
    return make_pieces(b, e);
}

struct TriLayout {
    std::vector<double> kinks;  // path nodes: phi has kinks in theta and in theta - r
    double p_r0 = 0.0;
    std::vector<double> r_extra;
    double p_theta0 = 0.0;
    std::vector<double> theta_extra;
    std::vector<double> cusps;  // times where the path meets the kernel's non-smooth set
};

// int_0^t int_0^theta f(theta, r) dr dtheta
QuadResult tri_quad(const Integrand2& f, double t, const TriLayout& L, const QuadratureSpec& spec) {
    std::vector<std::pair<double, double>> op{{0.0, L.p_theta0}};
    for (double x : L.theta_extra) op.emplace_back(x, 0.0);
    for (double x : L.kinks) op.emplace_back(x, kRegular);
    for (double x : L.cusps) op.emplace_back(x, 0.0);
    auto outer = pieces_from(op, 0.0, t);
    auto inner = [&](double theta) {
        std::vector<std::pair<double, double>> ip{{0.0, L.p_r0}};
        for (double x : L.r_extra) ip.emplace_back(x, 0.0);
        for (double x : L.kinks)
            if (x < theta) ip.emplace_back(theta - x, kRegular);
        for (double x : L.cusps)
            if (x <= theta) ip.emplace_back(theta - x, 0.0);
        return pieces_from(ip, 0.0, theta);
    };
    return refine(
        [&](int n) {
            return fixed_rule(
                [&](double theta) {
                    if (!(theta > 0.0)) return 0.0;
                    auto pcs = inner(theta);
                    return fixed_rule([&](double r) { return f(theta, r); }, pcs, n, spec);
                },
                outer, n, spec);
        },
        spec);
}

QuadResult line_quad(const Integrand& f, double t, double p0, const std::vector<double>& kinks,
                     const std::vector<double>& extra, const QuadratureSpec& spec) {
    std::vector<std::pair<double, double>> op{{0.0, p0}};
    for (double x : extra) op.emplace_back(x, 0.0);
    for (double x : kinks) op.emplace_back(x, kRegular);
    auto pcs = pieces_from(op, 0.0, t);
    return refine([&](int n) { return fixed_rule(f, pcs, n, spec); }, spec);
}

std::vector<double> kinks_of(const HolderPath& phi, double t) {
    std::vector<double> k;
    for (double g : phi.grid())
        if (g > 0.0 && g < t) k.push_back(g);
    return k;
}

// fbm_space is only Hoelder at x = 0, so zeros of the path need graded breaks
std::vector<double> cusps_of(const HolderPath& phi, double t, const SpatialKernel& q) {
    std::vector<double> z;
    if (q.kind != KernelKind::FbmSpace || phi.dim() != 1) return z;
    const auto& g = phi.grid();
    const auto& v = phi.values();
    for (std::size_t i = 0; i < g.size() && g[i] <= t; ++i) {
        if (v[i] == 0.0) z.push_back(g[i]);
        if (i + 1 < g.size() && v[i] * v[i + 1] < 0.0) {
            double r = g[i] + (g[i + 1] - g[i]) * v[i] / (v[i] - v[i + 1]);
            if (r < t) z.push_back(r);
        }
    }
    return z;
}

std::vector<double> joined(std::vector<double> a, const std::vector<double>& b) {
    a.insert(a.end(), b.begin(), b.end());
    return a;
}

void check_path(const HolderPath& phi, double t, const char* who, bool scalar = true) {
    if (scalar && phi.dim() != 1) throw ConfigError(std::string(who) + ": d = 1 paths only on this route");
    if (!(t > 0)) throw std::invalid_argument(std::string(who) + ": need t > 0");
    if (phi.start() > 0.0 || t > phi.horizon() * (1 + 1e-12))
        throw CoverageError(std::string(who) + ": path does not cover [0, t]");
}

constexpr std::size_t kGradedMaxNodes = 65;

// ---- product integration on a uniform path grid ----

struct GridWeights {
    std::vector<double> full, half;  // r^{2H-2} against hats at r = m dt; half: the left half only
    std::vector<double> tw;          // theta^{2H-1} against hats at theta = j dt
};

GridWeights grid_weights(std::size_t n, double dt, double beta) {
    GridWeights w;
    w.full.assign(n + 1, 0.0);
    w.half.assign(n + 1, 0.0);
    w.tw.assign(n + 1, 0.0);
    // cells [m, m+1] in units of dt
    std::vector<double> L(n + 1, 0.0), R(n + 1, 0.0);
    for (std::size_t m = 1; m < n; ++m) {
        double a = static_cast<double>(m), b = a + 1;
        double A = (std::pow(b, beta - 1) - std::pow(a, beta - 1)) / (beta - 1);
        double B = (std::pow(b, beta) - std::pow(a, beta)) / beta;
        L[m] = b * A - B;
        R[m] = B - a * A;
    }
    double sc = std::pow(dt, beta - 1);
    for (std::size_t m = 1; m <= n; ++m) {
        // D is taken linear on [0, dt]: int_0^1 u^{beta-2} u du = 1/beta
        double left = m == 1 ? 1.0 / beta : R[m - 1];
        w.half[m] = sc * left;
        w.full[m] = sc * (left + (m < n ? L[m] : 0.0));
    }
    double st = std::pow(dt, beta);
    for (std::size_t m = 0; m < n; ++m) {
        double a = static_cast<double>(m), b = a + 1;
        double A = (std::pow(b, beta) - std::pow(a, beta)) / beta;
        double B = (std::pow(b, beta + 1) - std::pow(a, beta + 1)) / (beta + 1);
        w.tw[m] += st * (b * A - B);
        w.tw[m + 1] += st * (B - a * A);
    }
    return w;
}

std::size_t grid_steps(const HolderPath& phi, double t) {
    if (!phi.uniform()) throw ConfigError("path-grid variance needs a uniform path grid");
    double dt = phi.grid()[1] - phi.grid()[0];
    double nn = t / dt;
    auto n = static_cast<std::size_t>(std::llround(nn));
    if (n < 1 || std::abs(nn - static_cast<double>(n)) > 1e-6 || std::abs(phi.start()) > 1e-12)
        throw ConfigError("path-grid variance needs t on the path grid and a path starting at 0");
    return n;
}

// sum_j trap_j sum_{m=1}^{j} w_m (Q(a_j, b_{j-m}) - Q(a_j, b_j))
double grid_correction(const HolderPath& a, const HolderPath& b, std::size_t n, double dt, const GridWeights& w,
                       const SpatialKernel& q) {
    std::vector<double> C(n + 1, 0.0);
    std::vector<double> terms;
    for (std::size_t j = 1; j <= n; ++j) {
        terms.clear();
        auto aj = a.node(j);
        double qjj = q(aj, b.node(j));
        for (std::size_t m = 1; m <= j; ++m) {
            double wm = m == j ? w.half[m] : w.full[m];
            terms.push_back(wm * (q(aj, b.node(j - m)) - qjj));
        }
        C[j] = pairwise_sum(terms);
    }
    for (std::size_t j = 0; j <= n; ++j) C[j] *= (j == 0 || j == n) ? 0.5 * dt : dt;
    return pairwise_sum(C);
}

double grid_diagonal(const HolderPath& a, const HolderPath& b, std::size_t n, const GridWeights& w,
                     const SpatialKernel& q) {
    std::vector<double> terms(n + 1);
    for (std::size_t j = 0; j <= n; ++j) terms[j] = w.tw[j] * q(a.node(j), b.node(j));
    return pairwise_sum(terms);
}

double covariance_path_grid(const HolderPath& phi, const HolderPath& psi, double t, HurstParams h,
                            const SpatialKernel& q) {
    std::size_t n = grid_steps(phi, t);
    if (phi.dim() != psi.dim() || phi.dim() != q.dim) throw ConfigError("path-grid covariance: dimension mismatch");
    if (grid_steps(psi, t) != n || std::abs(phi.grid()[1] - psi.grid()[1]) > 1e-15)
        throw ConfigError("path-grid covariance needs both paths on the same grid");
    double dt = phi.grid()[1] - phi.grid()[0];
    double beta = 2.0 * h.h;
    auto w = grid_weights(n, dt, beta);
    double diag = grid_diagonal(phi, psi, n, w, q);
    if (q.kind == KernelKind::Constant) return beta * diag;
    double c1 = grid_correction(phi, psi, n, dt, w, q);
    double c2 = &phi == &psi ? c1 : grid_correction(psi, phi, n, dt, w, q);
    return beta * diag + 0.5 * beta * (beta - 1) * (c1 + c2);
}

bool use_graded(const HolderPath& phi, VarianceMethod m) {
    if (m == VarianceMethod::Graded) return true;
    if (m == VarianceMethod::PathGrid) return false;
    return phi.size() <= kGradedMaxNodes;
}

}  // namespace

double cross_moment(const HolderPath& phi, double t, double eps, double delta, HurstParams h,
                    const SpatialKernel& q, const QuadratureSpec& spec) {
    check_path(phi, t, "cross_moment");
    if (!(eps > 0 && delta > 0)) throw std::invalid_argument("cross_moment: need eps, delta > 0");
    std::vector<double> extra{eps + delta, std::abs(eps - delta)};
    auto kinks = kinks_of(phi, t);
    auto diag_f = [&](double theta) {
        double x = phi.value(theta);
        return q.eval1(x, x) * v_kernel_integral(theta, eps, delta, h);
    };
    auto cusps = cusps_of(phi, t, q);
    double diag = line_quad(diag_f, t, kRegular, kinks, joined(extra, cusps), spec).value_or_throw("cross_moment (diagonal)");
    if (q.kind == KernelKind::Constant) return diag;
    TriLayout L;
    L.kinks = kinks;
    L.cusps = cusps;
    L.r_extra = extra;
    L.theta_extra = extra;
    L.p_r0 = kRegular;
    L.p_theta0 = 0.0;  // the inner integral vanishes like a power of theta
    auto corr_f = [&](double theta, double r) {
        double x = phi.value(theta);
        return (q.eval1(x, phi.value(theta - r)) - q.eval1(x, x)) * v_kernel(r, eps, delta, h);
    };
    double corr = tri_quad(corr_f, t, L, spec).value_or_throw("cross_moment (correction)");
    return diag + corr;
}

double covariance_closed(const HolderPath& phi, const HolderPath& psi, double t, HurstParams h,
                         const SpatialKernel& q, const QuadratureSpec& spec, VarianceMethod method) {
    bool graded = use_graded(phi, method) && use_graded(psi, method);
    check_path(phi, t, "covariance_closed", graded);
    check_path(psi, t, "covariance_closed", graded);
    require_integral_gate(phi, h, q, "covariance_closed");
    require_integral_gate(psi, h, q, "covariance_closed");
    double beta = 2.0 * h.h;
    if (!graded) return covariance_path_grid(phi, psi, t, h, q);

    auto kinks = kinks_of(phi, t);
    for (double k : kinks_of(psi, t)) kinks.push_back(k);
    std::sort(kinks.begin(), kinks.end());
    kinks.erase(std::unique(kinks.begin(), kinks.end()), kinks.end());
    auto diag_f = [&](double theta) { return std::pow(theta, beta - 1) * q.eval1(phi.value(theta), psi.value(theta)); };
    auto cusps = joined(cusps_of(phi, t, q), cusps_of(psi, t, q));
    double diag = line_quad(diag_f, t, beta - 1, kinks, cusps, spec).value_or_throw("covariance_closed (diagonal)");
    if (q.kind == KernelKind::Constant) return beta * diag;
    double alpha = std::min(phi.alpha_est(), psi.alpha_est());
    TriLayout L;
    L.kinks = kinks;
    L.cusps = cusps;
    L.p_r0 = std::min(0.0, beta - 2.0 + q.gamma * alpha);
    L.p_theta0 = 0.0;  // the inner integral vanishes like a power of theta
    auto corr_f = [&](double theta, double r) {
        double a = phi.value(theta), b = psi.value(theta);
        double qab = q.eval1(a, b);
        double d = (q.eval1(a, psi.value(theta - r)) - qab) + (q.eval1(phi.value(theta - r), b) - qab);
        return std::pow(r, beta - 2.0) * d;
    };
    double corr = tri_quad(corr_f, t, L, spec).value_or_throw("covariance_closed (correction)");
    return beta * diag + 0.5 * beta * (beta - 1) * corr;
}

double variance_closed(const HolderPath& phi, double t, HurstParams h, const SpatialKernel& q,
                       const QuadratureSpec& spec, VarianceMethod method) {
    bool graded = use_graded(phi, method);
    check_path(phi, t, "variance_closed", graded);
    require_integral_gate(phi, h, q, "variance_closed");
    if (!graded) return covariance_path_grid(phi, phi, t, h, q);
    double beta = 2.0 * h.h;
    auto kinks = kinks_of(phi, t);
    auto diag_f = [&](double theta) {
        double x = phi.value(theta);
        return std::pow(theta, beta - 1) * q.eval1(x, x);
    };
    auto cusps = cusps_of(phi, t, q);
    double diag = line_quad(diag_f, t, beta - 1, kinks, cusps, spec).value_or_throw("variance_closed (diagonal)");
    if (q.kind == KernelKind::Constant) return beta * diag;
    TriLayout L;
    L.kinks = kinks;
    L.cusps = cusps;
    L.p_r0 = std::min(0.0, beta - 2.0 + q.gamma * phi.alpha_est());
    L.p_theta0 = 0.0;  // the inner integral vanishes like a power of theta
    auto corr_f = [&](double theta, double r) {
        double x = phi.value(theta);
        return std::pow(r, beta - 2.0) * (q.eval1(x, phi.value(theta - r)) - q.eval1(x, x));
    };
    double corr = tri_quad(corr_f, t, L, spec).value_or_throw("variance_closed (correction)");
    return beta * diag + beta * (beta - 1) * corr;
}

double increment_second_moment_eps(const HolderPath& phi, double s, double t, double eps, HurstParams h,
                                   const SpatialKernel& q, const QuadratureSpec& spec) {
    if (!(s >= 0 && t > s)) throw std::invalid_argument("increment_second_moment_eps: need 0 <= s < t");
    check_path(phi, t, "increment_second_moment_eps");
    // the increments of W in time are stationary, so the moment is a cross moment of the shifted path
    return cross_moment(phi.shifted(s, t - s), t - s, eps, eps, h, q, spec);
}

double mollified_time_cov(double d, double eps, HurstParams h) {
    if (!(eps > 0)) throw std::invalid_argument("mollified_time_cov: need eps > 0");
    return second_diff_pow(std::abs(d), 2.0 * eps, 2.0 * h.h) / (8.0 * eps * eps);
}

double discrete_moment(const HolderPath& phi, double t_phi, std::size_t n, const HolderPath& psi, double t_psi,
                       std::size_t m, double eps, HurstParams h, const SpatialKernel& q) {
    if (n < 1 || m < 1) throw std::invalid_argument("discrete_moment: need n, m >= 1");
    check_path(phi, t_phi, "discrete_moment");
    check_path(psi, t_psi, "discrete_moment");
    double hp = t_phi / n, hq = t_psi / m;
    std::vector<double> xs(n + 1), ys(m + 1), ws(n + 1), wq(m + 1);
    for (std::size_t i = 0; i <= n; ++i) {
        xs[i] = phi.value(i == n ? t_phi : hp * i);
        ws[i] = (i == 0 || i == n) ? 0.5 * hp : hp;
    }
    for (std::size_t k = 0; k <= m; ++k) {
        ys[k] = psi.value(k == m ? t_psi : hq * k);
        wq[k] = (k == 0 || k == m) ? 0.5 * hq : hq;
    }
    bool common = std::abs(hp - hq) <= 1e-14 * std::max(hp, hq);
    std::vector<double> lag;
    if (common) {
        std::size_t L = std::max(n, m);
        lag.resize(L + 1);
        for (std::size_t d = 0; d <= L; ++d) lag[d] = mollified_time_cov(hp * d, eps, h);
    }
    std::vector<double> rows(n + 1), row(m + 1);
    for (std::size_t i = 0; i <= n; ++i) {
        for (std::size_t k = 0; k <= m; ++k) {
            double kap = common ? lag[i > k ? i - k : k - i] : mollified_time_cov(hp * i - hq * k, eps, h);
            row[k] = wq[k] * q.eval1(xs[i], ys[k]) * kap;
        }
        rows[i] = ws[i] * pairwise_sum(row);
    }
    return pairwise_sum(rows);
}

}  // namespace frackac
