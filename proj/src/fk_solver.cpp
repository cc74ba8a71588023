#include "frackac/fk_solver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <mutex>
#include <sstream>
#include <stdexcept>

#include <Eigen/Dense>

#include "frackac/errors.hpp"
#include "frackac/stoch_integral.hpp"

namespace frackac {

// Hoelder order 1/2- by law; the data estimate on a finite grid runs low and
// would trip the integral gate that the solver gate already covers.
BrownianPath::BrownianPath(HolderPath p) : path(std::move(p).with_alpha(0.499)) {
    sup_norm = path.sup_norm();
    holder_norm = path.holder_seminorm(kHolderOrder);
}

namespace {

std::size_t step_count(double t_max, double dt) {
    if (!(dt > 0) || !(t_max > 0)) throw ConfigError("Brownian paths need dt > 0 and t_max > 0");
    double n = std::round(t_max / dt);
    if (n < 1 || n > 1048576.0) throw ConfigError("Brownian paths: t_max / dt must lie in [1, 2^20]");
    return static_cast<std::size_t>(n);
}

int workers_of(const FkOptions& o) { return o.workers > 0 ? o.workers : default_workers(); }

double path_dt(const FkOptions& o, double t) { return o.dt > 0 ? o.dt : std::ldexp(t, -10); }

void check_u0(const InitialCondition& u0) {
    if (!u0.f) throw ConfigError("initial condition has no function");
    if (!std::isfinite(u0.bound)) throw ConfigError("initial condition must be bounded");
}

std::vector<double> endpoint(const BrownianPath& b, double t, std::span<const double> x) {
    std::vector<double> v(x.size());
    b.path.value(t, v);
    for (std::size_t k = 0; k < v.size(); ++k) v[k] += x[k];
    return v;
}

void check_dim(std::span<const double> x, const SpatialKernel& q) {
    if (static_cast<int>(x.size()) != q.dim) throw ConfigError("point dimension does not match the kernel");
}

}  // namespace

BrownianPath brownian_path(RngSeed seed, double t_max, double dt, int d) {
    if (d < 1) throw ConfigError("Brownian paths need d >= 1");
    std::size_t n = step_count(t_max, dt);
    double h = t_max / static_cast<double>(n);
    std::vector<double> grid(n + 1), vals((n + 1) * static_cast<std::size_t>(d), 0.0);
    std::vector<double> z(n * static_cast<std::size_t>(d));
    NormalStream ns(seed);
    ns.fill(z);
    double sd = std::sqrt(h);
    for (std::size_t i = 0; i <= n; ++i) grid[i] = i == n ? t_max : h * static_cast<double>(i);
    for (std::size_t i = 1; i <= n; ++i)
        for (int k = 0; k < d; ++k) {
            std::size_t a = i * d + k;
            vals[a] = vals[a - d] + sd * z[(i - 1) * d + k];
        }
    return BrownianPath(HolderPath(std::move(grid), std::move(vals), d));
}

std::vector<BrownianPath> sample_brownian(std::size_t n, double t_max, double dt, int d, RngSeed seed) {
    std::vector<BrownianPath> out;
    out.reserve(n);
    for (std::size_t i = 0; i < n; ++i) out.push_back(brownian_path(seed.child(i), t_max, dt, d));
    return out;
}

InitialCondition InitialCondition::constant(double c) {
    InitialCondition u;
    u.f = [c](std::span<const double>) { return c; };
    u.bound = std::abs(c);
    u.lipschitz = 0.0;
    std::ostringstream os;
    os << "constant(" << c << ")";
    u.name = os.str();
    return u;
}

InitialCondition InitialCondition::gaussian(double a) {
    if (!(a > 0)) throw ConfigError("gaussian initial condition needs a > 0");
    InitialCondition u;
    u.f = [a](std::span<const double> y) {
        double r2 = 0.0;
        for (double v : y) r2 += v * v;
        return std::exp(-a * r2);
    };
    u.bound = 1.0;
    u.lipschitz = std::sqrt(2.0 * a / std::exp(1.0));
    std::ostringstream os;
    os << "gaussian(" << a << ")";
    u.name = os.str();
    return u;
}

InitialCondition InitialCondition::linear() {
    InitialCondition u;
    u.f = [](std::span<const double> y) { return y[0]; };
    u.bound = std::numeric_limits<double>::infinity();
    u.lipschitz = 1.0;
    u.name = "linear";
    return u;
}

InitialCondition InitialCondition::cosine(double k) {
    InitialCondition u;
    u.f = [k](std::span<const double> y) { return std::cos(k * y[0]); };
    u.bound = 1.0;
    u.lipschitz = std::abs(k);
    std::ostringstream os;
    os << "cosine(" << k << ")";
    u.name = os.str();
    return u;
}

double sigma2_along_path(const BrownianPath& b, double t, std::span<const double> x, HurstParams h,
                         const SpatialKernel& q) {
    require_solver_gate(h.h, q);
    check_dim(x, q);
    if (static_cast<std::size_t>(b.path.dim()) != x.size()) throw ConfigError("path and point dimensions differ");
    if (!(t > 0) || t > b.path.horizon() * (1 + 1e-12)) throw CoverageError("sigma2_along_path: t outside the path");
    if (q.kind == KernelKind::Constant) return q.scale * std::pow(t, 2.0 * h.h);
    HolderPath phi = b.path.reversed(t, x);
    return variance_closed(phi, t, h, q, stoch_default_spec(), VarianceMethod::PathGrid);
}

double sigma2_along_path(const BrownianPath& b, double t, double x, HurstParams h, const SpatialKernel& q) {
    return sigma2_along_path(b, t, std::span<const double>(&x, 1), h, q);
}

MCEstimate u_mean(double t, std::span<const double> x, const InitialCondition& u0, std::size_t n_paths,
                  HurstParams h, const SpatialKernel& q, RngSeed seed, const FkOptions& opt) {
    check_u0(u0);
    check_dim(x, q);
    require_solver_gate(h.h, q);
    double dt = path_dt(opt, t);
    std::vector<double> s(n_paths);
    parallel_for(n_paths, workers_of(opt), [&](std::size_t i) {
        BrownianPath b = brownian_path(seed.child(i), t, dt, q.dim);
        double e = 0.5 * sigma2_along_path(b, t, x, h, q);
        s[i] = e > opt.overflow ? std::nan("") : u0(endpoint(b, t, x)) * std::exp(e);
    });
    return summarize(s, seed);
}

MCEstimate u_second_moment(double t, std::span<const double> x, std::span<const double> y,
                           const InitialCondition& u0, std::size_t n_pairs, HurstParams h, const SpatialKernel& q,
                           RngSeed seed, const FkOptions& opt) {
    check_u0(u0);
    check_dim(x, q);
    check_dim(y, q);
    require_solver_gate(h.h, q);
    double dt = path_dt(opt, t);
    std::vector<double> s(n_pairs);
    parallel_for(n_pairs, workers_of(opt), [&](std::size_t i) {
        BrownianPath b1 = brownian_path(seed.child(2 * i), t, dt, q.dim);
        BrownianPath b2 = brownian_path(seed.child(2 * i + 1), t, dt, q.dim);
        double e;
        if (q.kind == KernelKind::Constant) {
            e = 2.0 * q.scale * std::pow(t, 2.0 * h.h);
        } else {
            HolderPath p1 = b1.path.reversed(t, x), p2 = b2.path.reversed(t, y);
            auto sp = stoch_default_spec();
            e = 0.5 * variance_closed(p1, t, h, q, sp, VarianceMethod::PathGrid) +
                0.5 * variance_closed(p2, t, h, q, sp, VarianceMethod::PathGrid) +
                covariance_closed(p1, p2, t, h, q, sp, VarianceMethod::PathGrid);
        }
        s[i] = e > opt.overflow ? std::nan("") : u0(endpoint(b1, t, x)) * u0(endpoint(b2, t, y)) * std::exp(e);
    });
    return summarize(s, seed);
}

MCEstimate u_pathwise_eps(const FieldSample& field, double t, double x, const InitialCondition& u0,
                          std::size_t n_paths, double eps, RngSeed seed, const FkOptions& opt) {
    check_u0(u0);
    double dt = path_dt(opt, t);
    std::vector<double> s(n_paths);
    double xs[1] = {x};
    parallel_for(n_paths, workers_of(opt), [&](std::size_t i) {
        BrownianPath b = brownian_path(seed.child(i), t, dt, 1);
        HolderPath phi = b.path.reversed(t, xs);
        double e = integral_eps(field, phi, t, eps);
        s[i] = e > opt.overflow ? std::nan("") : u0(endpoint(b, t, xs)) * std::exp(e);
    });
    return summarize(s, seed);
}

namespace {

struct HermiteRule {
    std::vector<double> x, w;  // probabilists' nodes, weights summing to 1
};

const HermiteRule& hermite(int n) {
    static std::mutex mu;
    static std::map<int, HermiteRule> cache;
    std::lock_guard<std::mutex> lock(mu);
    auto it = cache.find(n);
    if (it != cache.end()) return it->second;
    // Golub-Welsch on the Jacobi matrix of He_n
    Eigen::MatrixXd J = Eigen::MatrixXd::Zero(n, n);
    for (int k = 1; k < n; ++k) J(k, k - 1) = J(k - 1, k) = std::sqrt(static_cast<double>(k));
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(J);
    HermiteRule r;
    for (int k = 0; k < n; ++k) {
        r.x.push_back(es.eigenvalues()(k));
        double v = es.eigenvectors()(0, k);
        r.w.push_back(v * v);
    }
    return cache.emplace(n, std::move(r)).first->second;
}

double gh_tensor(const InitialCondition& u0, double t, std::span<const double> x, int n) {
    const HermiteRule& R = hermite(n);
    std::size_t d = x.size();
    std::vector<int> idx(d, 0);
    std::vector<double> y(d), terms;
    double st = std::sqrt(t);
    while (true) {
        double w = 1.0;
        for (std::size_t k = 0; k < d; ++k) {
            y[k] = x[k] + st * R.x[idx[k]];
            w *= R.w[idx[k]];
        }
        terms.push_back(w * u0(y));
        std::size_t k = 0;
        while (k < d && ++idx[k] == n) idx[k++] = 0;
        if (k == d) break;
    }
    return pairwise_sum(terms);
}

}  // namespace

double heat_semigroup(const InitialCondition& u0, double t, std::span<const double> x) {
    if (!(t > 0)) throw std::invalid_argument("heat_semigroup: need t > 0");
    if (x.empty() || x.size() > 3) throw ConfigError("heat_semigroup: 1 <= d <= 3");
    int n1 = x.size() == 1 ? 60 : (x.size() == 2 ? 32 : 20);
    int n2 = x.size() == 1 ? 120 : (x.size() == 2 ? 48 : 28);
    double a = gh_tensor(u0, t, x, n1), b = gh_tensor(u0, t, x, n2);
    if (!(std::abs(a - b) <= 1e-8))
        throw NumericalError("heat_semigroup: Gauss-Hermite rules disagree beyond 1e-8", b, std::abs(a - b));
    return b;
}

double heat_semigroup(const InitialCondition& u0, double t, double x) {
    return heat_semigroup(u0, t, std::span<const double>(&x, 1));
}

WickMoments wick_moments(double t, std::span<const double> x, std::span<const double> y, const InitialCondition& u0,
                         std::size_t n_pairs, HurstParams h, const SpatialKernel& q, RngSeed seed,
                         const FkOptions& opt, bool with_second) {
    check_u0(u0);
    check_dim(x, q);
    check_dim(y, q);
    require_solver_gate(h.h, q);
    double dt = path_dt(opt, t);
    std::vector<double> m(n_pairs), s(with_second ? n_pairs : 0);
    parallel_for(n_pairs, workers_of(opt), [&](std::size_t i) {
        BrownianPath b1 = brownian_path(seed.child(2 * i), t, dt, q.dim);
        double a = u0(endpoint(b1, t, x));
        m[i] = a;
        if (!with_second) return;
        BrownianPath b2 = brownian_path(seed.child(2 * i + 1), t, dt, q.dim);
        double c;
        if (q.kind == KernelKind::Constant) {
            c = q.scale * std::pow(t, 2.0 * h.h);
        } else {
            HolderPath p1 = b1.path.reversed(t, x), p2 = b2.path.reversed(t, y);
            c = covariance_closed(p1, p2, t, h, q, stoch_default_spec(), VarianceMethod::PathGrid);
        }
        s[i] = c > opt.overflow ? std::nan("") : u0(endpoint(b1, t, x)) * u0(endpoint(b2, t, y)) * std::exp(c);
    });
    WickMoments out;
    out.mean_x = summarize(m, seed);
    if (with_second) out.second_moment_xy = summarize(s, seed);
    else out.second_moment_xy.seed = seed;
    return out;
}

double signed_indicator(std::span<const double> a, std::span<const double> z) {
    if (a.size() != z.size()) throw std::invalid_argument("signed_indicator: dimension mismatch");
    double v = 1.0;
    for (std::size_t k = 0; k < a.size(); ++k) {
        if (a[k] >= 0) v *= (z[k] >= 0 && z[k] <= a[k]) ? 1.0 : 0.0;
        else v *= (z[k] >= a[k] && z[k] <= 0) ? -1.0 : 0.0;
    }
    return v;
}

MCEstimate chaos_coeff(std::size_t n, double t, std::span<const double> x, const std::vector<ChaosPoint>& pts,
                       const InitialCondition& u0, std::size_t n_paths, HurstParams h, const SpatialKernel& q,
                       RngSeed seed, const FkOptions& opt) {
    if (n > 3) throw ConfigError("chaos_coeff: n > 3 is refused");
    if (pts.size() != n) throw ConfigError("chaos_coeff: need exactly n points");
    for (const auto& p : pts) {
        if (!(p.r > 0 && p.r < t)) throw ConfigError("chaos_coeff: each r_i must lie in (0, t)");
        if (p.z.size() != x.size()) throw ConfigError("chaos_coeff: point dimension mismatch");
    }
    check_u0(u0);
    check_dim(x, q);
    require_solver_gate(h.h, q);
    double dt = path_dt(opt, t);
    std::vector<double> s(n_paths);
    parallel_for(n_paths, workers_of(opt), [&](std::size_t i) {
        BrownianPath b = brownian_path(seed.child(i), t, dt, q.dim);
        double prod = 1.0;
        for (const auto& p : pts) {
            // g(r, z) = 1_[0,t](r) 1_[0, B^x_{t-r}](z)
            prod *= signed_indicator(endpoint(b, t - p.r, x), p.z);
        }
        if (prod == 0.0) {
            s[i] = 0.0;
            return;
        }
        double e = 0.5 * sigma2_along_path(b, t, x, h, q);
        s[i] = e > opt.overflow ? std::nan("") : u0(endpoint(b, t, x)) * prod * std::exp(e);
    });
    return summarize(s, seed);
}

}  // namespace frackac
