#pragma once

#include <cstddef>
#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "frackac/fk_solver.hpp"
#include "frackac/gaussian_field.hpp"
#include "frackac/kernels.hpp"
#include "frackac/parallel.hpp"
#include "frackac/path.hpp"
#include "frackac/spatial_kernels.hpp"

namespace frackac {

struct RateFit {
    double slope = 0.0;
    double intercept = 0.0;
    double r_squared = 0.0;
    std::vector<std::pair<double, double>> points;  // (log scale, log error)
};

// OLS of log(error) on log(scale); needs >= 4 positive points
RateFit rate_fit(const std::vector<std::pair<double, double>>& scale_error);

struct ConvergenceResult {
    RateFit fit;
    double target = 0.0;     // 2H + gamma alpha' - 1, alpha' = alpha_factor * min(1, alpha)
    double threshold = 0.0;  // target - slope_tol
    bool degenerate = false;
    bool pass = false;
    std::vector<double> eps, errors;
};

// |cross_moment(eps, eps) - variance_closed| over the ladder
ConvergenceResult convergence_experiment(const HolderPath& phi, double t, HurstParams h, const SpatialKernel& q,
                                         const std::vector<double>& eps_ladder, double alpha_factor = 0.95,
                                         double slope_tol = 0.15);

struct HolderResult {
    RateFit fit;
    double target = 0.0;
    double threshold = 0.0;  // pass when slope >= threshold (and, two-sided, <= target + tol)
    bool two_sided = false;
    bool degenerate = false;
    bool pass = false;
    std::string note;
    std::vector<double> lags, moments, errors;  // errors: stderr of MC moments (0 when exact)
};

// Slope of increment_second_moment_eps(phi, s, s + lag) against the lag; target 2H, two-sided tolerance.
HolderResult holder_integral(const HolderPath& phi, double s, const std::vector<double>& lags, double eps,
                             HurstParams h, const SpatialKernel& q, double tol = 0.02);

struct HolderSolutionParams {
    double s = 0.25;     // base time
    std::vector<double> lags{0.125, 0.0625, 0.03125, 0.015625, 0.0078125};
    double x = 0.0;
    double eps = 1.0 / 512;
    double dt = 1.0 / 1024;  // Brownian step = trapezoid step
    std::size_t n_pairs = 2000;
    double tol = 0.2;
    int workers = 0;
};

// E|u(s+lag, x) - u(s, x)|^2 by replica pairs (B1, B2) with common random numbers across lags. Each
// replica term uses the exact second moments of the trapezoid-discretized mollified integrals.
HolderResult holder_solution(const InitialCondition& u0, HurstParams h, const SpatialKernel& q,
                             const HolderSolutionParams& p, RngSeed seed);

struct CrossTimeResult {
    RateFit fit;
    double threshold = 0.0;  // 2H - 1 + gamma/2 - tol
    bool degenerate = false;
    bool pass = false;
    std::vector<double> lags, values;
};

// E^W |int_0^s W(dr, B^x_{t-r}) - int_0^s W(dr, B^x_{s-r})|^2 for t = s + lag
double cross_time_value(const BrownianPath& b, double s, double t, double x, HurstParams h, const SpatialKernel& q);
CrossTimeResult cross_time_bound_check(HurstParams h, const SpatialKernel& q, const BrownianPath& b, double s,
                                       const std::vector<double>& lags, double x = 0.0, double tol = 0.15);

struct TestFunction {
    std::function<double(double)> f, lap;  // phi and phi''
    double lo = -1, hi = 1;                // support
    static TestFunction bump(double center, double radius);  // exp(-1/(1-z^2)) bump
};

struct WeakResidual {
    double lhs = 0.0, rhs = 0.0;
    double residual = 0.0;     // |lhs - rhs|
    double signed_residual = 0.0;
    double mc_error = 0.0;     // stderr of the per-path residual
    double quad_error = 0.0;   // |R(h) - R(2h)| from the s-grid at double step
    double error_bar() const { return std::sqrt(mc_error * mc_error + quad_error * quad_error); }
    std::size_t n_paths = 0;
    std::size_t steps = 0;  // s-trapezoid intervals
    double quad_s = 0, quad_s_se = 0, quad_x = 0, quad_x_se = 0;  // mean R(h) - R(2h) per direction
};

// Weak form int (u(t) - u0) phi dx = int_0^t int u (1/2) phi'' dx ds + int_0^t int u phi Wdot^eps dx ds
// with u = u^eps from shared Brownian ensembles on the field's time grid.
WeakResidual weak_residual(const FieldSample& field, const InitialCondition& u0, const TestFunction& phi, double t,
                           double eps, std::size_t n_paths, const std::vector<double>& x_grid, RngSeed seed,
                           int workers = 0, double step_fraction = 0.25);

struct BoundCheck {
    std::string id;
    double max_ratio = 0.0;  // max lhs / rhs over the sweep
    double limit = 0.0;      // pass when max_ratio <= limit (explicit constants) or finite
    bool explicit_constant = false;
    bool pass = false;
    RateFit fit;  // decay fits, when applicable
    double fit_threshold = 0.0;
};

// Bounds for psi(s) = Q(phi_s, phi_s) and psi(r, s) = Q(phi_s, phi_{s-r}) - Q(phi_s, phi_s):
//  dctrl2: |int psi int_0^s V - 2H int psi s^{2H-1}| <= 4 |psi|_inf (eps+delta)^{2H}, 10x10 grid
//  e1:     correction-term deviation decays with exponent >= 2H + gamma * alpha' - 1 - 0.15
//  phi_ctrl, dct4_ctrl: finite ratios against the stated functional forms
// lhs = |int psi G_{eps,delta} - 2H int psi s^{2H-1}|, rhs = constant |psi|_inf (eps+delta)^{2H}
BoundCheck dctrl2_check(HurstParams h, const SpatialKernel& q, const HolderPath& phi, double t, double constant = 4.0);
std::vector<BoundCheck> psi_bound_suite(HurstParams h, const SpatialKernel& q, const HolderPath& phi, double t);

// Appendix kernel bounds on n random (r, eps, beta/H) draws; max ratios
struct KernelBoundReport {
    double f_ratio = 0.0;       // max |f_eps| / (64 r^{beta-2})
    double g_small_ratio = 0.0;  // max |g_eps| / (16 u^{2H-2}), u < 2 eps
    double g_small_split_ratio = 0.0;  // u < 2 eps against u^{2H-2} + |u-eps|^{2H-1}/u (singular at u = eps)
    double g_large_ratio = 0.0;  // max |g_eps| / ((1-2H) u^{2H-2}), u > 2 eps
    double g_large_shifted_ratio = 0.0;  // same with (u - eps)^{2H-2}, the bound convexity actually gives
    double limit_slope = 0.0;    // slope of |f_eps - limit| vs eps at fixed r
    std::size_t n = 0;
};
KernelBoundReport kernel_bound_suite(std::size_t n, RngSeed seed, double f_const = 64, double g_small_const = 16,
                                     double g_large_const = 1);

}  // namespace frackac
