#pragma once

#include <functional>
#include <span>
#include <vector>

namespace frackac {

struct QuadratureSpec {
    int n_panels = 32;
    // <= 0 selects geometric meshes at singular ends; > 0 forces the algebraic mesh (i/n)^g.
    double grading_exponent = 0.0;
    int rule_order = 10;  // Gauss-Legendre points per panel: 7, 10, 15, 20, 25 or 30
    double target_abs_tol = 1e-10;
};

struct QuadResult {
    double value = 0.0;
    double error_estimate = 0.0;
    bool converged = false;

    // Throws NumericalError carrying the best value and estimate.
    double value_or_throw(const char* what) const;
};

using Integrand = std::function<double(double)>;
using Integrand2 = std::function<double(double, double)>;

// Exponent tag for an endpoint where the integrand is smooth (no grading).
inline constexpr double kRegular = 1.0;

double grading_for(double p, const QuadratureSpec& spec);

// A sub-interval graded toward one of its ends. p is the behaviour exponent
// at that end; p >= kRegular means a uniform mesh.
struct Piece {
    double a = 0.0, b = 0.0;
    double p = kRegular;
    bool toward_a = true;
    int mult = 1;  // panel multiplier relative to the driver's n
};

// Splits [breaks[j], breaks[j+1]] at the midpoint and grades each half toward
// its breakpoint using exps[j]. Zero-length segments are dropped.
std::vector<Piece> make_pieces(std::span<const double> breaks, std::span<const double> exps);

// Fixed composite rule with n panels per piece (no error estimate).
double fixed_rule(const Integrand& f, std::span<const Piece> pieces, int n, const QuadratureSpec& spec);

// Calls visit(x, w) for every node of the fixed composite rule.
void for_each_node(std::span<const Piece> pieces, int n, const QuadratureSpec& spec,
                   const std::function<void(double, double)>& visit);

// Evaluates eval(n) and eval(2n); if they differ by more than the target,
// doubles once more. The error estimate is the last difference.
QuadResult refine(const std::function<double(int)>& eval, const QuadratureSpec& spec);

// Integral over [a,b] of f with |f(r)| <= C (r-a)^p near a, -1 < p <= 0.
QuadResult singular_quad(const Integrand& f, double a, double b, double p, const QuadratureSpec& spec = {});

// Same driver for a general piecewise layout.
QuadResult piecewise_quad(const Integrand& f, std::span<const double> breaks, std::span<const double> exps,
                          const QuadratureSpec& spec = {});

struct DoubleQuadOptions {
    double p_r0 = 0.0;          // behaviour of the inner integrand at r = 0
    double p_rtheta = 0.0;      // ... at r = theta
    double p_theta0 = 0.0;      // behaviour of the outer integrand at theta = 0
    std::vector<double> r_breaks;      // extra inner breakpoints (kinks), used when inside (0, theta)
    std::vector<double> theta_breaks;  // extra outer breakpoints
    double p_break = 0.0;       // behaviour at the extra breakpoints
};

// Integral over {0 < r < theta < t} of f(theta, r). Error estimate compares
// n and 2n panels on both levels, with one further doubling if needed.
QuadResult double_quad(const Integrand2& f, double t, const DoubleQuadOptions& opt, const QuadratureSpec& spec = {});

}  // namespace frackac
