#include "frackac/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>
#include <vector>

#include "frackac/errors.hpp"

namespace frackac {

HurstParams::HurstParams(double value) : h(value) {
    if (!(value > 0.0 && value < 0.5)) throw std::invalid_argument("h must lie in (0, 1/2)");
}

double second_diff_pow(double x, double c, double q) {
    x = std::abs(x);
    c = std::abs(c);
    if (c == 0.0) return 0.0;
    if (x > c) {
        double z = c / x;
        return std::pow(x, q) * (std::expm1(q * std::log1p(z)) + std::expm1(q * std::log1p(-z)));
    }
    return std::pow(x + c, q) + std::pow(c - x, q) - 2.0 * std::pow(x, q);
}

double r_h(double t, double s, HurstParams h) {
    double b = 2.0 * h.h;
    return 0.5 * (std::pow(std::abs(t), b) + std::pow(std::abs(s), b) - std::pow(std::abs(t - s), b));
}

namespace {

void require_pos(double v, const char* name) {
    if (!(v > 0.0)) throw std::invalid_argument(std::string(name) + " must be > 0");
}

// odd antiderivative of |x|^q and its even antiderivative
double F1(double x, double q) { return sgn(x) * std::pow(std::abs(x), q + 1.0) / (q + 1.0); }
double K2(double x, double q) { return std::pow(std::abs(x), q + 2.0) / ((q + 1.0) * (q + 2.0)); }

// F1(s+c) + F1(s-c) - 2 F1(s), stable for small c
double second_diff_F1(double s, double c, double q) {
    if (c == 0.0) return 0.0;
    if (s > c) {
        double z = c / s;
        return F1(s, q) * (std::expm1((q + 1.0) * std::log1p(z)) + std::expm1((q + 1.0) * std::log1p(-z)));
    }
    return F1(s + c, q) + F1(s - c, q) - 2.0 * F1(s, q);
}

double second_diff_K2(double t, double c, double q) {
    if (c == 0.0) return 0.0;
    if (t > c) {
        double z = c / t;
        return K2(t, q) * (std::expm1((q + 2.0) * std::log1p(z)) + std::expm1((q + 2.0) * std::log1p(-z)));
    }
    return K2(t + c, q) + K2(t - c, q) - 2.0 * K2(t, q);
}

// Sorted breakpoints with singular exponents; duplicates keep the stronger singularity.
struct Breaks {
    std::vector<std::pair<double, double>> pts;
    void add(double x, double p) { pts.emplace_back(x, p); }
    void build(double lo, double hi, std::vector<double>& b, std::vector<double>& e) {
        std::sort(pts.begin(), pts.end());
        double tol = 1e-14 * std::max(1.0, std::abs(hi - lo));
        for (auto [x, p] : pts) {
            if (x < lo - tol || x > hi + tol) continue;
            x = std::clamp(x, lo, hi);
            if (!b.empty() && std::abs(x - b.back()) <= tol) {
                e.back() = std::min(e.back(), p);
            } else {
                b.push_back(x);
                e.push_back(p);
            }
        }
    }
};

double run(const Integrand& f, Breaks& br, double lo, double hi, const QuadratureSpec& spec, const char* what) {
    std::vector<double> b, e;
    br.add(lo, kRegular);
    br.add(hi, kRegular);
    br.build(lo, hi, b, e);
    return piecewise_quad(f, b, e, spec).value_or_throw(what);
}

ScalarFn as_fn(const HolderPath& phi) {
    if (phi.dim() != 1) throw std::invalid_argument("kernels: scalar-valued path required");
    return [&phi](double r) { return phi.value(r); };
}

// int_lo^hi psi(u) k(u - c) du with k(v) = |v|^p, or sgn(v) |v|^p when odd.
// Each side of c is integrated in v = |u - c| so the singular point sits at
// the origin of the local variable.
double sing_conv(const ScalarFn& psi, double c, double lo, double hi, double p, bool odd,
                 std::span<const double> kinks, const QuadratureSpec& spec, const char* what) {
    double total = 0.0;
    for (int side : {1, -1}) {
        double v0 = side > 0 ? std::max(lo - c, 0.0) : std::max(c - hi, 0.0);
        double v1 = side > 0 ? hi - c : c - lo;
        if (!(v1 > v0)) continue;
        Breaks br;
        // v0 > 0 is still near-singular when small against v1
        br.add(v0, v0 == 0.0 ? p : 0.0);
        for (double k : kinks) {
            double v = side * (k - c);
            if (v > v0 && v < v1) br.add(v, kRegular);
        }
        auto f = [&](double v) { return v == 0.0 ? 0.0 : psi(c + side * v) * std::pow(v, p); };
        double part = run(f, br, v0, v1, spec, what);
        total += (odd && side < 0) ? -part : part;
    }
    return total;
}

std::vector<double> path_kinks(const HolderPath& phi, double s) {
    std::vector<double> k;
    for (double g : phi.grid())
        if (g > 0.0 && g < s) k.push_back(g);
    return k;
}

void check_horizon(const HolderPath& phi, double s) {
    if (s > phi.horizon() * (1 + 1e-12) || phi.start() > 0.0)
        throw CoverageError("kernels: path does not cover [0, s]");
}

}  // namespace

double v_kernel(double r, double eps, double delta, HurstParams h) {
    require_pos(eps, "eps");
    require_pos(delta, "delta");
    double b2 = 2.0 * h.h;
    double a = eps + delta, b = std::abs(eps - delta);
    return (second_diff_pow(r, a, b2) - second_diff_pow(r, b, b2)) / (4.0 * eps * delta);
}

double v_kernel_integral(double s, double eps, double delta, HurstParams h) {
    require_pos(eps, "eps");
    require_pos(delta, "delta");
    if (s < 0) throw std::invalid_argument("v_kernel_integral: need s >= 0");
    double q = 2.0 * h.h;
    double a = eps + delta, b = std::abs(eps - delta);
    return (second_diff_F1(s, a, q) - second_diff_F1(s, b, q)) / (4.0 * eps * delta);
}

double v_kernel_double_integral(double t, double eps, double delta, HurstParams h) {
    require_pos(eps, "eps");
    require_pos(delta, "delta");
    if (t < 0) throw std::invalid_argument("v_kernel_double_integral: need t >= 0");
    double q = 2.0 * h.h;
    double a = eps + delta, b = std::abs(eps - delta);
    double v = second_diff_K2(t, a, q) - second_diff_K2(t, b, q) - 2.0 * (K2(a, q) - K2(b, q));
    return v / (4.0 * eps * delta);
}

double f_eps(double r, double eps, double beta) {
    require_pos(r, "r");
    require_pos(eps, "eps");
    if (!(beta > 0.0 && beta < 2.0)) throw std::invalid_argument("beta must lie in (0, 2)");
    return second_diff_pow(r, 2.0 * eps, beta) / (4.0 * eps * eps);
}

double f_eps_limit(double r, double beta) { return beta * (beta - 1.0) * std::pow(r, beta - 2.0); }

double g_eps(double u, double eps, HurstParams h) {
    require_pos(u, "u");
    require_pos(eps, "eps");
    double p = 2.0 * h.h - 1.0;
    double d = u - eps;
    double second = d == 0.0 ? 0.0 : sgn(d) * std::pow(std::abs(d), p);
    return (std::pow(u + eps, p) - second) / (2.0 * eps);
}

double inner_step(const ScalarFn& phi, double s, double t, HurstParams h, std::span<const double> breaks,
                  const QuadratureSpec& spec) {
    require_pos(s, "s");
    require_pos(t, "t");
    double p = 2.0 * h.h - 1.0;
    // phi(r) (r^p + sgn(t-r)|t-r|^p) on [0, s]
    double a = sing_conv(phi, 0.0, 0.0, s, p, false, breaks, spec, "inner_step");
    double b = sing_conv(phi, t, 0.0, s, p, true, breaks, spec, "inner_step");
    return h.h * (a - b);
}

double inner_step(const HolderPath& phi, double s, double t, HurstParams h, const QuadratureSpec& spec) {
    check_horizon(phi, s);
    auto k = path_kinks(phi, s);
    return inner_step(as_fn(phi), s, t, h, k, spec);
}

double inner_interval(const ScalarFn& phi, double s, double u, double t, HurstParams h,
                      std::span<const double> breaks, const QuadratureSpec& spec) {
    if (!(u >= 0.0 && u < s && s < t)) throw std::invalid_argument("inner_interval: need 0 <= u < s < t");
    double p = 2.0 * h.h - 1.0;
    // phi(r) ((t-r)^p - sgn(u-r)|u-r|^p) on [0, s]
    double a = sing_conv(phi, t, 0.0, s, p, false, breaks, spec, "inner_interval");
    double b = sing_conv(phi, u, 0.0, s, p, true, breaks, spec, "inner_interval");
    return h.h * (a + b);
}

double inner_interval(const HolderPath& phi, double s, double u, double t, HurstParams h,
                      const QuadratureSpec& spec) {
    check_horizon(phi, s);
    auto k = path_kinks(phi, s);
    return inner_interval(as_fn(phi), s, u, t, h, k, spec);
}

double mollified_inner_limit(const HolderPath& phi, double s, HurstParams h, const QuadratureSpec& spec) {
    require_pos(s, "s");
    check_horizon(phi, s);
    double a = phi.alpha_est();
    if (!(a > 1.0 - 2.0 * h.h)) {
        std::ostringstream os;
        os << "mollified_inner_limit: need alpha > 1 - 2H (alpha = " << a << ", 1 - 2H = " << 1.0 - 2.0 * h.h << ")";
        throw GateError(os.str());
    }
    double H = h.h;
    double ps = phi.value(s);
    auto f = [&](double r) { return (phi.value(s - r) - ps) * std::pow(r, 2.0 * H - 2.0); };
    Breaks br;
    br.add(0.0, std::min(0.0, 2.0 * H - 2.0 + a));
    double corr = run(f, br, 0.0, s, spec, "mollified_inner_limit");
    return ps * H * std::pow(s, 2.0 * H - 1.0) + H * (2.0 * H - 1.0) * corr;
}

double mollified_inner_eps(const HolderPath& phi, double s, double eps, HurstParams h, const QuadratureSpec& spec) {
    require_pos(s, "s");
    require_pos(eps, "eps");
    check_horizon(phi, s);
    double p = 2.0 * h.h - 1.0;
    ScalarFn psi = [&](double u) { return phi.value(s - u); };
    std::vector<double> k;
    for (double g : path_kinks(phi, s)) k.push_back(s - g);
    // g_eps(u) = ((u+e)^p - sgn(u-e)|u-e|^p) / 2e
    double a = sing_conv(psi, -eps, 0.0, s, p, false, k, spec, "mollified_inner_eps");
    double b = sing_conv(psi, eps, 0.0, s, p, true, k, spec, "mollified_inner_eps");
    return h.h * (a - b) / (2.0 * eps);
}

double double_mollified_inner_eps(const HolderPath& phi, double s, double eps, HurstParams h,
                                  const QuadratureSpec& spec) {
    require_pos(s, "s");
    require_pos(eps, "eps");
    check_horizon(phi, s);
    double b = 2.0 * h.h;
    auto f = [&](double r) {
        double fr = r == 0.0 ? 2.0 * std::pow(2.0 * eps, b) / (4.0 * eps * eps) : f_eps(r, eps, b);
        return phi.value(s - r) * fr;
    };
    Breaks br;
    br.add(0.0, 0.0);
    br.add(2.0 * eps, 0.0);
    return 0.5 * run(f, br, 0.0, s, spec, "double_mollified_inner_eps");
}

double phi_f_integral(const HolderPath& phi, double s, double eps, double beta, const QuadratureSpec& spec) {
    require_pos(s, "s");
    require_pos(eps, "eps");
    check_horizon(phi, s);
    auto f = [&](double r) {
        double fr = r == 0.0 ? 2.0 * std::pow(2.0 * eps, beta) / (4.0 * eps * eps) : f_eps(r, eps, beta);
        return phi.value(r) * fr;
    };
    Breaks br;
    br.add(0.0, 0.0);
    br.add(2.0 * eps, 0.0);
    return run(f, br, 0.0, s, spec, "phi_f_integral");
}

double phi_f_limit(const HolderPath& phi, double s, double beta, const QuadratureSpec& spec) {
    require_pos(s, "s");
    check_horizon(phi, s);
    double a = phi.alpha_est();
    if (!(a + beta > 1.0)) throw GateError("phi_f_limit: need alpha + beta > 1");
    double p0 = phi.value(0.0);
    auto f = [&](double r) { return r == 0.0 ? 0.0 : (phi.value(r) - p0) * std::pow(r, beta - 2.0); };
    Breaks br;
    br.add(0.0, std::min(0.0, beta - 2.0 + a));
    double corr = run(f, br, 0.0, s, spec, "phi_f_limit");
    return p0 * beta * std::pow(s, beta - 1.0) + beta * (beta - 1.0) * corr;
}

}  // namespace frackac
