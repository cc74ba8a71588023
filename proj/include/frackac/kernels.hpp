#pragma once

#include <functional>
#include <span>

#include "frackac/path.hpp"
#include "frackac/quadrature.hpp"

namespace frackac {

struct HurstParams {
    double h;
    explicit HurstParams(double value);
};

using ScalarFn = std::function<double(double)>;

// sign(0) = 0
inline double sgn(double x) { return (x > 0) - (x < 0); }

// |x+c|^q + |x-c|^q - 2|x|^q, evaluated without cancellation for c << |x|.
double second_diff_pow(double x, double c, double q);

double r_h(double t, double s, HurstParams h);

// Mollified temporal kernel: E(I_eps I_delta) = int_0^t int_0^theta Q V dr dtheta.
// V(r) = (|r+e+d|^{2H} + |r-e-d|^{2H} - |r+e-d|^{2H} - |r-e+d|^{2H}) / (4 e d)
double v_kernel(double r, double eps, double delta, HurstParams h);
// int_0^s V(r) dr in closed form
double v_kernel_integral(double s, double eps, double delta, HurstParams h);
// int_0^t int_0^theta V(r) dr dtheta in closed form (the Q = 1 cross moment)
double v_kernel_double_integral(double t, double eps, double delta, HurstParams h);

// (|r-2e|^b + (r+2e)^b - 2 r^b) / (4 e^2); tends to b(b-1) r^{b-2}
double f_eps(double r, double eps, double beta);
double f_eps_limit(double r, double beta);

// ((u+e)^{2H-1} - sign(u-e)|u-e|^{2H-1}) / (2e)
double g_eps(double u, double eps, HurstParams h);

// <1_[0,s] phi, 1_[0,t]>; breaks lists discontinuities of phi
double inner_step(const ScalarFn& phi, double s, double t, HurstParams h, std::span<const double> breaks = {},
                  const QuadratureSpec& spec = {});
double inner_step(const HolderPath& phi, double s, double t, HurstParams h, const QuadratureSpec& spec = {});

// <1_[0,s] phi, 1_[u,t]> for 0 <= u < s < t
double inner_interval(const ScalarFn& phi, double s, double u, double t, HurstParams h,
                      std::span<const double> breaks = {}, const QuadratureSpec& spec = {});
double inner_interval(const HolderPath& phi, double s, double u, double t, HurstParams h,
                      const QuadratureSpec& spec = {});

// lim_{e->0} <1_[0,s] phi, (1/2e) 1_[s-e,s+e]>
double mollified_inner_limit(const HolderPath& phi, double s, HurstParams h, const QuadratureSpec& spec = {});
// the same inner product at finite e: H int_0^s phi(s-u) g_eps(u) du
double mollified_inner_eps(const HolderPath& phi, double s, double eps, HurstParams h,
                           const QuadratureSpec& spec = {});
// both entries mollified: (1/2) int_0^s phi(s-r) f_eps(r, e, 2H) dr
double double_mollified_inner_eps(const HolderPath& phi, double s, double eps, HurstParams h,
                                  const QuadratureSpec& spec = {});

// int_0^s phi(r) f_eps(r, e, b) dr and its e -> 0 limit
double phi_f_integral(const HolderPath& phi, double s, double eps, double beta, const QuadratureSpec& spec = {});
double phi_f_limit(const HolderPath& phi, double s, double beta, const QuadratureSpec& spec = {});

}  // namespace frackac
