#pragma once

#include <cstddef>
#include <functional>
#include <vector>

#include "frackac/quadrature.hpp"

namespace frackac {

enum class Side { Left, Right };

// Real function on [a, b] given by samples, interpolated piecewise-linearly.
class SampledFunction {
public:
    SampledFunction(std::vector<double> grid, std::vector<double> values);

    static SampledFunction sample(const std::function<double(double)>& f, double a, double b, std::size_t n);
    // nodes a + (b-a)(i/n)^g, clustered at a
    static SampledFunction sample_graded(const std::function<double(double)>& f, double a, double b,
                                         std::size_t n, double g);

    // Declares a known Hölder exponent; gates then use it without the safety margin.
    SampledFunction with_exponent(double lambda) const;

    double a() const { return grid_.front(); }
    double b() const { return grid_.back(); }
    double operator()(double x) const;
    // f(x) - f(x + d) for |d| far below rounding of x; the interpolant's
    // slopes carry the small offsets instead of f(x) - f(x + d) cancelling
    double drop(double x, double d) const;
    const std::vector<double>& grid() const { return grid_; }
    const std::vector<double>& values() const { return values_; }

    double exponent() const { return exponent_; }
    // exponent used by gates: the estimate minus 0.02, or the declared value
    double gate_exponent() const { return declared_ ? exponent_ : exponent_ - 0.02; }

private:
    std::vector<double> grid_;
    std::vector<double> values_;
    double exponent_ = 1.0;
    bool declared_ = false;
};

// Default rule for the cell-wise integrals below: few panels per sample cell,
// many more on the cell that touches a singular point.
QuadratureSpec frac_default_spec();

double gamma_fn(double x);

double frac_integral(const SampledFunction& f, double alpha, Side side, double x,
                     const QuadratureSpec& spec = frac_default_spec());

// Left: (f(x)/(x-a)^alpha + alpha int_a^x (f(x)-f(y))/(x-y)^{alpha+1} dy) / Gamma(1-alpha)
// Right: the mirror image on [x, b], real-valued (no complex phase).
double frac_deriv(const SampledFunction& f, double alpha, Side side, double x,
                  const QuadratureSpec& spec = frac_default_spec());

// | int D^alpha_{a+} f g  -  int f D^alpha_{b-} g |
double ibp_residual(const SampledFunction& f, const SampledFunction& g, double alpha,
                    const QuadratureSpec& spec = frac_default_spec());

// int_a^b f dg = - int_a^b D^alpha_{a+} f(t) D^{1-alpha}_{b-} g_{b-}(t) dt with g_{b-} = g - g(b).
// The minus sign is the real form of the phase (-1)^alpha (-1)^{1-alpha}.
double zahle_integral(const SampledFunction& f, const SampledFunction& g, double alpha,
                      const QuadratureSpec& spec = frac_default_spec());

// Left-point Riemann-Stieltjes sum of f dg over n uniform cells of [a, b].
double riemann_stieltjes_sum(const std::function<double(double)>& f, const std::function<double(double)>& g,
                             double a, double b, std::size_t n);

}  // namespace frackac
