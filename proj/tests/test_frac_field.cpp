#include <cmath>
#include <vector>

#include <gtest/gtest.h>

#include "frackac/errors.hpp"
#include "frackac/frac_calc.hpp"
#include "frackac/gaussian_field.hpp"
#include "frackac/parallel.hpp"
#include "frackac/stoch_integral.hpp"

using namespace frackac;

namespace {

SampledFunction smooth_fn(const std::function<double(double)>& f, std::size_t n = 256) {
    return SampledFunction::sample(f, 0.0, 1.0, n).with_exponent(1.0);
}

HolderPath linear_path(double t) { return HolderPath::sample([](double s) { return s; }, t, 1).with_alpha(1.0); }

}  // namespace

TEST(FracCalc, ConstantFunction) {
    auto one = smooth_fn([](double) { return 1.0; }, 8);
    for (double alpha : {0.2, 0.5, 0.8}) {
        EXPECT_NEAR(frac_integral(one, alpha, Side::Left, 0.6), std::pow(0.6, alpha) / gamma_fn(alpha + 1), 1e-8);
        EXPECT_NEAR(frac_deriv(one, alpha, Side::Left, 0.6), 1 / (gamma_fn(1 - alpha) * std::pow(0.6, alpha)), 1e-8);
    }
}

TEST(FracCalc, HalfDerivativeOfIdentity) {
    auto f = SampledFunction::sample([](double y) { return y; }, 0.0, 2.0, 8).with_exponent(1.0);
    EXPECT_NEAR(frac_deriv(f, 0.5, Side::Left, 1.0), 2 / std::sqrt(M_PI), 1e-8);
}

TEST(FracCalc, NearOneIsOrdinaryIntegral) {
    auto f = smooth_fn([](double y) { return std::exp(y); }, 512);
    EXPECT_NEAR(frac_integral(f, 1 - 1e-4, Side::Left, 0.7), std::exp(0.7) - 1, 1e-4);
}

TEST(FracCalc, CompositionIsIdentity) {
    auto f = [](double y) { return std::cos(2 * y) + y; };
    double alpha = 0.4;
    auto src = smooth_fn(f, 1024);
    std::vector<double> g, v;
    for (int i = 0; i <= 1024; ++i) {
        double y = i / 1024.0;
        g.push_back(y);
        v.push_back(i == 0 ? 0.0 : frac_integral(src, alpha, Side::Left, std::min(y, 1 - 1e-12)));
    }
    auto If = SampledFunction(g, v).with_exponent(alpha);
    for (int k = 1; k <= 10; ++k) {
        double x = k / 11.0;
        EXPECT_NEAR(frac_deriv(If, 0.3, Side::Left, x), frac_integral(src, alpha - 0.3, Side::Left, x), 1e-4);
    }
}

TEST(FracCalc, IbpResidual) {
    auto one = smooth_fn([](double) { return 1.0; }, 64);
    auto g = smooth_fn([](double y) { return std::exp(-y) * (1 + y); }, 64);
    EXPECT_LE(ibp_residual(one, g, 0.4), 1e-5);
    auto p = smooth_fn([](double y) { return 1 + y - y * y; }, 64);
    auto q = smooth_fn([](double y) { return 2 * y * y * y - y; }, 64);
    EXPECT_LE(ibp_residual(p, q, 0.3), 1e-5);
}

TEST(FracCalc, Gates) {
    auto rough = SampledFunction::sample([](double y) { return std::sqrt(y); }, 0.0, 1.0, 64).with_exponent(0.5);
    EXPECT_THROW(frac_deriv(rough, 0.6, Side::Left, 0.5), GateError);
    EXPECT_THROW(frac_deriv(rough, 0.0, Side::Left, 0.5), std::invalid_argument);
    EXPECT_THROW(frac_integral(rough, 0.5, Side::Left, 1.5), std::invalid_argument);
}

TEST(Zahle, TelescopesForConstantIntegrand) {
    auto one = smooth_fn([](double) { return 1.0; }, 64);
    auto g = smooth_fn([](double y) { return std::sin(3 * y); }, 64);
    // the interpolant's kinks make the outer integrand |t - node|^alpha at every
    // node; the two-panel default reports non-convergence rather than guessing
    EXPECT_THROW(zahle_integral(one, g, 0.4), NumericalError);
    QuadratureSpec fine = frac_default_spec();
    fine.n_panels = 8;
    EXPECT_NEAR(zahle_integral(one, g, 0.4, fine), std::sin(3.0), 1e-6);
}

TEST(Zahle, ClassicalOracleAndAlphaInvariance) {
    auto f = smooth_fn([](double y) { return y; }, 128);
    auto g = smooth_fn([](double y) { return y * y; }, 128);
    double z4 = zahle_integral(f, g, 0.4);
    EXPECT_NEAR(z4, 2.0 / 3, 1e-4);
    for (double a : {0.3, 0.45}) EXPECT_NEAR(zahle_integral(f, g, a), z4, 2e-6);
    auto rough = SampledFunction::sample([](double y) { return std::sqrt(y); }, 0.0, 1.0, 64).with_exponent(0.5);
    EXPECT_THROW(zahle_integral(rough, rough, 0.4), GateError);
}

TEST(GaussianField, ConstantKernelIsOneFbm) {
    auto g = GridSpec::uniform(1.0 / 16, 0, 16, -1.0, 1.0, 5, HurstParams(0.3), make_constant(1.0));
    FieldSimulator sim(g);
    std::vector<double> end(4000);
    for (std::size_t i = 0; i < end.size(); ++i) {
        auto f = sim.sample(RngSeed{11, 0}.child(i));
        for (int j = 1; j < 5; ++j) ASSERT_NEAR(f.values(16, j), f.values(16, 0), 1e-12);
        for (int j = 0; j < 5; ++j) ASSERT_EQ(f.values(0, j), 0.0);
        end[i] = f.values(16, 2) * f.values(16, 2);
    }
    MCEstimate m = summarize(end, {});
    EXPECT_NEAR(m.mean, 1.0, 3 * m.std_error);
}

TEST(GaussianField, CovarianceMatchesDefinition) {
    HurstParams h(0.35);
    auto q = make_smooth(1.0);
    auto g = GridSpec::uniform(0.125, -2, 8, -1.0, 1.0, 3, h, q);
    FieldSimulator sim(g);
    // (time index, site index) pairs; index 0 is t = -0.25
    std::vector<std::array<int, 4>> pairs{{3, 0, 9, 2}, {0, 1, 10, 1}, {6, 2, 6, 0}};
    std::size_t n = 20000;
    std::vector<std::vector<double>> prod(pairs.size(), std::vector<double>(n));
    for (std::size_t i = 0; i < n; ++i) {
        auto f = sim.sample(RngSeed{12, 0}.child(i));
        for (std::size_t k = 0; k < pairs.size(); ++k) {
            auto [a, b, c, d] = pairs[k];
            prod[k][i] = f.values(a, b) * f.values(c, d);
        }
    }
    for (std::size_t k = 0; k < pairs.size(); ++k) {
        auto [a, b, c, d] = pairs[k];
        double want = r_h(g.times[a], g.times[c], h) * q.eval1(g.sites[b], g.sites[d]);
        MCEstimate m = summarize(prod[k], {});
        EXPECT_NEAR(m.mean, want, 4 * m.std_error) << "pair " << k;
    }
}

TEST(GaussianField, MollifiedDerivativeConstantKernel) {
    auto g = GridSpec::covering(0.5, 0.125, 1.0 / 64, -1.0, 1.0, 5, HurstParams(0.3), make_constant(1.0));
    auto f = simulate_field(g, RngSeed{5, 0});
    double w = wdot_eps(f, 0.25, -1.0, 0.125);
    for (double x : {-0.5, 0.0, 1.0}) EXPECT_NEAR(wdot_eps(f, 0.25, x, 0.125), w, 1e-12);
    EXPECT_THROW(f(0.3, 3.0), CoverageError);
}

TEST(GaussianField, PathwiseSamplerMatchesField) {
    HurstParams h(0.3);
    auto g = GridSpec::covering(0.5, 1.0 / 16, 1.0 / 64, 0.0, 0.5, 9, h, make_smooth(1.0));
    FieldSimulator sim(g);
    HolderPath phi = linear_path(0.5);
    FunctionalSampler fs(sim, {integral_eps_functional(g, phi, 0.5, 1.0 / 16)});
    auto seed = RngSeed{9, 0};
    EXPECT_NEAR(fs.pathwise(seed)[0], integral_eps(sim.sample(seed), phi, 0.5, 1.0 / 16), 1e-10);
}

TEST(StochIntegral, ConstantKernelVariance) {
    HurstParams h(0.3);
    auto phi = HolderPath::sample([](double s) { return std::sin(5 * s); }, 1.0, 64);
    EXPECT_NEAR(variance_closed(phi, 0.8, h, make_constant(1.0)), std::pow(0.8, 0.6), 1e-8);
    EXPECT_NEAR(covariance_closed(phi, linear_path(1.0), 0.8, h, make_constant(1.0)), std::pow(0.8, 0.6), 1e-8);
}

TEST(StochIntegral, FbmSpaceZeroPath) {
    auto zero = HolderPath::sample([](double) { return 0.0; }, 1.0, 1).with_alpha(1.0);
    EXPECT_NEAR(variance_closed(zero, 1.0, HurstParams(0.35), make_fbm_space(0.4)), 0.0, 1e-12);
}

TEST(StochIntegral, CovarianceSymmetryAndScaling) {
    HurstParams h(0.4);
    auto q = make_smooth(1.0);
    auto phi = linear_path(1.0);
    double v = variance_closed(phi, 1.0, h, q);
    EXPECT_NEAR(covariance_closed(phi, phi, 1.0, h, q), v, 1e-8);
    EXPECT_NEAR(variance_closed(phi, 1.0, h, q.scaled(3.0)), 3 * v, 1e-8);
}

TEST(StochIntegral, CrossMomentConstantKernelClosedForm) {
    HurstParams h(0.3);
    auto phi = linear_path(1.0);
    double e = 1.0 / 32;
    EXPECT_NEAR(cross_moment(phi, 0.9, e, e, h, make_constant(1.0)), v_kernel_double_integral(0.9, e, e, h), 1e-6);
    EXPECT_NEAR(increment_second_moment_eps(phi, 0.0, 0.9, e, h, make_constant(1.0)),
                cross_moment(phi, 0.9, e, e, h, make_constant(1.0)), 1e-6);
}

TEST(StochIntegral, LadderApproachesClosedForm) {
    HurstParams h(0.4);
    auto q = make_smooth(1.0);
    auto phi = linear_path(1.0);
    double v = variance_closed(phi, 1.0, h, q);
    double prev = INFINITY;
    for (int k = 4; k <= 10; k += 2) {
        double d = std::abs(cross_moment(phi, 1.0, std::ldexp(1.0, -k), std::ldexp(1.0, -k), h, q) - v);
        EXPECT_LT(d, prev);
        prev = d;
    }
}

TEST(StochIntegral, IncrementScaling) {
    HurstParams h(0.35);
    auto phi = HolderPath::sample([](double s) { return std::cos(s); }, 1.0, 256).with_alpha(1.0);
    std::vector<std::pair<double, double>> pts;
    double e = std::ldexp(1.0, -12);
    for (int k = 3; k <= 6; ++k) {
        double lag = std::ldexp(1.0, -k);
        pts.emplace_back(lag, increment_second_moment_eps(phi, 0.5, 0.5 + lag, e, h, make_smooth(1.0)));
    }
    double slope = std::log(pts.front().second / pts.back().second) / std::log(pts.front().first / pts.back().first);
    EXPECT_NEAR(slope, 2 * h.h, 0.1);
}

TEST(StochIntegral, GateRefusesRoughPathForRoughKernel) {
    auto rough = HolderPath::sample([](double s) { return std::sqrt(s); }, 1.0, 64).with_alpha(0.3);
    EXPECT_THROW(variance_closed(rough, 1.0, HurstParams(0.2), make_fbm_space(0.3)), GateError);
}
