#include <cmath>
#include <vector>

#include <gtest/gtest.h>

#include "frackac/analysis.hpp"
#include "frackac/config.hpp"
#include "frackac/errors.hpp"
#include "frackac/fk_solver.hpp"
#include "frackac/gaussian_field.hpp"

using namespace frackac;

namespace {

const double x0[1] = {0.0};

FkOptions coarse() {
    FkOptions o;
    o.dt = 1.0 / 64;
    o.workers = 1;
    return o;
}

}  // namespace

TEST(Brownian, VarianceAndStart) {
    auto paths = sample_brownian(20000, 1.0, 1.0 / 32, 1, RngSeed{21, 0});
    std::vector<double> sq;
    for (auto& b : paths) {
        ASSERT_EQ(b.path.value(0.0), 0.0);
        sq.push_back(b.path.value(0.75) * b.path.value(0.75));
    }
    MCEstimate m = summarize(sq, {});
    EXPECT_NEAR(m.mean, 0.75, 4 * m.std_error);
}

TEST(HeatSemigroup, ClosedForms) {
    EXPECT_NEAR(heat_semigroup(InitialCondition::constant(1.0), 0.7, 0.3), 1.0, 1e-12);
    EXPECT_NEAR(heat_semigroup(InitialCondition::linear(), 0.7, 0.3), 0.3, 1e-10);
    double t = 0.4, x = 0.6;
    EXPECT_NEAR(heat_semigroup(InitialCondition::gaussian(1.0), t, x),
                std::exp(-x * x / (1 + 2 * t)) / std::sqrt(1 + 2 * t), 1e-10);
}

TEST(FkSolver, ConstantKernelMean) {
    HurstParams h(0.3);
    double c = 0.6, t = 0.5;
    auto m = u_mean(t, x0, InitialCondition::constant(1.0), 500, h, make_constant(c), RngSeed{1, 0}, coarse());
    EXPECT_NEAR(m.mean, std::exp(0.5 * c * std::pow(t, 2 * h.h)), 1e-12);
    auto u0 = InitialCondition::gaussian(1.0);
    auto z = u_mean(t, x0, u0, 4000, h, make_constant(0.0), RngSeed{2, 0}, coarse());
    EXPECT_NEAR(z.mean, heat_semigroup(u0, t, 0.0), 3 * z.std_error);
}

TEST(FkSolver, ConstantKernelSecondMoment) {
    HurstParams h(0.35);
    double c = 0.5, t = 0.8;
    auto m = u_second_moment(t, x0, x0, InitialCondition::constant(1.0), 300, h, make_constant(c), RngSeed{3, 0},
                             coarse());
    EXPECT_NEAR(m.mean, std::exp(2 * c * std::pow(t, 2 * h.h)), 1e-10);
}

TEST(FkSolver, SecondMomentDominatesSquaredMean) {
    HurstParams h(0.45);
    auto q = make_smooth(1.0);
    auto u0 = InitialCondition::gaussian(0.5);
    auto m = u_mean(0.5, x0, u0, 400, h, q, RngSeed{4, 0}, coarse());
    auto s = u_second_moment(0.5, x0, x0, u0, 400, h, q, RngSeed{5, 0}, coarse());
    EXPECT_GE(s.mean, m.mean * m.mean - 3 * (s.std_error + 2 * m.mean * m.std_error));
}

TEST(FkSolver, GateRefusesRoughRegime) {
    EXPECT_THROW(u_mean(0.5, x0, InitialCondition::constant(1.0), 10, HurstParams(0.2), make_smooth(1.0), {}, coarse()),
                 GateError);
}

TEST(FkSolver, ZeroFieldGivesHeatSemigroup) {
    auto g = GridSpec::covering(0.5, 1.0 / 16, 1.0 / 64, -4.0, 4.0, 33, HurstParams(0.45), make_smooth(1.0));
    auto f = simulate_field(g, RngSeed{6, 0});
    f.values.setZero();
    auto u0 = InitialCondition::gaussian(1.0);
    auto m = u_pathwise_eps(f, 0.5, 0.2, u0, 4000, 1.0 / 16, RngSeed{7, 0}, coarse());
    EXPECT_NEAR(m.mean, heat_semigroup(u0, 0.5, 0.2), 3 * m.std_error);
}

TEST(Wick, MeanIsHeatSemigroup) {
    HurstParams h(0.3);
    auto u0 = InitialCondition::gaussian(1.0);
    auto w = wick_moments(0.5, x0, x0, u0, 3000, h, make_smooth(1.0), RngSeed{8, 0}, coarse(), false);
    EXPECT_NEAR(w.mean_x.mean, heat_semigroup(u0, 0.5, 0.0), 3 * w.mean_x.std_error);
    EXPECT_EQ(w.second_moment_xy.n, 0u);
    double c = 0.7, t = 0.6;
    auto wc = wick_moments(t, x0, x0, InitialCondition::constant(1.0), 100, h, make_constant(c), RngSeed{9, 0},
                           coarse());
    EXPECT_NEAR(wc.second_moment_xy.mean, std::exp(c * std::pow(t, 2 * h.h)), 1e-10);
}

TEST(Chaos, IndicatorAndReductions) {
    double a[1] = {-0.5}, z_in[1] = {-0.2}, z_out[1] = {0.2};
    EXPECT_EQ(signed_indicator(a, z_in), -1.0);
    EXPECT_EQ(signed_indicator(a, z_out), 0.0);
    HurstParams h(0.3);
    auto q = make_constant(0.5);
    auto u0 = InitialCondition::constant(1.0);
    auto c0 = chaos_coeff(0, 0.5, x0, {}, u0, 200, h, q, RngSeed{10, 0}, coarse());
    EXPECT_NEAR(c0.mean, std::exp(0.25 * std::pow(0.5, 0.6)), 1e-12);
    std::vector<ChaosPoint> far{{0.25, {50.0}}};
    auto c1 = chaos_coeff(1, 0.5, x0, far, u0, 500, h, q, RngSeed{11, 0}, coarse());
    EXPECT_NEAR(c1.mean, 0.0, 2 * c1.std_error + 1e-15);
    EXPECT_THROW(chaos_coeff(4, 0.5, x0, {}, u0, 10, h, q, {}, coarse()), ConfigError);
}

TEST(RateFit, Synthetic) {
    std::vector<std::pair<double, double>> exact, noisy, flat;
    NormalStream ns(RngSeed{12, 0});
    for (int k = 2; k <= 12; ++k) {
        double e = std::ldexp(1.0, -k);
        exact.emplace_back(e, 3 * std::pow(e, 1.3));
        noisy.emplace_back(e, 3 * std::pow(e, 1.3) * (1 + 0.05 * (2 * ns.uniform() - 1)));
        flat.emplace_back(e, 0.2);
    }
    EXPECT_NEAR(rate_fit(exact).slope, 1.3, 1e-10);
    EXPECT_NEAR(rate_fit(noisy).slope, 1.3, 0.05);
    EXPECT_NEAR(rate_fit(flat).slope, 0.0, 1e-12);
    EXPECT_THROW(rate_fit({{0.1, 1.0}, {0.2, 2.0}}), std::invalid_argument);
}

TEST(Convergence, ConstantKernelIsDegenerate) {
    auto phi = HolderPath::sample([](double s) { return s; }, 1.0, 1).with_alpha(1.0);
    auto r = convergence_experiment(phi, 1.0, HurstParams(0.3), make_constant(1.0), default_eps_ladder());
    EXPECT_TRUE(r.degenerate);
    EXPECT_TRUE(r.pass);
}

TEST(Holder, IntegralBranchConstantKernel) {
    auto phi = HolderPath::sample([](double s) { return s; }, 1.0, 1).with_alpha(1.0);
    std::vector<double> lags{0.125, 0.0625, 0.03125, 0.015625};
    auto r = holder_integral(phi, 0.25, lags, std::ldexp(1.0, -14), HurstParams(0.3), make_constant(1.0));
    EXPECT_NEAR(r.fit.slope, 0.6, 0.02);
    EXPECT_TRUE(r.pass);
}

TEST(Holder, SolutionBranchConstantKernelIsDegenerate) {
    HolderSolutionParams p;
    p.n_pairs = 10;
    auto r = holder_solution(InitialCondition::constant(1.0), HurstParams(0.3), make_constant(0.5), p, RngSeed{13, 0});
    EXPECT_TRUE(r.degenerate);
    EXPECT_TRUE(r.pass);
}

TEST(CrossTime, TrivialCases) {
    auto b = brownian_path(RngSeed{14, 0}, 1.0, 1.0 / 256);
    HurstParams h(0.45);
    EXPECT_EQ(cross_time_value(b, 0.5, 0.5, 0.0, h, make_smooth(1.0)), 0.0);
    auto r = cross_time_bound_check(h, make_constant(1.0), b, 0.5, {0.1, 0.05, 0.025, 0.0125});
    EXPECT_TRUE(r.degenerate);
    EXPECT_TRUE(r.pass);
}

TEST(WeakResidual, ZeroFieldIsHeatEquation) {
    double t = 0.25, eps = 1.0 / 64;
    auto g = GridSpec::covering(t, eps, 1.0 / 256, -4.0, 4.0, 65, HurstParams(0.45), make_smooth(1.0));
    auto f = simulate_field(g, RngSeed{15, 0});
    f.values.setZero();
    std::vector<double> xg;
    for (int j = 0; j <= 64; ++j) xg.push_back(-1.0 + j / 32.0);
    auto w = weak_residual(f, InitialCondition::gaussian(1.0), TestFunction::bump(0.0, 1.0), t, eps, 128, xg,
                           RngSeed{16, 0}, 1);
    EXPECT_LE(w.residual, 3 * w.error_bar() + 1e-9);
}

TEST(WeakResidual, ConstantKernel) {
    double t = 0.25, eps = 1.0 / 64;
    auto g = GridSpec::covering(t, eps, 1.0 / 256, -4.0, 4.0, 65, HurstParams(0.45), make_constant(1.0));
    auto f = simulate_field(g, RngSeed{17, 0});
    std::vector<double> xg;
    for (int j = 0; j <= 64; ++j) xg.push_back(-1.0 + j / 32.0);
    auto w = weak_residual(f, InitialCondition::gaussian(1.0), TestFunction::bump(0.0, 1.0), t, eps, 128, xg,
                           RngSeed{18, 0}, 1);
    EXPECT_LE(w.residual, 3 * w.error_bar());
}

TEST(PsiBounds, ConstantKernel) {
    auto phi = HolderPath::sample([](double s) { return s; }, 1.0, 1).with_alpha(1.0);
    auto b = dctrl2_check(HurstParams(0.3), make_constant(1.0), phi, 1.0);
    EXPECT_TRUE(b.pass);
    EXPECT_LE(b.max_ratio, 1.0);
}
