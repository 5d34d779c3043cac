#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <numbers>

#include <Eigen/Eigenvalues>

#include "qdecay/rmt.hpp"
#include "qdecay/states.hpp"

using namespace qdecay;
using namespace qdecay::rmt;

namespace {

double semicircle_cdf(double x, double radius) {
    const double u = std::clamp(x / radius, -1.0, 1.0);
    return 0.5 + (u * std::sqrt(1.0 - u * u) + std::asin(u)) / std::numbers::pi;
}

std::vector<double> grid(double t_max, int steps) {
    std::vector<double> t;
    for (int k = 0; k <= steps; ++k) t.push_back(t_max * k / steps);
    return t;
}

RmtModel model(int N, std::vector<double> lambdas, std::uint64_t seed, int realizations) {
    RmtModel m;
    m.N = N;
    m.lambdas = std::move(lambdas);
    m.seed = seed;
    m.realizations = realizations;
    return m;
}

} // namespace

TEST(FLr, Values) {
    EXPECT_EQ(f_lr(0.0, 3.0), 0.0);
    EXPECT_NEAR(f_lr(1.0, 1.0), 5.0 / 3.0, 1e-15);
    EXPECT_NEAR(f_lr(2.0, 1.0), 14.0 / 3.0, 1e-15);
    EXPECT_THROW(f_lr(-1.0, 1.0), DomainError);
    EXPECT_THROW(f_lr(1.0, 0.0), DomainError);
}

TEST(FLr, ContinuousAndIncreasing) {
    for (double tau : {0.5, 4.0, 22.6}) {
        const double eps = 1e-9 * tau;
        EXPECT_NEAR(f_lr(tau - eps, tau), f_lr(tau + eps, tau), 1e-6 * f_lr(tau, tau));
        // The two branches agree exactly at t = tau_H.
        EXPECT_DOUBLE_EQ(tau * tau + 2.0 / (3.0 * tau) * tau * tau * tau, f_lr(tau, tau));
        double prev = -1.0;
        for (int k = 0; k <= 400; ++k) {
            const double v = f_lr(3.0 * tau * k / 400.0, tau);
            EXPECT_GT(v, prev);
            prev = v;
        }
    }
}

TEST(HeisenbergTime, Formula) {
    EXPECT_DOUBLE_EQ(heisenberg_time(4), 4.0);
    EXPECT_DOUBLE_EQ(heisenberg_time(64), 16.0);
    EXPECT_THROW(heisenberg_time(1), DomainError);
}

TEST(Analytic, Prefactors) {
    const double t = 3.0, tau = 5.0, f = f_lr(t, tau), lambda = 0.02;
    EXPECT_EQ(spectator_analytic(0.0, 0.5, t, tau).purity, 1.0);
    EXPECT_NEAR(1.0 - spectator_analytic(lambda, 0.5, t, tau).purity, 1.5 * lambda * lambda * f, 1e-15);
    EXPECT_NEAR(1.0 - spectator_analytic(lambda, 1.0, t, tau).purity, lambda * lambda * f, 1e-15);
    EXPECT_THROW(spectator_analytic(lambda, 0.4, t, tau), DomainError);
    EXPECT_THROW(spectator_analytic(lambda, 1.01, t, tau), DomainError);
    EXPECT_FALSE(spectator_analytic(lambda, 0.5, t, tau).beyond_linear_response);
    EXPECT_TRUE(spectator_analytic(0.5, 0.5, t, tau).beyond_linear_response);
}

TEST(Analytic, SeparablePrediction) {
    const double t = 7.0, tau = 4.0, f = f_lr(t, tau);
    const std::vector<double> lambdas{0.01, 0.02, 0.03};
    const double sum_sq = 0.01 * 0.01 + 0.02 * 0.02 + 0.03 * 0.03;

    const std::vector<double> ghz_p(3, 0.5);
    EXPECT_NEAR(1.0 - sumrule_analytic(lambdas, ghz_p, t, tau), 1.5 * f * sum_sq, 1e-15);

    // W state purities tend to 1 for large n.
    const int n = 1000;
    const double pw = static_cast<double>(n * n - 2 * n + 2) / (static_cast<double>(n) * n);
    const std::vector<double> w_p(3, pw);
    EXPECT_NEAR(1.0 - sumrule_analytic(lambdas, w_p, t, tau), f * sum_sq, 3e-3 * f * sum_sq);
    const std::vector<double> ones(3, 1.0);
    EXPECT_NEAR(1.0 - sumrule_analytic(lambdas, ones, t, tau), f * sum_sq, 1e-15);

    const std::vector<double> one_l{0.05}, one_p{0.7};
    EXPECT_DOUBLE_EQ(sumrule_analytic(one_l, one_p, t, tau), spectator_analytic(0.05, 0.7, t, tau).purity);
    EXPECT_THROW(sumrule_analytic(lambdas, one_p, t, tau), ValidationError);
}

TEST(Gue, HermitianAndDeterministic) {
    const auto h = sample_gue(16, 5);
    EXPECT_EQ((h - h.adjoint()).cwiseAbs().maxCoeff(), 0.0);
    EXPECT_EQ((h - sample_gue(16, 5)).cwiseAbs().maxCoeff(), 0.0);
    EXPECT_GT((h - sample_gue(16, 6)).cwiseAbs().maxCoeff(), 0.0);
    for (int k = 0; k < 16; ++k) EXPECT_EQ(h(k, k).imag(), 0.0);
    EXPECT_THROW(sample_gue(1, 0), DomainError);
}

TEST(Gue, SemicircleKolmogorovSmirnov) {
    constexpr int N = 256, R = 20;
    std::vector<double> ev;
    for (int r = 0; r < R; ++r) {
        const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(sample_gue(N, 100 + r), Eigen::EigenvaluesOnly);
        for (int k = 0; k < N; ++k) ev.push_back(es.eigenvalues()(k));
    }
    std::sort(ev.begin(), ev.end());
    const double radius = 2.0 * std::sqrt(static_cast<double>(N));
    double ks = 0.0;
    const double count = static_cast<double>(ev.size());
    for (std::size_t k = 0; k < ev.size(); ++k) {
        const double F = semicircle_cdf(ev[k], radius);
        ks = std::max({ks, std::abs(F - k / count), std::abs(F - (k + 1) / count)});
    }
    EXPECT_LE(ks, 0.05);
}

TEST(Gue, SecondMoment) {
    constexpr int N = 64, R = 100;
    double mean = 0.0;
    for (int r = 0; r < R; ++r) mean += (sample_gue(N, 500 + r).cwiseAbs2().sum()) / N;
    mean /= R;
    EXPECT_NEAR(mean / N, 1.0, 0.05);
}

TEST(Gue, CentralSpacing) {
    constexpr int N = 256, R = 50;
    const int band = N / 10;
    double spacing = 0.0;
    for (int r = 0; r < R; ++r) {
        const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(sample_gue(N, 900 + r), Eigen::EigenvaluesOnly);
        const int lo = N / 2 - band / 2;
        spacing += (es.eigenvalues()(lo + band) - es.eigenvalues()(lo)) / band;
    }
    spacing /= R;
    const double want = std::numbers::pi / std::sqrt(static_cast<double>(N));
    EXPECT_NEAR(spacing / want, 1.0, 0.05);
}

TEST(MonteCarlo, NoCouplingStaysPure) {
    const auto times = grid(10.0, 20);
    const auto c = mc_spectator(model(16, {0.0, 0.0}, 1, 3), ghz(2), 0, times);
    for (double v : c.values) EXPECT_NEAR(v, 1.0, 1e-10);
    EXPECT_EQ(c.meta.realizations, 3);
}

TEST(MonteCarlo, CurveBounds) {
    const auto times = grid(6.0, 30);
    const auto c = mc_spectator(model(32, {0.05, 0.05}, 2, 4), ghz(2), 1, times);
    EXPECT_NEAR(c.values.front(), 1.0, 1e-12);
    for (double v : c.values) EXPECT_LE(v, 1.0 + 1e-10);
    EXPECT_LT(c.values.back(), 0.999);
    EXPECT_NO_THROW(c.validate());
}

TEST(MonteCarlo, ThreadCountDoesNotChangeResult) {
    const auto times = grid(4.0, 10);
    auto m = model(16, {0.05, 0.05}, 3, 6);
    const auto a = mc_spectator(m, w_state(2), 0, times);
    m.threads = 3;
    const auto b = mc_spectator(m, w_state(2), 0, times);
    EXPECT_EQ(a.values, b.values);
    EXPECT_EQ(a.std_errors, b.std_errors);
}

TEST(MonteCarlo, DisjointSeedSetsAgree) {
    const auto times = grid(6.0, 12);
    const auto a = mc_spectator(model(64, {0.02, 0.02}, 1000, 60), ghz(2), 0, times);
    const auto b = mc_spectator(model(64, {0.02, 0.02}, 2000, 60), ghz(2), 0, times);
    for (std::size_t s : {std::size_t{6}, std::size_t{12}}) {
        const double se = std::hypot(a.std_errors[s], b.std_errors[s]);
        EXPECT_LE(std::abs(a.values[s] - b.values[s]), 2.0 * se) << "t=" << times[s];
    }
}

TEST(MonteCarlo, Errors) {
    const auto times = grid(1.0, 2);
    EXPECT_THROW(mc_spectator(model(16, {0.1}, 0, 1), ghz(2), 0, times), ValidationError);
    EXPECT_THROW(mc_spectator(model(16, {0.1, 0.1}, 0, 1), ghz(2), 2, times), std::out_of_range);
    EXPECT_THROW(mc_spectator(model(16, {0.1, 0.1}, 0, 0), ghz(2), 0, times), ValidationError);
    EXPECT_THROW(mc_spectator(model(8192, {0.1, 0.1}, 0, 1), ghz(2), 0, times), SizeError);
    const std::vector<double> backwards{0.0, 2.0, 1.0};
    EXPECT_THROW(mc_spectator(model(16, {0.1, 0.1}, 0, 1), ghz(2), 0, backwards), ValidationError);
}

TEST(TimeScaleFit, RecoversKnownScale) {
    const auto times = grid(10.0, 100);
    const double tau = heisenberg_time(128);
    const auto target = analytic_curve(times, 0.01, 0.5, tau, 1.7);
    const auto fit = fit_time_scale(target, 0.01, 0.5, tau, DecayWindow{1e-3, 1e-1});
    EXPECT_NEAR(fit.alpha, 1.7, 1e-6);
    EXPECT_LT(fit.fitted.max_relative, 1e-6);
    EXPECT_GT(fit.raw.max_relative, 0.1);
}

TEST(MonteCarlo, TriplingLambdaBreaksLinearResponse) {
    const double tau = heisenberg_time(128);
    const auto times = grid(tau / 3.0, 60);
    const DecayWindow window{5e-3, 5e-2};
    const double lambda = 0.011;
    const auto base = mc_spectator(model(128, {lambda, lambda}, 77, 40), ghz(2), 0, times);
    const auto fit = fit_time_scale(base, lambda, 0.5, tau, window);
    ASSERT_FALSE(fit.fitted.inconclusive);
    EXPECT_LE(fit.fitted.max_relative, 0.10);

    // Same time scale, three times the coupling, compared over the whole decay.
    const auto strong = mc_spectator(model(128, {3 * lambda, 3 * lambda}, 77, 40), ghz(2), 0, times);
    const auto prediction = analytic_curve(times, 3 * lambda, 0.5, tau, fit.alpha);
    const auto cmp = compare_curves(strong, prediction, DecayWindow{5e-3, 1.0});
    EXPECT_GT(cmp.max_relative, 0.10);
}
