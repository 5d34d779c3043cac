#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "dense_oracle.hpp"
#include "qdecay/kicked_ising.hpp"
#include "qdecay/linres.hpp"
#include "qdecay/states.hpp"

using namespace qdecay;
using namespace qdecay::linres;
using oracle::Mat;
using oracle::Vec;

namespace {

KickedIsingParams make(int L, int n, std::array<double, 3> b, double lambda, std::vector<int> positions) {
    KickedIsingParams p;
    p.L = L;
    p.n = n;
    p.b = b;
    p.lambdas.assign(static_cast<std::size_t>(n), lambda);
    p.positions = std::move(positions);
    return p;
}

Mat coupling(const KickedIsingParams& p, int i) {
    const int nbits = p.n + p.L;
    return oracle::embed(oracle::pauli('x'), i, nbits) * oracle::embed(oracle::pauli('x'), p.n + p.positions[i], nbits);
}

// U0(t)^dagger V U0(t) as a dense matrix.
Mat interaction(const KickedIsingParams& p, int i, int t) {
    auto p0 = p;
    for (auto& l : p0.lambdas) l = 0.0;
    const Mat u0 = oracle::floquet(p0);
    Mat ut = Mat::Identity(u0.rows(), u0.cols());
    for (int s = 0; s < t; ++s) ut = u0 * ut;
    return ut.adjoint() * coupling(p, i) * ut;
}

// Tr_e of an operator on index m + M e.
Mat ptrace_env(const Mat& x, Eigen::Index m_dim) {
    const Eigen::Index e_dim = x.rows() / m_dim;
    Mat out = Mat::Zero(m_dim, m_dim);
    for (Eigen::Index e = 0; e < e_dim; ++e) out += x.block(e * m_dim, e * m_dim, m_dim, m_dim);
    return out;
}

cplx pform(const Mat& a, const Mat& b, Eigen::Index m_dim) { return (ptrace_env(a, m_dim) * ptrace_env(b, m_dim)).trace(); }

// Four-term kernel from explicit density matrices.
cplx dense_kernel(const KickedIsingParams& p, const PureState& psi0, int i, int j, int tau, int tau_p) {
    const Vec v = oracle::to_vec(psi0);
    const Mat r0 = v * v.adjoint();
    const auto m = static_cast<Eigen::Index>(psi0.layout().mem_dimension());
    const Mat vi_t = interaction(p, i, tau), vi_tp = interaction(p, i, tau_p);
    const Mat vj_t = interaction(p, j, tau), vj_tp = interaction(p, j, tau_p);
    return pform(vi_t * vj_tp * r0, r0, m) - pform(vi_tp * r0 * vj_t, r0, m) + pform(vi_t * r0, vj_tp * r0, m) -
           pform(vi_tp * r0, r0 * vj_t, m);
}

} // namespace

TEST(InteractionV, InvolutionAndNorm) {
    const auto p = make(6, 2, {0.9, 0.9, 0.0}, 0.01, {0, 3});
    const auto psi = product(ghz(2), haar_random(6, 30));
    const auto once = apply_interaction_V(psi, p, 1, 0);
    const auto twice = apply_interaction_V(once, p, 1, 0);
    for (std::size_t k = 0; k < psi.dimension(); ++k) EXPECT_LT(std::abs(twice[k] - psi[k]), 1e-12);
    for (int t : {1, 7, 40}) EXPECT_NEAR(apply_interaction_V(psi, p, 0, t).norm(), 1.0, 1e-12);
    EXPECT_THROW(apply_interaction_V(psi, p, 2, 0), std::out_of_range);
    EXPECT_THROW(apply_interaction_V(psi, p, 0, -1), ValidationError);
}

TEST(InteractionV, DenseOracle) {
    std::mt19937_64 gen(31);
    const auto p = make(4, 2, {0.9, 0.9, 0.0}, 0.2, {0, 2});
    const auto psi = oracle::random_state(2, 4, gen);
    for (int i = 0; i < 2; ++i) {
        for (int t : {0, 1, 5, 12}) {
            const Vec got = oracle::to_vec(apply_interaction_V(psi, p, i, t));
            const Vec want = interaction(p, i, t) * oracle::to_vec(psi);
            EXPECT_LT((got - want).cwiseAbs().maxCoeff(), 1e-10) << i << " " << t;
        }
    }
}

TEST(CrossCorrelation, Identities) {
    const auto p = make(12, 4, {0.9, 0.9, 0.0}, 0.005, {0, 3, 6, 9});
    const auto psi = product(ghz(4), haar_random(12, 32));
    EXPECT_NEAR(std::abs(cross_correlation(psi, p, 2, 2, 3, 3) - cplx(1.0)), 0.0, 1e-12);
    EXPECT_NEAR(std::abs(cross_correlation(psi, p, 0, 1, 0, 0)), 0.0, 1e-10);
    EXPECT_NEAR(std::abs(cross_correlation(psi, p, 1, 3, 0, 0)), 0.0, 1e-10);
}

TEST(CrossCorrelation, GridMatchesDenseOracle) {
    std::mt19937_64 gen(33);
    const auto p = make(4, 2, {0.9, 0.9, 0.0}, 0.1, {0, 2});
    const auto psi = oracle::random_state(2, 4, gen);
    const auto k = cross_kernel(psi, p, 0, 1, 8);
    EXPECT_TRUE(k.cross_only);
    const Vec v = oracle::to_vec(psi);
    for (int a = 0; a <= 8; ++a) {
        for (int b = 0; b <= 8; ++b) {
            const cplx want = v.dot(interaction(p, 0, a) * interaction(p, 1, b) * v);
            EXPECT_LT(std::abs(k(a, b) - want), 1e-9);
            EXPECT_LE(std::abs(k(a, b)), 1.0 + 1e-10);
        }
    }
    EXPECT_LT(std::abs(k(3, 5) - cross_correlation(psi, p, 0, 1, 3, 5)), 1e-12);
}

TEST(CrossCorrelation, HermitianPairSymmetry) {
    const auto p = make(6, 2, {0.0, 1.53, 0.0}, 0.01, {0, 3});
    const auto psi = product(w_state(2), haar_random(6, 34));
    const auto kernels = all_kernels(psi, p, 10, true);
    ASSERT_EQ(kernels.size(), 4u);
    const auto& k01 = kernels[1];
    const auto& k10 = kernels[2];
    ASSERT_EQ(k01.i, 0);
    ASSERT_EQ(k10.i, 1);
    for (int a = 0; a <= 10; ++a)
        for (int b = 0; b <= 10; ++b) EXPECT_LT(std::abs(k01(a, b) - std::conj(k10(b, a))), 1e-10);
}

TEST(FullKernel, DenseOracle) {
    std::mt19937_64 gen(35);
    const auto p = make(3, 2, {0.9, 0.9, 0.0}, 0.1, {0, 2});
    const auto mem = oracle::random_state(2, 0, gen), env = oracle::random_state(3, 0, gen);
    const auto psi = product(mem, env);
    for (const auto& [i, j] : {std::pair{0, 0}, std::pair{0, 1}, std::pair{1, 0}}) {
        const auto k = full_kernel(psi, p, i, j, 5);
        EXPECT_FALSE(k.cross_only);
        for (int a = 0; a <= 5; ++a)
            for (int b = 0; b <= 5; ++b)
                EXPECT_LT(std::abs(k(a, b) - dense_kernel(p, psi, i, j, a, b)), 1e-10) << i << j << a << b;
    }
}

TEST(FullKernel, IndependentOfLambda) {
    const auto psi = product(ghz(2), haar_random(5, 36));
    const auto a = full_kernel(psi, make(5, 2, {0.9, 0.9, 0.0}, 0.01, {0, 2}), 0, 1, 6);
    const auto b = full_kernel(psi, make(5, 2, {0.9, 0.9, 0.0}, 0.7, {0, 2}), 0, 1, 6);
    EXPECT_EQ(a.values, b.values);
}

TEST(FullKernel, ZeroGridIsSinglePoint) {
    std::mt19937_64 gen(37);
    const auto p = make(3, 2, {0.9, 0.9, 0.0}, 0.1, {1, 2});
    const auto psi = product(oracle::random_state(2, 0, gen), oracle::random_state(3, 0, gen));
    const auto k = full_kernel(psi, p, 1, 1, 0);
    ASSERT_EQ(k.values.size(), 1u);
    EXPECT_LT(std::abs(k(0, 0) - dense_kernel(p, psi, 1, 1, 0, 0)), 1e-12);
}

TEST(FullKernel, DiagonalIsNonnegative) {
    std::mt19937_64 gen(38);
    std::uniform_real_distribution<double> field(-1.5, 1.5);
    std::uniform_int_distribution<int> site(0, 2);
    for (int trial = 0; trial < 120; ++trial) {
        const auto p = make(3, 2, {field(gen), field(gen), field(gen)}, 0.1, {site(gen), site(gen)});
        const auto psi = product(oracle::random_state(2, 0, gen), oracle::random_state(3, 0, gen));
        const auto k = full_kernel(psi, p, 0, 0, 6);
        double square = 0.0;
        for (int a = 0; a <= 6; ++a) {
            EXPECT_GE(k(a, a).real(), -1e-12);
            for (int b = 0; b <= 6; ++b) square += k(a, b).real();
        }
        EXPECT_GE(square, -1e-10);
    }
}

TEST(FullKernel, Errors) {
    const auto p = make(4, 2, {0.9, 0.9, 0.0}, 0.1, {0, 2});
    const double r = 1.0 / std::sqrt(2.0);
    std::vector<cplx> bell(64, 0.0);
    bell[0] = r;
    bell[1 + 4 * 1] = r;
    const PureState entangled(p.layout(), bell);
    EXPECT_THROW(full_kernel(entangled, p, 0, 0, 3), ValidationError);
    EXPECT_NO_THROW(cross_kernel(entangled, p, 0, 0, 3));
    EXPECT_THROW(full_kernel(product(ghz(2), haar_random(4, 1)), p, 0, 0, -1), ValidationError);

    const auto big = make(2, 7, {0.9, 0.9, 0.0}, 0.1, {0, 0, 0, 1, 1, 1, 0});
    EXPECT_THROW(full_kernel(product(ghz(7), haar_random(2, 1)), big, 0, 0, 2), SizeError);
}

TEST(LinresPurity, QuadraticForm) {
    const auto p = make(6, 2, {0.9, 0.9, 0.0}, 0.01, {0, 3});
    const auto psi = product(ghz(2), haar_random(6, 39));
    const auto kernels = all_kernels(psi, p, 30);

    const std::vector<double> zero{0.0, 0.0};
    for (double v : linres_purity(kernels, zero, 30).values) EXPECT_EQ(v, 1.0);

    const std::vector<double> l1{0.01, 0.02}, l2{0.02, 0.04};
    const auto a = linres_purity(kernels, l1, 30), b = linres_purity(kernels, l2, 30);
    for (std::size_t s = 1; s < a.size(); ++s) EXPECT_NEAR((1.0 - b.values[s]) / (1.0 - a.values[s]), 4.0, 1e-9);

    // Parallelogram law of a quadratic form: Q(a + b) + Q(a - b) = 2 Q(a) + 2 Q(b).
    const std::vector<double> lm{0.01, -0.02}, e0{0.01, 0.0}, e1{0.0, 0.02};
    const auto pp = linres_purity(kernels, l1, 30), pm = linres_purity(kernels, lm, 30);
    const auto p0 = linres_purity(kernels, e0, 30), p1 = linres_purity(kernels, e1, 30);
    for (std::size_t s = 0; s < pp.size(); ++s) {
        const double d = (1 - pp.values[s]) + (1 - pm.values[s]) - 2 * ((1 - p0.values[s]) + (1 - p1.values[s]));
        EXPECT_NEAR(d, 0.0, 1e-14);
    }
}

TEST(LinresPurity, DiagonalKernelsGiveSumOfSpectators) {
    const auto p = make(6, 2, {0.9, 0.9, 0.0}, 0.01, {0, 3});
    const auto psi = product(ghz(2), haar_random(6, 40));
    const std::vector<double> lambdas{0.01, 0.015};
    const std::vector<CorrelationKernel> diag{full_kernel(psi, p, 0, 0, 20), full_kernel(psi, p, 1, 1, 20)};
    const auto both = linres_purity(diag, lambdas, 20);
    const auto only0 = linres_purity(std::span(diag).subspan(0, 1), lambdas, 20);
    const auto only1 = linres_purity(std::span(diag).subspan(1, 1), lambdas, 20);
    for (std::size_t s = 0; s < both.size(); ++s) {
        double manual = 0.0;
        for (int i = 0; i < 2; ++i)
            for (std::size_t a = 0; a < s; ++a)
                for (std::size_t b = 0; b < s; ++b)
                    manual += 2 * lambdas[i] * lambdas[i] * diag[i](static_cast<int>(a), static_cast<int>(b)).real();
        EXPECT_NEAR(1.0 - both.values[s], manual, 1e-14);
        EXPECT_NEAR(1.0 - both.values[s], (1.0 - only0.values[s]) + (1.0 - only1.values[s]), 1e-15);
    }
    EXPECT_THROW(linres_purity(diag, lambdas, 22), ValidationError);
    EXPECT_THROW(linres_purity(diag, std::vector<double>{0.01}, 5), ValidationError);
}

TEST(LinresPurity, ErrorShrinksFasterThanLambdaSquared) {
    const auto psi = product(ghz(2), haar_random(8, 41));
    constexpr int T = 120;
    struct Run {
        PurityCurve exact, lr;
    };
    auto simulate = [&](double lambda) {
        const auto p = make(8, 2, {0.9, 0.9, 0.0}, lambda, {0, 4});
        return Run{kicked_ising::evolve_purity(psi, p, T), linres_purity(all_kernels(psi, p, T), p.lambdas, T)};
    };
    const double lambda = 0.02;
    const auto big = simulate(lambda), small = simulate(lambda / 2);
    // Both runs are compared over the times where the stronger coupling keeps 1 - P <= 0.05.
    double err_big = 0.0, err_small = 0.0;
    std::size_t used = 0;
    for (std::size_t s = 0; s < big.exact.size() && 1.0 - big.exact.values[s] <= 0.05; ++s, ++used) {
        err_big = std::max(err_big, std::abs(big.exact.values[s] - big.lr.values[s]));
        err_small = std::max(err_small, std::abs(small.exact.values[s] - small.lr.values[s]));
    }
    ASSERT_GT(used, 20u);
    const double scaled_big = err_big / (lambda * lambda), scaled_small = err_small / (lambda * lambda / 4);
    EXPECT_GE(scaled_big / scaled_small, 2.0) << err_big << " " << err_small;
}

TEST(LinresPurity, EchoSeriesIsExactAtSecondOrder) {
    // At tiny coupling the exact curve and the double sum agree to O(lambda^3).
    const auto psi = product(ghz(2), haar_random(5, 42));
    const auto p = make(5, 2, {0.9, 0.9, 0.0}, 1e-4, {0, 2});
    const auto exact = kicked_ising::evolve_purity(psi, p, 20);
    const auto lr = linres_purity(all_kernels(psi, p, 20), p.lambdas, 20);
    for (std::size_t s = 1; s < exact.size(); ++s) {
        const double d = 1.0 - exact.values[s];
        EXPECT_NEAR((1.0 - lr.values[s]) / d, 1.0, 1e-2) << s;
    }
}

TEST(SumRule, Prediction) {
    PurityCurve c;
    c.times = {0, 1, 2};
    c.values = {1.0, 0.99, 0.97};
    const std::vector<PurityCurve> one{c};
    EXPECT_EQ(sumrule_prediction(one).values, c.values);

    PurityCurve flat = c;
    flat.values = {1.0, 1.0, 1.0};
    const std::vector<PurityCurve> flats{flat, flat, flat};
    EXPECT_EQ(sumrule_prediction(flats).values, flat.values);

    const std::vector<PurityCurve> two{c, c};
    const auto pred = sumrule_prediction(two);
    EXPECT_NEAR(pred.values[2], 0.94, 1e-15);

    PurityCurve other = c;
    other.times = {0, 1, 3};
    const std::vector<PurityCurve> bad{c, other};
    EXPECT_THROW(sumrule_prediction(bad), ValidationError);
}

TEST(Echo, Identity) {
    const auto psi = product(ghz(2), haar_random(8, 43));
    const auto p = make(8, 2, {0.9, 0.9, 0.0}, 0.01, {0, 4});
    const auto t0 = echo_purity_check(psi, p, 0);
    EXPECT_NEAR(t0.forward, 1.0, 1e-12);
    EXPECT_NEAR(t0.echo, 1.0, 1e-12);

    const auto free = echo_purity_check(psi, make(8, 2, {0.9, 0.9, 0.0}, 0.0, {0, 4}), 50);
    EXPECT_NEAR(free.forward, 1.0, 1e-12);
    EXPECT_NEAR(free.echo, 1.0, 1e-12);

    const auto r = echo_purity_check(psi, p, 200);
    EXPECT_LT(r.forward, 1.0 - 1e-4);
    EXPECT_LE(std::abs(r.forward - r.echo), 1e-10);
}
