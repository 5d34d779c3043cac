#include "qdecay/rmt.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

#include "qdecay/parallel.hpp"
#include "qdecay/rng.hpp"

namespace qdecay::rmt {

namespace {

// Fills the upper triangle row by row: diagonal N(0,1), off-diagonal complex
// normal with unit second moment, lower triangle by conjugation.
Eigen::MatrixXcd draw_gue(int N, Rng& rng) {
    Eigen::MatrixXcd h(N, N);
    for (int k = 0; k < N; ++k) {
        h(k, k) = rng.normal();
        for (int l = k + 1; l < N; ++l) {
            const cplx z = rng.complex_normal();
            h(k, l) = z;
            h(l, k) = std::conj(z);
        }
    }
    return h;
}

} // namespace

Eigen::MatrixXcd sample_gue(int N, std::uint64_t seed) {
    if (N < 2) throw DomainError("GUE dimension must be >= 2");
    Rng rng(seed);
    return draw_gue(N, rng);
}

double heisenberg_time(int N) {
    if (N < 2) throw DomainError("environment dimension must be >= 2");
    return 2.0 * std::sqrt(static_cast<double>(N));
}

double f_lr(double t, double tau_h) {
    if (t < 0.0 || !(tau_h > 0.0)) throw DomainError("f_lr needs t >= 0 and tau_H > 0");
    const double lo = std::min(t, tau_h);
    return t * std::max(t, tau_h) + (2.0 / (3.0 * tau_h)) * lo * lo * lo;
}

AnalyticPurity spectator_analytic(double lambda1, double p1, double t, double tau_h) {
    if (p1 < 0.5 || p1 > 1.0) throw DomainError("single-qubit purity must lie in [1/2, 1]");
    AnalyticPurity out;
    const double decay = lambda1 * lambda1 * (2.0 - p1) * f_lr(t, tau_h);
    out.purity = 1.0 - decay;
    out.beyond_linear_response = decay > kLinearResponseLimit;
    return out;
}

double sumrule_analytic(std::span<const double> lambdas, std::span<const double> purities, double t, double tau_h) {
    if (lambdas.size() != purities.size()) throw ValidationError("need one purity per coupling strength");
    double weight = 0.0;
    for (std::size_t k = 0; k < lambdas.size(); ++k) {
        if (purities[k] < 0.5 || purities[k] > 1.0) throw DomainError("single-qubit purity must lie in [1/2, 1]");
        weight += lambdas[k] * lambdas[k] * (2.0 - purities[k]);
    }
    return 1.0 - f_lr(t, tau_h) * weight;
}

PurityCurve mc_spectator(const RmtModel& model, const PureState& psi_qm, int i, std::span<const double> times) {
    const int N = model.N;
    if (N < 2) throw ValidationError("environment dimension N must be >= 2");
    if (model.realizations < 1) throw ValidationError("need at least one realization");
    if (psi_qm.layout().n_env() != 0) throw ValidationError("memory state must be a standalone register");
    const int n = psi_qm.layout().n_mem();
    if (static_cast<int>(model.lambdas.size()) != n) throw ValidationError("need one coupling strength per qubit");
    if (i < 0 || i >= n) throw std::out_of_range("coupled qubit index out of range");
    const std::size_t M = psi_qm.dimension();
    if (M * static_cast<std::size_t>(N) > kMaxJointDimension) {
        throw SizeError("memory dimension x N exceeds " + std::to_string(kMaxJointDimension));
    }
    for (std::size_t k = 0; k < times.size(); ++k) {
        if (times[k] < 0.0 || (k > 0 && !(times[k] > times[k - 1]))) {
            throw ValidationError("times must be nonnegative and strictly increasing");
        }
    }

    const double lambda = model.lambdas[static_cast<std::size_t>(i)];
    const Eigen::Index D = 2 * static_cast<Eigen::Index>(N);
    const std::size_t rest_count = M / 2;
    const std::size_t low_mask = (std::size_t{1} << i) - 1;
    // Memory index with bit i = q and the remaining bits taken from r.
    auto mem_index = [&](std::size_t q, std::size_t r) {
        return (r & low_mask) | (q << i) | ((r & ~low_mask) << 1);
    };

    const std::size_t n_times = times.size();
    std::vector<std::vector<double>> results(static_cast<std::size_t>(model.realizations));

    parallel_for(results.size(), model.threads, [&](std::size_t r) {
        Rng rng(derive_seed(model.seed, r));
        const Eigen::MatrixXcd h_env = draw_gue(N, rng);
        const Eigen::MatrixXcd v = draw_gue(static_cast<int>(D), rng);
        Eigen::VectorXcd psi_env(N);
        for (int k = 0; k < N; ++k) psi_env(k) = rng.complex_normal();
        psi_env.normalize();

        // Joint index (q, k) -> q + 2k on qubit i (x) environment.
        Eigen::MatrixXcd h = lambda * v;
        for (int k = 0; k < N; ++k) {
            for (int l = 0; l < N; ++l) {
                h(2 * k, 2 * l) += h_env(k, l);
                h(2 * k + 1, 2 * l + 1) += h_env(k, l);
            }
        }
        const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(h);
        const Eigen::MatrixXcd& w = solver.eigenvectors();
        const Eigen::VectorXd& energies = solver.eigenvalues();

        Eigen::MatrixXcd branches(D, static_cast<Eigen::Index>(rest_count));
        for (std::size_t rr = 0; rr < rest_count; ++rr) {
            for (int k = 0; k < N; ++k) {
                for (std::size_t q = 0; q < 2; ++q) {
                    branches(static_cast<Eigen::Index>(q) + 2 * k, static_cast<Eigen::Index>(rr)) =
                        psi_qm[mem_index(q, rr)] * psi_env(k);
                }
            }
        }
        const Eigen::MatrixXcd coeffs = w.adjoint() * branches;

        std::vector<double> purity(n_times);
        std::vector<cplx> joint(M * static_cast<std::size_t>(N));
        Eigen::MatrixXcd phased(D, coeffs.cols());
        for (std::size_t s = 0; s < n_times; ++s) {
            for (Eigen::Index a = 0; a < D; ++a) phased.row(a) = std::polar(1.0, -energies(a) * times[s]) * coeffs.row(a);
            const Eigen::MatrixXcd evolved = w * phased;
            for (std::size_t rr = 0; rr < rest_count; ++rr) {
                for (int k = 0; k < N; ++k) {
                    for (std::size_t q = 0; q < 2; ++q) {
                        joint[mem_index(q, rr) + M * static_cast<std::size_t>(k)] =
                            evolved(static_cast<Eigen::Index>(q) + 2 * k, static_cast<Eigen::Index>(rr));
                    }
                }
            }
            purity[s] = gram_purity(joint, M, static_cast<std::size_t>(N));
        }
        results[r] = std::move(purity);
    });

    PurityCurve curve;
    curve.meta.model = "rmt_gue";
    curve.meta.seeds = {model.seed};
    curve.meta.realizations = model.realizations;
    curve.times.assign(times.begin(), times.end());
    curve.values.assign(n_times, 0.0);
    curve.std_errors.assign(n_times, 0.0);
    const auto R = static_cast<double>(model.realizations);
    for (std::size_t s = 0; s < n_times; ++s) {
        double mean = 0.0;
        double m2 = 0.0;
        for (std::size_t r = 0; r < results.size(); ++r) {
            const double x = results[r][s];
            const double delta = x - mean;
            mean += delta / static_cast<double>(r + 1);
            m2 += delta * (x - mean);
        }
        curve.values[s] = mean;
        curve.std_errors[s] = model.realizations > 1 ? std::sqrt(m2 / (R - 1.0) / R) : 0.0;
    }
    return curve;
}

PurityCurve analytic_curve(std::span<const double> times, double lambda, double p, double tau_h, double alpha) {
    PurityCurve c;
    c.meta.model = "rmt_analytic";
    c.times.assign(times.begin(), times.end());
    for (double t : times) c.values.push_back(spectator_analytic(lambda, p, alpha * t, tau_h).purity);
    return c;
}

TimeScaleFit fit_time_scale(const PurityCurve& measured, double lambda, double p, double tau_h, DecayWindow window) {
    auto score = [&](double alpha) {
        const auto cmp = compare_curves(measured, analytic_curve(measured.times, lambda, p, tau_h, alpha), window);
        return cmp.inconclusive ? std::numeric_limits<double>::infinity() : cmp.max_relative;
    };

    // Log-spaced scan over alpha in [1/20, 20], then golden-section refinement.
    constexpr int kScan = 600;
    const double lo = std::log(0.05), hi = std::log(20.0);
    double best_x = 0.0;
    double best = std::numeric_limits<double>::infinity();
    for (int k = 0; k <= kScan; ++k) {
        const double x = lo + (hi - lo) * k / kScan;
        const double s = score(std::exp(x));
        if (s < best) {
            best = s;
            best_x = x;
        }
    }
    const double step = (hi - lo) / kScan;
    double a = best_x - step, b = best_x + step;
    const double g = 0.5 * (std::sqrt(5.0) - 1.0);
    for (int it = 0; it < 60; ++it) {
        const double c = b - g * (b - a);
        const double d = a + g * (b - a);
        if (score(std::exp(c)) < score(std::exp(d))) {
            b = d;
        } else {
            a = c;
        }
    }
    double x = 0.5 * (a + b);
    if (score(std::exp(x)) > best) x = best_x;

    TimeScaleFit fit;
    fit.alpha = std::exp(x);
    fit.raw = compare_curves(measured, analytic_curve(measured.times, lambda, p, tau_h, 1.0), window);
    fit.fitted_curve = analytic_curve(measured.times, lambda, p, tau_h, fit.alpha);
    fit.fitted = compare_curves(measured, fit.fitted_curve, window);
    return fit;
}

} // namespace qdecay::rmt
