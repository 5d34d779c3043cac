#include "qdecay/harness.hpp"

#include <cmath>
#include <complex>
#include <fstream>
#include <stdexcept>

#include <fmt/format.h>
#include <nlohmann/json.hpp>

#include "qdecay/kicked_ising.hpp"
#include "qdecay/linres.hpp"
#include "qdecay/parallel.hpp"
#include "qdecay/rmt.hpp"
#include "qdecay/rng.hpp"
#include "qdecay/states.hpp"

#ifndef QDECAY_VERSION
#define QDECAY_VERSION "unknown"
#endif

namespace qdecay::harness {

namespace {

using nlohmann::json;

struct Outputs {
    std::vector<std::string> header;
    std::vector<std::vector<double>> columns;
    std::optional<json> report;
    int exit_code = kExitOk;
};

std::filesystem::path with_suffix(const std::filesystem::path& p, std::string_view suffix) {
    return std::filesystem::path(p.string() + std::string(suffix));
}

PureState initial_state(const ExperimentConfig& c, std::size_t realization) {
    return product(memory_state(c), haar_random(c.L, derive_seed(c.seed, realization)));
}

std::vector<std::uint64_t> realization_seeds(const ExperimentConfig& c) {
    std::vector<std::uint64_t> seeds;
    for (int r = 0; r < c.realizations; ++r) seeds.push_back(derive_seed(c.seed, static_cast<std::uint64_t>(r)));
    return seeds;
}

/// Ensemble mean and standard error of curves on a common grid.
PurityCurve average(std::span<const PurityCurve> curves, const ExperimentConfig& c) {
    require_common_grid(curves);
    PurityCurve out;
    out.times = curves.front().times;
    out.meta.model = curves.front().meta.model;
    out.meta.seeds = realization_seeds(c);
    out.meta.realizations = static_cast<int>(curves.size());
    const auto R = static_cast<double>(curves.size());
    for (std::size_t s = 0; s < out.times.size(); ++s) {
        double mean = 0.0, m2 = 0.0;
        for (std::size_t r = 0; r < curves.size(); ++r) {
            const double x = curves[r].values[s];
            const double d = x - mean;
            mean += d / static_cast<double>(r + 1);
            m2 += d * (x - mean);
        }
        out.values.push_back(mean);
        out.std_errors.push_back(curves.size() > 1 ? std::sqrt(m2 / (R - 1.0) / R) : 0.0);
    }
    return out;
}

json comparison_json(const CurveComparison& cmp, DecayWindow window, double tolerance) {
    return json{{"window", {window.lo, window.hi}},
                {"tolerance", tolerance},
                {"points", cmp.points},
                {"max_relative", cmp.max_relative},
                {"mean_relative", cmp.mean_relative},
                {"inconclusive", cmp.inconclusive},
                {"pass", !cmp.inconclusive && cmp.max_relative <= tolerance}};
}

int gate(const CurveComparison& cmp, double tolerance) {
    if (cmp.inconclusive) return kExitInconclusive;
    return cmp.max_relative <= tolerance ? kExitOk : kExitToleranceExceeded;
}

Outputs run_curves(const ExperimentConfig& c) {
    const auto params = kicked_params(c);
    const int t_max = static_cast<int>(c.t_max);
    const bool sumrule = c.experiment == ExperimentKind::sumrule;
    const std::size_t per = sumrule ? static_cast<std::size_t>(c.n) + 1 : 1;
    const std::size_t R = static_cast<std::size_t>(c.realizations);

    // Job k: realization k / per; slot 0 is the full (or single) curve, slot s > 0 spectator s - 1.
    std::vector<PurityCurve> curves(R * per);
    parallel_for(curves.size(), c.threads, [&](std::size_t k) {
        const auto psi0 = initial_state(c, k / per);
        const std::size_t slot = k % per;
        if (c.experiment == ExperimentKind::spectator) {
            curves[k] = kicked_ising::spectator_curve(psi0, params, c.qubit, t_max);
        } else if (slot == 0) {
            curves[k] = kicked_ising::evolve_purity(psi0, params, t_max);
        } else {
            curves[k] = kicked_ising::spectator_curve(psi0, params, static_cast<int>(slot) - 1, t_max);
        }
    });

    auto slot_mean = [&](std::size_t slot) {
        std::vector<PurityCurve> group;
        for (std::size_t r = 0; r < R; ++r) group.push_back(std::move(curves[r * per + slot]));
        return average(group, c);
    };

    Outputs out;
    const auto main = slot_mean(0);
    out.header.push_back("t");
    out.columns.push_back(main.times);
    if (!sumrule) {
        out.header.push_back(c.experiment == ExperimentKind::spectator ? fmt::format("P_sp_{}", c.qubit) : "P");
        out.columns.push_back(main.values);
        if (R > 1) {
            out.header.push_back("P_stderr");
            out.columns.push_back(main.std_errors);
        }
        return out;
    }

    std::vector<PurityCurve> spectators;
    for (std::size_t s = 1; s < per; ++s) spectators.push_back(slot_mean(s));
    const auto prediction = linres::sumrule_prediction(spectators);
    out.header.insert(out.header.end(), {"P_full", "P_sumrule"});
    out.columns.push_back(main.values);
    out.columns.push_back(prediction.values);
    for (std::size_t s = 0; s < spectators.size(); ++s) {
        out.header.push_back(fmt::format("P_sp_{}", s));
        out.columns.push_back(spectators[s].values);
    }
    const auto cmp = compare_curves(main, prediction, c.window);
    out.report = comparison_json(cmp, c.window, c.tolerance);
    (*out.report)["experiment"] = "sumrule";
    out.exit_code = gate(cmp, c.tolerance);
    return out;
}

Outputs run_correlations(const ExperimentConfig& c) {
    const auto params = kicked_params(c);
    const std::size_t R = static_cast<std::size_t>(c.realizations);
    std::vector<linres::CorrelationKernel> kernels(R);
    parallel_for(R, c.threads, [&](std::size_t r) {
        kernels[r] = linres::cross_kernel(initial_state(c, r), params, c.pair[0], c.pair[1], c.grid);
    });
    Outputs out;
    out.header = {"tau", "tau_prime", "value"};
    out.columns.resize(3);
    const int g = c.grid + 1;
    for (int a = 0; a < g; ++a) {
        for (int b = 0; b < g; ++b) {
            double re = 0.0;
            for (const auto& k : kernels) re += k(a, b).real();
            out.columns[0].push_back(a);
            out.columns[1].push_back(b);
            out.columns[2].push_back(std::abs(re / static_cast<double>(R)));
        }
    }
    return out;
}

std::vector<double> rmt_times(const ExperimentConfig& c) {
    std::vector<double> t;
    for (int k = 0; k <= c.time_steps; ++k) t.push_back(c.t_max * k / c.time_steps);
    return t;
}

Outputs run_rmt_mc(const ExperimentConfig& c) {
    const auto psi_qm = memory_state(c);
    rmt::RmtModel model;
    model.N = c.N;
    model.lambdas = expanded_lambdas(c);
    model.seed = c.seed;
    model.realizations = c.realizations;
    model.threads = c.threads;
    const auto times = rmt_times(c);
    const auto mc = rmt::mc_spectator(model, psi_qm, c.qubit, times);

    const double lambda = model.lambdas[static_cast<std::size_t>(c.qubit)];
    const double p = std::clamp(single_qubit_purity(psi_qm, c.qubit), 0.5, 1.0);
    const double tau_h = model.tau_h();
    const auto fit = rmt::fit_time_scale(mc, lambda, p, tau_h, c.window);
    const auto raw = rmt::analytic_curve(times, lambda, p, tau_h, 1.0);

    Outputs out;
    out.header = {"t", "P_mc", "P_stderr", "P_analytic", "P_analytic_fit"};
    out.columns = {mc.times, mc.values, mc.std_errors, raw.values, fit.fitted_curve.values};
    json report = comparison_json(fit.fitted, c.window, c.tolerance);
    report["experiment"] = "rmt_mc";
    report["alpha"] = fit.alpha;
    report["tau_h"] = tau_h;
    report["single_qubit_purity"] = p;
    report["raw"] = comparison_json(fit.raw, c.window, c.tolerance);
    out.report = std::move(report);
    out.exit_code = gate(fit.fitted, c.tolerance);
    return out;
}

Outputs run_rmt_analytic(const ExperimentConfig& c) {
    const auto psi_qm = memory_state(c);
    const auto lambdas = expanded_lambdas(c);
    std::vector<double> purities;
    for (int i = 0; i < c.n; ++i) purities.push_back(std::clamp(single_qubit_purity(psi_qm, i), 0.5, 1.0));
    const double tau_h = rmt::heisenberg_time(c.N);
    Outputs out;
    out.header = {"t", "f", "P"};
    out.columns.resize(3);
    for (double t : rmt_times(c)) {
        out.columns[0].push_back(t);
        out.columns[1].push_back(rmt::f_lr(t, tau_h));
        out.columns[2].push_back(rmt::sumrule_analytic(lambdas, purities, t, tau_h));
    }
    return out;
}

Outputs dispatch(const ExperimentConfig& c) {
    switch (c.experiment) {
    case ExperimentKind::decay:
    case ExperimentKind::spectator:
    case ExperimentKind::sumrule:
        return run_curves(c);
    case ExperimentKind::correlations:
        return run_correlations(c);
    case ExperimentKind::rmt_mc:
        return run_rmt_mc(c);
    case ExperimentKind::rmt_analytic:
        return run_rmt_analytic(c);
    }
    throw ValidationError("unknown experiment");
}

} // namespace

std::string library_version() { return QDECAY_VERSION; }

void write_csv(const std::filesystem::path& path, std::span<const std::string> header,
               std::span<const std::vector<double>> columns) {
    if (header.size() != columns.size()) throw std::invalid_argument("CSV header and column count differ");
    const std::size_t rows = columns.empty() ? 0 : columns.front().size();
    std::string text;
    for (std::size_t k = 0; k < header.size(); ++k) {
        if (k) text += ',';
        text += header[k];
    }
    text += '\n';
    for (std::size_t r = 0; r < rows; ++r) {
        for (std::size_t k = 0; k < columns.size(); ++k) {
            if (k) text += ',';
            text += fmt::format("{:.17g}", columns[k].at(r));
        }
        text += '\n';
    }
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    out << text;
}

std::string comparison_report(const CurveComparison& cmp, DecayWindow window, double tolerance) {
    return comparison_json(cmp, window, tolerance).dump(2);
}

RunResult run(const ExperimentConfig& config, const RunOptions& options) {
    RunResult result;
    Outputs outputs;
    try {
        validate(config);
        outputs = dispatch(config);
    } catch (const SizeError& e) {
        result.exit_code = kExitComputeCap;
        result.message = e.what();
        return result;
    } catch (const std::logic_error& e) {
        // ValidationError, DomainError, std::out_of_range and std::invalid_argument.
        result.exit_code = kExitInvalidConfig;
        result.message = e.what();
        return result;
    }

    const std::filesystem::path csv = config.output;
    if (csv.has_parent_path()) std::filesystem::create_directories(csv.parent_path());
    write_csv(csv, outputs.header, outputs.columns);
    result.files.push_back(csv);

    const auto manifest = with_suffix(csv, ".manifest");
    {
        std::ofstream out(manifest, std::ios::binary);
        if (!out) throw std::runtime_error("cannot write " + manifest.string());
        out << "# qdecay experiment manifest\n"
            << "# library_version = " << library_version() << '\n'
            << "# realization_seeds = derive_seed(seed, r) for r < realizations\n"
            << to_manifest(config);
    }
    result.files.push_back(manifest);

    if (outputs.report) {
        const auto report = with_suffix(csv, ".report.json");
        std::ofstream out(report, std::ios::binary);
        if (!out) throw std::runtime_error("cannot write " + report.string());
        out << outputs.report->dump(2) << '\n';
        result.files.push_back(report);
        result.message = outputs.report->dump();
    }
    if (options.ci) result.exit_code = outputs.exit_code;
    return result;
}

} // namespace qdecay::harness
