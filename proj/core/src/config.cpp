#include "qdecay/config.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <map>
#include <set>
#include <sstream>

#include <fmt/format.h>

#include "qdecay/states.hpp"

namespace qdecay::harness {

namespace {

constexpr std::pair<ExperimentKind, std::string_view> kExperimentNames[] = {
    {ExperimentKind::decay, "decay"},       {ExperimentKind::spectator, "spectator"},
    {ExperimentKind::sumrule, "sumrule"},   {ExperimentKind::correlations, "correlations"},
    {ExperimentKind::rmt_mc, "rmt_mc"},     {ExperimentKind::rmt_analytic, "rmt_analytic"},
};

std::string_view trim(std::string_view s) {
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string_view::npos) return {};
    const auto last = s.find_last_not_of(" \t\r");
    return s.substr(first, last - first + 1);
}

std::vector<std::string_view> split_list(std::string_view s) {
    std::vector<std::string_view> out;
    while (true) {
        const auto comma = s.find(',');
        out.push_back(trim(s.substr(0, comma)));
        if (comma == std::string_view::npos) break;
        s.remove_prefix(comma + 1);
    }
    if (out.size() == 1 && out.front().empty()) out.clear();
    return out;
}

class LineError {
  public:
    LineError(std::string_view source, int line, std::string_view key) : source_(source), line_(line), key_(key) {}

    [[noreturn]] void fail(std::string_view what) const {
        throw ValidationError(fmt::format("{}:{}: key '{}': {}", source_, line_, key_, what));
    }

  private:
    std::string_view source_;
    int line_;
    std::string_view key_;
};

template <class T>
T parse_number(std::string_view text, const LineError& err) {
    T value{};
    const auto* end = text.data() + text.size();
    const auto [ptr, ec] = std::from_chars(text.data(), end, value);
    if (ec != std::errc{} || ptr != end || text.empty()) err.fail(fmt::format("'{}' is not a valid number", text));
    if constexpr (std::is_floating_point_v<T>) {
        if (!std::isfinite(value)) err.fail("value must be finite");
    }
    return value;
}

bool parse_bool(std::string_view text, const LineError& err) {
    if (text == "true") return true;
    if (text == "false") return false;
    err.fail("expected true or false");
}

cplx parse_complex(std::string_view text, const LineError& err) {
    const auto colon = text.find(':');
    if (colon == std::string_view::npos) return {parse_number<double>(text, err), 0.0};
    return {parse_number<double>(trim(text.substr(0, colon)), err),
            parse_number<double>(trim(text.substr(colon + 1)), err)};
}

template <class T>
std::vector<T> parse_list(std::string_view text, const LineError& err) {
    std::vector<T> out;
    for (auto item : split_list(text)) out.push_back(parse_number<T>(item, err));
    return out;
}

std::string fmt_double(double v) { return fmt::format("{:.17g}", v); }

template <class T>
std::string join(const std::vector<T>& values) {
    std::string out;
    for (std::size_t k = 0; k < values.size(); ++k) {
        if (k) out += ',';
        if constexpr (std::is_floating_point_v<T>) {
            out += fmt_double(values[k]);
        } else {
            out += fmt::format("{}", values[k]);
        }
    }
    return out;
}

} // namespace

std::string_view to_string(ExperimentKind kind) {
    for (const auto& [k, name] : kExperimentNames) {
        if (k == kind) return name;
    }
    return "unknown";
}

std::optional<ExperimentKind> parse_experiment(std::string_view name) {
    for (const auto& [k, n] : kExperimentNames) {
        if (n == name) return k;
    }
    return std::nullopt;
}

ModelKind ExperimentConfig::model_kind() const {
    if (model) return *model;
    return experiment == ExperimentKind::rmt_mc || experiment == ExperimentKind::rmt_analytic ? ModelKind::rmt
                                                                                                : ModelKind::kicked_ising;
}

ExperimentConfig parse_config(std::istream& in, std::string_view source, std::optional<ExperimentKind>* declared) {
    ExperimentConfig c;
    std::set<std::string, std::less<>> seen;
    std::string raw;
    int line_no = 0;
    while (std::getline(in, raw)) {
        ++line_no;
        std::string_view line = raw;
        if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string_view::npos) {
            throw ValidationError(fmt::format("{}:{}: expected 'key = value'", source, line_no));
        }
        const std::string_view key = trim(line.substr(0, eq));
        const std::string_view value = trim(line.substr(eq + 1));
        const LineError err(source, line_no, key);
        if (!seen.emplace(key).second) err.fail("key given twice");

        if (key == "experiment") {
            const auto kind = parse_experiment(value);
            if (!kind) err.fail("unknown experiment kind");
            c.experiment = *kind;
            if (declared) *declared = kind;
        } else if (key == "model") {
            if (value == "kicked_ising") {
                c.model = ModelKind::kicked_ising;
            } else if (value == "rmt") {
                c.model = ModelKind::rmt;
            } else {
                err.fail("expected kicked_ising or rmt");
            }
        } else if (key == "L") {
            c.L = parse_number<int>(value, err);
        } else if (key == "n") {
            c.n = parse_number<int>(value, err);
        } else if (key == "b") {
            const auto v = parse_list<double>(value, err);
            if (v.size() != 3) err.fail("field needs three components");
            c.b = {v[0], v[1], v[2]};
        } else if (key == "lambdas") {
            c.lambdas = parse_list<double>(value, err);
        } else if (key == "positions") {
            c.positions = parse_list<int>(value, err);
        } else if (key == "ring_closed") {
            c.ring_closed = parse_bool(value, err);
        } else if (key == "kick_memory") {
            c.kick_memory = parse_bool(value, err);
        } else if (key == "initial_state") {
            if (value == "ghz") {
                c.initial_state = InitialKind::ghz;
            } else if (value == "w") {
                c.initial_state = InitialKind::w;
            } else if (value == "product") {
                c.initial_state = InitialKind::product;
            } else if (value == "custom") {
                c.initial_state = InitialKind::custom;
            } else {
                err.fail("expected ghz, w, product or custom");
            }
        } else if (key == "product_index") {
            c.product_index = parse_number<std::size_t>(value, err);
        } else if (key == "amplitudes") {
            c.amplitudes.clear();
            for (auto item : split_list(value)) c.amplitudes.push_back(parse_complex(item, err));
        } else if (key == "t_max") {
            c.t_max = parse_number<double>(value, err);
        } else if (key == "time_steps") {
            c.time_steps = parse_number<int>(value, err);
        } else if (key == "qubit") {
            c.qubit = parse_number<int>(value, err);
        } else if (key == "pair") {
            const auto v = parse_list<int>(value, err);
            if (v.size() != 2) err.fail("pair needs two qubit indices");
            c.pair = {v[0], v[1]};
        } else if (key == "grid") {
            c.grid = parse_number<int>(value, err);
        } else if (key == "N") {
            c.N = parse_number<int>(value, err);
        } else if (key == "realizations") {
            c.realizations = parse_number<int>(value, err);
        } else if (key == "seed") {
            c.seed = parse_number<std::uint64_t>(value, err);
        } else if (key == "threads") {
            c.threads = parse_number<int>(value, err);
        } else if (key == "output") {
            if (value.empty()) err.fail("output path is empty");
            c.output = std::string(value);
        } else if (key == "tolerance") {
            c.tolerance = parse_number<double>(value, err);
        } else if (key == "window") {
            const auto v = parse_list<double>(value, err);
            if (v.size() != 2) err.fail("window needs lower and upper decay bounds");
            c.window = {v[0], v[1]};
        } else {
            err.fail("unknown key");
        }
    }
    return c;
}

ExperimentConfig load_config(const std::filesystem::path& path, std::optional<ExperimentKind>* declared) {
    std::ifstream in(path);
    if (!in) throw ValidationError("cannot open config file " + path.string());
    return parse_config(in, path.string(), declared);
}

std::vector<double> expanded_lambdas(const ExperimentConfig& c) {
    if (c.lambdas.size() == 1 && c.n > 1) return std::vector<double>(static_cast<std::size_t>(c.n), c.lambdas.front());
    return c.lambdas;
}

kicked_ising::KickedIsingParams kicked_params(const ExperimentConfig& c) {
    kicked_ising::KickedIsingParams p;
    p.L = c.L;
    p.n = c.n;
    p.b = c.b;
    p.lambdas = expanded_lambdas(c);
    p.positions = c.positions;
    if (p.positions.empty()) {
        for (int i = 0; i < c.n; ++i) {
            p.positions.push_back(static_cast<int>(std::lround(static_cast<double>(i) * c.L / c.n)) % std::max(c.L, 1));
        }
    }
    p.ring_closed = c.ring_closed;
    p.kick_memory = c.kick_memory;
    return p;
}

PureState memory_state(const ExperimentConfig& c) {
    switch (c.initial_state) {
    case InitialKind::ghz:
        return ghz(c.n);
    case InitialKind::w:
        return w_state(c.n);
    case InitialKind::product:
        return basis_state(c.n, c.product_index);
    case InitialKind::custom:
        return PureState(make_layout(c.n, 0), c.amplitudes);
    }
    throw ValidationError("unknown initial state kind");
}

void validate(const ExperimentConfig& c) {
    const ModelKind model = c.model_kind();
    const bool rmt_experiment = c.experiment == ExperimentKind::rmt_mc || c.experiment == ExperimentKind::rmt_analytic;
    if (rmt_experiment != (model == ModelKind::rmt)) {
        throw ValidationError(fmt::format("experiment '{}' does not run on the configured model", to_string(c.experiment)));
    }
    if (c.n < 1) throw ValidationError("n must be >= 1");
    if (c.lambdas.size() != 1 && static_cast<int>(c.lambdas.size()) != c.n) {
        throw ValidationError("lambdas needs one value or one per qubit");
    }
    if (c.realizations < 1) throw ValidationError("realizations must be >= 1");
    if (c.threads < 1) throw ValidationError("threads must be >= 1");
    if (!(c.t_max >= 0.0)) throw ValidationError("t_max must be nonnegative");
    if (!(c.tolerance > 0.0)) throw ValidationError("tolerance must be positive");
    if (!(c.window.lo > 0.0 && c.window.lo < c.window.hi)) throw ValidationError("window must satisfy 0 < lo < hi");
    if (c.initial_state == InitialKind::product && c.n <= 62 && c.product_index >= (std::size_t{1} << c.n)) {
        throw ValidationError("product_index outside the memory register");
    }
    if (c.initial_state == InitialKind::custom && c.amplitudes.size() != (std::size_t{1} << std::min(c.n, 62))) {
        throw ValidationError("custom amplitudes need 2^n entries");
    }
    if ((c.initial_state == InitialKind::ghz || c.initial_state == InitialKind::w) && c.n < 2) {
        throw ValidationError("ghz and w initial states need n >= 2");
    }

    if (model == ModelKind::kicked_ising) {
        if (c.t_max != std::floor(c.t_max)) throw ValidationError("t_max must be a whole number of kicks");
        kicked_params(c).validate();
        make_layout(c.n, c.L);
        if (c.experiment == ExperimentKind::spectator && (c.qubit < 0 || c.qubit >= c.n)) {
            throw ValidationError("qubit index out of range");
        }
        if (c.experiment == ExperimentKind::correlations) {
            if (c.pair[0] < 0 || c.pair[0] >= c.n || c.pair[1] < 0 || c.pair[1] >= c.n) {
                throw ValidationError("pair indices out of range");
            }
            if (c.grid < 0) throw ValidationError("grid must be nonnegative");
        }
    } else {
        if (c.N < 2) throw ValidationError("N must be >= 2");
        if (c.time_steps < 1) throw ValidationError("time_steps must be >= 1");
        if (c.qubit < 0 || c.qubit >= c.n) throw ValidationError("qubit index out of range");
        make_layout(c.n, 0);
    }
    memory_state(c);
}

std::string to_manifest(const ExperimentConfig& c) {
    std::ostringstream out;
    const auto line = [&](std::string_view key, const std::string& value) { out << key << " = " << value << '\n'; };
    line("experiment", std::string(to_string(c.experiment)));
    line("model", c.model_kind() == ModelKind::rmt ? "rmt" : "kicked_ising");
    line("L", std::to_string(c.L));
    line("n", std::to_string(c.n));
    line("b", join(std::vector<double>(c.b.begin(), c.b.end())));
    line("lambdas", join(c.lambdas));
    if (!c.positions.empty()) line("positions", join(c.positions));
    line("ring_closed", c.ring_closed ? "true" : "false");
    line("kick_memory", c.kick_memory ? "true" : "false");
    constexpr std::string_view kInitial[] = {"ghz", "w", "product", "custom"};
    line("initial_state", std::string(kInitial[static_cast<int>(c.initial_state)]));
    line("product_index", std::to_string(c.product_index));
    if (!c.amplitudes.empty()) {
        std::string amps;
        for (std::size_t k = 0; k < c.amplitudes.size(); ++k) {
            if (k) amps += ',';
            amps += fmt_double(c.amplitudes[k].real()) + ':' + fmt_double(c.amplitudes[k].imag());
        }
        line("amplitudes", amps);
    }
    line("t_max", fmt_double(c.t_max));
    line("time_steps", std::to_string(c.time_steps));
    line("qubit", std::to_string(c.qubit));
    line("pair", fmt::format("{},{}", c.pair[0], c.pair[1]));
    line("grid", std::to_string(c.grid));
    line("N", std::to_string(c.N));
    line("realizations", std::to_string(c.realizations));
    line("seed", std::to_string(c.seed));
    line("threads", std::to_string(c.threads));
    line("output", c.output);
    line("tolerance", fmt_double(c.tolerance));
    line("window", fmt_double(c.window.lo) + "," + fmt_double(c.window.hi));
    return out.str();
}

} // namespace qdecay::harness
