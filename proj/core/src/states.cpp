#include "qdecay/states.hpp"

#include <cmath>
#include <string>

#include "qdecay/rng.hpp"

namespace qdecay {

PureState ghz(int n) {
    if (n < 2) throw DomainError("GHZ state needs n >= 2, got " + std::to_string(n));
    const auto layout = make_layout(n, 0);
    std::vector<cplx> amps(layout.dimension());
    amps.front() = M_SQRT1_2;
    amps.back() = M_SQRT1_2;
    return PureState(layout, std::move(amps));
}

PureState w_state(int n) {
    if (n < 2) throw DomainError("W state needs n >= 2, got " + std::to_string(n));
    const auto layout = make_layout(n, 0);
    std::vector<cplx> amps(layout.dimension());
    const double a = 1.0 / std::sqrt(static_cast<double>(n));
    for (int q = 0; q < n; ++q) amps[std::size_t{1} << q] = a;
    return PureState(layout, std::move(amps));
}

PureState basis_state(int n, std::size_t index) { return PureState::basis(make_layout(n, 0), index); }

PureState haar_random(int n_bits, std::uint64_t seed) {
    const auto layout = make_layout(n_bits, 0);
    Rng rng(seed);
    std::vector<cplx> amps(layout.dimension());
    double norm2 = 0.0;
    for (auto& a : amps) {
        a = rng.complex_normal();
        norm2 += std::norm(a);
    }
    const double scale = 1.0 / std::sqrt(norm2);
    for (auto& a : amps) a *= scale;
    return PureState(layout, std::move(amps));
}

PureState product(const PureState& mem, const PureState& env) {
    if (mem.layout().n_env() != 0 || env.layout().n_env() != 0) {
        throw ValidationError("product expects two standalone registers");
    }
    const auto layout = make_layout(mem.layout().total_bits(), env.layout().total_bits());
    const auto m = mem.amplitudes();
    const auto e = env.amplitudes();
    std::vector<cplx> amps(layout.dimension());
    for (std::size_t ke = 0; ke < e.size(); ++ke) {
        for (std::size_t km = 0; km < m.size(); ++km) amps[km + m.size() * ke] = m[km] * e[ke];
    }
    return PureState(layout, std::move(amps));
}

} // namespace qdecay
