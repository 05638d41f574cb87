#include "asir/sir.hpp"

#include <cmath>
#include <cstdio>

#include "asir/errors.hpp"

namespace asir {

namespace {

constexpr double kConservationTolerance = 1e-9;
constexpr double kNegativeTolerance = -1e-12;

void check_state(const SirState& state, std::size_t timestamp) {
    if (state.s < kNegativeTolerance) throw NegativeCompartment(timestamp, "S", state.s);
    if (state.i < kNegativeTolerance) throw NegativeCompartment(timestamp, "I", state.i);
    if (state.r < kNegativeTolerance) throw NegativeCompartment(timestamp, "R", state.r);
}

}  // namespace

void SirParams::validate() const {
    if (!(alpha >= 0.0) || !std::isfinite(alpha))
        throw Error("alpha must be a nonnegative real, got " + std::to_string(alpha));
    if (!(beta >= 0.0 && beta <= 1.0))
        throw Error("beta is a per-unit-interval probability and must lie in [0, 1], got " +
                    std::to_string(beta));
    if (!(n_total > 0.0)) throw Error("population size must be positive");
    if (s0 < 0.0 || i0 < 0.0 || r0 < 0.0) throw Error("initial compartments must be nonnegative");
    if (std::abs(s0 + i0 + r0 - n_total) > kConservationTolerance)
        throw Error("s0 + i0 + r0 = " + std::to_string(s0 + i0 + r0) +
                    " does not match n_total = " + std::to_string(n_total));
    if (horizon == 0) throw Error("horizon must be at least 1");
}

SirState euler_unit_step(const SirState& state, const SirParams& params,
                         std::size_t next_timestamp) {
    const double infections = (params.alpha / params.n_total) * state.s * state.i;
    const double recoveries = params.beta * state.i;
    const SirState next{state.s - infections, state.i + infections - recoveries,
                        state.r + recoveries};
    check_state(next, next_timestamp);
    return next;
}

SirCurve simulate_sir_euler(const SirParams& params) {
    params.validate();
    SirCurve curve;
    curve.params = params;
    curve.s.reserve(params.horizon + 1);
    curve.i.reserve(params.horizon + 1);
    curve.r.reserve(params.horizon + 1);

    SirState state{params.s0, params.i0, params.r0};
    curve.s.push_back(state.s);
    curve.i.push_back(state.i);
    curve.r.push_back(state.r);
    for (std::size_t t = 1; t <= params.horizon; ++t) {
        state = euler_unit_step(state, params, t);
        curve.s.push_back(state.s);
        curve.i.push_back(state.i);
        curve.r.push_back(state.r);
    }
    return curve;
}

namespace {

// dI is taken as -(dS + dR) so each stage conserves the total exactly.
SirState derivative(const SirState& y, const SirParams& p) {
    const double ds = -(p.alpha / p.n_total) * y.s * y.i;
    const double dr = p.beta * y.i;
    return {ds, -(ds + dr), dr};
}

SirState axpy(const SirState& y, double h, const SirState& d) {
    return {y.s + h * d.s, y.i + h * d.i, y.r + h * d.r};
}

}  // namespace

SirCurve simulate_sir_rk4(const SirParams& params, std::size_t substeps) {
    params.validate();
    if (substeps == 0) throw Error("substeps must be at least 1");

    SirCurve curve;
    curve.params = params;
    SirState y{params.s0, params.i0, params.r0};
    curve.s.push_back(y.s);
    curve.i.push_back(y.i);
    curve.r.push_back(y.r);

    const double h = 1.0 / static_cast<double>(substeps);
    for (std::size_t t = 1; t <= params.horizon; ++t) {
        for (std::size_t k = 0; k < substeps; ++k) {
            const SirState k1 = derivative(y, params);
            const SirState k2 = derivative(axpy(y, h / 2.0, k1), params);
            const SirState k3 = derivative(axpy(y, h / 2.0, k2), params);
            const SirState k4 = derivative(axpy(y, h, k3), params);
            y.s += h / 6.0 * (k1.s + 2.0 * k2.s + 2.0 * k3.s + k4.s);
            y.i += h / 6.0 * (k1.i + 2.0 * k2.i + 2.0 * k3.i + k4.i);
            y.r += h / 6.0 * (k1.r + 2.0 * k2.r + 2.0 * k3.r + k4.r);
        }
        curve.s.push_back(y.s);
        curve.i.push_back(y.i);
        curve.r.push_back(y.r);
    }
    return curve;
}

void write_sir_csv(const SirCurve& curve, std::ostream& out) {
    out << "t,S,I,R\n";
    char buffer[128];
    for (std::size_t t = 0; t < curve.s.size(); ++t) {
        std::snprintf(buffer, sizeof(buffer), "%zu,%.17g,%.17g,%.17g\n", t, curve.s[t],
                      curve.i[t], curve.r[t]);
        out << buffer;
    }
}

}  // namespace asir
