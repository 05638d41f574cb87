#pragma once

#include <cstddef>
#include <ostream>
#include <vector>

namespace asir {

/// Compartmental parameters. beta is a per-unit-interval probability, so it
/// must lie in [0, 1]; alpha is a nonnegative rate. Compartments are real
/// valued here; integrality is enforced only where agents come in.
struct SirParams {
    double alpha = 0.0;
    double beta = 0.0;
    double n_total = 0.0;
    double s0 = 0.0;
    double i0 = 0.0;
    double r0 = 0.0;
    std::size_t horizon = 0;

    void validate() const;
};

struct SirState {
    double s = 0.0;
    double i = 0.0;
    double r = 0.0;
};

/// Time-indexed compartment sizes, one value per unit timestamp 0..horizon.
struct SirCurve {
    SirParams params;
    std::vector<double> s;
    std::vector<double> i;
    std::vector<double> r;

    std::size_t horizon() const { return s.empty() ? 0 : s.size() - 1; }
};

/// One unit-interval step of the difference scheme
///   s' = s - (alpha/N)*s*i,  r' = r + beta*i,  i' = i + (alpha/N)*s*i - beta*i.
/// Throws NegativeCompartment when a component drops below -1e-12: such a
/// configuration is invalid for the scheme, not a numerical accident.
SirState euler_unit_step(const SirState& state, const SirParams& params,
                         std::size_t next_timestamp = 0);

/// Composition of unit steps from (s0, i0, r0); the reference curve for
/// agent-level equivalence checks.
SirCurve simulate_sir_euler(const SirParams& params);

/// Classical 4th-order Runge-Kutta with step 1/substeps, sampled at integer
/// timestamps. Used to report the gap between the continuous dynamics and
/// the unit-step scheme; not the equivalence reference.
SirCurve simulate_sir_rk4(const SirParams& params, std::size_t substeps);

/// CSV with header t,S,I,R at full double precision.
void write_sir_csv(const SirCurve& curve, std::ostream& out);

}  // namespace asir
