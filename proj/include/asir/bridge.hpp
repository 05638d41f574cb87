#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "asir/engine.hpp"
#include "asir/sir.hpp"
#include "asir/transition_matrix.hpp"

namespace asir {

/// Agent-level parameters deduced from compartmental ones. Horizon, seed and
/// init mode are experiment choices, not deductions, so they enter only when
/// a runnable config is assembled.
struct BridgeResult {
    double alpha_prime = 0.0;
    double beta_prime = 0.0;
    std::uint64_t n_agents = 0;
    std::uint64_t s0 = 0;
    std::uint64_t i0 = 0;
    std::uint64_t r0 = 0;
    double meetup = 0.0;
    StationaryDistribution pi;
    std::vector<std::string> warnings;

    AsirConfig make_config(TransitionMatrix map, std::size_t horizon, InitMode init_mode,
                           std::uint64_t seed) const;
};

/// The rounding rule at the compartmental/agent boundary: accept only values
/// within 1e-9 of a nonnegative integer, otherwise NonIntegerCompartments.
/// Silent rounding would change the initial compartments.
std::uint64_t integral_compartment(double value, const char* name);

/// alpha_prime = alpha / (meetup * N), beta_prime = beta, compartments copied
/// over as integers. Requires an ergodic map and integer-valued compartments
/// (within 1e-9). Raises AlphaPrimeOutOfRange when the requested alpha cannot
/// be expressed as a probability on this map.
BridgeResult deduce_asir(const SirParams& params, const TransitionMatrix& map);

/// Inverse direction: alpha = alpha_prime * meetup * N, beta = beta_prime.
/// horizon is copied from the config.
SirParams implied_sir(const AsirConfig& config);

}  // namespace asir
