#include "asir/bridge.hpp"

#include <cmath>

#include "asir/errors.hpp"

namespace asir {

namespace {

constexpr double kIntegerTolerance = 1e-9;
// alpha_prime * (expected occupancy of the busiest location) at or above this
// means infection draws are getting close to certainty for plausible crowds.
constexpr double kCrowdingWarningLevel = 0.5;

std::uint64_t require_integer(double value, const char* name) {
    const double rounded = std::round(value);
    if (std::abs(value - rounded) > kIntegerTolerance || rounded < 0.0)
        throw NonIntegerCompartments(std::string(name) + " = " + std::to_string(value) +
                                     " is not a nonnegative integer within 1e-9; agent counts "
                                     "must be whole");
    return static_cast<std::uint64_t>(rounded);
}

}  // namespace

AsirConfig BridgeResult::make_config(TransitionMatrix map, std::size_t horizon, InitMode init_mode,
                                     std::uint64_t seed) const {
    AsirConfig config;
    config.alpha_prime = alpha_prime;
    config.beta_prime = beta_prime;
    config.map = std::move(map);
    config.n_agents = n_agents;
    config.s0 = s0;
    config.i0 = i0;
    config.r0 = r0;
    config.horizon = horizon;
    config.init_mode = init_mode;
    config.seed = seed;
    config.validate();
    return config;
}

BridgeResult deduce_asir(const SirParams& params, const TransitionMatrix& map) {
    params.validate();

    BridgeResult result;
    result.n_agents = require_integer(params.n_total, "N");
    result.s0 = require_integer(params.s0, "s0");
    result.i0 = require_integer(params.i0, "i0");
    result.r0 = require_integer(params.r0, "r0");
    if (result.s0 + result.i0 + result.r0 != result.n_agents)
        throw BadCompartmentSplit(static_cast<std::size_t>(result.s0),
                                  static_cast<std::size_t>(result.i0),
                                  static_cast<std::size_t>(result.r0),
                                  static_cast<std::size_t>(result.n_agents));

    result.pi = stationary_distribution(map);  // throws NotErgodic
    result.meetup = meetup_probability(result.pi);
    result.beta_prime = params.beta;
    result.alpha_prime = params.alpha / (result.meetup * static_cast<double>(result.n_agents));
    if (result.alpha_prime > 1.0)
        throw AlphaPrimeOutOfRange(result.alpha_prime, params.alpha / result.meetup);

    double max_pi = 0.0;
    for (double p : result.pi.probabilities) max_pi = std::max(max_pi, p);
    const double busiest_occupancy = max_pi * static_cast<double>(result.n_agents);
    if (result.alpha_prime * busiest_occupancy >= kCrowdingWarningLevel)
        result.warnings.push_back(
            "alpha_prime * expected occupancy of the busiest location = " +
            std::to_string(result.alpha_prime * busiest_occupancy) +
            "; infection draws approach certainty in crowded cells, so the low-density "
            "assumption behind the deduction is at risk");
    return result;
}

SirParams implied_sir(const AsirConfig& config) {
    config.validate();
    const StationaryDistribution pi = stationary_distribution(config.map);  // throws NotErgodic
    const double meetup = meetup_probability(pi);

    SirParams params;
    params.alpha = config.alpha_prime * meetup * static_cast<double>(config.n_agents);
    params.beta = config.beta_prime;
    params.n_total = static_cast<double>(config.n_agents);
    params.s0 = static_cast<double>(config.s0);
    params.i0 = static_cast<double>(config.i0);
    params.r0 = static_cast<double>(config.r0);
    params.horizon = config.horizon;
    return params;
}

}  // namespace asir
