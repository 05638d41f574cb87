#pragma once

#include <cstdint>
#include <optional>
#include <variant>
#include <vector>

#include "asir/rng.hpp"
#include "asir/transition_matrix.hpp"

namespace asir {

enum class Health : std::uint8_t { Susceptible, Infected, Recovered };

struct AgentState {
    std::uint32_t agent_id = 0;
    Health health = Health::Susceptible;
    std::uint32_t position = 0;
};

/// Positions drawn iid from the stationary distribution of the map.
struct StationaryInit {};
/// Every agent starts at the given location.
struct PointMassInit {
    std::uint32_t location = 0;
};
/// Positions drawn iid uniformly over locations.
struct UniformInit {};
/// Infected agents start at one location, everyone else at another. Used by
/// the failure-regime experiment to seed opposite grid corners.
struct SplitInit {
    std::uint32_t infected_location = 0;
    std::uint32_t other_location = 0;
};

using InitMode = std::variant<StationaryInit, PointMassInit, UniformInit, SplitInit>;

struct AsirConfig {
    double alpha_prime = 0.0;  // per-infected-neighbour infection probability
    double beta_prime = 0.0;   // per-step recovery probability
    TransitionMatrix map;
    std::uint64_t n_agents = 0;
    std::uint64_t s0 = 0;
    std::uint64_t i0 = 0;
    std::uint64_t r0 = 0;
    std::size_t horizon = 0;
    InitMode init_mode = StationaryInit{};
    std::uint64_t seed = 0;

    void validate() const;
};

struct StepRecord {
    std::size_t timestamp = 0;
    std::uint64_t s_count = 0;
    std::uint64_t i_count = 0;
    std::uint64_t r_count = 0;
    std::uint64_t new_infections = 0;
    std::uint64_t new_recoveries = 0;
    /// Draws where alpha_prime * infected_neighbour_count exceeded 1 and was
    /// truncated. Nonzero means the low-density regime was violated.
    std::uint64_t clamp_events = 0;
};

/// Exactly s0 susceptible, i0 infected, r0 recovered agents, health assigned
/// to ascending agent ids in blocks (0..s0-1 susceptible, next i0 infected,
/// rest recovered). Position draws are one per agent in ascending id order
/// for the iid modes, none for the point-mass modes. Stationary mode uses
/// the supplied distribution, or computes it when pi is null.
std::vector<AgentState> init_population(const AsirConfig& config, RandomStream& rng,
                                        const StationaryDistribution* pi = nullptr);

/// One synchronous timestamp. Three phases: every agent moves (one draw
/// each, ascending id); neighbourhoods are read off the post-move positions
/// with pre-step health; then every pre-step susceptible draws once against
/// min(1, alpha_prime * infected_neighbour_count) and every pre-step
/// infected draws once against beta_prime, ascending id, infections before
/// recoveries. New health states take effect only after all draws.
StepRecord step(std::vector<AgentState>& agents, const AsirConfig& config, RandomStream& rng,
                std::size_t timestamp);

/// A single seeded sample path. Holds a reference to the config, which must
/// outlive the simulation.
class Simulation {
public:
    /// seed_override replaces config.seed (used for derived ensemble streams).
    explicit Simulation(const AsirConfig& config, const StationaryDistribution* pi = nullptr,
                        std::optional<std::uint64_t> seed_override = std::nullopt);

    const std::vector<AgentState>& agents() const { return agents_; }
    std::size_t timestamp() const { return timestamp_; }
    StepRecord initial_record() const { return initial_record_; }

    StepRecord step();

private:
    const AsirConfig& config_;
    RandomStream rng_;
    std::vector<AgentState> agents_;
    StepRecord initial_record_;
    std::size_t timestamp_ = 0;
    std::vector<std::uint32_t> infected_at_;
    std::vector<Health> next_health_;
};

/// Deterministic given (config, seed): horizon + 1 records, record 0 holding
/// the initial counts.
std::vector<StepRecord> run_replicate(const AsirConfig& config,
                                      const StationaryDistribution* pi = nullptr,
                                      std::optional<std::uint64_t> seed_override = std::nullopt);

}  // namespace asir
