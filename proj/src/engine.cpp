#include "asir/engine.hpp"

#include <algorithm>
#include <cassert>

#include "asir/errors.hpp"

namespace asir {

void AsirConfig::validate() const {
    if (!(alpha_prime >= 0.0 && alpha_prime <= 1.0))
        throw Error("alpha_prime must lie in [0, 1], got " + std::to_string(alpha_prime));
    if (!(beta_prime >= 0.0 && beta_prime <= 1.0))
        throw Error("beta_prime must lie in [0, 1], got " + std::to_string(beta_prime));
    if (n_agents == 0) throw Error("n_agents must be positive");
    if (s0 + i0 + r0 != n_agents)
        throw BadCompartmentSplit(static_cast<std::size_t>(s0), static_cast<std::size_t>(i0),
                                  static_cast<std::size_t>(r0), static_cast<std::size_t>(n_agents));
    if (horizon == 0) throw Error("horizon must be at least 1");
    const auto check_location = [this](std::uint32_t loc, const char* what) {
        if (loc >= map.n_locations())
            throw Error(std::string(what) + " location " + std::to_string(loc) +
                        " is outside the map (n_locations = " + std::to_string(map.n_locations()) +
                        ")");
    };
    if (const auto* pm = std::get_if<PointMassInit>(&init_mode)) {
        check_location(pm->location, "point-mass");
    } else if (const auto* split = std::get_if<SplitInit>(&init_mode)) {
        check_location(split->infected_location, "split infected");
        check_location(split->other_location, "split other");
    }
}

std::vector<AgentState> init_population(const AsirConfig& config, RandomStream& rng,
                                        const StationaryDistribution* pi) {
    config.validate();

    std::vector<AgentState> agents(config.n_agents);
    for (std::uint64_t id = 0; id < config.n_agents; ++id) {
        agents[id].agent_id = static_cast<std::uint32_t>(id);
        agents[id].health = id < config.s0                ? Health::Susceptible
                            : id < config.s0 + config.i0 ? Health::Infected
                                                         : Health::Recovered;
    }

    if (std::holds_alternative<StationaryInit>(config.init_mode)) {
        StationaryDistribution computed;
        if (pi == nullptr) {
            computed = stationary_distribution(config.map);  // throws NotErgodic
            pi = &computed;
        }
        for (AgentState& agent : agents)
            agent.position = static_cast<std::uint32_t>(sample_stationary(*pi, rng));
    } else if (const auto* pm = std::get_if<PointMassInit>(&config.init_mode)) {
        for (AgentState& agent : agents) agent.position = pm->location;
    } else if (std::holds_alternative<UniformInit>(config.init_mode)) {
        const std::vector<double> uniform(config.map.n_locations(),
                                          1.0 / static_cast<double>(config.map.n_locations()));
        for (AgentState& agent : agents)
            agent.position = static_cast<std::uint32_t>(index_from_cumulative(uniform, rng.uniform()));
    } else {
        const auto& split = std::get<SplitInit>(config.init_mode);
        for (AgentState& agent : agents)
            agent.position = agent.health == Health::Infected ? split.infected_location
                                                              : split.other_location;
    }
    return agents;
}

namespace {

StepRecord step_impl(std::vector<AgentState>& agents, const AsirConfig& config, RandomStream& rng,
                     std::size_t timestamp, std::vector<std::uint32_t>& infected_at,
                     std::vector<Health>& next_health) {
    // Phase 1: move, ascending id, one draw each.
    for (AgentState& agent : agents)
        agent.position =
            static_cast<std::uint32_t>(sample_next(config.map, agent.position, rng));

    // Phase 2: neighbourhood snapshot - post-move positions, pre-step health.
    infected_at.assign(config.map.n_locations(), 0);
    for (const AgentState& agent : agents)
        if (agent.health == Health::Infected) ++infected_at[agent.position];

    // Phase 3: transition draws against the snapshot, infections first.
    next_health.resize(agents.size());
    for (std::size_t k = 0; k < agents.size(); ++k) next_health[k] = agents[k].health;

    StepRecord record;
    record.timestamp = timestamp;
    for (std::size_t k = 0; k < agents.size(); ++k) {
        if (agents[k].health != Health::Susceptible) continue;
        const std::uint32_t neighbours = infected_at[agents[k].position];
        const double raw = config.alpha_prime * static_cast<double>(neighbours);
        if (raw > 1.0) ++record.clamp_events;
        const double p = std::min(1.0, raw);
        if (rng.uniform() <= p) {
            next_health[k] = Health::Infected;
            ++record.new_infections;
        }
    }
    for (std::size_t k = 0; k < agents.size(); ++k) {
        if (agents[k].health != Health::Infected) continue;
        if (rng.uniform() <= config.beta_prime) {
            next_health[k] = Health::Recovered;
            ++record.new_recoveries;
        }
    }

    for (std::size_t k = 0; k < agents.size(); ++k) {
        assert(next_health[k] == agents[k].health ||
               (agents[k].health == Health::Susceptible && next_health[k] == Health::Infected) ||
               (agents[k].health == Health::Infected && next_health[k] == Health::Recovered));
        agents[k].health = next_health[k];
        switch (next_health[k]) {
            case Health::Susceptible: ++record.s_count; break;
            case Health::Infected: ++record.i_count; break;
            case Health::Recovered: ++record.r_count; break;
        }
    }
    return record;
}

StepRecord count_record(const std::vector<AgentState>& agents) {
    StepRecord record;
    for (const AgentState& agent : agents) {
        switch (agent.health) {
            case Health::Susceptible: ++record.s_count; break;
            case Health::Infected: ++record.i_count; break;
            case Health::Recovered: ++record.r_count; break;
        }
    }
    return record;
}

}  // namespace

StepRecord step(std::vector<AgentState>& agents, const AsirConfig& config, RandomStream& rng,
                std::size_t timestamp) {
    std::vector<std::uint32_t> infected_at;
    std::vector<Health> next_health;
    return step_impl(agents, config, rng, timestamp, infected_at, next_health);
}

Simulation::Simulation(const AsirConfig& config, const StationaryDistribution* pi,
                       std::optional<std::uint64_t> seed_override)
    : config_(config), rng_(seed_override.value_or(config.seed)) {
    agents_ = init_population(config_, rng_, pi);
    initial_record_ = count_record(agents_);
}

StepRecord Simulation::step() {
    ++timestamp_;
    return step_impl(agents_, config_, rng_, timestamp_, infected_at_, next_health_);
}

std::vector<StepRecord> run_replicate(const AsirConfig& config, const StationaryDistribution* pi,
                                      std::optional<std::uint64_t> seed_override) {
    Simulation simulation(config, pi, seed_override);
    std::vector<StepRecord> records;
    records.reserve(config.horizon + 1);
    records.push_back(simulation.initial_record());
    for (std::size_t t = 1; t <= config.horizon; ++t) records.push_back(simulation.step());
    return records;
}

}  // namespace asir
