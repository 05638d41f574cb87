#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <map>
#include <random>

#include "asir/engine.hpp"
#include "asir/errors.hpp"
#include "oracles.hpp"

using namespace asir;

namespace {

const std::vector<std::vector<double>> kBenchmarkMap{
    {0.5, 0.3, 0.2}, {0.3, 0.3, 0.4}, {0.2, 0.4, 0.4}};

AsirConfig make_config(double alpha_prime, double beta_prime, TransitionMatrix map,
                       std::uint64_t s0, std::uint64_t i0, std::uint64_t r0, std::size_t horizon,
                       InitMode init, std::uint64_t seed) {
    AsirConfig config;
    config.alpha_prime = alpha_prime;
    config.beta_prime = beta_prime;
    config.map = std::move(map);
    config.n_agents = s0 + i0 + r0;
    config.s0 = s0;
    config.i0 = i0;
    config.r0 = r0;
    config.horizon = horizon;
    config.init_mode = init;
    config.seed = seed;
    return config;
}

}  // namespace

TEST_CASE("init assigns health by id blocks and honours the point-mass position") {
    const auto config = make_config(0.1, 0.1, TransitionMatrix::validated({{1.0}}), 2, 1, 0, 1,
                                    PointMassInit{0}, 7);
    RandomStream rng(config.seed);
    const auto agents = init_population(config, rng);
    REQUIRE(agents.size() == 3);
    CHECK(agents[0].health == Health::Susceptible);
    CHECK(agents[1].health == Health::Susceptible);
    CHECK(agents[2].health == Health::Infected);
    for (const AgentState& agent : agents) CHECK(agent.position == 0);
}

TEST_CASE("init rejects bad splits and non-ergodic stationary maps") {
    auto bad_split = make_config(0.1, 0.1, TransitionMatrix::validated({{1.0}}), 2, 1, 0, 1,
                                 PointMassInit{0}, 7);
    bad_split.r0 = 5;  // s0 + i0 + r0 != n_agents now
    RandomStream rng(1);
    CHECK_THROWS_AS(init_population(bad_split, rng), BadCompartmentSplit);

    const auto swap_map = make_config(
        0.1, 0.1, TransitionMatrix::validated({{0.0, 1.0}, {1.0, 0.0}}), 1, 1, 0, 1,
        StationaryInit{}, 7);
    CHECK_THROWS_AS(init_population(swap_map, rng), NotErgodic);

    const auto bad_location = make_config(0.1, 0.1, TransitionMatrix::validated({{1.0}}), 1, 1, 0,
                                          1, PointMassInit{3}, 7);
    CHECK_THROWS_AS(init_population(bad_location, rng), Error);
}

TEST_CASE("stationary init occupancy matches pi") {
    const TransitionMatrix map = TransitionMatrix::validated(kBenchmarkMap);
    const StationaryDistribution pi = stationary_distribution(map);
    const auto config =
        make_config(0.1, 0.1, map, 400, 50, 50, 1, StationaryInit{}, 99);

    RandomStream rng(config.seed);
    std::vector<std::size_t> occupancy(3, 0);
    const std::size_t inits = 200;
    for (std::size_t k = 0; k < inits; ++k) {
        const auto agents = init_population(config, rng, &pi);
        for (const AgentState& agent : agents) ++occupancy[agent.position];
    }
    const double draws = static_cast<double>(inits * config.n_agents);
    for (std::size_t p = 0; p < 3; ++p) {
        const double expected = pi.probabilities[p];
        const double se = std::sqrt(expected * (1.0 - expected) / draws);
        CHECK(std::abs(static_cast<double>(occupancy[p]) / draws - expected) <= 3.0 * se);
    }
}

TEST_CASE("uniform init covers all locations uniformly") {
    const auto config = make_config(0.0, 0.0, TransitionMatrix::validated(kBenchmarkMap), 300, 0,
                                    0, 1, UniformInit{}, 4);
    RandomStream rng(config.seed);
    std::vector<std::size_t> occupancy(3, 0);
    const std::size_t inits = 300;
    for (std::size_t k = 0; k < inits; ++k)
        for (const AgentState& agent : init_population(config, rng)) ++occupancy[agent.position];
    const double draws = static_cast<double>(inits * config.n_agents);
    for (std::size_t p = 0; p < 3; ++p) {
        const double se = std::sqrt((1.0 / 3.0) * (2.0 / 3.0) / draws);
        CHECK(std::abs(static_cast<double>(occupancy[p]) / draws - 1.0 / 3.0) <= 3.0 * se);
    }
}

TEST_CASE("split init separates infected agents from the rest") {
    const auto config = make_config(1.0, 0.0, TransitionMatrix::grid_walk(4, 0.2), 5, 3, 2, 1,
                                    SplitInit{0, 15}, 11);
    RandomStream rng(config.seed);
    const auto agents = init_population(config, rng);
    for (const AgentState& agent : agents)
        CHECK(agent.position == (agent.health == Health::Infected ? 0u : 15u));
}

TEST_CASE("susceptible agents with no infected neighbours never turn") {
    // Identity 2-location map: the infected agent can never reach the
    // susceptible one, so even alpha_prime = 1 produces no infection.
    const auto config = make_config(1.0, 0.0, TransitionMatrix::validated({{1.0, 0.0}, {0.0, 1.0}}),
                                    1, 1, 0, 50, SplitInit{1, 0}, 21);
    const auto records = run_replicate(config);
    for (const StepRecord& record : records) {
        CHECK(record.s_count == 1);
        CHECK(record.new_infections == 0);
    }
}

TEST_CASE("snapshot semantics: infection and recovery resolve against pre-step health") {
    // One susceptible and one infected pinned to a single cell with
    // alpha_prime = beta_prime = 1. In the same step the susceptible catches
    // the infection from the pre-step infected, who recovers; the fresh
    // infection must not recover or transmit within that step.
    const auto config = make_config(1.0, 1.0, TransitionMatrix::validated({{1.0}}), 1, 1, 0, 2,
                                    PointMassInit{0}, 3);
    Simulation simulation(config);
    const StepRecord first = simulation.step();
    CHECK(first.s_count == 0);
    CHECK(first.i_count == 1);
    CHECK(first.r_count == 1);
    CHECK(first.new_infections == 1);
    CHECK(first.new_recoveries == 1);

    const StepRecord second = simulation.step();
    CHECK(second.i_count == 0);
    CHECK(second.r_count == 2);
    CHECK(second.new_recoveries == 1);
}

TEST_CASE("beta_prime = 1 recovers every infected agent in one step") {
    const auto config = make_config(0.0, 1.0, TransitionMatrix::validated(kBenchmarkMap), 0, 40, 0,
                                    1, StationaryInit{}, 5);
    const auto records = run_replicate(config);
    CHECK(records[0].i_count == 40);
    CHECK(records[1].i_count == 0);
    CHECK(records[1].r_count == 40);
}

TEST_CASE("clamped infection draws are counted, not raised") {
    // Three infected share the cell with two susceptibles: per-draw
    // probability 0.6 * 3 clamps to 1, so both susceptibles turn and two
    // clamp events are recorded.
    const auto config = make_config(0.6, 0.0, TransitionMatrix::validated({{1.0}}), 2, 3, 0, 1,
                                    PointMassInit{0}, 17);
    const auto records = run_replicate(config);
    CHECK(records[1].clamp_events == 2);
    CHECK(records[1].new_infections == 2);
    CHECK(records[1].s_count == 0);
}

TEST_CASE("engine consumes the stream exactly as documented") {
    // Independent replay: moves for every agent in id order (one draw each),
    // then one infection draw per pre-step susceptible, then one recovery
    // draw per pre-step infected. Any deviation in draw order or count in
    // the engine would desynchronise the two trajectories.
    const TransitionMatrix map = TransitionMatrix::validated(kBenchmarkMap);
    const auto config = make_config(0.35, 0.25, map, 4, 3, 1, 40, UniformInit{}, 1234567);

    Simulation simulation(config);
    RandomStream replay(config.seed);

    // init_population: uniform position draws in id order.
    std::vector<std::uint32_t> positions;
    std::vector<Health> healths;
    const std::vector<double> uniform(3, 1.0 / 3.0);
    for (std::size_t id = 0; id < 8; ++id) {
        positions.push_back(static_cast<std::uint32_t>(index_from_cumulative(uniform, replay.uniform())));
        healths.push_back(id < 4 ? Health::Susceptible : id < 7 ? Health::Infected : Health::Recovered);
    }
    for (std::size_t id = 0; id < 8; ++id) {
        CHECK(simulation.agents()[id].position == positions[id]);
        CHECK(simulation.agents()[id].health == healths[id]);
    }

    const auto dense = map.to_dense();
    for (std::size_t t = 1; t <= config.horizon; ++t) {
        for (std::size_t id = 0; id < 8; ++id)
            positions[id] = static_cast<std::uint32_t>(
                index_from_cumulative(dense[positions[id]], replay.uniform()));
        std::vector<int> infected_at(3, 0);
        for (std::size_t id = 0; id < 8; ++id)
            if (healths[id] == Health::Infected) ++infected_at[positions[id]];
        std::vector<Health> next = healths;
        for (std::size_t id = 0; id < 8; ++id)
            if (healths[id] == Health::Susceptible &&
                replay.uniform() <= std::min(1.0, 0.35 * infected_at[positions[id]]))
                next[id] = Health::Infected;
        for (std::size_t id = 0; id < 8; ++id)
            if (healths[id] == Health::Infected && replay.uniform() <= 0.25)
                next[id] = Health::Recovered;
        healths = next;

        simulation.step();
        for (std::size_t id = 0; id < 8; ++id) {
            CHECK(simulation.agents()[id].position == positions[id]);
            CHECK(simulation.agents()[id].health == healths[id]);
        }
    }
}

TEST_CASE("one-step infection frequency matches the enumerated meetup value") {
    // Two locations, uniform rows: after the move the two agents are
    // co-located in 2 of the 4 equally likely joint outcomes, so the
    // susceptible turns with probability 0.5 * alpha_prime.
    const TransitionMatrix map = TransitionMatrix::validated({{0.5, 0.5}, {0.5, 0.5}});
    double enumerated = 0.0;
    for (int a = 0; a < 2; ++a)
        for (int b = 0; b < 2; ++b) enumerated += 0.25 * (a == b ? 0.4 : 0.0);
    CHECK(enumerated == doctest::Approx(0.2));

    const auto config = make_config(0.4, 0.0, map, 1, 1, 0, 1, StationaryInit{}, 2718);
    const StationaryDistribution pi = stationary_distribution(map);
    const std::size_t replicates = 100'000;
    std::size_t infections = 0;
    for (std::size_t r = 0; r < replicates; ++r) {
        const auto records = run_replicate(config, &pi, derive_stream_seed(config.seed, r));
        if (records[1].s_count == 0) ++infections;
    }
    const double frequency = static_cast<double>(infections) / static_cast<double>(replicates);
    const double se = std::sqrt(enumerated * (1.0 - enumerated) / static_cast<double>(replicates));
    CHECK(std::abs(frequency - enumerated) <= 3.0 * se);
}

TEST_CASE("replicates are deterministic given config and seed") {
    const auto config = make_config(0.3, 0.15, TransitionMatrix::validated(kBenchmarkMap), 20, 5,
                                    0, 30, StationaryInit{}, 31415);

    const auto first = run_replicate(config);
    const auto second = run_replicate(config);
    REQUIRE(first.size() == second.size());
    for (std::size_t t = 0; t < first.size(); ++t) {
        CHECK(first[t].s_count == second[t].s_count);
        CHECK(first[t].i_count == second[t].i_count);
        CHECK(first[t].r_count == second[t].r_count);
        CHECK(first[t].new_infections == second[t].new_infections);
        CHECK(first[t].new_recoveries == second[t].new_recoveries);
        CHECK(first[t].clamp_events == second[t].clamp_events);
    }

    // Positions too, not just counts.
    Simulation a(config), b(config);
    for (std::size_t t = 0; t < 30; ++t) {
        a.step();
        b.step();
        for (std::size_t id = 0; id < config.n_agents; ++id)
            CHECK(a.agents()[id].position == b.agents()[id].position);
    }
}

TEST_CASE("no infection source means constant counts") {
    const auto config = make_config(0.9, 0.4, TransitionMatrix::validated(kBenchmarkMap), 25, 0, 5,
                                    40, StationaryInit{}, 8);
    const auto records = run_replicate(config);
    for (const StepRecord& record : records) {
        CHECK(record.s_count == 25);
        CHECK(record.i_count == 0);
        CHECK(record.r_count == 5);
    }
}

TEST_CASE("pure recovery decays geometrically") {
    const auto config = make_config(0.0, 0.5, TransitionMatrix::validated(kBenchmarkMap), 0, 10, 0,
                                    8, StationaryInit{}, 5555);
    const StationaryDistribution pi =
        stationary_distribution(TransitionMatrix::validated(kBenchmarkMap));

    const std::size_t replicates = 1000;
    std::vector<double> sum_i(config.horizon + 1, 0.0);
    for (std::size_t r = 0; r < replicates; ++r) {
        const auto records = run_replicate(config, &pi, derive_stream_seed(config.seed, r));
        for (std::size_t t = 0; t < records.size(); ++t) {
            CHECK(records[t].i_count <= (t == 0 ? 10 : records[t - 1].i_count));
            sum_i[t] += static_cast<double>(records[t].i_count);
        }
    }
    for (std::size_t t = 0; t <= config.horizon; ++t) {
        const double survive = std::pow(0.5, static_cast<double>(t));
        const double expected = 10.0 * survive;
        const double se =
            std::sqrt(10.0 * survive * (1.0 - survive) / static_cast<double>(replicates));
        CHECK(std::abs(sum_i[t] / static_cast<double>(replicates) - expected) <=
              3.0 * se + 1e-12);
    }
}

TEST_CASE("kernel preserves the stationary location marginal") {
    const TransitionMatrix map = TransitionMatrix::validated(kBenchmarkMap);
    const StationaryDistribution pi = stationary_distribution(map);
    const auto config = make_config(0.0, 0.0, map, 1, 0, 0, 5, StationaryInit{}, 13);

    const std::size_t replicates = 100'000;
    std::vector<std::vector<std::size_t>> counts(config.horizon + 1,
                                                 std::vector<std::size_t>(3, 0));
    for (std::size_t r = 0; r < replicates; ++r) {
        Simulation simulation(config, &pi, derive_stream_seed(config.seed, r));
        ++counts[0][simulation.agents()[0].position];
        for (std::size_t t = 1; t <= config.horizon; ++t) {
            simulation.step();
            ++counts[t][simulation.agents()[0].position];
        }
    }
    for (std::size_t t = 0; t <= config.horizon; ++t) {
        for (std::size_t p = 0; p < 3; ++p) {
            const double expected = pi.probabilities[p];
            const double se =
                std::sqrt(expected * (1.0 - expected) / static_cast<double>(replicates));
            CHECK(std::abs(static_cast<double>(counts[t][p]) / static_cast<double>(replicates) -
                           expected) <= 4.0 * se);
        }
    }
}

TEST_CASE("invariants hold over randomized configurations") {
    std::mt19937_64 rng(20260809);
    std::uniform_real_distribution<double> unit(0.0, 1.0);

    for (int trial = 0; trial < 100; ++trial) {
        const std::size_t n_locations = 1 + rng() % 5;
        const TransitionMatrix map =
            TransitionMatrix::validated(oracles::random_ergodic_matrix(n_locations, rng));
        const std::uint64_t s0 = rng() % 30, i0 = rng() % 10, r0 = rng() % 5;
        if (s0 + i0 + r0 == 0) continue;
        const double alpha_prime = trial % 7 == 0 ? 0.0 : unit(rng);
        const auto config = make_config(alpha_prime, unit(rng), map, s0, i0, r0,
                                        5 + rng() % 20, StationaryInit{}, rng());

        Simulation simulation(config);
        std::vector<Health> previous;
        for (const AgentState& agent : simulation.agents()) previous.push_back(agent.health);
        StepRecord last = simulation.initial_record();
        CHECK(last.s_count == s0);
        CHECK(last.i_count == i0);
        CHECK(last.r_count == r0);

        for (std::size_t t = 1; t <= config.horizon; ++t) {
            const StepRecord record = simulation.step();
            CHECK(record.s_count + record.i_count + record.r_count == config.n_agents);
            CHECK(record.s_count <= last.s_count);
            CHECK(record.r_count >= last.r_count);
            CHECK(record.new_infections == last.s_count - record.s_count);
            CHECK(record.new_recoveries == record.r_count - last.r_count);
            if (alpha_prime == 0.0) CHECK(record.new_infections == 0);

            for (std::size_t id = 0; id < config.n_agents; ++id) {
                const Health now = simulation.agents()[id].health;
                const Health was = previous[id];
                const bool legal = now == was ||
                                   (was == Health::Susceptible && now == Health::Infected) ||
                                   (was == Health::Infected && now == Health::Recovered);
                CHECK(legal);
                previous[id] = now;
            }
            last = record;
        }
    }
}
