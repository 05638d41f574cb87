#include "asir/cli.hpp"

#include <chrono>
#include <cstdio>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "asir/bridge.hpp"
#include "asir/ensemble.hpp"
#include "asir/errors.hpp"
#include "asir/experiment_config.hpp"

namespace asir {

namespace {

constexpr const char* kToolVersion = "0.1.0";

std::uint64_t fnv1a64(const std::string& text) {
    std::uint64_t hash = 0xCBF29CE484222325ull;
    for (unsigned char c : text) {
        hash ^= c;
        hash *= 0x100000001B3ull;
    }
    return hash;
}

std::string iso_timestamp() {
    const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    char buffer[32];
    std::tm tm_utc{};
    gmtime_r(&now, &tm_utc);
    std::strftime(buffer, sizeof(buffer), "%Y-%m-%dT%H:%M:%SZ", &tm_utc);
    return buffer;
}

std::string read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError("cannot read config file '" + path.string() + "'");
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return buffer.str();
}

void write_file(const std::filesystem::path& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot write '" + path.string() + "'");
    out << content;
}

struct RunContext {
    ExperimentConfig config;
    std::string config_text;
    std::filesystem::path out_dir;
    std::size_t workers = 0;  // --workers override; 0 defers to the config
};

std::size_t effective_workers(const RunContext& ctx) {
    return ctx.workers != 0 ? ctx.workers : ctx.config.ensemble.workers;
}

void write_metadata(const RunContext& ctx) {
    char hash[32];
    std::snprintf(hash, sizeof(hash), "%016llx",
                  static_cast<unsigned long long>(fnv1a64(ctx.config_text)));
    nlohmann::json meta{
        {"mode", mode_name(ctx.config.mode)},
        {"config_fnv1a64", hash},
        {"master_seed", ctx.config.asir.seed},
        {"tool_version", kToolVersion},
        {"random_stream", RandomStream::kAlgorithm},
        {"created", iso_timestamp()},  // excluded from the determinism contract
    };
    write_file(ctx.out_dir / "metadata.json", meta.dump(2) + "\n");
}

std::string fmt(double value) {
    char buffer[64];
    std::snprintf(buffer, sizeof(buffer), "%.17g", value);
    return buffer;
}

// Assembles the runnable agent-level config for the asir/verify modes:
// deduced parameters unless the asir block overrides them.
struct PreparedRun {
    AsirConfig config;
    SirCurve reference;
    std::vector<std::string> warnings;
};

std::uint64_t integral_compartment(double value, const char* name) {
    const double rounded = std::round(value);
    if (std::abs(value - rounded) > 1e-9 || rounded < 0.0)
        throw NonIntegerCompartments(std::string(name) + " = " + std::to_string(value) +
                                     " is not a nonnegative integer within 1e-9; agent counts "
                                     "must be whole");
    return static_cast<std::uint64_t>(rounded);
}

PreparedRun prepare_run(const ExperimentConfig& config) {
    const SirParams params = config.sir->params();
    TransitionMatrix map = config.map->build();

    PreparedRun run;
    run.reference = simulate_sir_euler(params);
    if (config.asir.alpha_prime && config.asir.beta_prime) {
        AsirConfig asir_config;
        asir_config.alpha_prime = *config.asir.alpha_prime;
        asir_config.beta_prime = *config.asir.beta_prime;
        asir_config.map = std::move(map);
        asir_config.n_agents = integral_compartment(params.n_total, "n");
        asir_config.s0 = integral_compartment(params.s0, "s0");
        asir_config.i0 = integral_compartment(params.i0, "i0");
        asir_config.r0 = integral_compartment(params.r0, "r0");
        asir_config.horizon = params.horizon;
        asir_config.init_mode = config.asir.init_mode;
        asir_config.seed = config.asir.seed;
        asir_config.validate();
        run.config = std::move(asir_config);
    } else {
        BridgeResult bridge = deduce_asir(params, map);
        if (config.asir.alpha_prime) bridge.alpha_prime = *config.asir.alpha_prime;
        if (config.asir.beta_prime) bridge.beta_prime = *config.asir.beta_prime;
        run.warnings = bridge.warnings;
        run.config = bridge.make_config(std::move(map), params.horizon, config.asir.init_mode,
                                        config.asir.seed);
    }
    return run;
}

void print_warnings(const std::vector<std::string>& warnings) {
    for (const std::string& warning : warnings) std::cerr << "warning: " << warning << "\n";
}

int execute_sir(const RunContext& ctx) {
    const SirParams params = ctx.config.sir->params();
    const SirCurve euler = simulate_sir_euler(params);
    const SirCurve rk4 = simulate_sir_rk4(params, ctx.config.sir->substeps);

    std::ofstream euler_csv(ctx.out_dir / "sir_euler.csv");
    write_sir_csv(euler, euler_csv);
    std::ofstream rk4_csv(ctx.out_dir / "sir_rk4.csv");
    write_sir_csv(rk4, rk4_csv);

    double gap = 0.0;
    for (std::size_t t = 0; t < euler.s.size(); ++t) {
        gap = std::max(gap, std::abs(euler.s[t] - rk4.s[t]));
        gap = std::max(gap, std::abs(euler.i[t] - rk4.i[t]));
        gap = std::max(gap, std::abs(euler.r[t] - rk4.r[t]));
    }
    std::cout << "unit-step Euler and RK4 (" << ctx.config.sir->substeps
              << " substeps) curves written; max |Euler - RK4| = " << fmt(gap)
              << " (discretisation gap, not an error)\n";
    return 0;
}

int execute_stationary(const RunContext& ctx) {
    const TransitionMatrix map = ctx.config.map->build();
    const ErgodicityReport report = ergodicity(map);
    std::cout << "locations: " << map.n_locations() << "\n"
              << "communicating classes: " << report.communicating_class_count
              << (report.irreducible ? " (irreducible)" : "") << "\n"
              << "period: " << report.period << (report.aperiodic ? " (aperiodic)" : "") << "\n";
    if (!report.irreducible || !report.aperiodic) {
        std::cout << "chain is not ergodic; no stationary distribution reported\n";
        return 0;
    }
    const StationaryDistribution pi = stationary_distribution(map);
    std::cout << "stationary residual: " << fmt(pi.residual) << "\n"
              << "meetup probability: " << fmt(meetup_probability(pi)) << "\n";

    std::ofstream csv(ctx.out_dir / "stationary.csv");
    csv << "location,pi\n";
    for (std::size_t p = 0; p < pi.probabilities.size(); ++p)
        csv << p << ',' << fmt(pi.probabilities[p]) << '\n';
    return 0;
}

nlohmann::json map_block_json(const MapBlock& map) {
    if (map.matrix) return {{"matrix", *map.matrix}};
    return {{"grid", {{"side", map.grid->side}, {"stay_prob", map.grid->stay_prob}}}};
}

int execute_deduce(const RunContext& ctx) {
    const SirParams params = ctx.config.sir->params();
    const TransitionMatrix map = ctx.config.map->build();
    const BridgeResult bridge = deduce_asir(params, map);
    print_warnings(bridge.warnings);

    std::cout << "meetup probability: " << fmt(bridge.meetup) << "\n"
              << "alpha_prime: " << fmt(bridge.alpha_prime) << "\n"
              << "beta_prime: " << fmt(bridge.beta_prime) << "\n"
              << "agents: " << bridge.n_agents << " (S " << bridge.s0 << ", I " << bridge.i0
              << ", R " << bridge.r0 << ")\n";

    nlohmann::json ready{
        {"sir",
         {{"alpha", params.alpha},
          {"beta", params.beta},
          {"n", params.n_total},
          {"s0", params.s0},
          {"i0", params.i0},
          {"r0", params.r0},
          {"horizon", params.horizon}}},
        {"map", map_block_json(*ctx.config.map)},
        {"asir",
         {{"alpha_prime", bridge.alpha_prime},
          {"beta_prime", bridge.beta_prime},
          {"init_mode", "stationary"},
          {"seed", ctx.config.asir.seed}}},
        {"ensemble", {{"replicates", ctx.config.ensemble.replicates}}},
    };
    write_file(ctx.out_dir / "asir_config.json", ready.dump(2) + "\n");
    std::cout << "runnable config written to " << (ctx.out_dir / "asir_config.json").string()
              << "\n";
    return 0;
}

const char* health_letter(Health health) {
    switch (health) {
        case Health::Susceptible: return "S";
        case Health::Infected: return "I";
        case Health::Recovered: return "R";
    }
    return "?";
}

int execute_asir(const RunContext& ctx) {
    const PreparedRun run = prepare_run(ctx.config);
    print_warnings(run.warnings);
    const std::size_t replicates =
        ctx.config.has_ensemble_block ? ctx.config.ensemble.replicates : 1;

    std::ofstream trajectory(ctx.out_dir / "replicates.csv");
    std::ofstream trace;
    if (ctx.config.output.agent_trace) {
        trace.open(ctx.out_dir / "agent_trace.csv");
        trace << "replicate,t,agent_id,health,position\n";
    }

    // Per-agent traces force a sequential re-run, so this mode drives the
    // simulations directly instead of going through run_ensemble.
    StationaryDistribution pi;
    const StationaryDistribution* pi_ptr = nullptr;
    if (std::holds_alternative<StationaryInit>(run.config.init_mode)) {
        pi = stationary_distribution(run.config.map);
        pi_ptr = &pi;
    }

    trajectory << "replicate,t,S,I,R,new_inf,new_rec,clamps\n";
    for (std::size_t r = 0; r < replicates; ++r) {
        const std::uint64_t seed =
            replicates == 1 ? run.config.seed : derive_stream_seed(run.config.seed, r);
        Simulation simulation(run.config, pi_ptr, seed);
        const auto emit_record = [&](const StepRecord& record) {
            trajectory << r << ',' << record.timestamp << ',' << record.s_count << ','
                       << record.i_count << ',' << record.r_count << ',' << record.new_infections
                       << ',' << record.new_recoveries << ',' << record.clamp_events << '\n';
            if (ctx.config.output.agent_trace)
                for (const AgentState& agent : simulation.agents())
                    trace << r << ',' << record.timestamp << ',' << agent.agent_id << ','
                          << health_letter(agent.health) << ',' << agent.position << '\n';
        };
        emit_record(simulation.initial_record());
        for (std::size_t t = 1; t <= run.config.horizon; ++t) emit_record(simulation.step());
    }
    std::cout << replicates << " replicate(s) written to "
              << (ctx.out_dir / "replicates.csv").string() << "\n";
    return 0;
}

int execute_verify(const RunContext& ctx) {
    const PreparedRun run = prepare_run(ctx.config);
    print_warnings(run.warnings);

    const Ensemble ensemble =
        run_ensemble(run.config, ctx.config.ensemble.replicates, effective_workers(ctx));
    const EnsembleReport report =
        equivalence_report(ensemble, run.reference, ctx.config.ensemble.z_threshold,
                           ctx.config.ensemble.coverage_threshold);

    std::ofstream summary(ctx.out_dir / "summary.csv");
    write_summary_csv(report, summary);
    std::ostringstream footer;
    write_report_footer(report, footer);
    write_file(ctx.out_dir / "report.txt", footer.str());
    std::cout << footer.str();
    return report.pass ? 0 : 1;
}

int execute_failure_mode(const RunContext& ctx) {
    FailureModeSpec spec;
    spec.side = ctx.config.map->grid->side;
    spec.stay_prob = ctx.config.map->grid->stay_prob;
    spec.reference = ctx.config.sir->params();
    spec.alpha_prime = *ctx.config.asir.alpha_prime;
    spec.beta_prime = *ctx.config.asir.beta_prime;
    spec.n_replicates = ctx.config.ensemble.replicates;
    spec.master_seed = ctx.config.asir.seed;
    spec.z_threshold = ctx.config.ensemble.z_threshold;
    spec.coverage_threshold = ctx.config.ensemble.coverage_threshold;
    spec.workers = effective_workers(ctx);

    const FailureModeResult result = failure_mode_experiment(spec);

    std::ofstream summary(ctx.out_dir / "summary.csv");
    write_summary_csv(result.report, summary);
    std::ostringstream footer;
    footer << "sparse-grid regime (side " << spec.side << ", infected and susceptible agents "
           << "seeded at opposite corners):\n"
           << "peak mean I: " << fmt(result.peak_mean_i) << "\n"
           << "final mean R: " << fmt(result.final_mean_r) << "\n"
           << "initial infected: " << fmt(spec.reference.i0) << "\n";
    write_report_footer(result.report, footer);
    write_file(ctx.out_dir / "report.txt", footer.str());
    std::cout << footer.str();
    return 0;
}

int dispatch(const RunContext& ctx) {
    std::filesystem::create_directories(ctx.out_dir);
    write_metadata(ctx);
    switch (ctx.config.mode) {
        case Mode::Sir: return execute_sir(ctx);
        case Mode::Stationary: return execute_stationary(ctx);
        case Mode::Deduce: return execute_deduce(ctx);
        case Mode::Asir: return execute_asir(ctx);
        case Mode::Verify: return execute_verify(ctx);
        case Mode::FailureMode: return execute_failure_mode(ctx);
    }
    return 3;
}

}  // namespace

int run_cli(int argc, const char* const* argv) {
    CLI::App app{"dual-engine epidemic simulation toolkit: compartmental SIR curves, their "
                 "agent-based counterpart, and the statistical equivalence check between them"};
    app.require_subcommand(1);

    std::string config_path;
    std::string out_override;
    std::size_t workers = 0;

    const auto add_mode = [&](Mode mode, const char* description) {
        CLI::App* sub = app.add_subcommand(mode_name(mode), description);
        sub->add_option("--config", config_path, "experiment config file (JSON, // comments ok)")
            ->required();
        sub->add_option("--out", out_override, "output directory (default: output.directory)");
        sub->add_option("--workers", workers, "worker threads for ensembles (0 = all cores)");
        return sub;
    };

    add_mode(Mode::Sir, "write the compartmental reference curves (unit-step Euler and RK4)");
    add_mode(Mode::Stationary,
             "report ergodicity, the stationary distribution and the meetup probability");
    add_mode(Mode::Deduce, "deduce agent-level parameters from the compartmental ones");
    add_mode(Mode::Asir, "run agent-based replicates and write their trajectories");
    add_mode(Mode::Verify,
             "deduce, run an ensemble and check equivalence against the compartmental curve");
    add_mode(Mode::FailureMode, "run the sparse-grid corner-seeded regime where mixing fails");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& error) {
        const int code = app.exit(error);
        return code == 0 ? 0 : 2;
    }

    try {
        RunContext ctx;
        ctx.config_text = read_file(config_path);
        const Mode mode = *mode_from_name(app.get_subcommands().front()->get_name());
        ctx.config = parse_config(ctx.config_text, mode);
        ctx.workers = workers;
        if (!out_override.empty())
            ctx.out_dir = out_override;
        else if (!ctx.config.output.directory.empty())
            ctx.out_dir = ctx.config.output.directory;
        else
            ctx.out_dir = std::string("out-") + mode_name(mode);
        return dispatch(ctx);
    } catch (const ConfigError& error) {
        std::cerr << "configuration error: " << error.what() << "\n";
        return 2;
    } catch (const std::exception& error) {
        std::cerr << "error: " << error.what() << "\n";
        return 3;
    }
}

int run_cli(const std::vector<std::string>& args) {
    std::vector<const char*> argv;
    argv.push_back("asir");
    for (const std::string& arg : args) argv.push_back(arg.c_str());
    return run_cli(static_cast<int>(argv.size()), argv.data());
}

}  // namespace asir
