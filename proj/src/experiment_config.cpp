#include "asir/experiment_config.hpp"

#include <cmath>
#include <set>

#include <json.hpp>

#include "asir/errors.hpp"

namespace asir {

using nlohmann::json;

const char* mode_name(Mode mode) {
    switch (mode) {
        case Mode::Sir: return "sir";
        case Mode::Stationary: return "stationary";
        case Mode::Deduce: return "deduce";
        case Mode::Asir: return "asir";
        case Mode::Verify: return "verify";
        case Mode::FailureMode: return "failure-mode";
    }
    return "?";
}

std::optional<Mode> mode_from_name(const std::string& name) {
    for (Mode mode : {Mode::Sir, Mode::Stationary, Mode::Deduce, Mode::Asir, Mode::Verify,
                      Mode::FailureMode})
        if (name == mode_name(mode)) return mode;
    return std::nullopt;
}

SirParams SirBlock::params() const {
    SirParams p;
    p.alpha = alpha;
    p.beta = beta;
    p.n_total = n;
    p.s0 = s0;
    p.i0 = i0;
    p.r0 = r0;
    p.horizon = horizon;
    p.validate();
    return p;
}

TransitionMatrix MapBlock::build() const {
    if (matrix) return TransitionMatrix::validated(*matrix, "map.matrix: ");
    return TransitionMatrix::grid_walk(grid->side, grid->stay_prob);
}

namespace {

void reject_unknown_keys(const json& object, const std::string& path,
                         const std::set<std::string>& known) {
    for (const auto& item : object.items())
        if (!known.contains(item.key()))
            throw ConfigError("unknown key '" + path + "." + item.key() + "'");
}

const json* find(const json& object, const char* key) {
    const auto it = object.find(key);
    return it == object.end() ? nullptr : &*it;
}

double require_number(const json& object, const std::string& path, const char* key) {
    const json* value = find(object, key);
    if (value == nullptr) throw ConfigError("missing key '" + path + "." + key + "'");
    if (!value->is_number())
        throw ConfigError("key '" + path + "." + key + "' must be a number");
    return value->get<double>();
}

double number_or(const json& object, const std::string& path, const char* key,
                 double fallback) {
    return find(object, key) == nullptr ? fallback : require_number(object, path, key);
}

std::size_t require_count(const json& object, const std::string& path, const char* key) {
    const double value = require_number(object, path, key);
    if (value < 0 || value != std::floor(value))
        throw ConfigError("key '" + path + "." + key + "' must be a nonnegative integer");
    return static_cast<std::size_t>(value);
}

std::size_t count_or(const json& object, const std::string& path, const char* key,
                     std::size_t fallback) {
    return find(object, key) == nullptr ? fallback : require_count(object, path, key);
}

SirBlock parse_sir_block(const json& block) {
    reject_unknown_keys(block, "sir",
                        {"alpha", "beta", "n", "s0", "i0", "r0", "horizon", "substeps"});
    SirBlock sir;
    sir.alpha = require_number(block, "sir", "alpha");
    sir.beta = require_number(block, "sir", "beta");
    sir.n = require_number(block, "sir", "n");
    sir.s0 = require_number(block, "sir", "s0");
    sir.i0 = require_number(block, "sir", "i0");
    sir.r0 = number_or(block, "sir", "r0", 0.0);
    sir.horizon = require_count(block, "sir", "horizon");
    sir.substeps = count_or(block, "sir", "substeps", 100);
    sir.params();  // surface domain errors at parse time
    return sir;
}

MapBlock parse_map_block(const json& block) {
    reject_unknown_keys(block, "map", {"matrix", "grid"});
    MapBlock map;
    const json* matrix = find(block, "matrix");
    const json* grid = find(block, "grid");
    if ((matrix != nullptr) == (grid != nullptr))
        throw ConfigError("map block needs exactly one of 'matrix' or 'grid'");
    if (matrix != nullptr) {
        if (!matrix->is_array())
            throw ConfigError("key 'map.matrix' must be an array of rows");
        std::vector<std::vector<double>> rows;
        for (const json& row : *matrix) {
            if (!row.is_array())
                throw ConfigError("key 'map.matrix' must be an array of rows");
            rows.push_back(row.get<std::vector<double>>());
        }
        map.matrix = std::move(rows);
        TransitionMatrix::validated(*map.matrix, "map.matrix: ");
    } else {
        reject_unknown_keys(*grid, "map.grid", {"side", "stay_prob"});
        GridSpec spec;
        spec.side = require_count(*grid, "map.grid", "side");
        if (spec.side == 0) throw ConfigError("key 'map.grid.side' must be at least 1");
        spec.stay_prob = number_or(*grid, "map.grid", "stay_prob", 0.2);
        if (!(spec.stay_prob >= 0.0 && spec.stay_prob < 1.0))
            throw ConfigError("key 'map.grid.stay_prob' must lie in [0, 1)");
        map.grid = spec;
    }
    return map;
}

AsirBlock parse_asir_block(const json& block) {
    reject_unknown_keys(block, "asir",
                        {"alpha_prime", "beta_prime", "init_mode", "location", "seed"});
    AsirBlock asir;
    if (find(block, "alpha_prime") != nullptr)
        asir.alpha_prime = require_number(block, "asir", "alpha_prime");
    if (find(block, "beta_prime") != nullptr)
        asir.beta_prime = require_number(block, "asir", "beta_prime");
    if (const json* seed = find(block, "seed")) {
        if (!seed->is_number_unsigned())
            throw ConfigError("key 'asir.seed' must be a nonnegative integer");
        asir.seed = seed->get<std::uint64_t>();
    }
    std::string init = "stationary";
    if (const json* init_mode = find(block, "init_mode")) {
        if (!init_mode->is_string())
            throw ConfigError("key 'asir.init_mode' must be a string");
        init = init_mode->get<std::string>();
    }
    if (init == "stationary") {
        asir.init_mode = StationaryInit{};
    } else if (init == "uniform") {
        asir.init_mode = UniformInit{};
    } else if (init == "point_mass") {
        PointMassInit pm;
        pm.location = static_cast<std::uint32_t>(require_count(block, "asir", "location"));
        asir.init_mode = pm;
    } else {
        throw ConfigError("key 'asir.init_mode' must be one of stationary, point_mass, uniform");
    }
    if (init != "point_mass" && find(block, "location") != nullptr)
        throw ConfigError("key 'asir.location' is only meaningful with init_mode point_mass");
    return asir;
}

EnsembleBlock parse_ensemble_block(const json& block) {
    reject_unknown_keys(block, "ensemble",
                        {"replicates", "z_threshold", "coverage_threshold", "workers"});
    EnsembleBlock ensemble;
    ensemble.replicates = count_or(block, "ensemble", "replicates", 200);
    if (ensemble.replicates < 2)
        throw ConfigError("key 'ensemble.replicates' must be at least 2");
    ensemble.z_threshold = number_or(block, "ensemble", "z_threshold", 3.0);
    if (!(ensemble.z_threshold > 0.0))
        throw ConfigError("key 'ensemble.z_threshold' must be positive");
    ensemble.coverage_threshold = number_or(block, "ensemble", "coverage_threshold", 0.95);
    if (!(ensemble.coverage_threshold > 0.0 && ensemble.coverage_threshold <= 1.0))
        throw ConfigError("key 'ensemble.coverage_threshold' must lie in (0, 1]");
    ensemble.workers = count_or(block, "ensemble", "workers", 0);
    return ensemble;
}

OutputBlock parse_output_block(const json& block) {
    reject_unknown_keys(block, "output", {"directory", "agent_trace"});
    OutputBlock output;
    if (const json* dir = find(block, "directory")) {
        if (!dir->is_string()) throw ConfigError("key 'output.directory' must be a string");
        output.directory = dir->get<std::string>();
    }
    if (const json* trace = find(block, "agent_trace")) {
        if (!trace->is_boolean()) throw ConfigError("key 'output.agent_trace' must be a boolean");
        output.agent_trace = trace->get<bool>();
    }
    return output;
}

}  // namespace

ExperimentConfig parse_config(const std::string& text, Mode mode) {
    json document;
    try {
        document = json::parse(text, nullptr, true, /*ignore_comments=*/true);
    } catch (const json::parse_error& error) {
        throw ParseError(error.what());
    }
    if (!document.is_object()) throw ParseError("experiment config must be a JSON object");
    reject_unknown_keys(document, "<root>", {"mode", "sir", "map", "asir", "ensemble", "output"});

    ExperimentConfig config;
    config.mode = mode;
    if (const json* declared = find(document, "mode")) {
        if (!declared->is_string() || !mode_from_name(declared->get<std::string>()))
            throw ConfigError("key 'mode' must name a subcommand");
        if (mode_from_name(declared->get<std::string>()) != mode)
            throw ConfigError("config declares mode '" + declared->get<std::string>() +
                              "' but was invoked as '" + mode_name(mode) + "'");
    }

    if (const json* block = find(document, "sir")) config.sir = parse_sir_block(*block);
    if (const json* block = find(document, "map")) config.map = parse_map_block(*block);
    if (const json* block = find(document, "asir")) config.asir = parse_asir_block(*block);
    if (const json* block = find(document, "ensemble")) {
        config.ensemble = parse_ensemble_block(*block);
        config.has_ensemble_block = true;
    }
    if (const json* block = find(document, "output")) config.output = parse_output_block(*block);

    const auto require_block = [&](bool present, const char* block) {
        if (!present) throw MissingBlock(mode_name(mode), block);
    };
    switch (mode) {
        case Mode::Sir:
            require_block(config.sir.has_value(), "sir");
            break;
        case Mode::Stationary:
            require_block(config.map.has_value(), "map");
            break;
        case Mode::Deduce:
            require_block(config.sir.has_value(), "sir");
            require_block(config.map.has_value(), "map");
            break;
        case Mode::Asir:
            require_block(config.sir.has_value(), "sir");
            require_block(config.map.has_value(), "map");
            break;
        case Mode::Verify:
            require_block(config.sir.has_value(), "sir");
            require_block(config.map.has_value(), "map");
            require_block(config.has_ensemble_block, "ensemble");
            break;
        case Mode::FailureMode:
            require_block(config.sir.has_value(), "sir");
            require_block(config.map.has_value(), "map");
            require_block(config.has_ensemble_block, "ensemble");
            if (!config.map->grid)
                throw ConfigError("failure-mode requires a grid map (map.grid block)");
            if (!config.asir.alpha_prime || !config.asir.beta_prime)
                throw ConfigError(
                    "failure-mode requires explicit asir.alpha_prime and asir.beta_prime (a "
                    "sparse grid cannot support the deduction)");
            break;
    }
    return config;
}

}  // namespace asir
