#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "asir/engine.hpp"
#include "asir/sir.hpp"
#include "asir/transition_matrix.hpp"

namespace asir {

enum class Mode { Sir, Stationary, Deduce, Asir, Verify, FailureMode };

const char* mode_name(Mode mode);
std::optional<Mode> mode_from_name(const std::string& name);

struct SirBlock {
    double alpha = 0.0;
    double beta = 0.0;
    double n = 0.0;
    double s0 = 0.0;
    double i0 = 0.0;
    double r0 = 0.0;
    std::size_t horizon = 0;
    std::size_t substeps = 100;

    SirParams params() const;
};

struct GridSpec {
    std::size_t side = 0;
    double stay_prob = 0.2;
};

struct MapBlock {
    std::optional<std::vector<std::vector<double>>> matrix;
    std::optional<GridSpec> grid;

    TransitionMatrix build() const;
};

struct AsirBlock {
    std::optional<double> alpha_prime;  // deduced from the sir block when absent
    std::optional<double> beta_prime;
    InitMode init_mode = StationaryInit{};
    std::uint64_t seed = 0;
};

struct EnsembleBlock {
    std::size_t replicates = 200;
    double z_threshold = 3.0;
    double coverage_threshold = 0.95;
    std::size_t workers = 0;  // 0 = machine's available parallelism
};

struct OutputBlock {
    std::string directory;
    bool agent_trace = false;
};

/// A parsed and mode-validated experiment file. Blocks not required by the
/// mode stay unset; optional blocks keep their documented defaults.
struct ExperimentConfig {
    Mode mode = Mode::Sir;
    std::optional<SirBlock> sir;
    std::optional<MapBlock> map;
    AsirBlock asir;
    EnsembleBlock ensemble;
    bool has_ensemble_block = false;
    OutputBlock output;
};

/// Parses a JSON experiment document (// comments allowed) and validates it
/// against the selected mode. Inline matrices are validated here so bad rows
/// are reported with their config key path.
ExperimentConfig parse_config(const std::string& text, Mode mode);

}  // namespace asir
