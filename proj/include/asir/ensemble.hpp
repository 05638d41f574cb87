#pragma once

#include <cstdint>
#include <ostream>
#include <vector>

#include "asir/engine.hpp"
#include "asir/sir.hpp"

namespace asir {

/// Replicate records for one config, replicate r seeded from the derived
/// stream (master_seed, r). Stored by replicate index, so every downstream
/// reduction is independent of execution order and parallelism degree.
struct Ensemble {
    std::uint64_t master_seed = 0;
    std::vector<std::vector<StepRecord>> replicates;

    std::size_t n_replicates() const { return replicates.size(); }
    std::size_t horizon() const { return replicates.empty() ? 0 : replicates[0].size() - 1; }
    std::uint64_t n_agents() const;
    std::uint64_t total_clamp_events() const;
};

/// Runs n_replicates sample paths, optionally across worker threads
/// (workers = 0 picks the machine's available parallelism).
Ensemble run_ensemble(const AsirConfig& config, std::size_t n_replicates, std::size_t workers = 0);

struct ReportPoint {
    double mean_s = 0.0, se_s = 0.0;
    double mean_i = 0.0, se_i = 0.0;
    double mean_r = 0.0, se_r = 0.0;
    double ref_s = 0.0, ref_i = 0.0, ref_r = 0.0;
    double z_s = 0.0, z_i = 0.0, z_r = 0.0;
};

/// Verdict on agent-level curves against a compartmental reference.
/// z = (mean - ref) / se per timestamp and compartment; when se = 0 the z is
/// 0 if the means agree exactly and +/-inf otherwise. pass requires, for
/// each compartment, at least coverage_threshold of timestamps with
/// |z| <= z_threshold, and zero clamp events across the whole ensemble.
struct EnsembleReport {
    std::size_t n_replicates = 0;
    std::uint64_t master_seed = 0;
    std::vector<ReportPoint> points;
    double coverage_s = 0.0, coverage_i = 0.0, coverage_r = 0.0;
    std::uint64_t total_clamp_events = 0;
    double z_threshold = 3.0;
    double coverage_threshold = 0.95;
    bool pass = false;
};

EnsembleReport equivalence_report(const Ensemble& ensemble, const SirCurve& reference,
                                  double z_threshold = 3.0, double coverage_threshold = 0.95);

/// Inputs for the sparse-grid failure regime: a side x side lazy walk with
/// infected agents seeded at one corner and everyone else at the opposite
/// corner. alpha_prime/beta_prime come from the caller (a deduction made for
/// a well-mixed map), and the reference is the compartmental curve those
/// parameters were deduced from.
struct FailureModeSpec {
    std::size_t side = 100;
    double stay_prob = 0.2;
    SirParams reference;  // also fixes n_agents, compartments, horizon
    double alpha_prime = 0.0;
    double beta_prime = 0.0;
    std::size_t n_replicates = 200;
    std::uint64_t master_seed = 0;
    double z_threshold = 3.0;
    double coverage_threshold = 0.95;
    std::size_t workers = 0;
};

struct FailureModeResult {
    EnsembleReport report;
    double peak_mean_i = 0.0;
    double final_mean_r = 0.0;
};

FailureModeResult failure_mode_experiment(const FailureModeSpec& spec);

/// CSV with header t,mean_S,se_S,mean_I,se_I,mean_R,se_R,ref_S,ref_I,ref_R,
/// z_S,z_I,z_R at full double precision.
void write_summary_csv(const EnsembleReport& report, std::ostream& out);

/// Human-readable verdict block: pass/fail, per-compartment coverage, clamp
/// total, replicate count, master seed.
void write_report_footer(const EnsembleReport& report, std::ostream& out);

/// CSV with header replicate,t,S,I,R,new_inf,new_rec,clamps.
void write_replicates_csv(const Ensemble& ensemble, std::ostream& out);

}  // namespace asir
