#include "asir/ensemble.hpp"

#include <atomic>
#include <cmath>
#include <cstdio>
#include <exception>
#include <limits>
#include <mutex>
#include <thread>

#include "asir/errors.hpp"

namespace asir {

std::uint64_t Ensemble::n_agents() const {
    if (replicates.empty() || replicates[0].empty()) return 0;
    const StepRecord& first = replicates[0][0];
    return first.s_count + first.i_count + first.r_count;
}

std::uint64_t Ensemble::total_clamp_events() const {
    std::uint64_t total = 0;
    for (const auto& records : replicates)
        for (const StepRecord& record : records) total += record.clamp_events;
    return total;
}

Ensemble run_ensemble(const AsirConfig& config, std::size_t n_replicates, std::size_t workers) {
    if (n_replicates < 2) throw Error("an ensemble needs at least 2 replicates");
    config.validate();

    // Shared across replicates so the (possibly expensive) power iteration
    // runs once.
    StationaryDistribution pi;
    const StationaryDistribution* pi_ptr = nullptr;
    if (std::holds_alternative<StationaryInit>(config.init_mode)) {
        pi = stationary_distribution(config.map);
        pi_ptr = &pi;
    }

    Ensemble ensemble;
    ensemble.master_seed = config.seed;
    ensemble.replicates.resize(n_replicates);

    if (workers == 0) workers = std::max(1u, std::thread::hardware_concurrency());
    workers = std::min(workers, n_replicates);

    std::atomic<std::size_t> next_replicate{0};
    std::atomic<bool> failed{false};
    std::exception_ptr first_error;
    std::mutex error_mutex;

    auto worker = [&]() {
        while (true) {
            const std::size_t r = next_replicate.fetch_add(1);
            if (r >= n_replicates || failed.load()) return;
            try {
                ensemble.replicates[r] =
                    run_replicate(config, pi_ptr, derive_stream_seed(config.seed, r));
            } catch (const std::exception& error) {
                std::lock_guard<std::mutex> lock(error_mutex);
                if (!failed.exchange(true))
                    first_error = std::make_exception_ptr(
                        Error("replicate " + std::to_string(r) + ": " + error.what()));
                return;
            }
        }
    };

    if (workers == 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        pool.reserve(workers);
        for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(worker);
        for (std::thread& t : pool) t.join();
    }
    if (failed.load()) std::rethrow_exception(first_error);
    return ensemble;
}

namespace {

struct MeanSe {
    double mean = 0.0;
    double se = 0.0;
};

MeanSe mean_and_se(const Ensemble& ensemble, std::size_t t, std::uint64_t StepRecord::*field) {
    const double n = static_cast<double>(ensemble.n_replicates());
    double sum = 0.0;
    for (const auto& records : ensemble.replicates)
        sum += static_cast<double>(records[t].*field);
    const double mean = sum / n;
    double sq = 0.0;
    for (const auto& records : ensemble.replicates) {
        const double d = static_cast<double>(records[t].*field) - mean;
        sq += d * d;
    }
    return {mean, std::sqrt(sq / (n - 1.0)) / std::sqrt(n)};
}

double z_score(double mean, double se, double ref) {
    if (se > 0.0) return (mean - ref) / se;
    if (mean == ref) return 0.0;
    return mean > ref ? std::numeric_limits<double>::infinity()
                      : -std::numeric_limits<double>::infinity();
}

}  // namespace

EnsembleReport equivalence_report(const Ensemble& ensemble, const SirCurve& reference,
                                  double z_threshold, double coverage_threshold) {
    if (ensemble.horizon() != reference.horizon())
        throw HorizonMismatch(ensemble.horizon(), reference.horizon());
    if (static_cast<double>(ensemble.n_agents()) != reference.params.n_total)
        throw PopulationMismatch(static_cast<double>(ensemble.n_agents()),
                                 reference.params.n_total);

    EnsembleReport report;
    report.n_replicates = ensemble.n_replicates();
    report.master_seed = ensemble.master_seed;
    report.z_threshold = z_threshold;
    report.coverage_threshold = coverage_threshold;
    report.total_clamp_events = ensemble.total_clamp_events();

    const std::size_t n_points = ensemble.horizon() + 1;
    report.points.resize(n_points);
    std::size_t in_band_s = 0, in_band_i = 0, in_band_r = 0;
    for (std::size_t t = 0; t < n_points; ++t) {
        ReportPoint& point = report.points[t];
        const MeanSe s = mean_and_se(ensemble, t, &StepRecord::s_count);
        const MeanSe i = mean_and_se(ensemble, t, &StepRecord::i_count);
        const MeanSe r = mean_and_se(ensemble, t, &StepRecord::r_count);
        point.mean_s = s.mean;
        point.se_s = s.se;
        point.mean_i = i.mean;
        point.se_i = i.se;
        point.mean_r = r.mean;
        point.se_r = r.se;
        point.ref_s = reference.s[t];
        point.ref_i = reference.i[t];
        point.ref_r = reference.r[t];
        point.z_s = z_score(s.mean, s.se, point.ref_s);
        point.z_i = z_score(i.mean, i.se, point.ref_i);
        point.z_r = z_score(r.mean, r.se, point.ref_r);
        if (std::abs(point.z_s) <= z_threshold) ++in_band_s;
        if (std::abs(point.z_i) <= z_threshold) ++in_band_i;
        if (std::abs(point.z_r) <= z_threshold) ++in_band_r;
    }
    const double n_points_d = static_cast<double>(n_points);
    report.coverage_s = static_cast<double>(in_band_s) / n_points_d;
    report.coverage_i = static_cast<double>(in_band_i) / n_points_d;
    report.coverage_r = static_cast<double>(in_band_r) / n_points_d;
    report.pass = report.coverage_s >= coverage_threshold &&
                  report.coverage_i >= coverage_threshold &&
                  report.coverage_r >= coverage_threshold && report.total_clamp_events == 0;
    return report;
}

FailureModeResult failure_mode_experiment(const FailureModeSpec& spec) {
    spec.reference.validate();
    const TransitionMatrix grid = TransitionMatrix::grid_walk(spec.side, spec.stay_prob);

    AsirConfig config;
    config.alpha_prime = spec.alpha_prime;
    config.beta_prime = spec.beta_prime;
    config.map = grid;
    config.n_agents = static_cast<std::uint64_t>(spec.reference.n_total);
    config.s0 = static_cast<std::uint64_t>(spec.reference.s0);
    config.i0 = static_cast<std::uint64_t>(spec.reference.i0);
    config.r0 = static_cast<std::uint64_t>(spec.reference.r0);
    config.horizon = spec.reference.horizon;
    config.init_mode =
        SplitInit{0, static_cast<std::uint32_t>(grid.n_locations() - 1)};
    config.seed = spec.master_seed;

    const Ensemble ensemble = run_ensemble(config, spec.n_replicates, spec.workers);
    const SirCurve reference = simulate_sir_euler(spec.reference);

    FailureModeResult result;
    result.report =
        equivalence_report(ensemble, reference, spec.z_threshold, spec.coverage_threshold);
    for (const ReportPoint& point : result.report.points)
        result.peak_mean_i = std::max(result.peak_mean_i, point.mean_i);
    result.final_mean_r = result.report.points.back().mean_r;
    return result;
}

void write_summary_csv(const EnsembleReport& report, std::ostream& out) {
    out << "t,mean_S,se_S,mean_I,se_I,mean_R,se_R,ref_S,ref_I,ref_R,z_S,z_I,z_R\n";
    char buffer[512];
    for (std::size_t t = 0; t < report.points.size(); ++t) {
        const ReportPoint& p = report.points[t];
        std::snprintf(buffer, sizeof(buffer),
                      "%zu,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,"
                      "%.17g\n",
                      t, p.mean_s, p.se_s, p.mean_i, p.se_i, p.mean_r, p.se_r, p.ref_s, p.ref_i,
                      p.ref_r, p.z_s, p.z_i, p.z_r);
        out << buffer;
    }
}

void write_report_footer(const EnsembleReport& report, std::ostream& out) {
    char buffer[256];
    out << (report.pass ? "PASS" : "FAIL") << ": equivalence against the compartmental curve\n";
    std::snprintf(buffer, sizeof(buffer),
                  "coverage within |z| <= %g: S %.4f, I %.4f, R %.4f (required %.4f)\n",
                  report.z_threshold, report.coverage_s, report.coverage_i, report.coverage_r,
                  report.coverage_threshold);
    out << buffer;
    out << "clamp events: " << report.total_clamp_events << "\n";
    out << "replicates: " << report.n_replicates << ", master seed: " << report.master_seed
        << "\n";
}

void write_replicates_csv(const Ensemble& ensemble, std::ostream& out) {
    out << "replicate,t,S,I,R,new_inf,new_rec,clamps\n";
    for (std::size_t r = 0; r < ensemble.replicates.size(); ++r) {
        for (const StepRecord& record : ensemble.replicates[r]) {
            out << r << ',' << record.timestamp << ',' << record.s_count << ',' << record.i_count
                << ',' << record.r_count << ',' << record.new_infections << ','
                << record.new_recoveries << ',' << record.clamp_events << '\n';
        }
    }
}

}  // namespace asir
