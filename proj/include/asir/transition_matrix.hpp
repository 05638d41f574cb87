#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "asir/rng.hpp"

namespace asir {

struct MatrixEntry {
    std::uint32_t column;
    double probability;
};

/// Row-stochastic movement kernel over a finite location set. Construction
/// validates that every entry is a probability and every row sums to 1
/// within 1e-12. Rows are stored sparsely (zero entries dropped), which
/// changes nothing semantically but keeps large grid walks cheap to store
/// and sample.
class TransitionMatrix {
public:
    /// Empty placeholder (0 locations); every valid instance comes from
    /// validated() or grid_walk().
    TransitionMatrix() = default;

    /// Validates a dense row-major matrix.
    static TransitionMatrix validated(const std::vector<std::vector<double>>& raw,
                                      const std::string& error_context = "");

    /// side x side lazy 4-neighbourhood walk: stay in place with probability
    /// stay_prob, split the rest equally among the existing up/down/left/right
    /// neighbours. Edge cells have fewer neighbours, so their per-neighbour
    /// share grows and the row still sums to 1. Cells are indexed row-major.
    static TransitionMatrix grid_walk(std::size_t side, double stay_prob);

    std::size_t n_locations() const { return n_; }
    std::span<const MatrixEntry> row(std::size_t r) const {
        return {entries_.data() + row_begin_[r], entries_.data() + row_begin_[r + 1]};
    }
    double at(std::size_t row, std::size_t col) const;
    std::vector<std::vector<double>> to_dense() const;

    /// True when every column also sums to 1 within the given tolerance.
    bool doubly_stochastic(double tol = 1e-12) const;

private:
    static TransitionMatrix from_rows(std::vector<std::vector<MatrixEntry>> rows,
                                      const std::string& error_context);

    std::size_t n_ = 0;
    std::vector<std::size_t> row_begin_;
    std::vector<MatrixEntry> entries_;
};

/// Probability vector fixed by a transition matrix, with the residual
/// ||pi*T - pi||_inf it was accepted at.
struct StationaryDistribution {
    std::vector<double> probabilities;
    double residual = 0.0;
};

struct ErgodicityReport {
    bool irreducible = false;
    bool aperiodic = false;
    std::size_t communicating_class_count = 0;
    /// gcd of the cycle lengths of the nonzero-pattern graph; 1 iff aperiodic.
    std::size_t period = 0;
};

/// Strongly-connected-component count and period of the directed graph of
/// nonzero entries.
ErgodicityReport ergodicity(const TransitionMatrix& matrix);

/// Power iteration from the uniform vector until the successive-iterate
/// infinity-norm difference drops below 1e-14 (cap 10^6 iterations).
/// Requires an ergodic chain.
StationaryDistribution stationary_distribution(const TransitionMatrix& matrix);

/// Probability that two agents with independent pi-distributed positions
/// occupy the same location: sum of squared stationary probabilities.
double meetup_probability(const StationaryDistribution& pi);

/// Cumulative-sum inversion in ascending index order: the first index whose
/// cumulative probability reaches u. u must lie in (0, 1]. Falls back to the
/// last positive-probability index when rounding leaves the total below u.
std::size_t index_from_cumulative(std::span<const double> probabilities, double u);

/// One movement draw: returns j with probability matrix[current][j],
/// consuming exactly one uniform.
std::size_t sample_next(const TransitionMatrix& matrix, std::size_t current, RandomStream& rng);

/// One position draw from pi, consuming exactly one uniform.
std::size_t sample_stationary(const StationaryDistribution& pi, RandomStream& rng);

}  // namespace asir
