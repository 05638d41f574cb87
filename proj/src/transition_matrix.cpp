#include "asir/transition_matrix.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "asir/errors.hpp"

namespace asir {

namespace {

constexpr double kRowSumTolerance = 1e-12;
constexpr double kIterateTolerance = 1e-14;
constexpr double kResidualTolerance = 1e-10;
constexpr std::size_t kMaxPowerIterations = 1'000'000;

}  // namespace

TransitionMatrix TransitionMatrix::from_rows(std::vector<std::vector<MatrixEntry>> rows,
                                             const std::string& error_context) {
    TransitionMatrix m;
    m.n_ = rows.size();
    m.row_begin_.assign(m.n_ + 1, 0);
    for (std::size_t r = 0; r < m.n_; ++r) {
        double sum = 0.0;
        for (const MatrixEntry& e : rows[r]) sum += e.probability;
        if (std::abs(sum - 1.0) > kRowSumTolerance)
            throw RowSumViolation(r, sum, error_context);
        m.row_begin_[r + 1] = m.row_begin_[r] + rows[r].size();
    }
    m.entries_.reserve(m.row_begin_[m.n_]);
    for (std::vector<MatrixEntry>& row : rows)
        m.entries_.insert(m.entries_.end(), row.begin(), row.end());
    return m;
}

TransitionMatrix TransitionMatrix::validated(const std::vector<std::vector<double>>& raw,
                                             const std::string& error_context) {
    const std::size_t n = raw.size();
    if (n == 0) throw Error(error_context + "matrix must have at least one location");
    std::vector<std::vector<MatrixEntry>> rows(n);
    for (std::size_t r = 0; r < n; ++r) {
        if (raw[r].size() != n) throw NonSquareMatrix(n, r, raw[r].size());
        for (std::size_t c = 0; c < n; ++c) {
            const double p = raw[r][c];
            if (!std::isfinite(p))
                throw Error(error_context + "non-finite entry at (" + std::to_string(r) + ", " +
                            std::to_string(c) + ")");
            if (p < 0.0) throw NegativeEntry(r, c, p);
            if (p > 0.0) rows[r].push_back({static_cast<std::uint32_t>(c), p});
        }
    }
    return from_rows(std::move(rows), error_context);
}

TransitionMatrix TransitionMatrix::grid_walk(std::size_t side, double stay_prob) {
    if (side == 0) throw ZeroSide();
    if (!(stay_prob >= 0.0 && stay_prob < 1.0))
        throw Error("stay_prob must lie in [0, 1), got " + std::to_string(stay_prob));

    const std::size_t n = side * side;
    std::vector<std::vector<MatrixEntry>> rows(n);
    for (std::size_t x = 0; x < side; ++x) {
        for (std::size_t y = 0; y < side; ++y) {
            const std::size_t cell = x * side + y;
            std::vector<std::uint32_t> neighbours;
            if (x > 0) neighbours.push_back(static_cast<std::uint32_t>(cell - side));
            if (y > 0) neighbours.push_back(static_cast<std::uint32_t>(cell - 1));
            if (y + 1 < side) neighbours.push_back(static_cast<std::uint32_t>(cell + 1));
            if (x + 1 < side) neighbours.push_back(static_cast<std::uint32_t>(cell + side));

            std::vector<MatrixEntry>& row = rows[cell];
            if (neighbours.empty()) {
                row.push_back({static_cast<std::uint32_t>(cell), 1.0});
                continue;
            }
            const double share = (1.0 - stay_prob) / static_cast<double>(neighbours.size());
            if (stay_prob > 0.0) row.push_back({static_cast<std::uint32_t>(cell), stay_prob});
            for (std::uint32_t nb : neighbours) row.push_back({nb, share});
            std::sort(row.begin(), row.end(),
                      [](const MatrixEntry& a, const MatrixEntry& b) { return a.column < b.column; });
        }
    }
    return from_rows(std::move(rows), "grid_walk: ");
}

double TransitionMatrix::at(std::size_t row, std::size_t col) const {
    for (const MatrixEntry& e : this->row(row))
        if (e.column == col) return e.probability;
    return 0.0;
}

std::vector<std::vector<double>> TransitionMatrix::to_dense() const {
    std::vector<std::vector<double>> dense(n_, std::vector<double>(n_, 0.0));
    for (std::size_t r = 0; r < n_; ++r)
        for (const MatrixEntry& e : row(r)) dense[r][e.column] = e.probability;
    return dense;
}

bool TransitionMatrix::doubly_stochastic(double tol) const {
    std::vector<double> col_sum(n_, 0.0);
    for (std::size_t r = 0; r < n_; ++r)
        for (const MatrixEntry& e : row(r)) col_sum[e.column] += e.probability;
    return std::all_of(col_sum.begin(), col_sum.end(),
                       [tol](double s) { return std::abs(s - 1.0) <= tol; });
}

namespace {

std::vector<std::vector<std::uint32_t>> adjacency(const TransitionMatrix& matrix) {
    std::vector<std::vector<std::uint32_t>> adj(matrix.n_locations());
    for (std::size_t r = 0; r < matrix.n_locations(); ++r)
        for (const MatrixEntry& e : matrix.row(r)) adj[r].push_back(e.column);
    return adj;
}

// Iterative Tarjan; recursion would overflow on large grid walks.
std::vector<std::size_t> strongly_connected_components(
    const std::vector<std::vector<std::uint32_t>>& adj, std::size_t& component_count) {
    const std::size_t n = adj.size();
    constexpr std::size_t kUnvisited = static_cast<std::size_t>(-1);
    std::vector<std::size_t> index(n, kUnvisited), lowlink(n), component(n, kUnvisited);
    std::vector<bool> on_stack(n, false);
    std::vector<std::size_t> stack;
    std::size_t next_index = 0;
    component_count = 0;

    struct Frame {
        std::size_t node;
        std::size_t edge;
    };
    std::vector<Frame> call_stack;

    for (std::size_t root = 0; root < n; ++root) {
        if (index[root] != kUnvisited) continue;
        call_stack.push_back({root, 0});
        index[root] = lowlink[root] = next_index++;
        stack.push_back(root);
        on_stack[root] = true;

        while (!call_stack.empty()) {
            Frame& frame = call_stack.back();
            const std::size_t v = frame.node;
            if (frame.edge < adj[v].size()) {
                const std::size_t w = adj[v][frame.edge++];
                if (index[w] == kUnvisited) {
                    index[w] = lowlink[w] = next_index++;
                    stack.push_back(w);
                    on_stack[w] = true;
                    call_stack.push_back({w, 0});
                } else if (on_stack[w]) {
                    lowlink[v] = std::min(lowlink[v], index[w]);
                }
            } else {
                if (lowlink[v] == index[v]) {
                    while (true) {
                        const std::size_t w = stack.back();
                        stack.pop_back();
                        on_stack[w] = false;
                        component[w] = component_count;
                        if (w == v) break;
                    }
                    ++component_count;
                }
                call_stack.pop_back();
                if (!call_stack.empty()) {
                    const std::size_t parent = call_stack.back().node;
                    lowlink[parent] = std::min(lowlink[parent], lowlink[v]);
                }
            }
        }
    }
    return component;
}

// gcd of cycle lengths within one component, via BFS level discrepancies.
// Returns 0 when the component contains no cycle (singleton without self-loop).
std::size_t component_period(const std::vector<std::vector<std::uint32_t>>& adj,
                             const std::vector<std::size_t>& component, std::size_t comp_id,
                             std::size_t representative) {
    constexpr long long kUnset = -1;
    std::vector<long long> level(adj.size(), kUnset);
    std::vector<std::size_t> queue{representative};
    level[representative] = 0;
    long long g = 0;
    for (std::size_t head = 0; head < queue.size(); ++head) {
        const std::size_t v = queue[head];
        for (std::uint32_t w : adj[v]) {
            if (component[w] != comp_id) continue;
            if (level[w] == kUnset) {
                level[w] = level[v] + 1;
                queue.push_back(w);
            } else {
                g = std::gcd(g, std::abs(level[v] + 1 - level[w]));
            }
        }
    }
    return static_cast<std::size_t>(g);
}

}  // namespace

ErgodicityReport ergodicity(const TransitionMatrix& matrix) {
    const auto adj = adjacency(matrix);
    std::size_t component_count = 0;
    const auto component = strongly_connected_components(adj, component_count);

    std::vector<std::size_t> representative(component_count, static_cast<std::size_t>(-1));
    for (std::size_t v = 0; v < adj.size(); ++v)
        if (representative[component[v]] == static_cast<std::size_t>(-1))
            representative[component[v]] = v;

    std::size_t period = 0;
    for (std::size_t c = 0; c < component_count; ++c)
        period = std::gcd(period, component_period(adj, component, c, representative[c]));
    // Every row has a positive entry, so the chain always contains a cycle.
    if (period == 0) period = 1;

    ErgodicityReport report;
    report.communicating_class_count = component_count;
    report.irreducible = component_count == 1;
    report.period = period;
    report.aperiodic = period == 1;
    return report;
}

StationaryDistribution stationary_distribution(const TransitionMatrix& matrix) {
    const ErgodicityReport report = ergodicity(matrix);
    if (!report.irreducible || !report.aperiodic)
        throw NotErgodic(report.communicating_class_count, report.period);

    const std::size_t n = matrix.n_locations();
    std::vector<double> pi(n, 1.0 / static_cast<double>(n));
    std::vector<double> next(n);

    for (std::size_t iteration = 1; iteration <= kMaxPowerIterations; ++iteration) {
        std::fill(next.begin(), next.end(), 0.0);
        for (std::size_t r = 0; r < n; ++r) {
            const double mass = pi[r];
            if (mass == 0.0) continue;
            for (const MatrixEntry& e : matrix.row(r)) next[e.column] += mass * e.probability;
        }
        const double total = std::accumulate(next.begin(), next.end(), 0.0);
        for (double& x : next) x /= total;

        double diff = 0.0;
        for (std::size_t p = 0; p < n; ++p) diff = std::max(diff, std::abs(next[p] - pi[p]));
        pi.swap(next);
        if (diff < kIterateTolerance) {
            double residual = 0.0;
            std::fill(next.begin(), next.end(), 0.0);
            for (std::size_t r = 0; r < n; ++r)
                for (const MatrixEntry& e : matrix.row(r)) next[e.column] += pi[r] * e.probability;
            for (std::size_t p = 0; p < n; ++p)
                residual = std::max(residual, std::abs(next[p] - pi[p]));
            if (residual >= kResidualTolerance) throw NoConvergence(iteration);
            return {std::move(pi), residual};
        }
    }
    throw NoConvergence(kMaxPowerIterations);
}

double meetup_probability(const StationaryDistribution& pi) {
    double sum = 0.0;
    for (double p : pi.probabilities) sum += p * p;
    return sum;
}

std::size_t index_from_cumulative(std::span<const double> probabilities, double u) {
    double cumulative = 0.0;
    std::size_t last_positive = 0;
    bool seen_positive = false;
    for (std::size_t j = 0; j < probabilities.size(); ++j) {
        const double p = probabilities[j];
        if (p > 0.0) {
            cumulative += p;
            last_positive = j;
            seen_positive = true;
            if (cumulative >= u) return j;
        }
    }
    if (!seen_positive) throw Error("cannot sample from an all-zero probability vector");
    return last_positive;
}

std::size_t sample_next(const TransitionMatrix& matrix, std::size_t current, RandomStream& rng) {
    const double u = rng.uniform();
    double cumulative = 0.0;
    const auto row = matrix.row(current);
    std::size_t chosen = row.back().column;
    for (const MatrixEntry& e : row) {
        cumulative += e.probability;
        if (cumulative >= u) return e.column;
    }
    return chosen;
}

std::size_t sample_stationary(const StationaryDistribution& pi, RandomStream& rng) {
    return index_from_cumulative(pi.probabilities, rng.uniform());
}

}  // namespace asir
