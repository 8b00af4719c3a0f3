#pragma once

#include "apch/changepoint.hpp"
#include "apch/schedule.hpp"

#include <cstddef>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace apch {

/// Geometric grid of historical window lengths m_k anchored at an endpoint n:
/// I_k = [n - m_k + 1, n]. Candidate break sets for step k cover the span
/// added between I_{k-2} and I_{k-1}; the first step, which has no two prior
/// lengths, scans the older half of I_0.
struct IntervalGrid {
    std::size_t m0 = 10;
    double a = 1.25;
    std::vector<std::size_t> lengths; // strictly increasing, lengths[0] == m0

    /// Lengths round(m0 * a^k) up to m_max, deduplicated; m_max itself is
    /// always included as the final length.
    static IntervalGrid geometric(std::size_t m0, double a, std::size_t m_max);
    static IntervalGrid from_lengths(std::vector<std::size_t> lengths);

    std::size_t K() const { return lengths.empty() ? 0 : lengths.size() - 1; }
    Interval interval(std::size_t k, std::size_t n) const;

    /// Inclusive tau range scanned at step k >= 1.
    std::pair<std::size_t, std::size_t> candidate_range(std::size_t k, std::size_t n) const;

    /// Grid restricted to lengths fitting the available history (n + 1
    /// observations for 0-based endpoint n).
    IntervalGrid truncate_to_history(std::size_t history) const;
};

enum class StopReason { BreakDetected, GridExhausted, HistoryExhausted };

std::string stop_reason_name(StopReason r);

struct StepRecord {
    std::size_t k = 0;
    std::size_t m_k = 0;
    double sup_stat = 0.0;
    double z_k = 0.0;
    bool tested = false;   // false when no feasible candidate existed
    bool accepted = false;
    bool anomaly = false;  // estimation failure; step treated as rejected
    std::size_t n_candidates = 0;
};

struct AdaptiveFit {
    std::size_t endpoint = 0;
    std::size_t selected_k = 0;
    Interval interval;
    ParamVector theta_hat;
    double loglik = 0.0;
    std::vector<StepRecord> trace;
    StopReason stopped_reason = StopReason::GridExhausted;
};

/// Sequential search for the longest interval of homogeneity ending at n:
/// I_0 is accepted automatically, each larger I_k is scanned for a break and
/// accepted while the supremum LR statistic stays at or below z_k. On the
/// first rejection the previously accepted interval wins; the estimate is a
/// fresh quasi-MLE refit on it. A step whose scan fails to estimate is
/// treated as a rejection and flagged in the trace.
AdaptiveFit select_interval(const ModelSpec& spec, const ReturnSeries& y, std::size_t n,
                            const IntervalGrid& grid, const CriticalValueSchedule& cv,
                            InitRule init, const OptimizerConfig& opt, int jobs = 1);

struct RollingResult {
    std::vector<std::size_t> endpoints;
    std::vector<std::optional<AdaptiveFit>> fits; // aligned with endpoints
    std::vector<std::string> errors;              // aligned; empty when ok
    std::size_t n_failures = 0;
};

/// Independent select_interval per endpoint; endpoints run in parallel for
/// jobs != 1 with identical results. Per-endpoint failures are collected,
/// not fatal.
RollingResult rolling_fit(const ModelSpec& spec, const ReturnSeries& y,
                          const std::vector<std::size_t>& endpoints, const IntervalGrid& grid,
                          const CriticalValueSchedule& cv, InitRule init,
                          const OptimizerConfig& opt, int jobs = 1);

} // namespace apch
