#pragma once

/**
 * @file generator.hpp
 * @brief Iterative generation of the sequence k_i and the functions b_i.
 *
 * Starting from k_1 = 1, k_2 = 2 and b_2(x) = {x} - 2{x/2}, each step
 * takes k_{i+1} as the least integer above k_i where b_i changes value,
 * reports mu(k_{i+1}) = b_i(k_{i+1}) - b_i(k_i) and updates
 *
 *     b_{i+1} = b_i + (1 + b_i(k_i)) * beta_{k_i, k_{i+1}}.
 *
 * Three execution modes share the record format:
 *   - exact: the recursion above over ExactRational combinations;
 *   - fast:  machine-integer divisor sums over the generated history,
 *            with periodic exact re-verification of one recursion step;
 *   - float: the recursion over binary64, for demonstrating rounding
 *            artifacts. Its mu column may contain values other than +-1.
 */

#include "beurling/combination.hpp"

#include <chrono>
#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace beurling {

enum class GeneratorMode { exact, fast, float_demo };

std::string_view to_string(GeneratorMode mode);
/// Accepts "exact", "fast", "float" and "float-demo".
GeneratorMode parse_mode(std::string_view text);

struct HistoryEntry
{
	std::uint64_t k = 0;
	std::int64_t mu = 0;

	friend bool operator==(const HistoryEntry&, const HistoryEntry&) = default;
};

using History = std::vector<HistoryEntry>;

template <typename Scalar>
struct BasicIterationState
{
	std::uint64_t index = 2;
	std::uint64_t k = 2;
	BasicCombination<Scalar> b;
	Scalar b_at_k{};
	History history;
};

using IterationState = BasicIterationState<ExactRational>;
using FloatIterationState = BasicIterationState<double>;

struct GeneratedRecord
{
	std::uint64_t index = 0;
	std::uint64_t k = 0;
	std::int64_t mu = 0;
	std::uint64_t gap = 0;
	double t_seconds = 0.0;
	double T_seconds = 0.0;
};

/// Abnormal termination of a run. Every kind is a reportable finding, not a crash.
class GeneratorError : public std::runtime_error
{
public:
	enum class Kind {
		scan_cap_exceeded, ///< no discontinuity below k_i + scan_cap
		non_unit_mu,       ///< b_i(k_{i+1}) - b_i(k_i) is not exactly +-1
		fast_window,       ///< fast path asked to probe outside [k_i, 2 k_i)
		spot_check_failed  ///< fast path disagrees with the exact recursion
	};

	GeneratorError(Kind kind, std::uint64_t index, std::uint64_t k, const std::string& detail);

	Kind kind() const noexcept { return kind_; }
	std::uint64_t index() const noexcept { return index_; }
	std::uint64_t k() const noexcept { return k_; }

private:
	Kind kind_;
	std::uint64_t index_;
	std::uint64_t k_;
};

std::string_view to_string(GeneratorError::Kind kind);

/// State after the seeding step: i = 2, k = 2, b_2 = {x} - 2{x/2}, history [(1,+1), (2,-1)].
template <typename Scalar>
BasicIterationState<Scalar> init();

/// Least k_i + j (1 <= j < scan_cap) with b_i(k_i + j) != b_i(k_i). Only
/// natural numbers are probed since b_i is constant on [m, m+1).
/// Throws GeneratorError(scan_cap_exceeded) when j reaches scan_cap.
template <typename Scalar>
std::uint64_t next_discontinuity(const BasicIterationState<Scalar>& state, std::uint64_t scan_cap);

template <typename Scalar>
struct StepOutcome
{
	BasicIterationState<Scalar> state;
	GeneratedRecord record; ///< timing fields left at zero
	Scalar delta{};         ///< b_i(k_{i+1}) - b_i(k_i)
};

/// One iteration. In exact arithmetic a delta other than +-1 throws
/// GeneratorError(non_unit_mu); in floating point mu is the rounded delta.
/// scan_cap = 0 means "use k_i".
template <typename Scalar>
StepOutcome<Scalar> step(BasicIterationState<Scalar> state, std::uint64_t scan_cap = 0);

/// sum_j mu_j * (floor(x / k_j) - floor(k_current / k_j)) over the history.
/// Equals b_i(k_i) - b_i(x) on [k_i, 2 k_i) when b_i has the closed form
/// sum_{j<i} mu_j {x/k_j} - k_i g_{i-1} {x/k_i}.
std::int64_t fast_delta(std::span<const HistoryEntry> history, std::uint64_t k_current,
                        std::uint64_t x);

/// sum_j mu_j / k_j over the given entries.
ExactRational reciprocal_sum(std::span<const HistoryEntry> history);

/// sum_{j<i} mu_j {x/k_j} - k_i (sum_{j<i} mu_j/k_j) {x/k_i}, where the
/// history holds j = 1..i. `prefix_sum` must be sum_{j<i} mu_j / k_j.
BeurlingCombination closed_form_combination(std::span<const HistoryEntry> history,
                                            const ExactRational& prefix_sum);
BeurlingCombination closed_form_combination(std::span<const HistoryEntry> history);

struct RunOptions
{
	GeneratorMode mode = GeneratorMode::exact;
	/// Maximum gap probed; unset means k_i (a hit is then a gap-condition failure).
	std::optional<std::uint64_t> scan_cap;
	/// Fast mode re-verifies one step exactly every this many steps and at the end.
	std::uint64_t spot_check_interval = 1000;
};

/**
 * Pull-style run producing one record per call, for every k <= limit.
 *
 * t_seconds covers only the work inside next(); anything the caller does
 * between calls (verification, output) is excluded. T_seconds is the
 * running sum of t_seconds.
 */
class Generator
{
public:
	Generator(std::uint64_t limit, RunOptions options);

	std::optional<GeneratedRecord> next();

	std::uint64_t limit() const noexcept { return limit_; }
	const RunOptions& options() const noexcept { return options_; }
	const History& history() const noexcept;

	/// Current exact state (exact mode only, else nullptr).
	const IterationState* exact_state() const noexcept;
	/// Current binary64 state (float mode only, else nullptr).
	const FloatIterationState* float_state() const noexcept;
	/// Raw b_i(k_{i+1}) - b_i(k_i) behind the last float record.
	double last_float_delta() const noexcept { return last_float_delta_; }

	std::uint64_t spot_checks() const noexcept { return spot_checks_; }

private:
	using clock = std::chrono::steady_clock;

	std::optional<GeneratedRecord> advance();
	std::optional<GeneratedRecord> advance_exact();
	std::optional<GeneratedRecord> advance_float();
	std::optional<GeneratedRecord> advance_fast();
	void push_divisor_sums(std::uint64_t k, std::int64_t mu);
	void exact_spot_check(std::span<const HistoryEntry> prefix, std::uint64_t k_next,
	                      std::int64_t mu_next);
	std::uint64_t cap_for(std::uint64_t k) const;

	std::uint64_t limit_;
	RunOptions options_;
	std::uint64_t emitted_ = 0;
	bool done_ = false;
	double total_seconds_ = 0.0;
	double last_float_delta_ = 0.0;

	std::optional<IterationState> exact_;
	std::optional<FloatIterationState> float_;

	// Fast mode.
	History history_;
	std::vector<std::int32_t> divisor_sums_;
	ExactRational checked_sum_;
	std::size_t checked_upto_ = 0;
	std::uint64_t spot_checks_ = 0;
};

/// Collects every record of a run.
std::vector<GeneratedRecord> run(std::uint64_t limit, const RunOptions& options);

} // namespace beurling
