#pragma once

/**
 * @file verifier.hpp
 * @brief Exact checks of the equivalent step conditions and run-level audits.
 *
 * For a state at step i with history (k_j, mu_j), j = 1..i:
 *   (a) sum_{j<=i} mu_j / k_j  ==  (1 + b_i(k_i)) / k_i
 *   (b) b_i == sum_{j<i} mu_j {x/k_j} - k_i (sum_{j<i} mu_j/k_j) {x/k_i}
 *   (c) mu_i / k_i  ==  (1 + b_i(k_i))/k_i - (1 + b_{i-1}(k_{i-1}))/k_{i-1}
 *   (d) mu_{i+1} == b_i(k_{i+1}) - b_i(k_i), with the difference in {-1, +1}
 *   (e) sum_{j<=i} mu_j floor(k_i / k_j) == 1
 *
 * Every comparison is exact equality; there are no tolerances.
 */

#include "beurling/generator.hpp"
#include "beurling/sieve.hpp"

#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace beurling {

enum class Condition { a, b, c, d, e };

char to_char(Condition c);

struct ConditionReport
{
	std::uint64_t step_index = 0;
	Condition condition = Condition::a;
	bool holds = false;
	ExactRational lhs;
	ExactRational rhs;
};

/// The scalars of a state that condition (c) needs from the preceding step.
struct StateSummary
{
	std::uint64_t index = 0;
	std::uint64_t k = 0;
	ExactRational b_at_k;
};

StateSummary summarize(const IterationState& state);

/// `mu_sum` must be sum_{j<=i} mu_j / k_j; the overload without it recomputes.
ConditionReport check_condition_a(const IterationState& state, const ExactRational& mu_sum);
ConditionReport check_condition_a(const IterationState& state);

/// Term-by-term comparison with the closed form. On mismatch lhs/rhs hold the
/// first differing coefficient (computed vs closed form); on success, the
/// coefficient at k_i. `prefix_sum` must be sum_{j<i} mu_j / k_j.
ConditionReport check_condition_b(const IterationState& state, const ExactRational& prefix_sum);
ConditionReport check_condition_b(const IterationState& state);

/// Throws std::invalid_argument unless prev.index + 1 == state.index and state.index >= 3.
ConditionReport check_condition_c(const StateSummary& prev, const IterationState& state);
ConditionReport check_condition_c(const IterationState& prev, const IterationState& state);

/// `generated_mu` is the mu the generator emitted for k_next.
ConditionReport check_condition_d(const IterationState& state, std::uint64_t k_next,
                                  const ExactRational& b_at_next, std::int64_t generated_mu);

ConditionReport check_condition_e(std::span<const HistoryEntry> history, std::uint64_t k_i);

struct MuMismatch
{
	std::uint64_t k = 0;
	std::int64_t generated_mu = 0;
	int oracle_mu = 0;
	friend bool operator==(const MuMismatch&, const MuMismatch&) = default;
};

struct GapViolation
{
	std::uint64_t index = 0;
	std::uint64_t k = 0;
	std::uint64_t k_next = 0;
	friend bool operator==(const GapViolation&, const GapViolation&) = default;
};

struct VerificationReport
{
	std::uint64_t limit = 0;
	std::vector<std::uint64_t> missing_square_free;
	std::vector<std::uint64_t> square_full_generated;
	std::vector<MuMismatch> mu_mismatches;
	std::vector<GapViolation> gap_violations;
	std::vector<ConditionReport> conditions_failed;
	ExactRational mean_gap;

	bool consistent() const
	{
		return missing_square_free.empty() && square_full_generated.empty() &&
		       mu_mismatches.empty() && gap_violations.empty() && conditions_failed.empty();
	}
};

/**
 * Audits a record stream against the sieve for every n <= limit:
 * square-free numbers never generated, generated numbers with oracle mu = 0,
 * mu disagreements, steps with k_{i+1} >= 2 k_i (i >= 2), and the mean gap
 * (k_last - k_first) / (count - 1). Records above `limit` are ignored.
 * Throws std::out_of_range when limit exceeds the sieve.
 */
VerificationReport verify_run(std::span<const GeneratedRecord> records, std::uint64_t limit,
                              const MobiusSieve& sieve);
inline VerificationReport verify_run(std::span<const GeneratedRecord> records,
                                     const MobiusSieve& sieve)
{
	return verify_run(records, sieve.limit(), sieve);
}

} // namespace beurling
