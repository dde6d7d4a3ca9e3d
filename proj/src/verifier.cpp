#include "beurling/verifier.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>

namespace beurling {

char to_char(Condition c)
{
	return static_cast<char>('a' + static_cast<int>(c));
}

StateSummary summarize(const IterationState& state)
{
	return {state.index, state.k, state.b_at_k};
}

namespace {

ConditionReport make_report(std::uint64_t index, Condition c, ExactRational lhs, ExactRational rhs)
{
	ConditionReport r;
	r.step_index = index;
	r.condition = c;
	r.holds = lhs == rhs;
	r.lhs = std::move(lhs);
	r.rhs = std::move(rhs);
	return r;
}

ExactRational alpha(const ExactRational& b_at_k, std::uint64_t k)
{
	return (ExactRational(1) + b_at_k) / from_natural(k);
}

void require_history(const IterationState& state)
{
	if (state.index < 2 || state.history.size() != state.index || state.history.back().k != state.k)
		throw std::invalid_argument("state history does not match its index");
}

} // namespace

ConditionReport check_condition_a(const IterationState& state, const ExactRational& mu_sum)
{
	require_history(state);
	return make_report(state.index, Condition::a, mu_sum, alpha(state.b_at_k, state.k));
}

ConditionReport check_condition_a(const IterationState& state)
{
	return check_condition_a(state, reciprocal_sum(state.history));
}

ConditionReport check_condition_b(const IterationState& state, const ExactRational& prefix_sum)
{
	require_history(state);
	const auto terms = state.b.terms();
	const auto& history = state.history;
	const std::size_t i = history.size();

	ExactRational last = prefix_sum * from_natural(state.k);
	last = -last;

	// Closed-form coefficient at position j (history order), zero coefficients omitted.
	std::size_t t = 0;
	for (std::size_t j = 0; j < i; ++j) {
		const ExactRational expected =
		    j + 1 < i ? ExactRational(static_cast<long>(history[j].mu)) : last;
		if (is_zero(expected))
			continue;
		if (t >= terms.size() || terms[t].scale != history[j].k) {
			ConditionReport r = make_report(state.index, Condition::b, 0, expected);
			if (t < terms.size() && terms[t].scale < history[j].k)
				r.lhs = terms[t].coefficient;
			r.holds = false;
			return r;
		}
		if (terms[t].coefficient != expected)
			return make_report(state.index, Condition::b, terms[t].coefficient, expected);
		++t;
	}
	if (t != terms.size()) {
		ConditionReport r = make_report(state.index, Condition::b, terms[t].coefficient, 0);
		r.holds = false;
		return r;
	}
	return make_report(state.index, Condition::b, last, last);
}

ConditionReport check_condition_b(const IterationState& state)
{
	require_history(state);
	return check_condition_b(
	    state, reciprocal_sum(std::span<const HistoryEntry>(state.history).first(state.index - 1)));
}

ConditionReport check_condition_c(const StateSummary& prev, const IterationState& state)
{
	require_history(state);
	if (state.index < 3 || prev.index + 1 != state.index)
		throw std::invalid_argument("condition (c) needs consecutive states with i >= 3");
	ExactRational lhs(static_cast<long>(state.history.back().mu));
	lhs /= from_natural(state.k);
	ExactRational rhs = alpha(state.b_at_k, state.k) - alpha(prev.b_at_k, prev.k);
	return make_report(state.index, Condition::c, std::move(lhs), std::move(rhs));
}

ConditionReport check_condition_c(const IterationState& prev, const IterationState& state)
{
	return check_condition_c(summarize(prev), state);
}

ConditionReport check_condition_d(const IterationState& state, std::uint64_t k_next,
                                  const ExactRational& b_at_next, std::int64_t generated_mu)
{
	if (k_next <= state.k)
		throw std::invalid_argument("k_next must exceed k_i");
	ExactRational diff = b_at_next - state.b_at_k;
	ConditionReport r =
	    make_report(state.index, Condition::d, ExactRational(static_cast<long>(generated_mu)), diff);
	r.holds = r.holds && (diff == 1 || diff == -1);
	return r;
}

ConditionReport check_condition_e(std::span<const HistoryEntry> history, std::uint64_t k_i)
{
	__int128 sum = 0;
	std::uint64_t index = 0;
	for (const auto& [k, mu] : history) {
		if (k > k_i)
			break;
		sum += static_cast<__int128>(mu) * static_cast<__int128>(k_i / k);
		++index;
	}
	if (index == 0 || history[index - 1].k != k_i)
		throw std::invalid_argument("history does not contain k_i");
	return make_report(index, Condition::e, ExactRational(detail::from_int128(sum)), 1);
}

VerificationReport verify_run(std::span<const GeneratedRecord> records, std::uint64_t limit,
                              const MobiusSieve& sieve)
{
	if (limit > sieve.limit())
		throw std::out_of_range("verification limit " + std::to_string(limit) +
		                        " exceeds sieve limit " + std::to_string(sieve.limit()));
	VerificationReport report;
	report.limit = limit;

	std::vector<bool> seen(limit + 1, false);
	const GeneratedRecord* prev = nullptr;
	const GeneratedRecord* first = nullptr;
	std::uint64_t counted = 0;
	for (const auto& rec : records) {
		if (rec.k < 1 || rec.k > limit)
			continue;
		seen[rec.k] = true;
		const int oracle = sieve.mu(rec.k);
		if (oracle == 0)
			report.square_full_generated.push_back(rec.k);
		if (rec.mu != oracle)
			report.mu_mismatches.push_back({rec.k, rec.mu, oracle});
		if (prev && prev->index >= 2 && rec.k >= 2 * prev->k)
			report.gap_violations.push_back({prev->index, prev->k, rec.k});
		if (!first)
			first = &rec;
		prev = &rec;
		++counted;
	}
	for (std::uint64_t n = 1; n <= limit; ++n)
		if (!seen[n] && sieve.mu(n) != 0)
			report.missing_square_free.push_back(n);

	if (counted >= 2)
		report.mean_gap = ExactRational(to_big(prev->k - first->k), to_big(counted - 1));
	report.mean_gap.canonicalize();
	return report;
}

} // namespace beurling
