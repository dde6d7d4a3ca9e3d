#include "beurling/generator.hpp"

#include <cmath>
#include <limits>
#include <utility>

namespace beurling {

std::string_view to_string(GeneratorMode mode)
{
	switch (mode) {
	case GeneratorMode::exact: return "exact";
	case GeneratorMode::fast: return "fast";
	case GeneratorMode::float_demo: return "float";
	}
	return "unknown";
}

GeneratorMode parse_mode(std::string_view text)
{
	if (text == "exact")
		return GeneratorMode::exact;
	if (text == "fast")
		return GeneratorMode::fast;
	if (text == "float" || text == "float-demo")
		return GeneratorMode::float_demo;
	throw std::invalid_argument("unknown generator mode '" + std::string(text) + "'");
}

std::string_view to_string(GeneratorError::Kind kind)
{
	switch (kind) {
	case GeneratorError::Kind::scan_cap_exceeded: return "scan_cap_exceeded";
	case GeneratorError::Kind::non_unit_mu: return "non_unit_mu";
	case GeneratorError::Kind::fast_window: return "fast_window";
	case GeneratorError::Kind::spot_check_failed: return "spot_check_failed";
	}
	return "unknown";
}

GeneratorError::GeneratorError(Kind kind, std::uint64_t index, std::uint64_t k,
                               const std::string& detail)
    : std::runtime_error(std::string(to_string(kind)) + " at i=" + std::to_string(index) +
                         ", k_i=" + std::to_string(k) + ": " + detail),
      kind_(kind), index_(index), k_(k)
{
}

namespace {

std::string describe(const ExactRational& x) { return to_string(x); }

// First k_i + j with a changed value, or nullopt once k_i + j passes `limit`.
template <typename Scalar>
std::optional<std::uint64_t> scan(const BasicIterationState<Scalar>& state, std::uint64_t scan_cap,
                                  std::uint64_t limit)
{
	const std::uint64_t cap = scan_cap == 0 ? state.k : scan_cap;
	for (std::uint64_t j = 1;; ++j) {
		const std::uint64_t x = state.k + j;
		if (x > limit)
			return std::nullopt;
		if (j >= cap)
			throw GeneratorError(GeneratorError::Kind::scan_cap_exceeded, state.index, state.k,
			                     "no discontinuity below k_i + " + std::to_string(cap));
		if (state.b.evaluate(x) != state.b_at_k)
			return x;
	}
}

// Applies one iteration in place; throws before touching `state`.
template <typename Scalar>
GeneratedRecord step_in_place(BasicIterationState<Scalar>& state, std::uint64_t k_next, Scalar& delta)
{
	const Scalar b_next = state.b.evaluate(k_next);
	delta = b_next - state.b_at_k;

	std::int64_t mu = 0;
	if constexpr (std::is_same_v<Scalar, ExactRational>) {
		if (delta == 1)
			mu = 1;
		else if (delta == -1)
			mu = -1;
		else
			throw GeneratorError(GeneratorError::Kind::non_unit_mu, state.index, state.k,
			                     "b_i(k_{i+1}) - b_i(k_i) = " + describe(delta) + " at k_{i+1}=" +
			                         std::to_string(k_next));
	} else {
		mu = std::llround(delta);
	}

	const Scalar weight = Scalar(1) + state.b_at_k;
	state.b.add_block(state.k, k_next, weight);

	GeneratedRecord record;
	record.index = state.index + 1;
	record.k = k_next;
	record.mu = mu;
	record.gap = k_next - state.k;

	state.index += 1;
	state.k = k_next;
	state.b_at_k = state.b.evaluate(k_next);
	state.history.push_back({k_next, mu});
	return record;
}

} // namespace

template <typename Scalar>
BasicIterationState<Scalar> init()
{
	BasicIterationState<Scalar> state;
	state.index = 2;
	state.k = 2;
	state.b.add_block(1, 2, Scalar(1));
	state.b_at_k = state.b.evaluate(std::uint64_t{2});
	state.history = {{1, 1}, {2, -1}};
	return state;
}

template <typename Scalar>
std::uint64_t next_discontinuity(const BasicIterationState<Scalar>& state, std::uint64_t scan_cap)
{
	if (scan_cap == 0)
		throw std::invalid_argument("scan_cap must be >= 1");
	return *scan(state, scan_cap, std::numeric_limits<std::uint64_t>::max());
}

template <typename Scalar>
StepOutcome<Scalar> step(BasicIterationState<Scalar> state, std::uint64_t scan_cap)
{
	const std::uint64_t k_next = *scan(state, scan_cap, std::numeric_limits<std::uint64_t>::max());
	StepOutcome<Scalar> out;
	out.record = step_in_place(state, k_next, out.delta);
	out.state = std::move(state);
	return out;
}

template BasicIterationState<ExactRational> init<ExactRational>();
template BasicIterationState<double> init<double>();
template std::uint64_t next_discontinuity(const BasicIterationState<ExactRational>&, std::uint64_t);
template std::uint64_t next_discontinuity(const BasicIterationState<double>&, std::uint64_t);
template StepOutcome<ExactRational> step(BasicIterationState<ExactRational>, std::uint64_t);
template StepOutcome<double> step(BasicIterationState<double>, std::uint64_t);

std::int64_t fast_delta(std::span<const HistoryEntry> history, std::uint64_t k_current,
                        std::uint64_t x)
{
	if (x < k_current || x / 2 >= k_current)
		throw std::out_of_range("fast_delta requires k_current <= x < 2 k_current");
	std::int64_t sum = 0;
	for (const auto& [k, mu] : history) {
		if (k > x)
			break;
		sum += mu * static_cast<std::int64_t>(x / k - k_current / k);
	}
	return sum;
}

ExactRational reciprocal_sum(std::span<const HistoryEntry> history)
{
	std::vector<BeurlingTerm<ExactRational>> terms;
	terms.reserve(history.size());
	for (const auto& [k, mu] : history)
		terms.push_back({k, ExactRational(static_cast<long>(mu))});
	return detail::sum_of_ratios(terms);
}

BeurlingCombination closed_form_combination(std::span<const HistoryEntry> history,
                                            const ExactRational& prefix_sum)
{
	if (history.size() < 2)
		throw std::invalid_argument("closed form needs at least k_1 and k_2");
	std::vector<BeurlingTerm<ExactRational>> terms;
	terms.reserve(history.size());
	for (std::size_t j = 0; j + 1 < history.size(); ++j)
		terms.push_back({history[j].k, ExactRational(static_cast<long>(history[j].mu))});
	const std::uint64_t k_last = history.back().k;
	ExactRational last = prefix_sum * from_natural(k_last);
	terms.push_back({k_last, -last});
	return BeurlingCombination(std::move(terms));
}

BeurlingCombination closed_form_combination(std::span<const HistoryEntry> history)
{
	if (history.empty())
		throw std::invalid_argument("closed form needs at least k_1 and k_2");
	return closed_form_combination(history, reciprocal_sum(history.first(history.size() - 1)));
}

// ---------------------------------------------------------------------------

Generator::Generator(std::uint64_t limit, RunOptions options)
    : limit_(limit), options_(std::move(options))
{
	if (limit_ < 2)
		throw std::invalid_argument("limit must be >= 2");
	if (options_.spot_check_interval == 0)
		throw std::invalid_argument("spot check interval must be >= 1");
	if (options_.scan_cap && *options_.scan_cap == 0)
		throw std::invalid_argument("scan cap must be >= 1");
}

const History& Generator::history() const noexcept
{
	if (exact_)
		return exact_->history;
	if (float_)
		return float_->history;
	return history_;
}

const IterationState* Generator::exact_state() const noexcept
{
	return exact_ ? &*exact_ : nullptr;
}

const FloatIterationState* Generator::float_state() const noexcept
{
	return float_ ? &*float_ : nullptr;
}

std::uint64_t Generator::cap_for(std::uint64_t k) const
{
	return options_.scan_cap.value_or(k);
}

std::optional<GeneratedRecord> Generator::next()
{
	if (done_)
		return std::nullopt;
	const auto start = clock::now();
	auto record = advance();
	const std::chrono::duration<double> elapsed = clock::now() - start;
	if (!record) {
		done_ = true;
		return std::nullopt;
	}
	total_seconds_ += elapsed.count();
	record->t_seconds = elapsed.count();
	record->T_seconds = total_seconds_;
	++emitted_;
	return record;
}

std::optional<GeneratedRecord> Generator::advance()
{
	if (emitted_ == 0) {
		switch (options_.mode) {
		case GeneratorMode::exact: exact_ = init<ExactRational>(); break;
		case GeneratorMode::float_demo: float_ = init<double>(); break;
		case GeneratorMode::fast:
			history_ = {{1, 1}, {2, -1}};
			divisor_sums_.assign(limit_ + 1, 0);
			push_divisor_sums(1, 1);
			push_divisor_sums(2, -1);
			break;
		}
		return GeneratedRecord{1, 1, 1, 0, 0.0, 0.0};
	}
	if (emitted_ == 1)
		return GeneratedRecord{2, 2, -1, 1, 0.0, 0.0};

	switch (options_.mode) {
	case GeneratorMode::exact: return advance_exact();
	case GeneratorMode::float_demo: return advance_float();
	case GeneratorMode::fast: return advance_fast();
	}
	return std::nullopt;
}

std::optional<GeneratedRecord> Generator::advance_exact()
{
	const auto k_next = scan(*exact_, cap_for(exact_->k), limit_);
	if (!k_next)
		return std::nullopt;
	ExactRational delta;
	return step_in_place(*exact_, *k_next, delta);
}

std::optional<GeneratedRecord> Generator::advance_float()
{
	const auto k_next = scan(*float_, cap_for(float_->k), limit_);
	if (!k_next)
		return std::nullopt;
	return step_in_place(*float_, *k_next, last_float_delta_);
}

void Generator::push_divisor_sums(std::uint64_t k, std::int64_t mu)
{
	for (std::uint64_t m = k; m <= limit_; m += k)
		divisor_sums_[m] += static_cast<std::int32_t>(mu);
}

// Running sum of divisor_sums_ over (k_i, x] equals fast_delta(history, k_i, x):
// floor(x/d) - floor(k_i/d) counts the multiples of d in (k_i, x].
std::optional<GeneratedRecord> Generator::advance_fast()
{
	const std::uint64_t index = history_.size();
	const std::uint64_t k = history_.back().k;
	const std::uint64_t cap = cap_for(k);
	std::int64_t delta = 0;
	std::uint64_t x = k;
	for (std::uint64_t j = 1;; ++j) {
		x = k + j;
		if (x > limit_) {
			if (history_.size() >= 3)
				exact_spot_check(std::span<const HistoryEntry>(history_).first(history_.size() - 1),
				                 history_.back().k, history_.back().mu);
			return std::nullopt;
		}
		if (j >= cap)
			throw GeneratorError(GeneratorError::Kind::scan_cap_exceeded, index, k,
			                     "no discontinuity below k_i + " + std::to_string(cap));
		if (x >= 2 * k)
			throw GeneratorError(GeneratorError::Kind::fast_window, index, k,
			                     "probe " + std::to_string(x) + " outside [k_i, 2 k_i)");
		delta += divisor_sums_[x];
		if (delta != 0)
			break;
	}
	const std::int64_t mu = -delta;
	if (mu != 1 && mu != -1)
		throw GeneratorError(GeneratorError::Kind::non_unit_mu, index, k,
		                     "fast delta " + std::to_string(delta) + " at k_{i+1}=" +
		                         std::to_string(x));

	if ((index + 1) % options_.spot_check_interval == 0)
		exact_spot_check(history_, x, mu);

	history_.push_back({x, mu});
	push_divisor_sums(x, mu);
	return GeneratedRecord{index + 1, x, mu, x - k, 0.0, 0.0};
}

// Rebuilds b_i from its closed form, checks b_i(k_i), rescans exactly for
// k_{i+1}, then applies one step of the recursion and checks that the
// closed form is reproduced for b_{i+1}.
void Generator::exact_spot_check(std::span<const HistoryEntry> prefix, std::uint64_t k_next,
                                 std::int64_t mu_next)
{
	++spot_checks_;
	const std::size_t i = prefix.size();
	const std::uint64_t k = prefix.back().k;
	auto fail = [&](const std::string& what) {
		throw GeneratorError(GeneratorError::Kind::spot_check_failed, i, k, what);
	};

	if (checked_upto_ > i - 1) {
		checked_sum_ = 0;
		checked_upto_ = 0;
	}
	checked_sum_ += reciprocal_sum(prefix.subspan(checked_upto_, i - 1 - checked_upto_));
	checked_upto_ = i - 1;
	const ExactRational sum_before = checked_sum_;
	const ExactRational sum_through = sum_before + ExactRational(static_cast<long>(prefix.back().mu)) /
	                                                   from_natural(k);

	BeurlingCombination b = closed_form_combination(prefix, sum_before);
	const ExactRational b_at_k = b.evaluate(k);
	if ((ExactRational(1) + b_at_k) / from_natural(k) != sum_through)
		fail("cached b_i(k_i) inconsistent with sum mu_j / k_j");

	for (std::uint64_t x = k + 1; x <= k_next; ++x) {
		const ExactRational value = b.evaluate(x);
		if (value == b_at_k)
			continue;
		if (x != k_next)
			fail("exact scan finds discontinuity at " + std::to_string(x) + ", fast path at " +
			     std::to_string(k_next));
		if (value - b_at_k != mu_next)
			fail("exact mu " + to_string(ExactRational(value - b_at_k)) + " differs from fast mu " +
			     std::to_string(mu_next));
	}
	if (b.evaluate(k_next) == b_at_k)
		fail("exact scan finds no discontinuity at " + std::to_string(k_next));
	if (fast_delta(prefix, k, k_next) != -mu_next)
		fail("direct fast_delta disagrees with the divisor-sum accumulator");

	b.add_block(k, k_next, ExactRational(1) + b_at_k);
	History extended(prefix.begin(), prefix.end());
	extended.push_back({k_next, mu_next});
	if (!(b == closed_form_combination(extended, sum_through)))
		fail("recursion step does not reproduce the closed form of b_{i+1}");
}

std::vector<GeneratedRecord> run(std::uint64_t limit, const RunOptions& options)
{
	Generator gen(limit, options);
	std::vector<GeneratedRecord> out;
	while (auto record = gen.next())
		out.push_back(*record);
	return out;
}

} // namespace beurling
