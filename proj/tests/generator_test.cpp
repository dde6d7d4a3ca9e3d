#include "beurling/generator.hpp"
#include "beurling/sieve.hpp"

#include "oracles.hpp"

#include <gtest/gtest.h>

#include <random>

using namespace beurling;
using beurling::testing::brute_mu;
using beurling::testing::naive_eval;
using beurling::testing::rat;

namespace {

IterationState advance(IterationState s, int steps)
{
	for (int n = 0; n < steps; ++n)
		s = step(std::move(s)).state;
	return s;
}

std::vector<HistoryEntry> brute_square_free(std::uint64_t limit)
{
	std::vector<HistoryEntry> out;
	for (std::uint64_t n = 1; n <= limit; ++n)
		if (const int m = brute_mu(n); m != 0)
			out.push_back({n, m});
	return out;
}

} // namespace

TEST(Init, SeedState)
{
	const IterationState s = init<ExactRational>();
	EXPECT_EQ(s.index, 2u);
	EXPECT_EQ(s.k, 2u);
	EXPECT_EQ(s.b, BeurlingCombination({{1, rat(1)}, {2, rat(-2)}}));
	EXPECT_EQ(s.b_at_k, 0);
	EXPECT_EQ(s.history, (History{{1, 1}, {2, -1}}));
	// {1} - 2{1/2}
	EXPECT_EQ(s.b.evaluate(std::uint64_t{1}), -1);
	EXPECT_EQ(naive_eval(s.b, rat(1)), -1);
}

TEST(NextDiscontinuity, FirstSteps)
{
	const IterationState s2 = init<ExactRational>();
	EXPECT_EQ(next_discontinuity(s2, s2.k), 3u);

	const IterationState s3 = advance(s2, 1);
	ASSERT_EQ(s3.k, 3u);
	// b_3(4) = b_3(3) = -1/2, b_3(5) = -3/2
	EXPECT_EQ(naive_eval(s3.b, rat(3)), rat(-1, 2));
	EXPECT_EQ(naive_eval(s3.b, rat(4)), rat(-1, 2));
	EXPECT_EQ(naive_eval(s3.b, rat(5)), rat(-3, 2));
	EXPECT_EQ(next_discontinuity(s3, s3.k), 5u);

	const IterationState s4 = advance(s3, 1);
	ASSERT_EQ(s4.k, 5u);
	EXPECT_EQ(next_discontinuity(s4, s4.k), 6u);
}

TEST(NextDiscontinuity, ScanCap)
{
	const IterationState s3 = advance(init<ExactRational>(), 1);
	// k_4 = 5 needs j = 2; a cap of 2 stops before probing it
	try {
		next_discontinuity(s3, 2);
		FAIL() << "expected scan_cap_exceeded";
	} catch (const GeneratorError& e) {
		EXPECT_EQ(e.kind(), GeneratorError::Kind::scan_cap_exceeded);
		EXPECT_EQ(e.index(), 3u);
		EXPECT_EQ(e.k(), 3u);
	}
	EXPECT_EQ(next_discontinuity(s3, 3), 5u);
	EXPECT_THROW(next_discontinuity(s3, 0), std::invalid_argument);
}

TEST(Step, FirstRecords)
{
	auto o3 = step(init<ExactRational>());
	EXPECT_EQ(o3.record.index, 3u);
	EXPECT_EQ(o3.record.k, 3u);
	EXPECT_EQ(o3.record.mu, -1);
	EXPECT_EQ(o3.record.gap, 1u);
	EXPECT_EQ(o3.delta, -1);
	EXPECT_EQ(o3.state.b, BeurlingCombination({{1, rat(1)}, {2, rat(-1)}, {3, rat(-3, 2)}}));
	EXPECT_EQ(o3.state.b_at_k, rat(-1, 2));

	auto o4 = step(std::move(o3.state));
	EXPECT_EQ(o4.record.index, 4u);
	EXPECT_EQ(o4.record.k, 5u);
	EXPECT_EQ(o4.record.mu, -1);
	// -3/2 - (-1/2)
	EXPECT_EQ(o4.delta, -1);

	auto o5 = step(std::move(o4.state));
	EXPECT_EQ(o5.record.index, 5u);
	EXPECT_EQ(o5.record.k, 6u);
	EXPECT_EQ(o5.record.mu, 1);
}

TEST(Step, NonUnitDeltaIsReported)
{
	IterationState s = advance(init<ExactRational>(), 2);
	// A corrupted cache shifts every delta by 1/3.
	s.b_at_k += rat(1, 3);
	const auto before = s.b;
	try {
		step(s);
		FAIL() << "expected non_unit_mu";
	} catch (const GeneratorError& e) {
		EXPECT_EQ(e.kind(), GeneratorError::Kind::non_unit_mu);
		EXPECT_EQ(e.index(), 4u);
	}
	EXPECT_EQ(s.b, before);
}

TEST(Step, CachedValueTracksCombination)
{
	IterationState s = init<ExactRational>();
	for (int n = 0; n < 300; ++n) {
		s = step(std::move(s)).state;
		ASSERT_EQ(s.b_at_k, s.b.evaluate(s.k));
		ASSERT_EQ(s.b_at_k, naive_eval(s.b, ExactRational(static_cast<unsigned long>(s.k))));
		ASSERT_LT(s.history[s.history.size() - 2].k, s.k);
	}
}

TEST(BStructure, ValueMinusOneAtPreviousPoint)
{
	IterationState s = init<ExactRational>();
	for (int n = 0; n < 1500; ++n) {
		const std::uint64_t k_prev = s.k;
		s = step(std::move(s)).state;
		ASSERT_EQ(s.b.evaluate(k_prev), -1) << "i=" << s.index;
	}
}

TEST(BStructure, MinusOneBelowCurrentPoint)
{
	std::mt19937_64 rng(21);
	IterationState s = advance(init<ExactRational>(), 1);
	for (int n = 0; n < 800; ++n) {
		std::uniform_int_distribution<std::uint64_t> pick(1, s.k - 1);
		for (int probe = 0; probe < 8; ++probe) {
			const std::uint64_t m = pick(rng);
			ASSERT_EQ(s.b.evaluate(m), -1) << "i=" << s.index << " x=" << m;
			ASSERT_EQ(s.b.evaluate(ExactRational(static_cast<unsigned long>(m)) + rat(1, 2)), -1)
			    << "i=" << s.index << " x=" << m << "+1/2";
		}
		s = step(std::move(s)).state;
	}
}

TEST(FastDelta, Examples)
{
	const History h1{{1, 1}};
	EXPECT_EQ(fast_delta(h1, 2, 3), 1);
	const History h3{{1, 1}, {2, -1}, {3, -1}};
	EXPECT_EQ(fast_delta(h3, 3, 4), 0);
	EXPECT_EQ(fast_delta(h3, 3, 5), 1);
	EXPECT_THROW(fast_delta(h3, 3, 6), std::out_of_range);
	EXPECT_THROW(fast_delta(h3, 3, 2), std::out_of_range);
}

// On [k_i, 2k_i) the integer shortcut equals b_i(k_i) - b_i(x) for the exact state.
TEST(FastDelta, AgreesWithExactCombination)
{
	IterationState s = init<ExactRational>();
	for (int n = 0; n < 400; ++n) {
		for (std::uint64_t x = s.k; x < 2 * s.k && x < s.k + 6; ++x)
			ASSERT_EQ(ExactRational(fast_delta(s.history, s.k, x)), s.b_at_k - s.b.evaluate(x));
		s = step(std::move(s)).state;
	}
}

TEST(ClosedForm, MatchesRecursion)
{
	IterationState s = init<ExactRational>();
	for (int n = 0; n < 200; ++n) {
		ASSERT_EQ(closed_form_combination(s.history), s.b) << "i=" << s.index;
		s = step(std::move(s)).state;
	}
}

TEST(Run, ExactToTen)
{
	const auto records = run(10, {GeneratorMode::exact});
	std::vector<std::uint64_t> ks;
	std::vector<std::int64_t> mus;
	for (const auto& r : records) {
		ks.push_back(r.k);
		mus.push_back(r.mu);
	}
	EXPECT_EQ(ks, (std::vector<std::uint64_t>{1, 2, 3, 5, 6, 7, 10}));
	EXPECT_EQ(mus, (std::vector<std::int64_t>{1, -1, -1, -1, 1, -1, 1}));
	EXPECT_EQ(records.front().gap, 0u);
	EXPECT_EQ(records.back().gap, 3u);
}

TEST(Run, LimitTwoEmitsSeeds)
{
	for (const auto mode : {GeneratorMode::exact, GeneratorMode::fast, GeneratorMode::float_demo}) {
		const auto records = run(2, {mode});
		ASSERT_EQ(records.size(), 2u);
		EXPECT_EQ(records[0].k, 1u);
		EXPECT_EQ(records[0].mu, 1);
		EXPECT_EQ(records[1].k, 2u);
		EXPECT_EQ(records[1].mu, -1);
	}
	EXPECT_THROW(Generator(1, {}), std::invalid_argument);
	EXPECT_THROW(Generator(10, RunOptions{GeneratorMode::fast, std::nullopt, 0}), std::invalid_argument);
}

TEST(Run, FastEqualsExact)
{
	for (const std::uint64_t limit : {10u, 97u, 1000u, 3000u}) {
		const auto exact = run(limit, {GeneratorMode::exact});
		const auto fast = run(limit, {GeneratorMode::fast, std::nullopt, 7});
		ASSERT_EQ(exact.size(), fast.size()) << limit;
		for (std::size_t j = 0; j < exact.size(); ++j) {
			ASSERT_EQ(exact[j].index, fast[j].index);
			ASSERT_EQ(exact[j].k, fast[j].k);
			ASSERT_EQ(exact[j].mu, fast[j].mu);
			ASSERT_EQ(exact[j].gap, fast[j].gap);
		}
	}
}

TEST(Run, MatchesBruteForceSquareFree)
{
	const auto expected = brute_square_free(2000);
	const auto records = run(2000, {GeneratorMode::exact});
	ASSERT_EQ(records.size(), expected.size());
	for (std::size_t j = 0; j < records.size(); ++j) {
		ASSERT_EQ(records[j].index, j + 1);
		ASSERT_EQ(records[j].k, expected[j].k);
		ASSERT_EQ(records[j].mu, expected[j].mu);
	}
}

TEST(Run, FastSpotChecksRun)
{
	Generator gen(5000, RunOptions{GeneratorMode::fast, std::nullopt, 100});
	std::size_t n = 0;
	while (gen.next())
		++n;
	EXPECT_EQ(n, MobiusSieve(5000).square_free_numbers().size());
	// every 100th index plus the final step
	EXPECT_EQ(gen.spot_checks(), n / 100 + 1);
}

TEST(Run, TimingsAccumulate)
{
	Generator gen(500, {GeneratorMode::exact});
	double total = 0.0;
	while (auto r = gen.next()) {
		ASSERT_GE(r->t_seconds, 0.0);
		total += r->t_seconds;
		ASSERT_DOUBLE_EQ(r->T_seconds, total);
	}
}

TEST(Run, Deterministic)
{
	for (const auto mode : {GeneratorMode::exact, GeneratorMode::fast, GeneratorMode::float_demo}) {
		const auto a = run(1500, {mode});
		const auto b = run(1500, {mode});
		ASSERT_EQ(a.size(), b.size());
		for (std::size_t j = 0; j < a.size(); ++j) {
			ASSERT_EQ(a[j].index, b[j].index);
			ASSERT_EQ(a[j].k, b[j].k);
			ASSERT_EQ(a[j].mu, b[j].mu);
			ASSERT_EQ(a[j].gap, b[j].gap);
		}
	}
}

TEST(Run, ScanCapAbortsExactAndFast)
{
	for (const auto mode : {GeneratorMode::exact, GeneratorMode::fast}) {
		Generator gen(100, RunOptions{mode, std::uint64_t{2}, 1000});
		try {
			while (gen.next()) {
			}
			FAIL() << "expected abort";
		} catch (const GeneratorError& e) {
			EXPECT_EQ(e.kind(), GeneratorError::Kind::scan_cap_exceeded);
			// k_3 = 3 -> k_4 = 5 is the first gap of 2
			EXPECT_EQ(e.k(), 3u);
		}
	}
}

TEST(FloatMode, ProducesWellFormedRecords)
{
	Generator gen(3000, {GeneratorMode::float_demo});
	std::uint64_t prev = 0;
	while (auto r = gen.next()) {
		ASSERT_GT(r->k, prev);
		ASSERT_EQ(r->gap, r->k - prev == r->k ? 0 : r->k - prev);
		prev = r->k;
	}
	ASSERT_NE(gen.float_state(), nullptr);
	EXPECT_EQ(gen.exact_state(), nullptr);
}

TEST(Mode, ParseAndPrint)
{
	EXPECT_EQ(parse_mode("exact"), GeneratorMode::exact);
	EXPECT_EQ(parse_mode("fast"), GeneratorMode::fast);
	EXPECT_EQ(parse_mode("float"), GeneratorMode::float_demo);
	EXPECT_EQ(parse_mode("float-demo"), GeneratorMode::float_demo);
	EXPECT_THROW(parse_mode("approximate"), std::invalid_argument);
	EXPECT_EQ(to_string(GeneratorMode::fast), "fast");
}
