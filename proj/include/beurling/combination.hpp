#pragma once

/**
 * @file combination.hpp
 * @brief Finite linear combinations of dilated fractional parts.
 *
 * A BasicCombination<Scalar> represents
 *
 *     x  |->  sum_j  c_j * { x / k_j }
 *
 * with integer scales k_j >= 1 kept strictly increasing and coefficients
 * c_j of type Scalar. Two scalar types are supported:
 *
 *   - ExactRational: exact evaluation. Since {x/k} = x/k - floor(x/k), the
 *     value equals  x * (sum_j c_j / k_j) - sum_j c_j * floor(x / k_j).
 *     The slope sum_j c_j / k_j is maintained incrementally and integral
 *     coefficients that fit a machine word are summed in 128-bit integers.
 *     Nothing is rounded.
 *   - double: term-by-term evaluation in binary64, kept only to reproduce
 *     how a floating-point implementation of the same recursion behaves.
 *
 * Zero coefficients produced by merging are dropped, so two combinations
 * compare equal iff they represent the same function.
 */

#include "beurling/rational.hpp"

#include <algorithm>
#include <cstdint>
#include <limits>
#include <span>
#include <stdexcept>
#include <type_traits>
#include <utility>
#include <vector>

namespace beurling {

template <typename Scalar>
struct BeurlingTerm
{
	std::uint64_t scale = 1;
	Scalar coefficient{};

	friend bool operator==(const BeurlingTerm&, const BeurlingTerm&) = default;
};

namespace detail {

// Coefficients up to 2^40 in magnitude are summed in __int128; with
// floor(x/k) < 2^64 a single product stays below 2^104.
inline constexpr std::int64_t small_coefficient_bound = std::int64_t{1} << 40;

inline bool small_integer(const ExactRational& c, std::int64_t& out)
{
	if (!is_integral(c))
		return false;
	const auto& num = c.get_num();
	if (!num.fits_slong_p())
		return false;
	const long v = num.get_si();
	if (v > small_coefficient_bound || v < -small_coefficient_bound)
		return false;
	out = v;
	return true;
}

inline BigInteger from_int128(__int128 v)
{
	const bool negative = v < 0;
	unsigned __int128 mag = negative ? static_cast<unsigned __int128>(-(v + 1)) + 1u
	                                 : static_cast<unsigned __int128>(v);
	const std::uint64_t limbs[2] = {static_cast<std::uint64_t>(mag),
	                                static_cast<std::uint64_t>(mag >> 64)};
	BigInteger z;
	mpz_import(z.get_mpz_t(), 2, -1, sizeof(std::uint64_t), 0, 0, limbs);
	if (negative)
		z = -z;
	return z;
}

// sum_j c_j / k_j by pairwise splitting; one gcd at the end.
template <typename Term>
ExactRational sum_of_ratios(const std::vector<Term>& terms)
{
	if (terms.empty())
		return 0;
	struct Frac
	{
		BigInteger num, den;
	};
	std::vector<Frac> level;
	level.reserve(terms.size());
	for (const auto& t : terms)
		level.push_back({t.coefficient.get_num(), t.coefficient.get_den() * to_big(t.scale)});
	while (level.size() > 1) {
		std::vector<Frac> up;
		up.reserve((level.size() + 1) / 2);
		for (std::size_t j = 0; j + 1 < level.size(); j += 2)
			up.push_back({level[j].num * level[j + 1].den + level[j + 1].num * level[j].den,
			              level[j].den * level[j + 1].den});
		if (level.size() % 2 == 1)
			up.push_back(std::move(level.back()));
		level = std::move(up);
	}
	ExactRational out(level.front().num, level.front().den);
	out.canonicalize();
	return out;
}

// floor(x) for x >= 0, saturated to uint64 max (every scale is below it).
inline std::uint64_t natural_floor(const ExactRational& x)
{
	const BigInteger f = floor_of(x);
	if (mpz_sizeinbase(f.get_mpz_t(), 2) > 64)
		return std::numeric_limits<std::uint64_t>::max();
	std::uint64_t out = 0;
	mpz_export(&out, nullptr, -1, sizeof(out), 0, 0, f.get_mpz_t());
	return out;
}

} // namespace detail

template <typename Scalar>
class BasicCombination
{
public:
	using scalar_type = Scalar;
	using Term = BeurlingTerm<Scalar>;
	static constexpr bool is_exact = std::is_same_v<Scalar, ExactRational>;

	BasicCombination() = default;

	/// Builds a canonical combination: sorted by scale, merged, zeros dropped.
	explicit BasicCombination(std::vector<Term> terms)
	{
		std::stable_sort(terms.begin(), terms.end(),
		                 [](const Term& a, const Term& b) { return a.scale < b.scale; });
		for (auto& t : terms) {
			if (t.scale == 0)
				throw std::invalid_argument("combination scale must be >= 1");
			if (!terms_.empty() && terms_.back().scale == t.scale)
				terms_.back().coefficient += t.coefficient;
			else
				terms_.push_back(std::move(t));
			if (is_zero(terms_.back().coefficient))
				terms_.pop_back();
		}
		if constexpr (is_exact) {
			slope_ = detail::sum_of_ratios(terms_);
			small_.resize(terms_.size());
			small_ok_.resize(terms_.size());
			for (std::size_t j = 0; j < terms_.size(); ++j)
				small_ok_[j] = detail::small_integer(terms_[j].coefficient, small_[j]);
		} else {
			for (const auto& t : terms_)
				slope_ += t.coefficient / static_cast<double>(t.scale);
		}
	}

	std::span<const Term> terms() const noexcept { return terms_; }
	std::size_t size() const noexcept { return terms_.size(); }
	bool empty() const noexcept { return terms_.empty(); }

	/// Sum of coefficient / scale; the combination equals slope * x - (a step function).
	const Scalar& slope() const noexcept { return slope_; }

	/// Coefficient at the given scale, or nullptr when absent.
	const Scalar* coefficient_at(std::uint64_t scale) const
	{
		const auto it = find(scale);
		return (it != terms_.end() && it->scale == scale) ? &it->coefficient : nullptr;
	}

	/// Adds coefficient * {x / scale}, merging with an existing term of the same scale.
	void add_term(std::uint64_t scale, const Scalar& coefficient)
	{
		if (scale == 0)
			throw std::invalid_argument("combination scale must be >= 1");
		if (is_zero(coefficient))
			return;
		slope_ += coefficient / scalar_from<Scalar>(scale);
		merge_term(scale, coefficient);
	}

	/// Adds weight * ({x/lo} - (hi/lo) {x/hi}), i.e. weight * beta_{lo,hi}.
	void add_block(std::uint64_t lo, std::uint64_t hi, const Scalar& weight)
	{
		if (lo == 0 || lo >= hi)
			throw std::invalid_argument("block requires 0 < lo < hi");
		if (is_zero(weight))
			return;
		Scalar outer = weight * scalar_from<Scalar>(hi);
		outer /= scalar_from<Scalar>(lo);
		outer = -outer;
		// beta blocks have zero slope: w/lo - (w hi/lo)/hi = 0.
		merge_term(lo, weight);
		merge_term(hi, outer);
	}

	BasicCombination& operator+=(const BasicCombination& other)
	{
		for (const auto& t : other.terms_)
			add_term(t.scale, t.coefficient);
		return *this;
	}

	/// Value at x >= 0.
	Scalar evaluate(const Scalar& x) const
	{
		if (is_negative(x))
			throw std::domain_error("combination evaluated at negative x");
		if constexpr (is_exact) {
			Scalar out = slope_ * x;
			out -= floor_sum(detail::natural_floor(x));
			return out;
		} else {
			Scalar out = 0.0;
			for (const auto& t : terms_)
				out += t.coefficient * frac_part(x / static_cast<double>(t.scale));
			return out;
		}
	}

	/// Value at the natural number n.
	Scalar evaluate(std::uint64_t n) const
	{
		if constexpr (is_exact) {
			Scalar out = slope_ * from_natural(n);
			out -= floor_sum(n);
			return out;
		} else {
			// {n/k} = (n mod k)/k, one rounding per term.
			Scalar out = 0.0;
			for (const auto& t : terms_)
				out += t.coefficient * (static_cast<double>(n % t.scale) / static_cast<double>(t.scale));
			return out;
		}
	}

	friend bool operator==(const BasicCombination& a, const BasicCombination& b)
	{
		return a.terms_ == b.terms_;
	}

private:
	void merge_term(std::uint64_t scale, const Scalar& coefficient)
	{
		const auto it = find(scale);
		const auto pos = static_cast<std::size_t>(it - terms_.begin());
		if (it != terms_.end() && it->scale == scale) {
			it->coefficient += coefficient;
			if (is_zero(it->coefficient)) {
				terms_.erase(it);
				if constexpr (is_exact) {
					small_.erase(small_.begin() + static_cast<std::ptrdiff_t>(pos));
					small_ok_.erase(small_ok_.begin() + static_cast<std::ptrdiff_t>(pos));
				}
			} else if constexpr (is_exact) {
				small_ok_[pos] = detail::small_integer(it->coefficient, small_[pos]);
			}
			return;
		}
		terms_.insert(it, Term{scale, coefficient});
		if constexpr (is_exact) {
			std::int64_t v = 0;
			const bool ok = detail::small_integer(coefficient, v);
			small_.insert(small_.begin() + static_cast<std::ptrdiff_t>(pos), v);
			small_ok_.insert(small_ok_.begin() + static_cast<std::ptrdiff_t>(pos), ok);
		}
	}

	auto find(std::uint64_t scale)
	{
		if (!terms_.empty() && terms_.back().scale < scale)
			return terms_.end();
		return std::lower_bound(terms_.begin(), terms_.end(), scale,
		                        [](const Term& t, std::uint64_t s) { return t.scale < s; });
	}

	auto find(std::uint64_t scale) const
	{
		return std::lower_bound(terms_.begin(), terms_.end(), scale,
		                        [](const Term& t, std::uint64_t s) { return t.scale < s; });
	}

	// sum_j c_j * floor(n / k_j); only terms with k_j <= n contribute.
	ExactRational floor_sum(std::uint64_t n) const
		requires is_exact
	{
		__int128 acc = 0;
		ExactRational big_part = 0;
		const std::size_t count = terms_.size();
		for (std::size_t j = 0; j < count; ++j) {
			const std::uint64_t k = terms_[j].scale;
			if (k > n)
				break;
			const std::uint64_t q = n / k;
			if (small_ok_[j])
				acc += static_cast<__int128>(small_[j]) * static_cast<__int128>(q);
			else
				big_part += terms_[j].coefficient * from_natural(q);
		}
		if (acc != 0)
			big_part += ExactRational(detail::from_int128(acc));
		return big_part;
	}

	std::vector<Term> terms_;
	Scalar slope_{};
	// Exact only: machine-word copies of integral coefficients.
	std::vector<std::int64_t> small_;
	std::vector<bool> small_ok_;
};

using BeurlingCombination = BasicCombination<ExactRational>;
using FloatCombination = BasicCombination<double>;

template <typename Scalar>
Scalar evaluate(const BasicCombination<Scalar>& c, const Scalar& x)
{
	return c.evaluate(x);
}

template <typename Scalar>
BasicCombination<Scalar> operator+(BasicCombination<Scalar> a, const BasicCombination<Scalar>& b)
{
	a += b;
	return a;
}

/// c + weight * beta_{lo,hi}, as a new combination.
template <typename Scalar>
BasicCombination<Scalar> add_block(BasicCombination<Scalar> c, std::uint64_t lo, std::uint64_t hi,
                                   const Scalar& weight)
{
	c.add_block(lo, hi, weight);
	return c;
}

/// beta_{a,b}(x) = {x/a} - (b/a) {x/b}, evaluated term by term.
template <typename Scalar>
Scalar beta_eval(std::uint64_t a, std::uint64_t b, const Scalar& x)
{
	if (a == 0 || a >= b)
		throw std::invalid_argument("beta_eval requires 0 < a < b");
	if (is_negative(x))
		throw std::domain_error("beta_eval requires x >= 0");
	const Scalar sa = scalar_from<Scalar>(a);
	const Scalar sb = scalar_from<Scalar>(b);
	Scalar out = frac_part(Scalar(x / sa));
	out -= (sb / sa) * frac_part(Scalar(x / sb));
	return out;
}

} // namespace beurling
