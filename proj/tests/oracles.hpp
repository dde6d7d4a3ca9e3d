#pragma once

// Test-only reference computations. None of these call into the library's
// evaluation paths: mu comes from trial division, combinations are summed
// term by term with an explicit fractional part.

#include "beurling/combination.hpp"

#include <cstdint>
#include <random>
#include <vector>

namespace beurling::testing {

/// mu(n) by trial-division factorization.
inline int brute_mu(std::uint64_t n)
{
	int sign = 1;
	for (std::uint64_t p = 2; p * p <= n; ++p) {
		if (n % p != 0)
			continue;
		n /= p;
		if (n % p == 0)
			return 0;
		sign = -sign;
	}
	if (n > 1)
		sign = -sign;
	return sign;
}

/// {q} computed as q - floor(q) with mpz division.
inline ExactRational naive_frac(const ExactRational& q)
{
	BigInteger fl;
	mpz_fdiv_q(fl.get_mpz_t(), q.get_num_mpz_t(), q.get_den_mpz_t());
	ExactRational out = q - ExactRational(fl);
	return out;
}

/// sum_j c_j {x / k_j}, term by term.
inline ExactRational naive_eval(const BeurlingCombination& c, const ExactRational& x)
{
	ExactRational sum = 0;
	for (const auto& t : c.terms()) {
		ExactRational q = x / ExactRational(static_cast<unsigned long>(t.scale));
		sum += t.coefficient * naive_frac(q);
	}
	return sum;
}

inline ExactRational rat(long num, long den = 1)
{
	ExactRational r(num, den);
	r.canonicalize();
	return r;
}

/// Uniform rational p/q with 0 <= p/q < hi (hi > 0) and q in [1, max_den].
inline ExactRational random_rational_below(std::mt19937_64& rng, const ExactRational& hi,
                                           unsigned long max_den = 97)
{
	std::uniform_int_distribution<unsigned long> den_dist(1, max_den);
	const unsigned long q = den_dist(rng);
	// largest p with p/q < hi
	ExactRational bound = hi * ExactRational(q);
	BigInteger ceil_bound;
	mpz_cdiv_q(ceil_bound.get_mpz_t(), bound.get_num_mpz_t(), bound.get_den_mpz_t());
	const unsigned long p_max = ceil_bound.get_ui() - 1;
	std::uniform_int_distribution<unsigned long> num_dist(0, p_max);
	return rat(static_cast<long>(num_dist(rng)), static_cast<long>(q));
}

} // namespace beurling::testing
