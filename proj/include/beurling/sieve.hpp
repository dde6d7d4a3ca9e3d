#pragma once

/**
 * @file sieve.hpp
 * @brief Ground truth for mu(n), independent of the generator.
 */

#include "beurling/combination.hpp"

#include <cstdint>
#include <span>
#include <vector>

namespace beurling {

/// Immutable table of mu(n), 1 <= n <= limit, built by a linear sieve.
class MobiusSieve
{
public:
	explicit MobiusSieve(std::uint64_t limit);

	std::uint64_t limit() const noexcept { return limit_; }

	/// mu(n); throws std::out_of_range outside [1, limit].
	int mu(std::uint64_t n) const;
	/// Smallest prime factor of n (n itself for primes, 1 for n = 1).
	std::uint64_t smallest_prime_factor(std::uint64_t n) const;
	/// Least p with p^2 | n, or 0 when n is square-free.
	std::uint64_t square_divisor_base(std::uint64_t n) const;

	std::span<const std::int8_t> table() const noexcept { return mu_; }
	std::vector<std::uint64_t> square_free_numbers() const;

private:
	void check(std::uint64_t n) const;

	std::uint64_t limit_;
	std::vector<std::int8_t> mu_;            // index 0 unused
	std::vector<std::uint32_t> least_prime_; // index 0 unused
};

inline MobiusSieve sieve_mobius(std::uint64_t limit) { return MobiusSieve(limit); }

bool is_square_free(std::uint64_t n, const MobiusSieve& sieve);

/// g(t) = sum_{k <= t} mu(k) / k, exactly.
ExactRational mertens_g(std::uint64_t t, const MobiusSieve& sieve);

enum class ApproximantKind { S, B, V };

/**
 * Arithmetical counterparts (variable y = 1/x) of the classical approximants:
 *   S_n = sum_{k<=n} mu(k) {y/k}
 *   B_n = sum_{k<n} mu(k) {y/k} - n g(n-1) {y/n}
 *   V_n = S_n - g(n) {y}
 */
BeurlingCombination classical_approximant(ApproximantKind kind, std::uint64_t n,
                                          const MobiusSieve& sieve);

} // namespace beurling
