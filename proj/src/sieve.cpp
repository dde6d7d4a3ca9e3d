#include "beurling/sieve.hpp"

#include <limits>
#include <stdexcept>
#include <string>

namespace beurling {

MobiusSieve::MobiusSieve(std::uint64_t limit) : limit_(limit)
{
	if (limit_ < 1)
		throw std::invalid_argument("sieve limit must be >= 1");
	if (limit_ >= std::numeric_limits<std::uint32_t>::max())
		throw std::length_error("sieve limit " + std::to_string(limit_) + " is too large");

	mu_.assign(limit_ + 1, 0);
	least_prime_.assign(limit_ + 1, 0);
	std::vector<std::uint32_t> primes;
	mu_[1] = 1;
	least_prime_[1] = 1;
	for (std::uint64_t n = 2; n <= limit_; ++n) {
		if (least_prime_[n] == 0) {
			least_prime_[n] = static_cast<std::uint32_t>(n);
			mu_[n] = -1;
			primes.push_back(static_cast<std::uint32_t>(n));
		}
		for (const std::uint32_t p : primes) {
			const std::uint64_t m = n * p;
			if (p > least_prime_[n] || m > limit_)
				break;
			least_prime_[m] = p;
			mu_[m] = (p == least_prime_[n]) ? std::int8_t{0} : static_cast<std::int8_t>(-mu_[n]);
		}
	}
}

void MobiusSieve::check(std::uint64_t n) const
{
	if (n < 1 || n > limit_)
		throw std::out_of_range("n=" + std::to_string(n) + " outside sieve range [1, " +
		                        std::to_string(limit_) + "]");
}

int MobiusSieve::mu(std::uint64_t n) const
{
	check(n);
	return mu_[n];
}

std::uint64_t MobiusSieve::smallest_prime_factor(std::uint64_t n) const
{
	check(n);
	return least_prime_[n];
}

std::uint64_t MobiusSieve::square_divisor_base(std::uint64_t n) const
{
	check(n);
	while (n > 1) {
		const std::uint64_t p = least_prime_[n];
		n /= p;
		if (n % p == 0)
			return p;
	}
	return 0;
}

std::vector<std::uint64_t> MobiusSieve::square_free_numbers() const
{
	std::vector<std::uint64_t> out;
	for (std::uint64_t n = 1; n <= limit_; ++n)
		if (mu_[n] != 0)
			out.push_back(n);
	return out;
}

bool is_square_free(std::uint64_t n, const MobiusSieve& sieve)
{
	return sieve.mu(n) != 0;
}

ExactRational mertens_g(std::uint64_t t, const MobiusSieve& sieve)
{
	if (t > sieve.limit())
		throw std::out_of_range("g(t) requested beyond the sieve limit");
	std::vector<BeurlingTerm<ExactRational>> terms;
	for (std::uint64_t k = 1; k <= t; ++k)
		if (const int m = sieve.mu(k); m != 0)
			terms.push_back({k, ExactRational(m)});
	return detail::sum_of_ratios(terms);
}

BeurlingCombination classical_approximant(ApproximantKind kind, std::uint64_t n,
                                          const MobiusSieve& sieve)
{
	if (n < 1 || n > sieve.limit())
		throw std::out_of_range("approximant order outside sieve range");
	std::vector<BeurlingTerm<ExactRational>> terms;
	const std::uint64_t last = kind == ApproximantKind::B ? n - 1 : n;
	for (std::uint64_t k = 1; k <= last; ++k)
		terms.push_back({k, ExactRational(sieve.mu(k))});
	switch (kind) {
	case ApproximantKind::S: break;
	case ApproximantKind::B: terms.push_back({n, -mertens_g(n - 1, sieve) * from_natural(n)}); break;
	case ApproximantKind::V: terms.push_back({1, -mertens_g(n, sieve)}); break;
	default: throw std::invalid_argument("unknown approximant kind");
	}
	return BeurlingCombination(std::move(terms));
}

} // namespace beurling
