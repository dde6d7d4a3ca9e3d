#pragma once

/**
 * @file rational.hpp
 * @brief Exact rational scalar used by every definitional evaluation.
 *
 * ExactRational is GMP's mpq_class. GMP keeps values canonical (lowest
 * terms, positive denominator) after every arithmetic operation, so no
 * operation in this library ever rounds.
 *
 * The helpers below are free functions overloaded on the scalar type so
 * that templated code can be written once for ExactRational and double.
 */

#include <gmpxx.h>

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>

namespace beurling {

using ExactRational = mpq_class;
using BigInteger = mpz_class;

inline ExactRational make_rational(std::int64_t num, std::int64_t den = 1)
{
	if (den == 0)
		throw std::domain_error("rational with zero denominator");
	ExactRational r(BigInteger(static_cast<long>(num)), BigInteger(static_cast<long>(den)));
	r.canonicalize();
	return r;
}

inline BigInteger to_big(std::uint64_t value)
{
	BigInteger z;
	mpz_import(z.get_mpz_t(), 1, 1, sizeof(value), 0, 0, &value);
	return z;
}

inline ExactRational from_natural(std::uint64_t value) { return ExactRational(to_big(value)); }

/// Largest integer not greater than x.
inline BigInteger floor_of(const ExactRational& x)
{
	BigInteger q;
	mpz_fdiv_q(q.get_mpz_t(), x.get_num_mpz_t(), x.get_den_mpz_t());
	return q;
}

inline double floor_of(double x) { return std::floor(x); }

/// {x} = x - floor(x); always in [0, 1), defined for negative x too.
inline ExactRational frac_part(const ExactRational& x)
{
	BigInteger r;
	mpz_fdiv_r(r.get_mpz_t(), x.get_num_mpz_t(), x.get_den_mpz_t());
	ExactRational out(r, x.get_den());
	out.canonicalize();
	return out;
}

inline double frac_part(double x) { return x - std::floor(x); }

inline bool is_integral(const ExactRational& x) { return x.get_den() == 1; }

inline bool is_negative(const ExactRational& x) { return sgn(x) < 0; }
inline bool is_negative(double x) { return x < 0.0; }

inline bool is_zero(const ExactRational& x) { return sgn(x) == 0; }
inline bool is_zero(double x) { return x == 0.0; }

/// "p/q" or "p" in base 10.
inline std::string to_string(const ExactRational& x) { return x.get_str(10); }

/// Parses "p/q" or "p"; throws std::invalid_argument on malformed text.
inline ExactRational parse_rational(const std::string& text)
{
	ExactRational r;
	if (text.empty() || r.set_str(text, 10) != 0 || r.get_den() == 0)
		throw std::invalid_argument("malformed rational: '" + text + "'");
	r.canonicalize();
	return r;
}

/// Scalar conversion used when a templated routine needs an integer scale as Scalar.
template <typename Scalar>
Scalar scalar_from(std::uint64_t value);

template <>
inline ExactRational scalar_from<ExactRational>(std::uint64_t value)
{
	return from_natural(value);
}

template <>
inline double scalar_from<double>(std::uint64_t value)
{
	return static_cast<double>(value);
}

} // namespace beurling
