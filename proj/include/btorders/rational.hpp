#pragma once

#include <gmpxx.h>

#include <limits>
#include <optional>
#include <string>

namespace bto {

using Integer = mpz_class;
using Rational = mpq_class;

// Valuation of 0. Kept far from the long range so that sums of two
// valuations never overflow.
inline constexpr long kValInf = std::numeric_limits<long>::max() / 4;

inline bool is_inf(long v) { return v >= kValInf; }

long padic_valuation(const Integer& n, const Integer& p);
long padic_valuation(const Rational& x, const Integer& p);

// Canonical representative of x modulo p^k in [0, p^k), for x with
// denominator coprime to p.
Integer mod_pk(const Rational& x, const Integer& p, long k);

// x = p^v * u with u a p-adic unit; returns u. x != 0.
Rational unit_part(const Rational& x, const Integer& p);

// Square in the completion at p: even valuation and unit part a square
// (odd p: quadratic residue; p = 2: unit part congruent to 1 mod 8).
bool is_padic_square(const Rational& x, const Integer& p);

// Exact rational square root when one exists.
std::optional<Rational> exact_sqrt(const Rational& x);

Rational rational_pow(const Rational& base, long e);

// "n" or "n/d" with canonical sign (d > 0).
std::string rational_to_string(const Rational& x);
Rational rational_from_string(const std::string& s);

} // namespace bto
