#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <string>
#include <string_view>

namespace entrocausal {

using Rational = mpq_class;
using Integer = mpz_class;

// Accepts "p", "p/q" and decimal literals like "-0.125".
Rational parse_rational(std::string_view text);
std::string to_string(const Rational& value);

bool fits_int64(const Integer& value);
std::int64_t to_int64(const Integer& value);

}  // namespace entrocausal
