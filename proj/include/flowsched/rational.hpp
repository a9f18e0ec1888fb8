#pragma once

#include <gmpxx.h>

#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

namespace flowsched {

/// Exact rational number. All instants, work amounts and alpha use this type.
using Rational = mpq_class;
using Integer = mpz_class;

/// Instants and lengths on the time axis. Kept as aliases: the arithmetic
/// between them is mixed everywhere (t + work / rate) and a wrapper would only
/// add casts.
using TimePoint = Rational;
using Duration = Rational;

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

Rational make_rational(long num, long den = 1);

/// Parses "num/den" or a plain integer. Decimal points are rejected.
Rational parse_rational(std::string_view text);

/// Canonical "num/den" form, e.g. "8/1" and "-3/4".
std::string to_string(const Rational& value);

double to_double(const Rational& value);

Integer floor_of(const Rational& value);
Integer ceil_of(const Rational& value);

/// A rational extended with +infinity, for minima over possibly empty sets.
class ExtendedRational {
 public:
  ExtendedRational() = default;  // +infinity
  ExtendedRational(Rational value) : value_(std::move(value)) {}  // NOLINT

  bool is_infinite() const { return !value_.has_value(); }
  const Rational& value() const;

  friend bool operator<(const ExtendedRational& a, const ExtendedRational& b);
  friend bool operator<=(const ExtendedRational& a, const ExtendedRational& b) { return !(b < a); }
  friend bool operator==(const ExtendedRational& a, const ExtendedRational& b);

 private:
  std::optional<Rational> value_;
};

}  // namespace flowsched
