#pragma once

#include <string>

namespace netent {

// A base-2 logarithmic quantity that is either a finite real or -infinity.
// The -infinity case is an explicit state rather than a floating -inf, so it
// cannot silently leak through arithmetic.
class Bits {
 public:
  constexpr Bits() = default;
  constexpr explicit Bits(double value) : value_(value) {}

  static constexpr Bits minus_infinity() {
    Bits b;
    b.finite_ = false;
    return b;
  }

  constexpr bool is_finite() const { return finite_; }
  constexpr bool is_minus_infinity() const { return !finite_; }

  // Throws NumericalError when -infinity.
  double value() const;
  constexpr double value_or(double fallback) const { return finite_ ? value_ : fallback; }

  // Finite values print with 17 significant digits; -infinity prints "-inf".
  std::string to_string() const;

  friend constexpr bool operator==(const Bits&, const Bits&) = default;

 private:
  double value_ = 0.0;
  bool finite_ = true;
};

// Entropies are reported in bits; differential entropy may be -infinity.
using EntropyValue = Bits;

}  // namespace netent
