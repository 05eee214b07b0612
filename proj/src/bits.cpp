#include "netent/bits.hpp"

#include <cstdio>

#include "netent/errors.hpp"

namespace netent {

double Bits::value() const {
  if (!finite_) throw NumericalError("value is -infinity");
  return value_;
}

std::string Bits::to_string() const {
  if (!finite_) return "-inf";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", value_);
  return buf;
}

}  // namespace netent
