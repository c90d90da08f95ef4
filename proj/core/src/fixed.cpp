#include "valid/fixed.hpp"

#include <cmath>
#include <sstream>

#include "valid/errors.hpp"

namespace valid {

void check_fixed_range(__int128 raw) {
  if (raw > Fixed::kMaxRaw || raw < -static_cast<__int128>(Fixed::kMaxRaw)) {
    throw OverflowError("fixed-point overflow");
  }
}

int64_t round_shift_half_even(__int128 value, int shift) {
  if (shift == 0) {
    check_fixed_range(value);
    return static_cast<int64_t>(value);
  }
  const __int128 one = 1;
  const __int128 mask = (one << shift) - 1;
  const __int128 half = one << (shift - 1);
  // Arithmetic shift floors toward -inf; the remainder is then in [0, 2^shift).
  __int128 quotient = value >> shift;
  const __int128 remainder = value & mask;
  if (remainder > half || (remainder == half && (quotient & 1) != 0)) {
    ++quotient;
  }
  check_fixed_range(quotient);
  return static_cast<int64_t>(quotient);
}

int64_t fixed_mul_raw(int64_t a, int64_t b) {
  return round_shift_half_even(static_cast<__int128>(a) * b, Fixed::kFracBits);
}

Fixed Fixed::from_raw(int64_t raw) {
  check_fixed_range(raw);
  return Fixed(raw);
}

Fixed Fixed::from_double(double value) {
  if (!std::isfinite(value)) {
    throw OverflowError("non-finite value cannot be converted to fixed-point");
  }
  const double scaled = std::ldexp(value, kFracBits);
  if (std::fabs(scaled) > static_cast<double>(kMaxRaw)) {
    throw OverflowError("fixed-point overflow converting " + std::to_string(value));
  }
  // nearbyint honours the default round-to-nearest-even mode.
  return Fixed(static_cast<int64_t>(std::nearbyint(scaled)));
}

double Fixed::to_double() const { return std::ldexp(static_cast<double>(raw_), -kFracBits); }

Fixed Fixed::operator-() const { return from_raw(-raw_); }

Fixed Fixed::operator+(Fixed other) const {
  const __int128 sum = static_cast<__int128>(raw_) + other.raw_;
  check_fixed_range(sum);
  return Fixed(static_cast<int64_t>(sum));
}

Fixed Fixed::operator-(Fixed other) const {
  const __int128 diff = static_cast<__int128>(raw_) - other.raw_;
  check_fixed_range(diff);
  return Fixed(static_cast<int64_t>(diff));
}

Fixed Fixed::operator*(Fixed other) const { return Fixed(fixed_mul_raw(raw_, other.raw_)); }

std::string to_string(Fixed value) {
  std::ostringstream out;
  out.precision(17);
  out << value.to_double();
  return out.str();
}

}  // namespace valid
