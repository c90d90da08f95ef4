#pragma once

#include <compare>
#include <cstdint>
#include <string>

namespace valid {

/// Signed binary fixed-point number, value = raw / 2^kFracBits.
///
/// Addition and subtraction are exact. Products are rounded to the nearest
/// representable value with ties to even, so every operation is a pure
/// function of the operand bits. Any result whose raw magnitude exceeds
/// kMaxRaw throws OverflowError; nothing wraps around.
class Fixed {
 public:
  static constexpr int kFracBits = 32;
  static constexpr int64_t kOneRaw = int64_t{1} << kFracBits;
  static constexpr int64_t kMaxRaw = int64_t{1} << 62;

  constexpr Fixed() = default;

  static Fixed from_raw(int64_t raw);
  /// Nearest representable value, ties to even.
  static Fixed from_double(double value);
  static constexpr Fixed ulp() { return Fixed(1); }
  static constexpr Fixed one() { return Fixed(kOneRaw); }

  constexpr int64_t raw() const { return raw_; }
  double to_double() const;

  Fixed operator-() const;
  Fixed operator+(Fixed other) const;
  Fixed operator-(Fixed other) const;
  Fixed operator*(Fixed other) const;
  Fixed& operator+=(Fixed other) { return *this = *this + other; }
  Fixed& operator-=(Fixed other) { return *this = *this - other; }

  constexpr auto operator<=>(const Fixed&) const = default;

 private:
  explicit constexpr Fixed(int64_t raw) : raw_(raw) {}

  int64_t raw_ = 0;
};

/// Divides `value` by 2^shift, rounding to nearest with ties to even.
int64_t round_shift_half_even(__int128 value, int shift);

/// Raw product of two fixed-point raw values, rounded back to the grid.
int64_t fixed_mul_raw(int64_t a, int64_t b);

/// Throws OverflowError when |raw| exceeds Fixed::kMaxRaw.
void check_fixed_range(__int128 raw);

std::string to_string(Fixed value);

}  // namespace valid
