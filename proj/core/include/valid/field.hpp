#pragma once

#include <cstdint>

namespace valid {

using FieldElement = uint64_t;

inline constexpr uint64_t kMersenne61 = (uint64_t{1} << 61) - 1;

/// Arithmetic in F_p for a prime p < 2^63. Elements are canonical residues
/// in [0, p). p = 2^61 - 1 takes a shift-and-add reduction; other primes use
/// a 128-bit remainder.
class PrimeField {
 public:
  /// Throws InvalidParameter if p is not a prime in [2, 2^63).
  explicit PrimeField(uint64_t p = kMersenne61);

  uint64_t modulus() const { return p_; }

  FieldElement add(FieldElement a, FieldElement b) const;
  FieldElement sub(FieldElement a, FieldElement b) const;
  FieldElement neg(FieldElement a) const { return a == 0 ? 0 : p_ - a; }
  FieldElement mul(FieldElement a, FieldElement b) const;
  FieldElement pow(FieldElement base, uint64_t exp) const;
  /// Throws InvalidParameter for zero.
  FieldElement inverse(FieldElement a) const;

  /// Residue of a signed integer; negative r maps to p - (|r| mod p).
  FieldElement reduce(int64_t r) const;
  FieldElement reduce_unsigned(uint64_t r) const { return r % p_; }

 private:
  uint64_t p_;
  bool mersenne_;
};

bool is_prime(uint64_t n);

}  // namespace valid
