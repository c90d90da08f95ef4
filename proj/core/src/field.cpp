#include "valid/field.hpp"

#include "valid/errors.hpp"

namespace valid {

namespace {

uint64_t mulmod_generic(uint64_t a, uint64_t b, uint64_t m) {
  return static_cast<uint64_t>(static_cast<unsigned __int128>(a) * b % m);
}

uint64_t powmod(uint64_t base, uint64_t exp, uint64_t m) {
  uint64_t acc = 1 % m;
  base %= m;
  while (exp > 0) {
    if (exp & 1) acc = mulmod_generic(acc, base, m);
    base = mulmod_generic(base, base, m);
    exp >>= 1;
  }
  return acc;
}

}  // namespace

bool is_prime(uint64_t n) {
  if (n < 2) return false;
  for (uint64_t small : {2ull, 3ull, 5ull, 7ull, 11ull, 13ull, 17ull, 19ull, 23ull, 29ull, 31ull, 37ull}) {
    if (n % small == 0) return n == small;
  }
  uint64_t d = n - 1;
  int s = 0;
  while ((d & 1) == 0) {
    d >>= 1;
    ++s;
  }
  // These bases are a deterministic witness set for all 64-bit n.
  for (uint64_t a : {2ull, 3ull, 5ull, 7ull, 11ull, 13ull, 17ull, 19ull, 23ull, 29ull, 31ull, 37ull}) {
    uint64_t x = powmod(a, d, n);
    if (x == 1 || x == n - 1) continue;
    bool composite = true;
    for (int r = 1; r < s; ++r) {
      x = mulmod_generic(x, x, n);
      if (x == n - 1) {
        composite = false;
        break;
      }
    }
    if (composite) return false;
  }
  return true;
}

PrimeField::PrimeField(uint64_t p) : p_(p), mersenne_(p == kMersenne61) {
  if (p >= (uint64_t{1} << 63) || !is_prime(p)) {
    throw InvalidParameter("field modulus must be a prime below 2^63");
  }
}

FieldElement PrimeField::add(FieldElement a, FieldElement b) const {
  const uint64_t s = a + b;
  return s >= p_ ? s - p_ : s;
}

FieldElement PrimeField::sub(FieldElement a, FieldElement b) const {
  return a >= b ? a - b : a + (p_ - b);
}

FieldElement PrimeField::mul(FieldElement a, FieldElement b) const {
  if (mersenne_) {
    const unsigned __int128 prod = static_cast<unsigned __int128>(a) * b;
    uint64_t r = static_cast<uint64_t>(prod & kMersenne61) + static_cast<uint64_t>(prod >> 61);
    r = (r & kMersenne61) + (r >> 61);
    return r >= kMersenne61 ? r - kMersenne61 : r;
  }
  return mulmod_generic(a, b, p_);
}

FieldElement PrimeField::pow(FieldElement base, uint64_t exp) const {
  FieldElement acc = 1 % p_;
  while (exp > 0) {
    if (exp & 1) acc = mul(acc, base);
    base = mul(base, base);
    exp >>= 1;
  }
  return acc;
}

FieldElement PrimeField::inverse(FieldElement a) const {
  if (a % p_ == 0) throw InvalidParameter("zero has no inverse");
  return pow(a % p_, p_ - 2);
}

FieldElement PrimeField::reduce(int64_t r) const {
  if (r >= 0) return static_cast<uint64_t>(r) % p_;
  // -(r + 1) avoids negating INT64_MIN.
  const uint64_t mag = static_cast<uint64_t>(-(r + 1)) + 1;
  return neg(mag % p_);
}

}  // namespace valid
