#pragma once

// Residue rings Z/mZ with a single-word fast path. Kernels that run hot
// (products of thousands of factors) are written once against the small
// ring interface below and dispatched through with_ring().

#include <gmpxx.h>

#include <cstdint>
#include <limits>
#include <utility>

namespace wolst::detail {

inline bool fits_u64(const mpz_class& x) {
  return sgn(x) >= 0 && mpz_sizeinbase(x.get_mpz_t(), 2) <= 64;
}

inline std::uint64_t to_u64(const mpz_class& x) {
  std::uint64_t out = 0;
  mpz_export(&out, nullptr, -1, sizeof(out), 0, 0, x.get_mpz_t());
  return out;
}

inline mpz_class from_u64(std::uint64_t x) {
  mpz_class out;
  mpz_import(out.get_mpz_t(), 1, -1, sizeof(x), 0, 0, &x);
  return out;
}

/// Modulus below 2^64; products go through a 128-bit intermediate.
struct WordRing {
  using value_type = std::uint64_t;
  std::uint64_t m;

  value_type one() const { return 1 % m; }
  value_type from(std::uint64_t x) const { return x % m; }
  value_type from(const mpz_class& x) const {
    mpz_class r;
    mpz_fdiv_r(r.get_mpz_t(), x.get_mpz_t(), lift_modulus().get_mpz_t());
    return to_u64(r);
  }
  value_type mul(value_type a, value_type b) const {
    return static_cast<value_type>(static_cast<unsigned __int128>(a) * b % m);
  }
  value_type add(value_type a, value_type b) const {
    unsigned __int128 s = static_cast<unsigned __int128>(a) + b;
    return static_cast<value_type>(s % m);
  }
  value_type neg(value_type a) const { return a == 0 ? 0 : m - a; }
  bool is_zero(value_type a) const { return a == 0; }
  mpz_class lift(value_type a) const { return from_u64(a); }
  mpz_class lift_modulus() const { return from_u64(m); }
};

/// Arbitrary modulus.
struct BigRing {
  using value_type = mpz_class;
  mpz_class m;

  value_type one() const { return m == 1 ? mpz_class(0) : mpz_class(1); }
  value_type from(std::uint64_t x) const { return from(from_u64(x)); }
  value_type from(const mpz_class& x) const {
    mpz_class r;
    mpz_fdiv_r(r.get_mpz_t(), x.get_mpz_t(), m.get_mpz_t());
    return r;
  }
  value_type mul(const value_type& a, const value_type& b) const {
    mpz_class r = a * b;
    mpz_fdiv_r(r.get_mpz_t(), r.get_mpz_t(), m.get_mpz_t());
    return r;
  }
  value_type add(const value_type& a, const value_type& b) const { return from(a + b); }
  value_type neg(const value_type& a) const { return a == 0 ? a : mpz_class(m - a); }
  bool is_zero(const value_type& a) const { return a == 0; }
  mpz_class lift(const value_type& a) const { return a; }
  mpz_class lift_modulus() const { return m; }
};

template <class Ring>
typename Ring::value_type ring_pow(const Ring& ring, typename Ring::value_type base,
                                   std::uint64_t exp) {
  auto result = ring.one();
  while (exp > 0) {
    if (exp & 1U) result = ring.mul(result, base);
    base = ring.mul(base, base);
    exp >>= 1U;
  }
  return result;
}

/// Invokes fn with the cheapest ring able to represent residues mod m.
template <class Fn>
decltype(auto) with_ring(const mpz_class& m, Fn&& fn) {
  if (fits_u64(m)) return std::forward<Fn>(fn)(WordRing{to_u64(m)});
  return std::forward<Fn>(fn)(BigRing{m});
}

}  // namespace wolst::detail
