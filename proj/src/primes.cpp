#include <array>
#include <cmath>

#include "wolst/arith.hpp"
#include "wolst/modring.hpp"

namespace wolst {
namespace {

using detail::WordRing;

bool strong_probable_prime(const WordRing& ring, std::uint64_t witness, std::uint64_t d,
                           unsigned s) {
  const std::uint64_t n = ring.m;
  witness %= n;
  if (witness == 0) return true;
  std::uint64_t x = detail::ring_pow(ring, witness, d);
  if (x == 1 || x == n - 1) return true;
  for (unsigned r = 1; r < s; ++r) {
    x = ring.mul(x, x);
    if (x == n - 1) return true;
  }
  return false;
}

bool strong_probable_prime(const mpz_class& n, unsigned long witness, const mpz_class& d,
                           unsigned long s) {
  const mpz_class n_minus_1 = n - 1;
  mpz_class x;
  mpz_class base = witness;
  mpz_powm(x.get_mpz_t(), base.get_mpz_t(), d.get_mpz_t(), n.get_mpz_t());
  if (x == 1 || x == n_minus_1) return true;
  for (unsigned long r = 1; r < s; ++r) {
    x = x * x % n;
    if (x == n_minus_1) return true;
  }
  return false;
}

constexpr std::array<std::uint32_t, 12> kSmallPrimes{2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37};

// Deterministic for every n < 2^64.
constexpr std::array<std::uint64_t, 7> kWordWitnesses{2,      325,     9375,      28178,
                                                      450775, 9780504, 1795265022};

constexpr std::array<unsigned long, 24> kBigWitnesses{2,  3,  5,  7,  11, 13, 17, 19,
                                                      23, 29, 31, 37, 41, 43, 47, 53,
                                                      59, 61, 67, 71, 73, 79, 83, 89};

constexpr std::uint64_t kSegmentSpan = std::uint64_t{1} << 18;

std::uint64_t isqrt(std::uint64_t n) {
  auto r = static_cast<std::uint64_t>(std::sqrt(static_cast<long double>(n)));
  while (r > 0 && r * r > n) --r;
  while ((r + 1) * (r + 1) <= n) ++r;
  return r;
}

}  // namespace

bool is_prime(std::uint64_t n) {
  if (n < 2) return false;
  for (std::uint32_t p : kSmallPrimes) {
    if (n == p) return true;
    if (n % p == 0) return false;
  }
  if (n < 41 * 41) return true;
  std::uint64_t d = n - 1;
  unsigned s = 0;
  while ((d & 1U) == 0) {
    d >>= 1U;
    ++s;
  }
  const WordRing ring{n};
  for (std::uint64_t a : kWordWitnesses) {
    if (!strong_probable_prime(ring, a, d, s)) return false;
  }
  return true;
}

PrimalityResult primality(const Natural& n) {
  if (sgn(n) <= 0) return {false, false};
  if (detail::fits_u64(n)) return {is_prime(detail::to_u64(n)), false};
  for (std::uint32_t p : kSmallPrimes) {
    if (mpz_divisible_ui_p(n.get_mpz_t(), p)) return {false, false};
  }
  mpz_class d = n - 1;
  const unsigned long s = mpz_scan1(d.get_mpz_t(), 0);
  mpz_fdiv_q_2exp(d.get_mpz_t(), d.get_mpz_t(), s);
  for (unsigned long a : kBigWitnesses) {
    if (!strong_probable_prime(n, a, d, s)) return {false, false};
  }
  return {true, true};
}

bool is_prime(const Natural& n) { return primality(n).prime; }

PrimeStream::PrimeStream(std::uint64_t lo, std::uint64_t hi)
    : hi_(hi), segment_lo_(lo < 2 ? 2 : lo) {
  if (segment_lo_ > hi_) {
    done_ = true;
    return;
  }
  const std::uint64_t root = isqrt(hi_);
  std::vector<bool> small(root + 1, true);
  for (std::uint64_t i = 2; i <= root; ++i) {
    if (!small[i]) continue;
    base_primes_.push_back(static_cast<std::uint32_t>(i));
    for (std::uint64_t j = i * i; j <= root; j += i) small[j] = false;
  }
  fill_segment();
}

void PrimeStream::fill_segment() {
  const std::uint64_t span = std::min(kSegmentSpan, hi_ - segment_lo_ + 1);
  composite_.assign(span, false);
  for (std::uint32_t p : base_primes_) {
    const std::uint64_t pp = std::uint64_t{p} * p;
    if (pp > segment_lo_ + span - 1) break;
    std::uint64_t start = std::max(pp, (segment_lo_ + p - 1) / p * p);
    for (std::uint64_t j = start; j < segment_lo_ + span; j += p) composite_[j - segment_lo_] = true;
  }
  cursor_ = 0;
}

std::optional<std::uint64_t> PrimeStream::next() {
  while (!done_) {
    while (cursor_ < composite_.size()) {
      const std::size_t i = cursor_++;
      if (!composite_[i]) return segment_lo_ + i;
    }
    const std::uint64_t next_lo = segment_lo_ + composite_.size();
    if (next_lo > hi_ || next_lo < segment_lo_) {
      done_ = true;
      break;
    }
    segment_lo_ = next_lo;
    fill_segment();
  }
  return std::nullopt;
}

std::vector<std::uint64_t> primes_in(std::uint64_t lo, std::uint64_t hi) {
  std::vector<std::uint64_t> out;
  if (lo > hi) return out;
  PrimeStream stream(lo, hi);
  while (auto p = stream.next()) out.push_back(*p);
  return out;
}

}  // namespace wolst
