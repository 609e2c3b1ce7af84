#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "primlab/interval.hpp"

namespace primlab::arithfun {

// An integer carried as its factorization: ascending primes, exponents >= 1.
// The empty factor list is 1.  A 128-bit enclosure of log10 is computed at
// construction so table printing and log-space comparisons are cheap; the
// object is immutable afterwards and safe to share across threads.
class FactoredInteger {
 public:
  using Factor = std::pair<std::uint64_t, unsigned>;

  FactoredInteger();  // the integer 1
  explicit FactoredInteger(std::vector<Factor> factors);

  const std::vector<Factor>& factors() const { return factors_; }
  unsigned exponent_of(std::uint64_t p) const;
  bool is_one() const { return factors_.empty(); }

  mpz_class value() const;                // exact product
  const rigor::Interval& log10() const { return log10_; }
  rigor::Interval log_natural(mpfr_prec_t precision) const;

  // Copy with the exponent of p replaced by e (e = 0 removes the prime).
  FactoredInteger with_exponent(std::uint64_t p, unsigned e) const;

  // "2^4 * 3 * 5 * 7" with ascending primes; exponent 1 is omitted; 1 for
  // the empty product.  parse() accepts exactly this shape.
  std::string str() const;
  static FactoredInteger parse(const std::string& text);

  bool operator==(const FactoredInteger& o) const {
    return factors_ == o.factors_;
  }
  bool operator!=(const FactoredInteger& o) const { return !(*this == o); }

 private:
  std::vector<Factor> factors_;
  rigor::Interval log10_;
};

// sigma(n)/n in lowest terms, via prod (p^(e+1) - 1) / ((p - 1) p^e).
mpq_class sigma_ratio(const FactoredInteger& n);

// n/phi(n) = prod p/(p-1) over distinct prime divisors, in lowest terms.
mpq_class phi_ratio(const FactoredInteger& n);

// k-th primorial as a factored integer (all exponents 1).  k >= 1.
FactoredInteger primorial(std::uint64_t k);

// K(n) = max{k : N_k <= n}; rejects n < 2 where no primorial fits.
std::uint64_t primorial_count(const mpz_class& n);
std::uint64_t primorial_count(const FactoredInteger& n);

// Enclosure of prod_{p <= p_k} p/(p-1), streamed as an interval sum of
// -log(1 - 1/p); no big rationals, so large k stays cheap.
rigor::Interval champion_product(std::uint64_t k, mpfr_prec_t precision = 128);

// Exact factorization for 1 <= n <= 10^18 (trial division below 10^6, then
// a deterministic strong-pseudoprime test plus rho splitting).
FactoredInteger factorize(std::uint64_t n);

// Deterministic primality for 64-bit inputs; exposed for oracles and scans.
bool is_prime_u64(std::uint64_t n);

}  // namespace primlab::arithfun
