#pragma once

#include <gmpxx.h>
#include <mpfr.h>

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "primlab/arithfun.hpp"
#include "primlab/bounds.hpp"
#include "primlab/interval.hpp"

namespace primlab::abundant {

// One entry of the superabundant sequence: n is superabundant when
// sigma(n)/n strictly exceeds sigma(m)/m for every m < n.  The ratio is
// kept exact so record comparisons never depend on precision.
struct SARecord {
  std::uint64_t index = 0;  // 1-based position in the sequence
  arithfun::FactoredInteger n;
  mpq_class ratio;        // sigma(n)/n in lowest terms
  rigor::Interval log10;  // enclosure of log10 n
};

// A colossally abundant number together with a certified sub-window of the
// parameter range on which it maximizes sigma(m)/m^(1+eps).  The recorded
// rationals lie strictly inside the true window, so any epsilon between
// them (midpoint included) reproduces n via ca_number.
struct CANumber {
  arithfun::FactoredInteger n;
  mpq_class epsilon_lo;
  mpq_class epsilon_hi;
};

// Parameters for the small-benefit interval scan: reference CA number N,
// its parameter epsilon, the benefit budget beta, and an open interval
// (lo, hi) from which integers are reported.
struct BenefitScanConfig {
  CANumber reference;
  mpq_class epsilon;  // > 0
  mpq_class budget;   // > 0
  mpz_class lo;       // exclusive
  mpz_class hi;       // exclusive
};

// Raised when epsilon makes some mu(p, epsilon) an exact integer, leaving
// the optimal exponent of p ambiguous.
class CriticalEpsilon : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Raised when a scan budget admits so many primes that the deviation DFS
// would blow up; the cutoff prime exceeded the configured bound.
class BudgetTooLarge : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// floor(mu(p, epsilon)) where mu = log((p^(1+eps)-1)/(p^(1+eps)-p))/log p
// is the optimal exponent of p at parameter eps.  Evaluated by enclosure
// with doubling precision; a straddle that survives escalation is settled
// by the exact rational power comparison, and exact integrality raises
// CriticalEpsilon.
std::uint64_t mu_exponent(std::uint64_t p, const mpq_class& epsilon,
                          mpfr_prec_t precision = 128);

// M_eps = prod p^floor(mu(p, eps)) over the finite support, with a
// certified parameter window around eps.  Rejects critical eps.
CANumber ca_number(const mpq_class& epsilon, mpfr_prec_t precision = 128);

// First `count` colossally abundant numbers, generated by walking the
// critical epsilons downward; each step multiplies by the prime whose next
// exponent increment has the largest threshold.  Parameter windows are
// recorded per number.
std::vector<CANumber> ca_sequence(std::size_t count,
                                  mpfr_prec_t precision = 192);

// All superabundant numbers n with log10 n <= limit_log10, ascending.
// Enumerates non-increasing exponent vectors (products of primorials) in
// magnitude bands, pruning branches whose best possible completion cannot
// beat the best confirmed ratio; survivors are re-checked with exact
// rationals.  limit_log10 <= 120.
std::vector<SARecord> enumerate_superabundant(double limit_log10,
                                              unsigned workers = 1);

// Enclosure of ben_eps(n) = log(sigma(N)/N^(1+eps)) - log(sigma(n)/n^(1+eps))
// against the reference N of config, summed per prime over the union of the
// two supports.
rigor::Interval benefit(const arithfun::FactoredInteger& n,
                        const BenefitScanConfig& config,
                        mpfr_prec_t precision = 128);

// Exact sign of ben_eps(n): -1, 0, or +1.  Clears the logarithms by
// raising to the denominator of eps, so the cost grows with that
// denominator; intended for spot checks and property tests.
int benefit_sign(const arithfun::FactoredInteger& n,
                 const BenefitScanConfig& config);

// Exactly the integers n in (config.lo, config.hi) with ben_eps(n) <=
// budget, ascending.  DFS over per-prime exponent deviations from the
// reference, with the prime cutoff made constructive: beyond the support,
// primes join in increasing order until the cheapest inclusion exceeds the
// budget.  Throws BudgetTooLarge when that cutoff passes the configured
// prime bound.
std::vector<arithfun::FactoredInteger> benefit_scan(
    const BenefitScanConfig& config);

// Certified verdict on sigma(n)/n < e^gamma loglog n.  The inequality is
// asserted for n > 5040 only; smaller n still get a verdict but are
// flagged as outside that domain.
struct RobinVerdict {
  bounds::CheckResult verdict;
  bool in_domain = false;  // n > 5040
};
RobinVerdict robin_check(const arithfun::FactoredInteger& n,
                         mpfr_prec_t precision = 128,
                         mpfr_prec_t max_precision = 1024);

// Which threshold column a table row carries: e^gamma F(a) or G(a).
enum class RowThreshold { ExpGammaF, G };

// One row of the interval tables: m is the least index with SA_m >= N_b,
// ratio is sigma(SA_m)/SA_m, and threshold is the bound evaluated at a.
// ratio_below records the certified comparison ratio < threshold.
struct IntervalBoundRow {
  std::uint64_t a = 0;
  std::uint64_t b = 0;
  std::uint64_t m = 0;
  rigor::Interval log10_nb;
  rigor::Interval log10_sa;
  mpq_class ratio;
  rigor::Interval threshold;
  bool ratio_below = false;
};

// Builds the row for (a, b) from an ascending SA list.  Throws
// std::runtime_error when the list does not reach N_b.
IntervalBoundRow sa_interval_bound(std::uint64_t a, std::uint64_t b,
                                   RowThreshold kind,
                                   const std::vector<SARecord>& records,
                                   mpfr_prec_t precision = 128);

// SA cache: one record per line, tab-separated: index, factorization,
// ratio as num/den (a 30-digit decimal beyond 10^24), log10 to 9 places.
// read_sa_cache rebuilds exact fields from the factorization column.
void write_sa_cache(const std::string& path,
                    const std::vector<SARecord>& records);
std::vector<SARecord> read_sa_cache(const std::string& path);

}  // namespace primlab::abundant
