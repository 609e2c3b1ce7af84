#pragma once

#include <gmpxx.h>
#include <mpfr.h>

#include <cstddef>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "primlab/arithfun.hpp"
#include "primlab/interval.hpp"
#include "primlab/report.hpp"

namespace primlab::bounds {

// Evaluable right-hand sides of the explicit bounds.  log is the natural
// logarithm, loglog its iterate, N_k the k-th primorial, and K(n) the number
// of primorials not exceeding n (arithfun::primorial_count).  Unless noted,
// the argument is a real x > 1.
enum class BoundId {
  THM101_RHS,  // F(x) = log x + loglog x + (loglog x - 1)/log x
               //        - (loglog^2 x - 4 loglog x + 4.897)/(2 log^2 x)
  THM102_RHS,  // F-shape with trailing constant 5 instead of 4.897
  G_COR105,    // G(x) = e^gamma (log x + loglog x + (loglog x - 1)/log x)
  RHS_1_9,     // integer n >= 6: e^gamma (log K + loglog K + loglog K/log K)
               // with K = K(n); rejects K(n) = 1 (log K would vanish)
  RHS_1_13,    // integer n >= 6: G at K(n)
  G1,          // (loglog x - 1)/log x + (loglog x - 2)/log^2 x
               //   - (loglog^2 x - 6 loglog x + 10.912351)/(2 log^3 x)
  G2,          // same shape with 11
  G3,          // same shape with 11.0991617
  H,           // 1/log^2 x - 2 loglog x/log^3 x
               //   + (3 loglog^2 x - 2 loglog x + 2)/log^4 x
  P_POLY,      // 3x^2 - 6x + 5.2 (any real x)
  LEM201_RHS,  // upper bound for 1/log^2 p_k in terms of k; same shape as H
  LEM202_RHS,  // prime argument p: e^gamma (log p + 0.0088067/log^2 p)
  LEM601_RHS,  // prime argument p: e^gamma (log p - 14.5/log^3 p)
  LI,          // integral logarithm (principal value across t = 1)
};

// Verified inequalities.  The index is the prime count k for primorial-side
// claims and the integer n itself for divisor-sum claims.  The SCALAR_*
// entries are claims about a real variable and are only reachable through
// check_scalar_inequality.
enum class InequalityId {
  INEQ_2_3,    // k >= 2: prod_{p <= p_k} p/(p-1) < e^gamma F(k)
  INEQ_1_5,    // k: prod_{p <= p_k} p/(p-1) > e^gamma F5(k).  Claimed only
               // from k ~ 1.7e155 on, far beyond reach of any enumeration;
               // the checkers refuse it (transcription tests cover the RHS).
  INEQ_1_9,    // n >= 6: sigma(n)/n <= e^gamma (log K + loglog K
               //                                + loglog K/log K), K = K(n)
  INEQ_1_12,   // n >= 6: sigma(n)/n <= e^gamma F(K(n))
  INEQ_1_13,   // n >= 6: sigma(n)/n <= G(K(n))
  INEQ_5_6,    // n >= 1: sigma(n)/n > 8.8272; both sides exact rationals,
               // so the verdict is computed exactly and never Undecided
  INEQ_5_10,   // k >= 2: loglog N_{k+1} < F(k)
  INEQ_5_12,   // k >= 2: loglog N_{k+1} - 0.603/sqrt(log N_{k+1}) < F(k)
  INEQ_5_13,   // k >= 2: sigma(N_k)/N_k < (e^gamma/zeta(2)) (1 + 1/p_k) F(k)
  INEQ_5_14,   // k: sigma(N_k)/N_k > (e^gamma/zeta(2)) F5(k).  Astronomical
               // domain like INEQ_1_5; the checkers refuse it.
  INEQ_7_1,    // k >= 2: loglog N_{k+1} < log k + loglog k + loglog k/log k
  ROBIN_1_7,   // n >= 2: sigma(n)/n < e^gamma loglog n
  SCALAR_THM101_STEP,  // x >= 8:
                       //   log(1 + g1(x)) + 0.0088067 h(x)
                       //     <= (loglog x - 1)/log x
                       //        - (loglog^2 x - 4 loglog x + 4.897)/(2 log^2 x)
  SCALAR_2_8,          // e < x <= 234,057,667,276,344,607:
                       //   log(1 + g2(x)) + 0.0094243/log^2 x
                       //     <= same right side with 4.94488.
                       // Compared in the exponentiated form
                       //   (1 + g2(x)) e^{0.0094243/log^2 x} <= e^{rhs},
                       // which is equivalent where 1 + g2 > 0 and keeps the
                       // claim well-defined on the low end of the domain,
                       // where 1 + g2(x) is negative (x < 7.2 or so).
  SCALAR_THM102_STEP,  // x >= exp(exp(5.879)):
                       //   log(1 + g3(x)) - 14.5/log^3 x
                       //     >= same right side with 5
};

enum class CheckResult { Holds, Fails, Undecided };

std::string bound_name(BoundId id);
std::string inequality_name(InequalityId id);
std::string check_result_name(CheckResult r);

// Containment-correct enclosure of the bound at x.  Throws std::domain_error
// when the enclosure does not certify the argument inside the formula's
// domain (x > 1 for the log-based shapes, x > 0 with 1 excluded for LI), and
// std::invalid_argument for RHS_1_9/RHS_1_13, whose argument is an integer.
rigor::Interval eval_bound(BoundId id, const rigor::Interval& x,
                           mpfr_prec_t precision = 128);

// Same with an exact integer argument.  RHS_1_9/RHS_1_13 interpret x as n
// and compose K(n) internally (any size); the other tags treat x as the
// formula variable.
rigor::Interval eval_bound(BoundId id, const mpz_class& x,
                           mpfr_prec_t precision = 128);

// RHS_1_9/RHS_1_13 for an n given in factored form (the only way in for n
// beyond 64 bits that also needs a sigma side elsewhere).
rigor::Interval eval_bound(BoundId id, const arithfun::FactoredInteger& n,
                           mpfr_prec_t precision = 128);

// Integral logarithm li(x) as a principal value across the pole of 1/log t
// at t = 1.  Accepts x = 0 exactly (empty integral) and enclosures entirely
// inside (0, 1) or (1, oo); throws std::domain_error when x has a negative
// part, straddles 1, or touches 0 without being exactly 0.
rigor::Interval li(const rigor::Interval& x, mpfr_prec_t precision = 128);

// Certified verdict for one index.  Starts at `precision` working bits and
// doubles up to max_precision before giving up with Undecided.  Holds means
// the inequality exactly as written above (strict where strict).  Indices
// outside the formula's domain throw std::domain_error; INEQ_1_5/INEQ_5_14
// always do.  Divisor-sum claims factor n internally and therefore require
// n < 2^63 here; larger n must come through the factored overload.
CheckResult check_inequality(InequalityId id, const mpz_class& index,
                             mpfr_prec_t precision = 128,
                             mpfr_prec_t max_precision = 1024);

// Divisor-sum claims (INEQ_1_9/1_12/1_13/5_6, ROBIN_1_7) for an n given in
// factored form; the exact sigma(n)/n comes straight from the factorization.
CheckResult check_inequality(InequalityId id,
                             const arithfun::FactoredInteger& n,
                             mpfr_prec_t precision = 128,
                             mpfr_prec_t max_precision = 1024);

// Exhaustive verdicts over lo..hi inclusive.  Streams shared prime data in
// one deterministic pass; an index whose running enclosure cannot decide is
// re-derived standalone at doubled precision, and rigor::UndecidedError
// (naming the index) propagates only if max_precision is exhausted.  The
// report is independent of `workers`.  Divisor-sum scans sieve sigma
// blockwise and accept hi up to 10^8.
VerificationReport scan_range(InequalityId id, const mpz_class& lo,
                              const mpz_class& hi,
                              mpfr_prec_t precision = 128,
                              unsigned workers = 1,
                              mpfr_prec_t max_precision = 1024);

// Least index t in [lo, hi] such that the inequality holds for every index
// in [t, hi]; t = lo when the whole range holds.  Throws std::runtime_error
// when hi itself fails (no threshold in range).
VerificationReport find_threshold(InequalityId id, const mpz_class& lo,
                                  const mpz_class& hi);

// Log-spaced sample grid of exact integer points covering a SCALAR_* claim's
// stated domain (64 points by default; deterministic).
std::vector<rigor::Interval> default_scalar_grid(InequalityId id,
                                                 std::size_t points = 64);

// Certifies a SCALAR_* claim at every grid point.  Sampling, not a proof:
// the verdict speaks only for the supplied points.  Points outside the
// claim's stated domain throw std::domain_error.  In the report, range and
// failures refer to grid positions (0-based), since the x values need not
// be integers.
VerificationReport check_scalar_inequality(
    InequalityId id, const std::vector<rigor::Interval>& grid);

// Left and right side of a SCALAR_* claim at x, in the exact form the
// checker compares (SCALAR_2_8 in its exponentiated arrangement).  Lets
// tests pin each embedded constant by inverting the formula.
std::pair<rigor::Interval, rigor::Interval> scalar_sides(
    InequalityId id, const rigor::Interval& x, mpfr_prec_t precision = 128);

}  // namespace primlab::bounds
