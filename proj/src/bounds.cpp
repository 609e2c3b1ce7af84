#include "primlab/bounds.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "primlab/primes.hpp"

namespace primlab::bounds {

using rigor::Interval;

namespace {

mpq_class q_of(long num, long den) {
  mpq_class q{mpz_class(num), mpz_class(den)};
  q.canonicalize();
  return q;
}

const mpq_class kQ4897 = q_of(4897, 1000);
const mpq_class kQ5 = q_of(5, 1);
const mpq_class kQ5_2 = q_of(26, 5);
const mpq_class kQG1 = q_of(10912351, 1000000);
const mpq_class kQG2 = q_of(11, 1);
const mpq_class kQG3 = q_of(110991617, 10000000);
const mpq_class kQ0_0088067 = q_of(88067, 10000000);
const mpq_class kQ0_0094243 = q_of(94243, 10000000);
const mpq_class kQ14_5 = q_of(29, 2);
const mpq_class kQ4_94488 = q_of(494488, 100000);
const mpq_class kQ0_603 = q_of(603, 1000);
const mpq_class kQ8_8272 = q_of(88272, 10000);

// Largest index for which SCALAR_2_8 is claimed.
constexpr std::uint64_t kScalar28Cap = 234'057'667'276'344'607ull;
constexpr std::uint64_t kNScanCap = 100'000'000ull;
constexpr std::size_t kFailureCap = 2'000'000;

struct Logs {
  Interval L;
  Interval LL;
};

Logs logs_of(const Interval& x, const char* where) {
  if (mpfr_cmp_ui(x.lo(), 1) <= 0)
    throw std::domain_error(std::string(where) +
                            ": argument must certainly exceed 1");
  Interval L = x.log();
  if (!L.is_positive())
    throw std::domain_error(std::string(where) +
                            ": log enclosure touches zero");
  Interval LL = L.log();
  return {std::move(L), std::move(LL)};
}

// log x + loglog x + (loglog x - 1)/log x - (loglog^2 x - 4 loglog x + c)/(2 log^2 x)
Interval f_shape(const Interval& x, const mpq_class& c, mpfr_prec_t prec,
                 const char* where) {
  auto [L, LL] = logs_of(x, where);
  Interval num = LL.square() - LL.mul_ui(4) + Interval::of_mpq(c, prec);
  return L + LL + LL.sub_ui(1) / L - num / L.square().mul_ui(2);
}

// The trailing two-term tail of f_shape on its own.
Interval step_rhs(const Interval& x, const mpq_class& c, mpfr_prec_t prec,
                  const char* where) {
  auto [L, LL] = logs_of(x, where);
  Interval num = LL.square() - LL.mul_ui(4) + Interval::of_mpq(c, prec);
  return LL.sub_ui(1) / L - num / L.square().mul_ui(2);
}

// (loglog x - 1)/log x + (loglog x - 2)/log^2 x - (loglog^2 x - 6 loglog x + c)/(2 log^3 x)
Interval g_shape(const Interval& x, const mpq_class& c, mpfr_prec_t prec,
                 const char* where) {
  auto [L, LL] = logs_of(x, where);
  Interval L2 = L.square();
  Interval num = LL.square() - LL.mul_ui(6) + Interval::of_mpq(c, prec);
  return LL.sub_ui(1) / L + LL.sub_ui(2) / L2 - num / (L2 * L).mul_ui(2);
}

// 1/log^2 x - 2 loglog x/log^3 x + (3 loglog^2 x - 2 loglog x + 2)/log^4 x
Interval h_shape(const Interval& x, const char* where) {
  auto [L, LL] = logs_of(x, where);
  Interval L2 = L.square();
  Interval num = LL.square().mul_ui(3) - LL.mul_ui(2);
  return L2.inv() - LL.mul_ui(2) / (L2 * L) + num.add_ui(2) / L2.square();
}

Interval g_cor105_shape(const Interval& x, mpfr_prec_t prec,
                        const char* where) {
  auto [L, LL] = logs_of(x, where);
  return rigor::constants(prec).exp_gamma * (L + LL + LL.sub_ui(1) / L);
}

Interval rhs19_shape(const Interval& x, mpfr_prec_t prec, const char* where) {
  auto [L, LL] = logs_of(x, where);
  return rigor::constants(prec).exp_gamma * (L + LL + LL / L);
}

// log k + loglog k + loglog k/log k, the right side of INEQ_7_1.
Interval l71_shape(const Interval& x, const char* where) {
  auto [L, LL] = logs_of(x, where);
  return L + LL + LL / L;
}

Interval at_index(std::uint64_t k, mpfr_prec_t prec) {
  return Interval::exact_ui(k, prec);
}

Interval eval_primorial_index(BoundId id, std::uint64_t k,
                              mpfr_prec_t precision) {
  if (k < 2)
    throw std::domain_error(
        "bound needs K(n) >= 2; log K(n) vanishes at K(n) = 1");
  if (id == BoundId::RHS_1_9)
    return rhs19_shape(at_index(k, precision), precision, "RHS_1_9");
  return g_cor105_shape(at_index(k, precision), precision, "RHS_1_13");
}

enum class Dir { Less, LessEq, Greater };

CheckResult quick_decide(Dir dir, const Interval& lhs, const Interval& rhs) {
  if (Interval::certainly_less(lhs, rhs))
    return dir == Dir::Greater ? CheckResult::Fails : CheckResult::Holds;
  if (Interval::certainly_less(rhs, lhs))
    return dir == Dir::Greater ? CheckResult::Holds : CheckResult::Fails;
  return CheckResult::Undecided;
}

CheckResult quick_decide_mpq(Dir dir, const mpq_class& lhs,
                             const Interval& rhs) {
  if (Interval::certainly_less(lhs, rhs))
    return dir == Dir::Greater ? CheckResult::Fails : CheckResult::Holds;
  if (Interval::certainly_less(rhs, lhs))
    return dir == Dir::Greater ? CheckResult::Holds : CheckResult::Fails;
  return CheckResult::Undecided;
}

using Side = std::function<Interval(mpfr_prec_t)>;

struct Claim {
  Dir dir;
  Side lhs;
  Side rhs;
};

CheckResult certify_claim(const Claim& c, mpfr_prec_t start, mpfr_prec_t maxp,
                          mpfr_prec_t* used) {
  mpfr_prec_t p = std::max<mpfr_prec_t>(std::min(start, maxp), 16);
  while (true) {
    if (used) *used = std::max(*used, p);
    CheckResult r = quick_decide(c.dir, c.lhs(p), c.rhs(p));
    if (r != CheckResult::Undecided) return r;
    if (p >= maxp) return CheckResult::Undecided;
    p = std::min<mpfr_prec_t>(p * 2, maxp);
  }
}

CheckResult certify_mpq(Dir dir, const mpq_class& lhs, const Side& rhs,
                        mpfr_prec_t start, mpfr_prec_t maxp,
                        mpfr_prec_t* used) {
  mpfr_prec_t p = std::max<mpfr_prec_t>(std::min(start, maxp), 16);
  while (true) {
    if (used) *used = std::max(*used, p);
    CheckResult r = quick_decide_mpq(dir, lhs, rhs(p));
    if (r != CheckResult::Undecided) return r;
    if (p >= maxp) return CheckResult::Undecided;
    p = std::min<mpfr_prec_t>(p * 2, maxp);
  }
}

bool is_k_indexed(InequalityId id) {
  switch (id) {
    case InequalityId::INEQ_2_3:
    case InequalityId::INEQ_5_10:
    case InequalityId::INEQ_5_12:
    case InequalityId::INEQ_5_13:
    case InequalityId::INEQ_7_1:
      return true;
    default:
      return false;
  }
}

bool is_n_indexed(InequalityId id) {
  switch (id) {
    case InequalityId::INEQ_1_9:
    case InequalityId::INEQ_1_12:
    case InequalityId::INEQ_1_13:
    case InequalityId::INEQ_5_6:
    case InequalityId::ROBIN_1_7:
      return true;
    default:
      return false;
  }
}

bool is_scalar(InequalityId id) {
  switch (id) {
    case InequalityId::SCALAR_THM101_STEP:
    case InequalityId::SCALAR_2_8:
    case InequalityId::SCALAR_THM102_STEP:
      return true;
    default:
      return false;
  }
}

void reject_untestable(InequalityId id) {
  if (id == InequalityId::INEQ_1_5 || id == InequalityId::INEQ_5_14)
    throw std::domain_error(
        inequality_name(id) +
        ": claimed only beyond desk scale; the right side stays evaluable "
        "through eval_bound, but no index is checkable");
}

// Right side of the divisor-sum claims as a function of K(n) = k.
Side nrhs_for_k(InequalityId id, std::uint64_t k) {
  switch (id) {
    case InequalityId::INEQ_1_9:
      return [k](mpfr_prec_t p) {
        return rhs19_shape(at_index(k, p), p, "INEQ_1_9");
      };
    case InequalityId::INEQ_1_12:
      return [k](mpfr_prec_t p) {
        return rigor::constants(p).exp_gamma *
               f_shape(at_index(k, p), kQ4897, p, "INEQ_1_12");
      };
    case InequalityId::INEQ_1_13:
      return [k](mpfr_prec_t p) {
        return g_cor105_shape(at_index(k, p), p, "INEQ_1_13");
      };
    default:
      throw std::invalid_argument("nrhs_for_k: not a K-composed claim");
  }
}

// Standalone evaluators for one k, used by single checks and as the slow
// path when a streaming scan cannot decide an index.
Claim claim_for_k(InequalityId id, std::uint64_t k) {
  if (k < 2)
    throw std::domain_error(inequality_name(id) + ": index must be >= 2");
  switch (id) {
    case InequalityId::INEQ_2_3:
      return {Dir::Less,
              [k](mpfr_prec_t p) { return arithfun::champion_product(k, p); },
              [k](mpfr_prec_t p) {
                return rigor::constants(p).exp_gamma *
                       f_shape(at_index(k, p), kQ4897, p, "INEQ_2_3");
              }};
    case InequalityId::INEQ_5_10: {
      std::uint64_t pk1 = primes::nth_prime(k + 1);
      return {Dir::Less,
              [pk1](mpfr_prec_t p) { return primes::theta(pk1, p).log(); },
              [k](mpfr_prec_t p) {
                return f_shape(at_index(k, p), kQ4897, p, "INEQ_5_10");
              }};
    }
    case InequalityId::INEQ_5_12: {
      std::uint64_t pk1 = primes::nth_prime(k + 1);
      return {Dir::Less,
              [pk1](mpfr_prec_t p) {
                Interval th = primes::theta(pk1, p);
                return th.log() - Interval::of_mpq(kQ0_603, p) / th.sqrt();
              },
              [k](mpfr_prec_t p) {
                return f_shape(at_index(k, p), kQ4897, p, "INEQ_5_12");
              }};
    }
    case InequalityId::INEQ_5_13: {
      std::uint64_t pk = primes::nth_prime(k);
      return {Dir::Less,
              [pk](mpfr_prec_t p) {
                Interval s = Interval::zero(p);
                primes::for_primes(2, pk + 1, [&](std::uint64_t q) {
                  s.add_assign(Interval::log1p_inv_ui(q, p));
                });
                return s.exp();
              },
              [k, pk](mpfr_prec_t p) {
                const auto& ct = rigor::constants(p);
                mpq_class corr{mpz_class(pk) + 1, mpz_class(pk)};
                return ct.exp_gamma / ct.zeta2 * Interval::of_mpq(corr, p) *
                       f_shape(at_index(k, p), kQ4897, p, "INEQ_5_13");
              }};
    }
    case InequalityId::INEQ_7_1: {
      std::uint64_t pk1 = primes::nth_prime(k + 1);
      return {Dir::Less,
              [pk1](mpfr_prec_t p) { return primes::theta(pk1, p).log(); },
              [k](mpfr_prec_t p) {
                return l71_shape(at_index(k, p), "INEQ_7_1");
              }};
    }
    default:
      throw std::invalid_argument("claim_for_k: not a k-indexed claim");
  }
}

std::uint64_t to_u64(const mpz_class& v, const char* what) {
  if (sgn(v) < 0 || !v.fits_ulong_p())
    throw std::domain_error(std::string(what) + ": index out of range");
  return v.get_ui();
}

// Streams every prime in increasing order until take() returns false.
void stream_primes(const std::function<bool(std::uint64_t)>& take) {
  for (std::uint64_t lo = 0;; lo += primes::kSegmentSpan) {
    primes::PrimeRange seg =
        primes::sieve_segment(lo, lo + primes::kSegmentSpan);
    for (std::uint64_t p : seg.primes)
      if (!take(p)) return;
  }
}

std::uint64_t isqrt_u64(std::uint64_t n) {
  auto r = static_cast<std::uint64_t>(std::sqrt(static_cast<double>(n)));
  while (r > 0 && r * r > n) --r;
  while ((r + 1) * (r + 1) <= n) ++r;
  return r;
}

// Calls fn(n, sigma(n)) for every n in [lo, hi] via a blockwise factor
// sieve.  Fits uint64 comfortably for hi <= 10^8 (sigma(n) < 6n).
void for_sigma(std::uint64_t lo, std::uint64_t hi,
               const std::function<void(std::uint64_t, std::uint64_t)>& fn) {
  std::vector<std::uint64_t> ps;
  primes::for_primes(2, isqrt_u64(hi) + 1,
                     [&](std::uint64_t p) { ps.push_back(p); });
  constexpr std::uint64_t W = 1u << 19;
  std::vector<std::uint64_t> rem(W), sig(W);
  for (std::uint64_t a = lo; a <= hi; a += W) {
    std::uint64_t b = std::min(hi, a + W - 1);
    std::uint64_t len = b - a + 1;
    for (std::uint64_t i = 0; i < len; ++i) {
      rem[i] = a + i;
      sig[i] = 1;
    }
    for (std::uint64_t p : ps) {
      if (p * p > b) break;
      for (std::uint64_t m = ((a + p - 1) / p) * p; m <= b; m += p) {
        std::uint64_t i = m - a;
        std::uint64_t pe = 1, s = 1;
        while (rem[i] % p == 0) {
          rem[i] /= p;
          pe *= p;
          s += pe;
        }
        sig[i] *= s;
      }
    }
    for (std::uint64_t i = 0; i < len; ++i) {
      if (rem[i] > 1) sig[i] *= rem[i] + 1;
      fn(a + i, sig[i]);
    }
  }
}

using Sink = std::function<void(std::uint64_t, CheckResult)>;

void scan_champion(std::uint64_t lo, std::uint64_t hi, mpfr_prec_t base,
                   mpfr_prec_t maxp, const Sink& sink, mpfr_prec_t& used) {
  mpfr_prec_t wp = base + 32;
  used = std::max(used, wp);
  Interval s = Interval::zero(wp);
  const Interval eg = rigor::constants(wp).exp_gamma;
  std::uint64_t k = 0;
  stream_primes([&](std::uint64_t p) {
    ++k;
    s.add_assign(Interval::neg_log1m_inv_ui(p, wp));
    if (k >= lo) {
      Interval rhs = eg * f_shape(at_index(k, wp), kQ4897, wp, "INEQ_2_3");
      CheckResult r = quick_decide(Dir::Less, s.exp(), rhs);
      if (r == CheckResult::Undecided)
        r = certify_claim(claim_for_k(InequalityId::INEQ_2_3, k), wp * 2, maxp,
                          &used);
      sink(k, r);
    }
    return k < hi;
  });
}

void scan_theta_form(InequalityId id, std::uint64_t lo, std::uint64_t hi,
                     mpfr_prec_t base, mpfr_prec_t maxp, const Sink& sink,
                     mpfr_prec_t& used) {
  mpfr_prec_t wp = base + 32;
  used = std::max(used, wp);
  Interval theta = Interval::zero(wp);
  const Interval q603 = Interval::of_mpq(kQ0_603, wp);
  std::uint64_t j = 0;
  stream_primes([&](std::uint64_t p) {
    ++j;
    theta.add_assign(Interval::log_ui(p, wp));
    std::uint64_t k = j - 1;
    if (k >= lo) {
      Interval lhs = theta.log();
      if (id == InequalityId::INEQ_5_12)
        lhs = lhs - q603 / theta.sqrt();
      Interval rhs = id == InequalityId::INEQ_7_1
                         ? l71_shape(at_index(k, wp), "INEQ_7_1")
                         : f_shape(at_index(k, wp), kQ4897, wp,
                                   inequality_name(id).c_str());
      CheckResult r = quick_decide(Dir::Less, lhs, rhs);
      if (r == CheckResult::Undecided)
        r = certify_claim(claim_for_k(id, k), wp * 2, maxp, &used);
      sink(k, r);
    }
    return j - 1 < hi;
  });
}

void scan_sigma_primorial(std::uint64_t lo, std::uint64_t hi, mpfr_prec_t base,
                          mpfr_prec_t maxp, const Sink& sink,
                          mpfr_prec_t& used) {
  mpfr_prec_t wp = base + 32;
  used = std::max(used, wp);
  Interval s = Interval::zero(wp);
  const auto& ct = rigor::constants(wp);
  const Interval scale = ct.exp_gamma / ct.zeta2;
  std::uint64_t k = 0;
  stream_primes([&](std::uint64_t p) {
    ++k;
    s.add_assign(Interval::log1p_inv_ui(p, wp));
    if (k >= lo) {
      mpq_class corr{mpz_class(p) + 1, mpz_class(p)};
      Interval rhs = scale * Interval::of_mpq(corr, wp) *
                     f_shape(at_index(k, wp), kQ4897, wp, "INEQ_5_13");
      CheckResult r = quick_decide(Dir::Less, s.exp(), rhs);
      if (r == CheckResult::Undecided)
        r = certify_claim(claim_for_k(InequalityId::INEQ_5_13, k), wp * 2,
                          maxp, &used);
      sink(k, r);
    }
    return k < hi;
  });
}

void scan_divisor_sums(InequalityId id, std::uint64_t lo, std::uint64_t hi,
                       mpfr_prec_t base, mpfr_prec_t maxp, const Sink& sink,
                       mpfr_prec_t& used) {
  mpfr_prec_t wp = base + 16;
  used = std::max(used, wp);
  const bool grouped = id == InequalityId::INEQ_1_9 ||
                       id == InequalityId::INEQ_1_12 ||
                       id == InequalityId::INEQ_1_13;
  const Interval eg = rigor::constants(wp).exp_gamma;

  std::uint64_t kcur = 0;
  mpz_class boundary;
  Interval group_rhs(wp);
  if (grouped) {
    kcur = arithfun::primorial_count(mpz_class(lo));
    boundary = arithfun::primorial(kcur + 1).value();
    group_rhs = nrhs_for_k(id, kcur)(wp);
  }

  for_sigma(lo, hi, [&](std::uint64_t n, std::uint64_t sig) {
    mpq_class r{mpz_class(sig), mpz_class(n)};
    r.canonicalize();
    if (id == InequalityId::INEQ_5_6) {
      sink(n, cmp(r, kQ8_8272) > 0 ? CheckResult::Holds : CheckResult::Fails);
      return;
    }
    CheckResult v;
    if (grouped) {
      while (boundary <= n) {
        ++kcur;
        boundary = arithfun::primorial(kcur + 1).value();
        group_rhs = nrhs_for_k(id, kcur)(wp);
      }
      v = quick_decide_mpq(Dir::LessEq, r, group_rhs);
      if (v == CheckResult::Undecided)
        v = certify_mpq(Dir::LessEq, r, nrhs_for_k(id, kcur), wp * 2, maxp,
                        &used);
    } else {
      Interval rhs = eg * Interval::log_ui(n, wp).log();
      v = quick_decide_mpq(Dir::Less, r, rhs);
      if (v == CheckResult::Undecided)
        v = certify_mpq(
            Dir::Less, r,
            [n](mpfr_prec_t p) {
              return rigor::constants(p).exp_gamma *
                     Interval::log_ui(n, p).log();
            },
            wp * 2, maxp, &used);
    }
    sink(n, v);
  });
}

// Validates the range for the claim and dispatches one deterministic pass.
void run_scan(InequalityId id, std::uint64_t lo, std::uint64_t hi,
              mpfr_prec_t base, mpfr_prec_t maxp, const Sink& sink,
              mpfr_prec_t& used) {
  if (lo > hi) throw std::invalid_argument("scan: lo exceeds hi");
  reject_untestable(id);
  if (is_scalar(id))
    throw std::invalid_argument(inequality_name(id) +
                                ": scalar claims take a grid, not a range");
  if (is_k_indexed(id)) {
    if (lo < 2)
      throw std::domain_error(inequality_name(id) + ": index starts at 2");
    switch (id) {
      case InequalityId::INEQ_2_3:
        scan_champion(lo, hi, base, maxp, sink, used);
        return;
      case InequalityId::INEQ_5_13:
        scan_sigma_primorial(lo, hi, base, maxp, sink, used);
        return;
      default:
        scan_theta_form(id, lo, hi, base, maxp, sink, used);
        return;
    }
  }
  std::uint64_t min_n =
      id == InequalityId::INEQ_5_6 ? 1 : id == InequalityId::ROBIN_1_7 ? 2 : 6;
  if (lo < min_n)
    throw std::domain_error(inequality_name(id) + ": range starts below " +
                            std::to_string(min_n));
  if (hi > kNScanCap)
    throw std::domain_error(inequality_name(id) +
                            ": divisor-sum scans stop at 10^8");
  scan_divisor_sums(id, lo, hi, base, maxp, sink, used);
}

struct ScalarSpec {
  Dir dir;
  // Certifies x inside the claim's stated domain; throws otherwise.
  std::function<void(const Interval&)> check_domain;
};

const Interval& thm102_floor() {
  // exp(exp(5.879)), the low end of the SCALAR_THM102_STEP domain.
  static const Interval x0 =
      Interval::of_decimal("5.879", 96).exp().exp();
  return x0;
}

ScalarSpec scalar_spec(InequalityId id) {
  switch (id) {
    case InequalityId::SCALAR_THM101_STEP:
      return {Dir::LessEq, [](const Interval& x) {
                if (mpfr_cmp_ui(x.lo(), 8) < 0)
                  throw std::domain_error(
                      "SCALAR_THM101_STEP: claimed for x >= 8");
              }};
    case InequalityId::SCALAR_2_8:
      return {Dir::LessEq, [](const Interval& x) {
                static const Interval e1 = Interval::exact_ui(1, 64).exp();
                if (!mpfr_greater_p(x.lo(), e1.hi()))
                  throw std::domain_error("SCALAR_2_8: claimed for x > e");
                if (mpfr_cmp_ui(x.hi(), kScalar28Cap) > 0)
                  throw std::domain_error(
                      "SCALAR_2_8: claimed only up to 234,057,667,276,344,607");
              }};
    case InequalityId::SCALAR_THM102_STEP:
      return {Dir::Greater, [](const Interval& x) {
                if (!mpfr_greaterequal_p(x.lo(), thm102_floor().hi()))
                  throw std::domain_error(
                      "SCALAR_THM102_STEP: claimed for x >= exp(exp(5.879))");
              }};
    default:
      throw std::invalid_argument(inequality_name(id) +
                                  ": not a scalar claim");
  }
}

}  // namespace

std::string bound_name(BoundId id) {
  switch (id) {
    case BoundId::THM101_RHS: return "THM101_RHS";
    case BoundId::THM102_RHS: return "THM102_RHS";
    case BoundId::G_COR105: return "G_COR105";
    case BoundId::RHS_1_9: return "RHS_1_9";
    case BoundId::RHS_1_13: return "RHS_1_13";
    case BoundId::G1: return "G1";
    case BoundId::G2: return "G2";
    case BoundId::G3: return "G3";
    case BoundId::H: return "H";
    case BoundId::P_POLY: return "P_POLY";
    case BoundId::LEM201_RHS: return "LEM201_RHS";
    case BoundId::LEM202_RHS: return "LEM202_RHS";
    case BoundId::LEM601_RHS: return "LEM601_RHS";
    case BoundId::LI: return "LI";
  }
  throw std::invalid_argument("unknown BoundId");
}

std::string inequality_name(InequalityId id) {
  switch (id) {
    case InequalityId::INEQ_2_3: return "INEQ_2_3";
    case InequalityId::INEQ_1_5: return "INEQ_1_5";
    case InequalityId::INEQ_1_9: return "INEQ_1_9";
    case InequalityId::INEQ_1_12: return "INEQ_1_12";
    case InequalityId::INEQ_1_13: return "INEQ_1_13";
    case InequalityId::INEQ_5_6: return "INEQ_5_6";
    case InequalityId::INEQ_5_10: return "INEQ_5_10";
    case InequalityId::INEQ_5_12: return "INEQ_5_12";
    case InequalityId::INEQ_5_13: return "INEQ_5_13";
    case InequalityId::INEQ_5_14: return "INEQ_5_14";
    case InequalityId::INEQ_7_1: return "INEQ_7_1";
    case InequalityId::ROBIN_1_7: return "ROBIN_1_7";
    case InequalityId::SCALAR_THM101_STEP: return "SCALAR_THM101_STEP";
    case InequalityId::SCALAR_2_8: return "SCALAR_2_8";
    case InequalityId::SCALAR_THM102_STEP: return "SCALAR_THM102_STEP";
  }
  throw std::invalid_argument("unknown InequalityId");
}

std::string check_result_name(CheckResult r) {
  switch (r) {
    case CheckResult::Holds: return "Holds";
    case CheckResult::Fails: return "Fails";
    case CheckResult::Undecided: return "Undecided";
  }
  throw std::invalid_argument("unknown CheckResult");
}

Interval eval_bound(BoundId id, const Interval& x, mpfr_prec_t precision) {
  switch (id) {
    case BoundId::THM101_RHS:
      return f_shape(x, kQ4897, precision, "THM101_RHS");
    case BoundId::THM102_RHS:
      return f_shape(x, kQ5, precision, "THM102_RHS");
    case BoundId::G_COR105:
      return g_cor105_shape(x, precision, "G_COR105");
    case BoundId::G1:
      return g_shape(x, kQG1, precision, "G1");
    case BoundId::G2:
      return g_shape(x, kQG2, precision, "G2");
    case BoundId::G3:
      return g_shape(x, kQG3, precision, "G3");
    case BoundId::H:
      return h_shape(x, "H");
    case BoundId::LEM201_RHS:
      return h_shape(x, "LEM201_RHS");
    case BoundId::P_POLY:
      return x.square().mul_ui(3) - x.mul_ui(6) +
             Interval::of_mpq(kQ5_2, precision);
    case BoundId::LEM202_RHS: {
      auto [L, LL] = logs_of(x, "LEM202_RHS");
      (void)LL;
      return rigor::constants(precision).exp_gamma *
             (L + Interval::of_mpq(kQ0_0088067, precision) / L.square());
    }
    case BoundId::LEM601_RHS: {
      auto [L, LL] = logs_of(x, "LEM601_RHS");
      (void)LL;
      return rigor::constants(precision).exp_gamma *
             (L - Interval::of_mpq(kQ14_5, precision) / (L.square() * L));
    }
    case BoundId::LI:
      return li(x, precision);
    case BoundId::RHS_1_9:
    case BoundId::RHS_1_13:
      throw std::invalid_argument(bound_name(id) +
                                  " takes an integer argument");
  }
  throw std::invalid_argument("unknown BoundId");
}

Interval eval_bound(BoundId id, const mpz_class& x, mpfr_prec_t precision) {
  if (id == BoundId::RHS_1_9 || id == BoundId::RHS_1_13)
    return eval_primorial_index(id, arithfun::primorial_count(x), precision);
  return eval_bound(id, Interval::of_mpz(x, precision), precision);
}

Interval eval_bound(BoundId id, const arithfun::FactoredInteger& n,
                    mpfr_prec_t precision) {
  if (id != BoundId::RHS_1_9 && id != BoundId::RHS_1_13)
    throw std::invalid_argument(bound_name(id) +
                                " does not compose K(n); pass the value");
  return eval_primorial_index(id, arithfun::primorial_count(n), precision);
}

Interval li(const Interval& x, mpfr_prec_t precision) {
  if (mpfr_sgn(x.lo()) < 0)
    throw std::domain_error("li: argument has a negative part");
  if (mpfr_zero_p(x.lo()) && mpfr_zero_p(x.hi()))
    return Interval::zero(precision);
  if (mpfr_zero_p(x.lo()))
    throw std::domain_error("li: enclosure touches 0 without being exactly 0");
  bool above = mpfr_cmp_ui(x.lo(), 1) > 0;
  if (!above && mpfr_cmp_ui(x.hi(), 1) >= 0)
    throw std::domain_error("li: enclosure meets the singularity at 1");

  mpfr_prec_t wp = precision + 32;
  Interval xw = Interval::from_endpoints(x.lo(), x.hi(), wp);
  Interval y = xw.log();
  Interval ay = above ? y : -y;
  Interval acc = rigor::constants(wp).gamma + ay.log();

  // Ei series: sum of y^n/(n n!).  Terms at least halve once n >= 2|y|, so
  // wp + 16 further steps push the remainder below the target width; the
  // first omitted element times [-2, 2] encloses the geometric tail.
  double ylim = ay.hi_d();
  unsigned long floor_n = static_cast<unsigned long>(2.0 * ylim) + 4;
  unsigned long hard = floor_n + static_cast<unsigned long>(wp) + 16;
  Interval term = Interval::exact_ui(1, wp);
  Interval sum = Interval::zero(wp);
  unsigned long n = 0;
  while (true) {
    ++n;
    term = (term * y).div_ui(n);
    sum.add_assign(term.div_ui(n));
    if (n >= hard) break;
    if (n >= floor_n) {
      double tmag = std::max(std::fabs(term.lo_d()), std::fabs(term.hi_d()));
      double smag = std::max(1.0, std::fabs(sum.hi_d()));
      int shift = static_cast<int>(std::min<mpfr_prec_t>(wp + 8, 960));
      if (tmag < smag * std::ldexp(1.0, -shift)) break;
    }
  }
  Interval e1 = (term * y).div_ui(n + 1).div_ui(n + 1);
  mpfr_t mlo, mhi;
  mpfr_init2(mlo, 16);
  mpfr_init2(mhi, 16);
  mpfr_set_si(mlo, -2, MPFR_RNDD);
  mpfr_set_si(mhi, 2, MPFR_RNDU);
  Interval spread = Interval::from_endpoints(mlo, mhi, 16);
  mpfr_clear(mlo);
  mpfr_clear(mhi);
  acc = acc + sum + e1 * spread;
  return Interval::from_endpoints(acc.lo(), acc.hi(), precision);
}

CheckResult check_inequality(InequalityId id, const mpz_class& index,
                             mpfr_prec_t precision,
                             mpfr_prec_t max_precision) {
  reject_untestable(id);
  if (is_scalar(id))
    throw std::invalid_argument(inequality_name(id) +
                                ": scalar claims take a grid");
  if (is_k_indexed(id)) {
    std::uint64_t k = to_u64(index, "check_inequality");
    if (k < 2)
      throw std::domain_error(inequality_name(id) + ": index starts at 2");
    return certify_claim(claim_for_k(id, k), precision, max_precision,
                         nullptr);
  }
  std::uint64_t n = to_u64(index, "check_inequality");
  if (n > 1'000'000'000'000'000'000ull)
    throw std::domain_error(inequality_name(id) +
                            ": n too large to factor here; use the factored "
                            "overload");
  return check_inequality(id, arithfun::factorize(n), precision,
                          max_precision);
}

CheckResult check_inequality(InequalityId id,
                             const arithfun::FactoredInteger& n,
                             mpfr_prec_t precision,
                             mpfr_prec_t max_precision) {
  reject_untestable(id);
  if (!is_n_indexed(id))
    throw std::invalid_argument(inequality_name(id) +
                                ": index is a prime count, not a factored n");
  mpq_class r = arithfun::sigma_ratio(n);
  switch (id) {
    case InequalityId::INEQ_5_6:
      return cmp(r, kQ8_8272) > 0 ? CheckResult::Holds : CheckResult::Fails;
    case InequalityId::ROBIN_1_7: {
      if (n.is_one())
        throw std::domain_error("ROBIN_1_7: loglog undefined at n = 1");
      return certify_mpq(
          Dir::Less, r,
          [n](mpfr_prec_t p) {
            return rigor::constants(p).exp_gamma * n.log_natural(p).log();
          },
          precision, max_precision, nullptr);
    }
    default: {
      std::uint64_t k = arithfun::primorial_count(n);
      if (k < 2)
        throw std::domain_error(inequality_name(id) +
                                ": needs K(n) >= 2 (n >= 6)");
      return certify_mpq(Dir::LessEq, r, nrhs_for_k(id, k), precision,
                         max_precision, nullptr);
    }
  }
}

VerificationReport scan_range(InequalityId id, const mpz_class& lo,
                              const mpz_class& hi, mpfr_prec_t precision,
                              unsigned workers, mpfr_prec_t max_precision) {
  // The pass is one deterministic stream; a worker split would partition the
  // same index set and merge order-normalized, so the report is identical.
  (void)workers;
  auto t0 = std::chrono::steady_clock::now();
  VerificationReport rep;
  rep.inequality = inequality_name(id);
  rep.lo = lo;
  rep.hi = hi;
  mpfr_prec_t used = 0;
  run_scan(id, to_u64(lo, "scan_range"), to_u64(hi, "scan_range"), precision,
           max_precision,
           [&](std::uint64_t idx, CheckResult r) {
             if (r == CheckResult::Undecided)
               throw rigor::UndecidedError(
                   rep.inequality + " undecided at index " +
                   std::to_string(idx) + " (raise max precision)");
             if (r == CheckResult::Fails) {
               if (rep.failures.size() >= kFailureCap)
                 throw std::runtime_error(rep.inequality +
                                          ": failure list over " +
                                          std::to_string(kFailureCap) +
                                          " entries; narrow the range");
               rep.failures.emplace_back(idx);
             }
           },
           used);
  rep.verdict = rep.failures.empty() ? Verdict::AllHold : Verdict::FailuresAt;
  rep.precision_used = used;
  rep.runtime_s =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
          .count();
  return rep;
}

VerificationReport find_threshold(InequalityId id, const mpz_class& lo,
                                  const mpz_class& hi) {
  auto t0 = std::chrono::steady_clock::now();
  VerificationReport rep;
  rep.inequality = inequality_name(id);
  rep.lo = lo;
  rep.hi = hi;
  std::uint64_t lo_u = to_u64(lo, "find_threshold");
  std::uint64_t hi_u = to_u64(hi, "find_threshold");
  std::optional<std::uint64_t> last_fail;
  mpfr_prec_t used = 0;
  run_scan(id, lo_u, hi_u, 128, 1024,
           [&](std::uint64_t idx, CheckResult r) {
             if (r == CheckResult::Undecided)
               throw rigor::UndecidedError(rep.inequality +
                                           " undecided at index " +
                                           std::to_string(idx));
             if (r == CheckResult::Fails) last_fail = idx;
           },
           used);
  if (last_fail && *last_fail == hi_u)
    throw std::runtime_error(rep.inequality +
                             ": no threshold in range; the last index fails");
  rep.verdict = Verdict::ThresholdFound;
  rep.threshold = last_fail ? mpz_class(*last_fail + 1) : mpz_class(lo_u);
  rep.precision_used = used;
  rep.runtime_s =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
          .count();
  return rep;
}

std::vector<Interval> default_scalar_grid(InequalityId id,
                                          std::size_t points) {
  if (!is_scalar(id))
    throw std::invalid_argument(inequality_name(id) +
                                ": not a scalar claim");
  if (points < 2) throw std::invalid_argument("grid needs at least 2 points");
  std::vector<Interval> grid;
  grid.reserve(points);
  auto push_exact = [&grid](const mpz_class& x) {
    auto bits = static_cast<mpfr_prec_t>(
        mpz_sizeinbase(x.get_mpz_t(), 2) + 1);
    grid.push_back(Interval::of_mpz(x, std::max<mpfr_prec_t>(128, bits)));
  };
  if (id == InequalityId::SCALAR_THM102_STEP) {
    // Powers of ten from just above exp(exp(5.879)).
    for (std::size_t i = 0; i < points; ++i) {
      unsigned long e = 156 + i * 154 / (points - 1);
      mpz_class x;
      mpz_ui_pow_ui(x.get_mpz_t(), 10, e);
      push_exact(x);
    }
    return grid;
  }
  std::uint64_t lo = id == InequalityId::SCALAR_2_8 ? 3 : 8;
  mpz_class hi_z;
  if (id == InequalityId::SCALAR_2_8)
    hi_z = kScalar28Cap;
  else
    mpz_ui_pow_ui(hi_z.get_mpz_t(), 10, 24);

  // Geometric ladder of integers; endpoints exact.
  mpfr_t t, step, cur;
  mpfr_init2(t, 96);
  mpfr_init2(step, 96);
  mpfr_init2(cur, 96);
  mpfr_set_z(t, hi_z.get_mpz_t(), MPFR_RNDN);
  mpfr_log(t, t, MPFR_RNDN);
  mpfr_set_ui(cur, lo, MPFR_RNDN);
  mpfr_log(cur, cur, MPFR_RNDN);
  mpfr_sub(step, t, cur, MPFR_RNDN);
  mpfr_div_ui(step, step, points - 1, MPFR_RNDN);
  mpz_class prev = 0;
  for (std::size_t i = 0; i < points; ++i) {
    mpz_class x;
    if (i + 1 == points) {
      x = hi_z;
    } else {
      mpfr_mul_ui(t, step, i, MPFR_RNDN);
      mpfr_add(t, t, cur, MPFR_RNDN);
      mpfr_exp(t, t, MPFR_RNDN);
      mpfr_get_z(x.get_mpz_t(), t, MPFR_RNDD);
      if (x < mpz_class(lo)) x = lo;
      if (x >= hi_z) x = hi_z - 1;
    }
    if (x <= prev) x = prev + 1;
    prev = x;
    push_exact(x);
  }
  mpfr_clear(t);
  mpfr_clear(step);
  mpfr_clear(cur);
  return grid;
}

std::pair<Interval, Interval> scalar_sides(InequalityId id, const Interval& x,
                                           mpfr_prec_t precision) {
  switch (id) {
    case InequalityId::SCALAR_THM101_STEP: {
      Interval one_plus = g_shape(x, kQG1, precision, "SCALAR_THM101_STEP")
                              .add_ui(1);
      if (!one_plus.is_positive())
        throw std::domain_error(
            "SCALAR_THM101_STEP: 1 + g1(x) not certainly positive");
      Interval lhs = one_plus.log() +
                     Interval::of_mpq(kQ0_0088067, precision) *
                         h_shape(x, "SCALAR_THM101_STEP");
      return {std::move(lhs),
              step_rhs(x, kQ4897, precision, "SCALAR_THM101_STEP")};
    }
    case InequalityId::SCALAR_2_8: {
      // Exponentiated arrangement; well-defined even where 1 + g2 <= 0.
      auto [L, LL] = logs_of(x, "SCALAR_2_8");
      (void)LL;
      Interval one_plus = g_shape(x, kQG2, precision, "SCALAR_2_8").add_ui(1);
      Interval lhs =
          one_plus *
          (Interval::of_mpq(kQ0_0094243, precision) / L.square()).exp();
      return {std::move(lhs),
              step_rhs(x, kQ4_94488, precision, "SCALAR_2_8").exp()};
    }
    case InequalityId::SCALAR_THM102_STEP: {
      auto [L, LL] = logs_of(x, "SCALAR_THM102_STEP");
      (void)LL;
      Interval one_plus =
          g_shape(x, kQG3, precision, "SCALAR_THM102_STEP").add_ui(1);
      if (!one_plus.is_positive())
        throw std::domain_error(
            "SCALAR_THM102_STEP: 1 + g3(x) not certainly positive");
      Interval lhs = one_plus.log() - Interval::of_mpq(kQ14_5, precision) /
                                          (L.square() * L);
      return {std::move(lhs),
              step_rhs(x, kQ5, precision, "SCALAR_THM102_STEP")};
    }
    default:
      throw std::invalid_argument(inequality_name(id) +
                                  ": not a scalar claim");
  }
}

VerificationReport check_scalar_inequality(InequalityId id,
                                           const std::vector<Interval>& grid) {
  ScalarSpec spec = scalar_spec(id);
  if (grid.empty()) throw std::invalid_argument("empty scalar grid");
  auto t0 = std::chrono::steady_clock::now();
  VerificationReport rep;
  rep.inequality = inequality_name(id);
  rep.lo = 0;
  rep.hi = grid.size() - 1;
  mpfr_prec_t used = 0;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    spec.check_domain(grid[i]);
    const Interval& x = grid[i];
    Claim c{spec.dir,
            [&x, id](mpfr_prec_t p) { return scalar_sides(id, x, p).first; },
            [&x, id](mpfr_prec_t p) { return scalar_sides(id, x, p).second; }};
    CheckResult r = certify_claim(c, 128, 1024, &used);
    if (r == CheckResult::Undecided)
      throw rigor::UndecidedError(rep.inequality +
                                  " undecided at grid position " +
                                  std::to_string(i));
    if (r == CheckResult::Fails) rep.failures.emplace_back(i);
  }
  rep.verdict = rep.failures.empty() ? Verdict::AllHold : Verdict::FailuresAt;
  rep.precision_used = used;
  rep.runtime_s =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
          .count();
  return rep;
}

}  // namespace primlab::bounds
