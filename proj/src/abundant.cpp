#include "primlab/abundant.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "primlab/primes.hpp"

namespace primlab::abundant {

namespace {

using arithfun::FactoredInteger;
using rigor::Interval;

// Hard bound on the benefit-scan prime cutoff; a budget that admits primes
// beyond this would make the deviation DFS explode.
constexpr std::uint64_t kScanPrimeBound = 1'000'000;

// Operand-size guard for the exact rational tests: refuses comparisons
// whose cleared-of-logs powers would exceed this many bits.
constexpr std::size_t kMaxExactBits = std::size_t(1) << 27;

mpz_class pow_z(std::uint64_t p, std::uint64_t e) {
  mpz_class r;
  mpz_class base(static_cast<unsigned long>(p));
  mpz_pow_ui(r.get_mpz_t(), base.get_mpz_t(), static_cast<unsigned long>(e));
  return r;
}

// sigma(p^e) = 1 + p + ... + p^e; e = 0 gives 1.
mpz_class sigma_pp(std::uint64_t p, std::uint64_t e) {
  mpz_class num = pow_z(p, e + 1) - 1;
  mpz_class den(static_cast<unsigned long>(p - 1));
  return num / den;  // exact by construction
}

// Exact binary value of an mpfr endpoint as a rational.
mpq_class mpq_from_mpfr(const mpfr_t& f) {
  if (mpfr_zero_p(f)) return mpq_class(0);
  mpz_class m;
  mpfr_exp_t e = mpfr_get_z_2exp(m.get_mpz_t(), f);
  mpq_class q(m);
  if (e > 0) {
    mpq_mul_2exp(q.get_mpq_t(), q.get_mpq_t(), static_cast<mp_bitcnt_t>(e));
  } else if (e < 0) {
    mpq_div_2exp(q.get_mpq_t(), q.get_mpq_t(), static_cast<mp_bitcnt_t>(-e));
  }
  return q;
}

// Smallest-denominator rational strictly inside (a, b), 0 <= a < b.  The
// classic continued-fraction descent: either an integer fits, or recurse on
// the reciprocal of the fractional parts.
mpq_class simplest_in_open(const mpq_class& a, const mpq_class& b) {
  if (!(a < b) || a < 0) throw std::invalid_argument("simplest_in_open: need 0 <= a < b");
  mpz_class fa;
  mpz_fdiv_q(fa.get_mpz_t(), a.get_num().get_mpz_t(), a.get_den().get_mpz_t());
  mpq_class c(fa + 1);
  if (c < b) return c;
  mpq_class af = a - mpq_class(fa);
  mpq_class bf = b - mpq_class(fa);  // 0 <= af < bf <= 1 here
  if (af == 0) {
    // reciprocal window is (1/bf, infinity); least integer above works
    mpq_class inv_bf = 1 / bf;
    mpz_class fl;
    mpz_fdiv_q(fl.get_mpz_t(), inv_bf.get_num().get_mpz_t(),
               inv_bf.get_den().get_mpz_t());
    return mpq_class(fa) + 1 / mpq_class(fl + 1);
  }
  return mpq_class(fa) + 1 / simplest_in_open(1 / bf, 1 / af);
}

// Streams primes 2, 3, 5, ... to fn until it returns false.
void stream_primes_while(const std::function<bool(std::uint64_t)>& fn) {
  std::uint64_t lo = 2;
  for (;;) {
    std::uint64_t hi = lo + (std::uint64_t(1) << 20);
    primes::PrimeRange seg = primes::sieve_segment(lo, hi);
    for (std::uint64_t p : seg.primes)
      if (!fn(p)) return;
    lo = hi;
  }
}

// Sign of mu(p, eps) - m, decided exactly.  Clearing logs and the rational
// exponent of p^(1+eps) turns mu >= m into
//   p^(u+v) * (p^m - 1)^v  <=  (p^(m+1) - 1)^v      (eps = u/v canonical),
// so the three-way answer is the comparison of those two integers.
int mu_cmp_exact(std::uint64_t p, const mpq_class& eps, std::uint64_t m) {
  if (m == 0) return 1;  // mu > 0 always
  mpq_class e(eps);
  e.canonicalize();
  mpz_class u = e.get_num(), v = e.get_den();
  mpz_class uv = u + v;
  if (!uv.fits_ulong_p() || !v.fits_ulong_p())
    throw std::domain_error("mu_cmp_exact: epsilon too fine for the exact test");
  unsigned long uvl = uv.get_ui(), vl = v.get_ui();
  double bits = static_cast<double>(uvl + vl * static_cast<double>(m)) *
                std::log2(static_cast<double>(p));
  if (bits > static_cast<double>(kMaxExactBits))
    throw std::domain_error("mu_cmp_exact: operands would exceed the size guard");
  mpz_class lhs = pow_z(p, uvl);
  mpz_class t = pow_z(p, m) - 1;
  mpz_pow_ui(t.get_mpz_t(), t.get_mpz_t(), vl);
  lhs *= t;
  mpz_class rhs = pow_z(p, m + 1) - 1;
  mpz_pow_ui(rhs.get_mpz_t(), rhs.get_mpz_t(), vl);
  return mpz_cmp(rhs.get_mpz_t(), lhs.get_mpz_t()) > 0   ? 1
         : mpz_cmp(rhs.get_mpz_t(), lhs.get_mpz_t()) < 0 ? -1
                                                         : 0;
}

// Enclosure of mu(p, eps).  ok goes false when p^(1+eps) - p cannot yet be
// separated from zero at this precision.
Interval mu_interval(std::uint64_t p, const mpq_class& eps, mpfr_prec_t prec,
                     bool* ok) {
  Interval lp = Interval::log_ui(p, prec);
  Interval power = (Interval::of_mpq(1 + eps, prec) * lp).exp();
  Interval den = power.sub_ui(p);
  if (!den.is_positive()) {
    *ok = false;
    return Interval::zero(prec);
  }
  *ok = true;
  return (power.sub_ui(1) / den).log() / lp;
}

// Critical threshold at which the optimal exponent of p rises to m:
// eps_c(p, m) = log(sigma(p^m)/sigma(p^(m-1)))/log p - 1.
Interval eps_c(std::uint64_t p, std::uint64_t m, mpfr_prec_t prec) {
  mpq_class r{sigma_pp(p, m), sigma_pp(p, m - 1)};
  r.canonicalize();
  return (Interval::log_mpq(r, prec) / Interval::log_ui(p, prec)).sub_ui(1);
}

// floor(10^x) as an exact integer; x >= 0.
mpz_class pow10_floor(double x) {
  if (x < 0) throw std::invalid_argument("pow10_floor: negative exponent");
  for (mpfr_prec_t prec = 128; prec <= (mpfr_prec_t(1) << 14); prec *= 2) {
    mpfr_t ex, lo, hi;
    mpfr_init2(ex, prec);
    mpfr_init2(lo, prec);
    mpfr_init2(hi, prec);
    mpfr_set_d(ex, x, MPFR_RNDN);  // doubles are exact here
    mpfr_ui_pow(lo, 10, ex, MPFR_RNDD);
    mpfr_ui_pow(hi, 10, ex, MPFR_RNDU);
    mpfr_floor(lo, lo);
    mpfr_floor(hi, hi);
    mpz_class zlo, zhi;
    mpfr_get_z(zlo.get_mpz_t(), lo, MPFR_RNDZ);
    mpfr_get_z(zhi.get_mpz_t(), hi, MPFR_RNDZ);
    mpfr_clear(ex);
    mpfr_clear(lo);
    mpfr_clear(hi);
    if (zlo == zhi) return zlo;
  }
  throw std::runtime_error("pow10_floor: floor did not stabilize");
}

// Per-prime benefit of exponent e against reference exponent ref_e:
// log sigma(p^ref_e) - log sigma(p^e) + (1+eps)(e - ref_e) log p.
// Zero at e == ref_e, positive elsewhere by per-prime optimality of the
// reference CA number.
Interval dev_delta(std::uint64_t p, unsigned ref_e, unsigned e,
                   const mpq_class& one_plus_eps, mpfr_prec_t prec) {
  Interval acc = Interval::zero(prec);
  if (ref_e != e) {
    acc = Interval::log_mpz(sigma_pp(p, ref_e), prec) -
          Interval::log_mpz(sigma_pp(p, e), prec);
    long diff = static_cast<long>(e) - static_cast<long>(ref_e);
    acc = acc + Interval::of_mpq(one_plus_eps, prec) *
                    Interval::exact_si(diff, prec) * Interval::log_ui(p, prec);
  }
  return acc;
}

// Shared window construction: given enclosures of the true open window
// (wlo, whi), record two rationals strictly inside, in the lower and upper
// third.  Requires the enclosures to be disjoint.
void record_window(const Interval& wlo, const Interval& whi, mpq_class* lo_out,
                   mpq_class* hi_out) {
  mpq_class a = mpq_from_mpfr(wlo.hi());
  mpq_class b = mpq_from_mpfr(whi.lo());
  if (!(a < b)) throw std::runtime_error("parameter window enclosures overlap");
  mpq_class w = b - a;
  *lo_out = simplest_in_open(a, a + w / 3);
  *hi_out = simplest_in_open(b - w / 3, b);
}

}  // namespace

std::uint64_t mu_exponent(std::uint64_t p, const mpq_class& epsilon,
                          mpfr_prec_t precision) {
  if (!arithfun::is_prime_u64(p))
    throw std::invalid_argument("mu_exponent: p must be prime");
  if (epsilon <= 0) throw std::domain_error("mu_exponent: epsilon > 0 required");
  mpfr_prec_t prec = std::max<mpfr_prec_t>(precision, 64);
  long flo = 0, fhi = 0;
  for (;;) {
    bool ok = false;
    Interval mu = mu_interval(p, epsilon, prec, &ok);
    if (ok) {
      flo = mpfr_get_si(mu.lo(), MPFR_RNDD);
      fhi = mpfr_get_si(mu.hi(), MPFR_RNDD);
      if (flo == fhi) return static_cast<std::uint64_t>(flo);
      if (prec >= 1024) break;  // straddles an integer, settle exactly
    }
    if (prec > (mpfr_prec_t(1) << 16))
      throw std::runtime_error("mu_exponent: enclosure did not converge");
    prec *= 2;
  }
  if (fhi - flo != 1)
    throw std::runtime_error("mu_exponent: straddle wider than one integer");
  int s = mu_cmp_exact(p, epsilon, static_cast<std::uint64_t>(fhi));
  if (s == 0)
    throw CriticalEpsilon("mu(" + std::to_string(p) +
                          ", eps) is an exact integer; M_eps is ambiguous");
  return static_cast<std::uint64_t>(s > 0 ? fhi : flo);
}

CANumber ca_number(const mpq_class& epsilon, mpfr_prec_t precision) {
  if (epsilon <= 0) throw std::domain_error("ca_number: epsilon > 0 required");
  std::vector<FactoredInteger::Factor> factors;
  std::uint64_t next_p = 0;
  // mu(p, eps) >= 1 iff (1+1/p)^v >= p^u, which is monotone down in p, so
  // the support is a prefix of the primes.
  stream_primes_while([&](std::uint64_t p) {
    std::uint64_t e = mu_exponent(p, epsilon, precision);
    if (e == 0) {
      next_p = p;
      return false;
    }
    factors.push_back({p, static_cast<unsigned>(e)});
    return true;
  });

  CANumber out;
  out.n = FactoredInteger(factors);
  for (mpfr_prec_t prec = std::max<mpfr_prec_t>(precision, 192); ; prec *= 2) {
    // True window: (max of the next thresholds, min of the current ones).
    // Enclose max/min componentwise.
    Interval wlo = eps_c(next_p, 1, prec);
    bool have_hi = false;
    Interval whi = Interval::zero(prec);
    for (const auto& [p, e] : factors) {
      Interval low = eps_c(p, e + 1, prec);
      if (mpfr_cmp(low.lo(), wlo.lo()) > 0 || mpfr_cmp(low.hi(), wlo.hi()) > 0) {
        mpfr_t a, b;
        mpfr_init2(a, prec);
        mpfr_init2(b, prec);
        mpfr_max(a, low.lo(), wlo.lo(), MPFR_RNDD);
        mpfr_max(b, low.hi(), wlo.hi(), MPFR_RNDU);
        wlo = Interval::from_endpoints(a, b, prec);
        mpfr_clear(a);
        mpfr_clear(b);
      }
      Interval high = eps_c(p, e, prec);
      if (!have_hi) {
        whi = high;
        have_hi = true;
      } else if (mpfr_cmp(high.lo(), whi.lo()) < 0 ||
                 mpfr_cmp(high.hi(), whi.hi()) < 0) {
        mpfr_t a, b;
        mpfr_init2(a, prec);
        mpfr_init2(b, prec);
        mpfr_min(a, high.lo(), whi.lo(), MPFR_RNDD);
        mpfr_min(b, high.hi(), whi.hi(), MPFR_RNDU);
        whi = Interval::from_endpoints(a, b, prec);
        mpfr_clear(a);
        mpfr_clear(b);
      }
    }
    if (!have_hi) {
      // Empty support: the window is (eps_c(2,1), infinity).  Stand in a
      // finite upper edge above the given epsilon.
      mpq_class a = mpq_from_mpfr(wlo.hi());
      mpq_class b = epsilon + 1;
      mpq_class w = b - a;
      out.epsilon_lo = simplest_in_open(a, a + w / 3);
      out.epsilon_hi = simplest_in_open(b - w / 3, b);
      return out;
    }
    if (Interval::certainly_less(wlo, whi)) {
      record_window(wlo, whi, &out.epsilon_lo, &out.epsilon_hi);
      return out;
    }
    if (prec > (mpfr_prec_t(1) << 14))
      throw std::runtime_error("ca_number: parameter window did not separate");
  }
}

std::vector<CANumber> ca_sequence(std::size_t count, mpfr_prec_t precision) {
  if (count == 0) throw std::invalid_argument("ca_sequence: count >= 1");
  struct Thr {
    std::uint64_t p;
    std::uint64_t m;
    Interval enc;
  };
  mpfr_prec_t prec = std::max<mpfr_prec_t>(precision, 128);

  std::vector<std::uint64_t> primes_list;
  stream_primes_while([&](std::uint64_t p) {
    primes_list.push_back(p);
    return primes_list.size() < count + 2;  // frontier never runs dry
  });

  std::vector<Thr> active;
  active.push_back({2, 1, eps_c(2, 1, prec)});
  std::size_t frontier = 0;  // index into primes_list of the newest prime

  std::map<std::uint64_t, unsigned> expo;
  std::vector<Thr> popped;
  std::vector<std::vector<FactoredInteger::Factor>> snapshots;

  auto recompute = [&](Thr& t, mpfr_prec_t target) {
    t.enc = eps_c(t.p, t.m, target);
  };

  while (popped.size() < count + 1) {
    // Certified argmax over the active thresholds.
    std::size_t best = 0;
    for (std::size_t i = 1; i < active.size(); ++i) {
      mpfr_prec_t cur = prec;
      for (;;) {
        if (Interval::certainly_less(active[i].enc, active[best].enc)) break;
        if (Interval::certainly_less(active[best].enc, active[i].enc)) {
          best = i;
          break;
        }
        cur *= 2;
        if (cur > 1024)
          throw std::runtime_error("ca_sequence: threshold tie unresolved");
        recompute(active[i], cur);
        recompute(active[best], cur);
      }
    }
    Thr t = active[best];
    expo[t.p] = static_cast<unsigned>(t.m);
    popped.push_back(t);
    if (popped.size() == count + 1) break;
    active[best] = {t.p, t.m + 1, eps_c(t.p, t.m + 1, prec)};
    if (t.m == 1) {
      // t.p was the frontier; admit the next prime
      ++frontier;
      std::uint64_t q = primes_list.at(frontier);
      active.push_back({q, 1, eps_c(q, 1, prec)});
    }
    std::vector<FactoredInteger::Factor> snap;
    snap.reserve(expo.size());
    for (const auto& [p, e] : expo) snap.push_back({p, e});
    snapshots.push_back(std::move(snap));
  }

  std::vector<CANumber> out;
  out.reserve(count);
  for (std::size_t k = 0; k < count; ++k) {
    CANumber ca;
    ca.n = FactoredInteger(snapshots[k]);
    // Window of CA_{k+1} is (popped[k+1], popped[k]); sharpen until the
    // cached enclosures separate.
    mpfr_prec_t cur = prec;
    while (!Interval::certainly_less(popped[k + 1].enc, popped[k].enc)) {
      cur *= 2;
      if (cur > (mpfr_prec_t(1) << 14))
        throw std::runtime_error("ca_sequence: adjacent thresholds collide");
      recompute(popped[k + 1], cur);
      recompute(popped[k], cur);
    }
    record_window(popped[k + 1].enc, popped[k].enc, &ca.epsilon_lo,
                  &ca.epsilon_hi);
    out.push_back(std::move(ca));
  }
  return out;
}

namespace {

// Band-by-band superabundant walk.  Within one magnitude band every
// confirmed record lies below the band floor, so a candidate must beat the
// single best confirmed ratio; that constant prune collapses the tree.
// Doubles carry generous slack (drift stays near 1e-13, the gates use 1e-9
// and 1e-6); everything that survives is re-verified exactly.
struct SAWalk {
  std::vector<std::uint64_t> primes;
  std::vector<double> lg;         // log10 p
  std::vector<double> cumlg;      // prefix sums of lg
  std::vector<double> lmult_inf;  // prefix sums of log10(p/(p-1))
  std::vector<double> lmult_one;  // prefix sums of log10((p+1)/p)
  double band_lo = 0;
  double band_hi = 0;
  double best_d = -1e9;  // certified lower bound on log10(best ratio)
  std::vector<std::vector<std::uint16_t>> survivors;
  std::vector<std::uint16_t> path;

  void dfs(std::size_t i, unsigned cap, double lv, double lr) {
    if (lv > band_lo - 1e-6 && lr > best_d - 1e-9) survivors.push_back(path);
    if (i >= primes.size()) return;
    double budget = band_hi - lv + 1e-6;
    std::size_t t =
        static_cast<std::size_t>(std::upper_bound(cumlg.begin() + i, cumlg.end(),
                                                  cumlg[i] + budget) -
                                 cumlg.begin()) -
        1;
    if (t < i) return;
    const std::vector<double>& tbl = cap >= 2 ? lmult_inf : lmult_one;
    if (lr + (tbl[t] - tbl[i]) + 1e-9 <= best_d) return;
    double w = lg[i];
    double p = static_cast<double>(primes[i]);
    double acc = lv, sig = 1.0, pe = 1.0;
    for (unsigned e = 1; e <= cap; ++e) {
      acc += w;
      if (acc > band_hi + 1e-6) break;
      pe *= p;
      sig = sig * p + 1.0;
      path.push_back(static_cast<std::uint16_t>(e));
      dfs(i + 1, e, acc, lr + std::log10(sig / pe));
      path.pop_back();
    }
  }
};

}  // namespace

std::vector<SARecord> enumerate_superabundant(double limit_log10,
                                              unsigned workers) {
  // A single deterministic walk; splitting top-level branches across
  // workers would merge to the identical sorted output.
  (void)workers;
  if (!(limit_log10 <= 120.0))
    throw std::domain_error("enumerate_superabundant: limit_log10 <= 120");
  std::vector<SARecord> out;
  if (limit_log10 < 0) return out;

  SAWalk walk;
  {
    // Primes whose product stays under the limit, plus margin so the
    // completion bound always has a next prime to consider.
    double total = 0;
    stream_primes_while([&](std::uint64_t p) {
      walk.primes.push_back(p);
      total += std::log10(static_cast<double>(p));
      return total <= limit_log10 + 1.0;
    });
  }
  std::size_t r = walk.primes.size();
  walk.lg.resize(r);
  walk.cumlg.assign(r + 1, 0.0);
  walk.lmult_inf.assign(r + 1, 0.0);
  walk.lmult_one.assign(r + 1, 0.0);
  for (std::size_t i = 0; i < r; ++i) {
    double p = static_cast<double>(walk.primes[i]);
    walk.lg[i] = std::log10(p);
    walk.cumlg[i + 1] = walk.cumlg[i] + walk.lg[i];
    walk.lmult_inf[i + 1] = walk.lmult_inf[i] + std::log10(p / (p - 1.0));
    walk.lmult_one[i + 1] = walk.lmult_one[i] + std::log10((p + 1.0) / p);
  }

  // n = 1 seeds the records.
  SARecord first;
  first.index = 1;
  first.n = FactoredInteger();
  first.ratio = 1;
  first.log10 = Interval::zero(128);
  out.push_back(first);
  mpq_class best(1);
  walk.best_d = -1e-12;  // log10(1), nudged down

  const double kBand = 2.5;
  mpz_class t_prev = pow10_floor(0.0);  // 1
  for (int j = 1; kBand * (j - 1) < limit_log10; ++j) {
    walk.band_lo = kBand * (j - 1);
    walk.band_hi = std::min(limit_log10, kBand * j);
    mpz_class t_cur = pow10_floor(walk.band_hi);
    walk.survivors.clear();
    walk.dfs(0, 100000, 0.0, 0.0);

    struct Exact {
      mpz_class v;
      mpq_class ratio;
      const std::vector<std::uint16_t>* e;
    };
    std::vector<Exact> band;
    band.reserve(walk.survivors.size());
    for (const auto& vec : walk.survivors) {
      mpz_class v(1), sig(1);
      for (std::size_t i = 0; i < vec.size(); ++i) {
        v *= pow_z(walk.primes[i], vec[i]);
        sig *= sigma_pp(walk.primes[i], vec[i]);
      }
      if (!(t_prev < v && v <= t_cur)) continue;
      mpq_class ratio{sig, v};
      ratio.canonicalize();
      band.push_back({std::move(v), std::move(ratio), &vec});
    }
    std::sort(band.begin(), band.end(),
              [](const Exact& a, const Exact& b) { return a.v < b.v; });
    for (const Exact& c : band) {
      if (!(c.ratio > best)) continue;
      best = c.ratio;
      std::vector<FactoredInteger::Factor> factors;
      factors.reserve(c.e->size());
      for (std::size_t i = 0; i < c.e->size(); ++i)
        factors.push_back({walk.primes[i], (*c.e)[i]});
      SARecord rec;
      rec.index = out.size() + 1;
      rec.n = FactoredInteger(factors);
      rec.ratio = best;
      rec.log10 = rec.n.log10();
      out.push_back(std::move(rec));
      walk.best_d = std::log10(mpq_get_d(best.get_mpq_t())) - 1e-12;
    }
    t_prev = t_cur;
  }
  return out;
}

rigor::Interval benefit(const arithfun::FactoredInteger& n,
                        const BenefitScanConfig& config,
                        mpfr_prec_t precision) {
  if (config.epsilon <= 0)
    throw std::domain_error("benefit: epsilon > 0 required");
  mpq_class ope = 1 + config.epsilon;
  const FactoredInteger& ref = config.reference.n;
  Interval acc = Interval::zero(precision);
  // union of supports, both factor lists ascending
  std::size_t i = 0, j = 0;
  const auto& fa = ref.factors();
  const auto& fb = n.factors();
  while (i < fa.size() || j < fb.size()) {
    std::uint64_t p;
    unsigned a = 0, b = 0;
    if (i < fa.size() && (j >= fb.size() || fa[i].first <= fb[j].first)) {
      p = fa[i].first;
      a = fa[i].second;
      if (j < fb.size() && fb[j].first == p) b = fb[j++].second;
      ++i;
    } else {
      p = fb[j].first;
      b = fb[j++].second;
    }
    if (a != b) acc.add_assign(dev_delta(p, a, b, ope, precision));
  }
  return acc;
}

int benefit_sign(const arithfun::FactoredInteger& n,
                 const BenefitScanConfig& config) {
  if (config.epsilon <= 0)
    throw std::domain_error("benefit_sign: epsilon > 0 required");
  mpq_class e(config.epsilon);
  e.canonicalize();
  mpz_class u = e.get_num(), v = e.get_den();
  mpz_class uv = u + v;
  if (!uv.fits_ulong_p() || !v.fits_ulong_p())
    throw std::domain_error("benefit_sign: epsilon too fine for the exact test");
  unsigned long vl = v.get_ui(), uvl = uv.get_ui();
  const FactoredInteger& ref = config.reference.n;

  // ben >= 0  <=>  sigma(N)^v n^(v+u) >= sigma(n)^v N^(v+u); factor both
  // sides per prime so the powers stay as small as the deviations allow.
  double bits = static_cast<double>(vl) *
                    (mpfr_get_d(ref.log10().hi(), MPFR_RNDU) +
                     mpfr_get_d(n.log10().hi(), MPFR_RNDU) + 4) * 3.33 +
                static_cast<double>(uvl) *
                    (mpfr_get_d(ref.log10().hi(), MPFR_RNDU) +
                     mpfr_get_d(n.log10().hi(), MPFR_RNDU)) * 3.33;
  if (bits > static_cast<double>(kMaxExactBits))
    throw std::domain_error("benefit_sign: operands would exceed the size guard");

  mpz_class lhs(1), rhs(1), t;
  std::size_t i = 0, j = 0;
  const auto& fa = ref.factors();
  const auto& fb = n.factors();
  while (i < fa.size() || j < fb.size()) {
    std::uint64_t p;
    unsigned a = 0, b = 0;
    if (i < fa.size() && (j >= fb.size() || fa[i].first <= fb[j].first)) {
      p = fa[i].first;
      a = fa[i].second;
      if (j < fb.size() && fb[j].first == p) b = fb[j++].second;
      ++i;
    } else {
      p = fb[j].first;
      b = fb[j++].second;
    }
    mpz_pow_ui(t.get_mpz_t(), sigma_pp(p, a).get_mpz_t(), vl);
    lhs *= t;
    lhs *= pow_z(p, static_cast<std::uint64_t>(b) * uvl);
    mpz_pow_ui(t.get_mpz_t(), sigma_pp(p, b).get_mpz_t(), vl);
    rhs *= t;
    rhs *= pow_z(p, static_cast<std::uint64_t>(a) * uvl);
  }
  int c = mpz_cmp(lhs.get_mpz_t(), rhs.get_mpz_t());
  return c > 0 ? 1 : c < 0 ? -1 : 0;
}

std::vector<arithfun::FactoredInteger> benefit_scan(
    const BenefitScanConfig& config) {
  if (config.epsilon <= 0 || config.budget <= 0)
    throw std::invalid_argument("benefit_scan: epsilon and budget must be > 0");
  if (!(config.lo < config.hi))
    throw std::invalid_argument("benefit_scan: lo < hi required");
  const mpfr_prec_t prec = 160;
  const mpq_class& beta = config.budget;
  mpq_class ope = 1 + config.epsilon;
  const FactoredInteger& ref = config.reference.n;

  // The pruning below assumes per-prime deviations from the reference cost
  // benefit monotonically, which holds only when the reference exponents
  // are the optimal ones for epsilon; anything else must be rejected here
  // or the DFS can wander an unbounded tree.
  for (const auto& [p, e] : ref.factors())
    if (mu_exponent(p, config.epsilon, prec) != e)
      throw std::invalid_argument(
          "benefit_scan: reference is not the champion for epsilon "
          "(exponent of " + std::to_string(p) + " is off)");
  {
    std::uint64_t next_p =
        ref.factors().empty() ? 2 : ref.factors().back().first + 1;
    while (!arithfun::is_prime_u64(next_p)) ++next_p;
    if (mu_exponent(next_p, config.epsilon, prec) != 0)
      throw std::invalid_argument(
          "benefit_scan: reference is not the champion for epsilon "
          "(support should include " + std::to_string(next_p) + ")");
  }

  struct DevOption {
    unsigned e;
    bool is_ref;  // exact zero contribution
    Interval delta;
  };
  struct DevPrime {
    std::uint64_t p;
    unsigned ref_e;
    std::vector<DevOption> opts;
  };
  std::vector<DevPrime> table;

  // certainly beta < delta, escalating on a straddle so loops terminate
  auto over_budget = [&](std::uint64_t p, unsigned a, unsigned b) {
    for (mpfr_prec_t cur = prec; cur <= 1024; cur *= 2) {
      Interval d = dev_delta(p, a, b, ope, cur);
      if (Interval::certainly_less(beta, d)) return true;
      if (Interval::certainly_less(d, beta)) return false;
    }
    throw rigor::UndecidedError("benefit_scan: per-prime benefit equals budget");
  };

  for (const auto& [p, a] : ref.factors()) {
    DevPrime dp{p, a, {}};
    dp.opts.push_back({a, true, Interval::zero(prec)});
    for (unsigned e = a; e-- > 0;) {
      if (over_budget(p, a, e)) break;
      dp.opts.push_back({e, false, dev_delta(p, a, e, ope, prec)});
    }
    for (unsigned e = a + 1;; ++e) {
      if (over_budget(p, a, e)) break;
      dp.opts.push_back({e, false, dev_delta(p, a, e, ope, prec)});
      if (e > a + 4096)
        throw std::runtime_error("benefit_scan: runaway exponent ladder");
    }
    if (dp.opts.size() > 1) table.push_back(std::move(dp));
  }
  // Primes beyond the support join in increasing order until the cheapest
  // inclusion exceeds the budget; that cutoff is Lemma-finiteness made
  // constructive.
  {
    std::uint64_t largest = ref.factors().empty() ? 1 : ref.factors().back().first;
    bool stop = false;
    stream_primes_while([&](std::uint64_t p) {
      if (p <= largest) return true;
      if (p > kScanPrimeBound) {
        stop = true;
        return false;
      }
      if (over_budget(p, 0, 1)) {
        stop = false;
        return false;
      }
      DevPrime dp{p, 0, {}};
      dp.opts.push_back({0, true, Interval::zero(prec)});
      for (unsigned e = 1;; ++e) {
        if (over_budget(p, 0, e)) break;
        dp.opts.push_back({e, false, dev_delta(p, 0, e, ope, prec)});
        if (e > 4096)
          throw std::runtime_error("benefit_scan: runaway exponent ladder");
      }
      table.push_back(std::move(dp));
      return true;
    });
    if (stop)
      throw BudgetTooLarge("benefit_scan: cutoff prime exceeds the bound");
  }

  // DFS over per-prime options; the accumulated enclosure only grows, so a
  // certain budget violation prunes the whole branch.
  std::vector<std::pair<std::uint64_t, unsigned>> devs;
  std::vector<std::pair<mpz_class, FactoredInteger>> hits;

  // Recomputes the full sum at the requested precision for a leaf whose
  // 160-bit enclosure straddles the budget.
  auto total_at = [&](mpfr_prec_t cur) {
    Interval t = Interval::zero(cur);
    for (const auto& [p, e] : devs)
      t.add_assign(dev_delta(p, ref.exponent_of(p), e, ope, cur));
    return t;
  };

  std::function<void(std::size_t, const Interval&)> rec =
      [&](std::size_t idx, const Interval& acc) {
        if (Interval::certainly_less(beta, acc)) return;
        if (idx == table.size()) {
          bool within = false;
          if (Interval::certainly_less(acc, beta) || devs.empty()) {
            within = true;  // ben(N) = 0 < beta exactly
          } else {
            bool decided = false;
            for (mpfr_prec_t cur = prec * 2; cur <= 4096; cur *= 2) {
              Interval t = total_at(cur);
              if (Interval::certainly_less(t, beta)) {
                within = decided = true;
                break;
              }
              if (Interval::certainly_less(beta, t)) {
                decided = true;
                break;
              }
            }
            if (!decided)
              throw rigor::UndecidedError(
                  "benefit_scan: benefit equals budget at max precision");
          }
          if (!within) return;
          FactoredInteger n = ref;
          for (const auto& [p, e] : devs) n = n.with_exponent(p, e);
          mpz_class v = n.value();
          if (config.lo < v && v < config.hi)
            hits.emplace_back(std::move(v), std::move(n));
          return;
        }
        const DevPrime& dp = table[idx];
        for (const DevOption& o : dp.opts) {
          if (o.is_ref) {
            rec(idx + 1, acc);
          } else {
            devs.emplace_back(dp.p, o.e);
            rec(idx + 1, acc + o.delta);
            devs.pop_back();
          }
        }
      };
  rec(0, Interval::zero(prec));

  std::sort(hits.begin(), hits.end(),
            [](const auto& a, const auto& b) { return a.first < b.first; });
  std::vector<FactoredInteger> out;
  out.reserve(hits.size());
  for (auto& h : hits) out.push_back(std::move(h.second));
  return out;
}

RobinVerdict robin_check(const arithfun::FactoredInteger& n,
                         mpfr_prec_t precision, mpfr_prec_t max_precision) {
  RobinVerdict rv;
  rv.verdict = bounds::check_inequality(bounds::InequalityId::ROBIN_1_7, n,
                                        precision, max_precision);
  rv.in_domain = n.value() > 5040;
  return rv;
}

IntervalBoundRow sa_interval_bound(std::uint64_t a, std::uint64_t b,
                                   RowThreshold kind,
                                   const std::vector<SARecord>& records,
                                   mpfr_prec_t precision) {
  if (a < 2 || a >= b)
    throw std::invalid_argument("sa_interval_bound: need 2 <= a < b");
  FactoredInteger nb = arithfun::primorial(b);
  mpz_class nbv = nb.value();
  auto it = std::lower_bound(
      records.begin(), records.end(), nbv,
      [](const SARecord& r, const mpz_class& v) { return r.n.value() < v; });
  if (it == records.end())
    throw std::runtime_error("sa_interval_bound: SA list does not reach N_b");

  IntervalBoundRow row;
  row.a = a;
  row.b = b;
  row.m = it->index;
  row.log10_nb = nb.log10();
  row.log10_sa = it->log10;
  row.ratio = it->ratio;

  mpfr_prec_t prec = std::max<mpfr_prec_t>(precision, 128);
  auto eval = [&](mpfr_prec_t cur) {
    Interval x = Interval::exact_ui(a, cur);
    if (kind == RowThreshold::ExpGammaF)
      return rigor::constants(cur).exp_gamma *
             bounds::eval_bound(bounds::BoundId::THM101_RHS, x, cur);
    return bounds::eval_bound(bounds::BoundId::G_COR105, x, cur);
  };
  row.threshold = eval(prec);
  for (mpfr_prec_t cur = prec;; cur *= 2) {
    Interval t = cur == prec ? row.threshold : eval(cur);
    if (Interval::certainly_less(row.ratio, t)) {
      row.ratio_below = true;
      break;
    }
    if (Interval::certainly_less(t, row.ratio)) {
      row.ratio_below = false;
      break;
    }
    if (cur >= 1024)
      throw rigor::UndecidedError("sa_interval_bound: ratio vs threshold");
  }
  return row;
}

void write_sa_cache(const std::string& path,
                    const std::vector<SARecord>& records) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw std::runtime_error("write_sa_cache: cannot open " + path);
  mpz_class cutoff = pow_z(10, 24);
  for (const SARecord& r : records) {
    out << r.index << '\t' << r.n.str() << '\t';
    if (r.n.value() <= cutoff) {
      out << r.ratio.get_num().get_str() << '/' << r.ratio.get_den().get_str();
    } else {
      out << Interval::of_mpq(r.ratio, 256).truncated_decimal(29);
    }
    out << '\t' << r.log10.truncated_decimal(9) << '\n';
  }
  if (!out) throw std::runtime_error("write_sa_cache: write failed: " + path);
}

std::vector<SARecord> read_sa_cache(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("read_sa_cache: cannot open " + path);
  std::vector<SARecord> out;
  std::string line;
  std::size_t lineno = 0;
  mpz_class cutoff = pow_z(10, 24);
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    std::istringstream ss(line);
    std::string idx_s, fact_s, ratio_s, log_s;
    if (!std::getline(ss, idx_s, '\t') || !std::getline(ss, fact_s, '\t') ||
        !std::getline(ss, ratio_s, '\t') || !std::getline(ss, log_s))
      throw std::runtime_error("read_sa_cache: malformed line " +
                               std::to_string(lineno));
    SARecord rec;
    rec.index = std::stoull(idx_s);
    if (rec.index != out.size() + 1)
      throw std::runtime_error("read_sa_cache: index gap at line " +
                               std::to_string(lineno));
    rec.n = FactoredInteger::parse(fact_s);
    rec.ratio = arithfun::sigma_ratio(rec.n);
    rec.log10 = rec.n.log10();
    // integrity: the stored ratio column must match the factorization
    std::string expect;
    if (rec.n.value() <= cutoff) {
      expect = rec.ratio.get_num().get_str() + "/" + rec.ratio.get_den().get_str();
    } else {
      expect = Interval::of_mpq(rec.ratio, 256).truncated_decimal(29);
    }
    if (ratio_s != expect)
      throw std::runtime_error("read_sa_cache: ratio mismatch at line " +
                               std::to_string(lineno));
    if (log_s != rec.log10.truncated_decimal(9))
      throw std::runtime_error("read_sa_cache: log10 mismatch at line " +
                               std::to_string(lineno));
    out.push_back(std::move(rec));
  }
  return out;
}

}  // namespace primlab::abundant
