#include "primlab/primes.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <limits>
#include <optional>
#include <sstream>
#include <stdexcept>

namespace primlab::primes {

namespace {

using rigor::Interval;

// Primes below 2^20, sieved once.  Their squares cover segments up to ~1.1e12
// directly; larger bounds stream a second level on top of these.
const std::vector<std::uint32_t>& tiny_primes() {
  static const std::vector<std::uint32_t> table = [] {
    constexpr std::uint32_t n = 1u << 20;
    std::vector<bool> comp(n, false);
    std::vector<std::uint32_t> out;
    for (std::uint32_t i = 2; i < n; ++i) {
      if (comp[i]) continue;
      out.push_back(i);
      for (std::uint64_t j = std::uint64_t(i) * i; j < n; j += i) comp[j] = true;
    }
    return out;
  }();
  return table;
}

std::uint64_t isqrt_u64(std::uint64_t n) {
  if (n == 0) return 0;
  auto r = static_cast<std::uint64_t>(std::sqrt(static_cast<double>(n)));
  while (r > 0 && static_cast<unsigned __int128>(r) * r > n) --r;
  while (static_cast<unsigned __int128>(r + 1) * (r + 1) <= n) ++r;
  return r;
}

// Sieve the odd values of [lo, hi).  supply_base(bound, g) must call g(p) for
// every prime p <= bound in ascending order; p = 2 is ignored by the crossing
// step since even values are never candidates.
template <typename BaseSupply>
void sieve_span(std::uint64_t lo, std::uint64_t hi, BaseSupply&& supply_base,
                std::vector<std::uint64_t>& out) {
  out.clear();
  if (lo < 2) lo = 2;
  if (lo >= hi) return;
  if (lo == 2) out.push_back(2);
  std::uint64_t first = std::max<std::uint64_t>(lo, 3) | 1;
  if (first >= hi) return;
  std::uint64_t n = (hi - first + 1) / 2;  // candidates first, first+2, ...
  std::vector<bool> comp(n, false);
  std::uint64_t bound = isqrt_u64(hi - 1);
  supply_base(bound, [&](std::uint64_t p) {
    if (p == 2) return;
    unsigned __int128 start = static_cast<unsigned __int128>(p) * p;
    if (start < first) {
      std::uint64_t q = (first + p - 1) / p;  // q >= 2 because p < first
      if ((q & 1) == 0) ++q;
      start = static_cast<unsigned __int128>(p) * q;
    }
    const unsigned __int128 step = static_cast<unsigned __int128>(p) << 1;
    for (unsigned __int128 m = start; m < hi; m += step) {
      comp[static_cast<std::uint64_t>(m - first) >> 1] = true;
    }
  });
  for (std::uint64_t i = 0; i < n; ++i) {
    if (!comp[i]) out.push_back(first + 2 * i);
  }
}

// Stream every prime <= limit in ascending order.  Valid while sqrt(limit)
// stays below the tiny table, i.e. limit <= ~1.1e12; callers stay well under.
template <typename F>
void stream_primes_to(std::uint64_t limit, F&& fn) {
  const auto& tp = tiny_primes();
  if (isqrt_u64(limit) > tp.back()) {
    throw std::invalid_argument("stream_primes_to: bound too large");
  }
  std::vector<std::uint64_t> buf;
  for (std::uint64_t lo = 2; lo <= limit;) {
    std::uint64_t hi = std::min(limit - lo + 1, kSegmentSpan);
    hi = lo + hi;  // exclusive
    sieve_span(
        lo, hi,
        [&](std::uint64_t bound, auto&& g) {
          for (std::uint32_t p : tp) {
            if (p > bound) break;
            g(p);
          }
        },
        buf);
    for (std::uint64_t p : buf) fn(p);
    lo = hi;
  }
}

// Iterate primes in [lo, hi) block by block; fn(blo, bhi, primes) returns
// false to stop early.  Block boundaries are aligned to absolute multiples of
// kSegmentSpan so schedules do not depend on the starting point.
template <typename F>
void for_prime_blocks_stop(std::uint64_t lo, std::uint64_t hi, F&& fn) {
  if (lo < 2) lo = 2;
  if (lo >= hi) return;
  const auto& tp = tiny_primes();
  std::uint64_t sb_all = isqrt_u64(hi - 1);
  std::vector<std::uint32_t> extra;  // base primes above the tiny table
  if (sb_all > tp.back()) {
    if (sb_all > (1ull << 26)) {
      throw std::invalid_argument("prime iteration bound too large for block mode");
    }
    stream_primes_to(sb_all, [&](std::uint64_t p) {
      if (p > tp.back()) extra.push_back(static_cast<std::uint32_t>(p));
    });
  }
  auto supply = [&](std::uint64_t bound, auto&& g) {
    for (std::uint32_t p : tp) {
      if (p > bound) return;
      g(p);
    }
    for (std::uint32_t p : extra) {
      if (p > bound) return;
      g(p);
    }
  };
  std::vector<std::uint64_t> buf;
  for (std::uint64_t blo = lo; blo < hi;) {
    std::uint64_t bhi = std::min(hi, (blo / kSegmentSpan + 1) * kSegmentSpan);
    sieve_span(blo, bhi, supply, buf);
    if (!fn(blo, bhi, buf)) return;
    blo = bhi;
  }
}

// Product of ps[b..e) as an exact integer, combined pairwise so huge blocks
// stay cheap.
mpz_class prime_product(const std::vector<std::uint64_t>& ps, std::size_t b,
                        std::size_t e) {
  std::vector<mpz_class> stk;
  std::uint64_t acc = 1;
  for (std::size_t i = b; i < e; ++i) {
    std::uint64_t p = ps[i];
    if (acc > std::numeric_limits<std::uint64_t>::max() / p) {
      stk.emplace_back(static_cast<unsigned long>(acc));
      acc = p;
    } else {
      acc *= p;
    }
  }
  stk.emplace_back(static_cast<unsigned long>(acc));
  while (stk.size() > 1) {
    std::vector<mpz_class> nxt;
    nxt.reserve(stk.size() / 2 + 1);
    for (std::size_t i = 0; i + 1 < stk.size(); i += 2) {
      nxt.push_back(stk[i] * stk[i + 1]);
    }
    if (stk.size() & 1) nxt.push_back(stk.back());
    stk.swap(nxt);
  }
  return stk[0];
}

std::atomic<std::uint64_t> g_sieve_limit{10'000'000'000ull};

std::string hex_of(const mpfr_t& v) {
  char* s = nullptr;
  mpfr_asprintf(&s, "%Ra", v);
  std::string out(s);
  mpfr_free_str(s);
  return out;
}

}  // namespace

std::uint64_t default_sieve_limit() { return g_sieve_limit.load(); }

void set_default_sieve_limit(std::uint64_t limit) { g_sieve_limit.store(limit); }

PrimeRange sieve_segment(std::uint64_t lo, std::uint64_t hi) {
  if (lo >= hi) throw std::invalid_argument("sieve_segment: need lo < hi");
  if (hi - lo > kSegmentSpan) {
    throw std::length_error("sieve_segment: span exceeds segment budget");
  }
  PrimeRange r;
  r.lo = lo;
  r.hi = hi;
  const auto& tp = tiny_primes();
  std::uint64_t sb = isqrt_u64(hi - 1);
  if (sb <= tp.back()) {
    sieve_span(
        lo, hi,
        [&](std::uint64_t bound, auto&& g) {
          for (std::uint32_t p : tp) {
            if (p > bound) break;
            g(p);
          }
        },
        r.primes);
  } else {
    // Base primes up to sqrt(hi) ~ 3.2e9 near 10^19; stream them instead of
    // storing (the full list would not fit in memory).
    sieve_span(
        lo, hi,
        [&](std::uint64_t bound, auto&& g) { stream_primes_to(bound, g); },
        r.primes);
  }
  return r;
}

void for_primes(std::uint64_t lo, std::uint64_t hi,
                const std::function<void(std::uint64_t)>& fn) {
  for_prime_blocks_stop(lo, hi,
                        [&](std::uint64_t, std::uint64_t,
                            const std::vector<std::uint64_t>& ps) {
                          for (std::uint64_t p : ps) fn(p);
                          return true;
                        });
}

std::uint64_t prime_count(std::uint64_t x) {
  if (x > default_sieve_limit()) {
    throw std::out_of_range("prime_count: beyond sieve limit");
  }
  std::uint64_t count = 0;
  if (x < 2) return 0;
  for_prime_blocks_stop(2, x + 1,
                        [&](std::uint64_t, std::uint64_t,
                            const std::vector<std::uint64_t>& ps) {
                          count += ps.size();
                          return true;
                        });
  return count;
}

std::uint64_t prime_count_meissel(std::uint64_t x) {
  if (x < 2) return 0;
  if (x > 100'000'000'000'000ull) {
    throw std::out_of_range("prime_count_meissel: beyond supported range");
  }
  const std::uint64_t r = isqrt_u64(x);
  // small[v] tracks S(v), large[i] tracks S(x / i), where S(v) counts
  // integers in [2, v] with no prime factor below the current sieving prime.
  std::vector<std::uint64_t> small(r + 1), large(r + 1);
  for (std::uint64_t v = 0; v <= r; ++v) small[v] = (v == 0) ? 0 : v - 1;
  for (std::uint64_t i = 1; i <= r; ++i) large[i] = x / i - 1;
  for (std::uint64_t p = 2; p <= r; ++p) {
    if (small[p] == small[p - 1]) continue;  // composite
    const std::uint64_t sp = small[p - 1];
    const std::uint64_t p2 = p * p;
    const std::uint64_t imax = std::min(r, x / p2);
    for (std::uint64_t i = 1; i <= imax; ++i) {
      const std::uint64_t ip = i * p;
      const std::uint64_t contrib = (ip <= r) ? large[ip] : small[x / ip];
      large[i] -= contrib - sp;
    }
    for (std::uint64_t v = r; v >= p2; --v) small[v] -= small[v / p] - sp;
  }
  return large[1];
}

namespace {

// Locate the k-th prime by walking block-wise from x0, where c0 = pi(x0).
// x_hi bounds the ascending walk (callers pick a horizon that provably
// contains the answer).
std::uint64_t walk_to_kth(std::uint64_t k, std::uint64_t x0, std::uint64_t c0,
                          std::uint64_t x_hi) {
  if (c0 < k) {
    std::uint64_t seen = c0;
    std::uint64_t ans = 0;
    for_prime_blocks_stop(x0 + 1, x_hi,
                          [&](std::uint64_t, std::uint64_t,
                              const std::vector<std::uint64_t>& ps) {
                            if (seen + ps.size() >= k) {
                              ans = ps[k - seen - 1];
                              return false;
                            }
                            seen += ps.size();
                            return true;
                          });
    if (ans == 0) throw std::logic_error("walk_to_kth: horizon too small");
    return ans;
  }
  // pi(x0) >= k: the answer is at or below x0; scan blocks downward.
  const auto& tp = tiny_primes();
  std::uint64_t sb = isqrt_u64(x0);
  std::vector<std::uint32_t> extra;
  if (sb > tp.back()) {
    stream_primes_to(sb, [&](std::uint64_t p) {
      if (p > tp.back()) extra.push_back(static_cast<std::uint32_t>(p));
    });
  }
  auto supply = [&](std::uint64_t bound, auto&& g) {
    for (std::uint32_t p : tp) {
      if (p > bound) return;
      g(p);
    }
    for (std::uint32_t p : extra) {
      if (p > bound) return;
      g(p);
    }
  };
  std::vector<std::uint64_t> buf;
  std::uint64_t c = c0;       // pi(bhi - 1)
  std::uint64_t bhi = x0 + 1;  // exclusive
  while (bhi > 2) {
    std::uint64_t blo = (bhi - 2 > kSegmentSpan) ? bhi - kSegmentSpan : 2;
    sieve_span(blo, bhi, supply, buf);
    if (c - buf.size() < k) {
      return buf[k - (c - buf.size()) - 1];
    }
    c -= buf.size();
    bhi = blo;
  }
  throw std::logic_error("walk_to_kth: ran out of primes");
}

}  // namespace

std::uint64_t nth_prime(std::uint64_t k) {
  if (k == 0) throw std::invalid_argument("nth_prime: k starts at 1");
  static constexpr std::uint64_t first_five[] = {2, 3, 5, 7, 11};
  if (k <= 5) return first_five[k - 1];
  const double lk = std::log(static_cast<double>(k));
  const double llk = std::log(lk);
  // p_k < k (log k + loglog k) for k >= 6, so this bound is safe.
  const auto ub = static_cast<std::uint64_t>(std::ceil(k * (lk + llk))) + 16;
  if (ub > default_sieve_limit()) {
    throw std::out_of_range("nth_prime: beyond sieve limit");
  }
  if (ub <= 4'000'000'000ull) {
    return walk_to_kth(k, 1, 0, ub);
  }
  // Too far to sieve from scratch: land nearby with a combinatorial count,
  // then walk the remaining gap.
  const double est = k * (lk + llk - 1.0 + (llk - 2.0) / lk);
  const auto x0 = static_cast<std::uint64_t>(est);
  const std::uint64_t c0 = prime_count_meissel(x0);
  const std::uint64_t margin = std::max<std::uint64_t>(x0 / 500, 1'000'000'000ull);
  return walk_to_kth(k, x0, c0, x0 + margin);
}

rigor::Interval theta(std::uint64_t x, mpfr_prec_t precision) {
  if (x < 2) throw std::domain_error("theta: x >= 2 required");
  if (x > default_sieve_limit()) {
    throw std::out_of_range("theta: beyond sieve limit");
  }
  const mpfr_prec_t wp = precision + 32;
  std::vector<Interval> parts;
  for_prime_blocks_stop(
      2, x + 1,
      [&](std::uint64_t, std::uint64_t, const std::vector<std::uint64_t>& ps) {
        if (!ps.empty()) {
          parts.push_back(
              Interval::log_mpz(prime_product(ps, 0, ps.size()), wp));
        }
        return true;
      });
  if (parts.empty()) throw std::logic_error("theta: no primes found");
  // Fixed pairwise tree: deterministic and keeps rounding growth logarithmic.
  while (parts.size() > 1) {
    std::vector<Interval> nxt;
    nxt.reserve(parts.size() / 2 + 1);
    for (std::size_t i = 0; i + 1 < parts.size(); i += 2) {
      nxt.push_back(parts[i] + parts[i + 1]);
    }
    if (parts.size() & 1) nxt.push_back(parts.back());
    parts.swap(nxt);
  }
  return Interval::from_endpoints(parts[0].lo(), parts[0].hi(), precision);
}

std::string cache_dir_from_env() {
  const char* v = std::getenv("PRIMLAB_CACHE_DIR");
  return v ? std::string(v) : std::string();
}

std::vector<ThetaCheckpoint> read_theta_checkpoints(const std::string& path) {
  std::vector<ThetaCheckpoint> out;
  std::ifstream in(path);
  if (!in) return out;
  std::string line;
  while (std::getline(in, line)) {
    std::istringstream ls(line);
    std::uint64_t x = 0, count = 0;
    std::string lo_hex, hi_hex;
    if (!(ls >> x >> count >> lo_hex >> hi_hex)) continue;
    mpfr_t lo, hi;
    mpfr_init2(lo, 256);
    mpfr_init2(hi, 256);
    const bool ok = mpfr_set_str(lo, lo_hex.c_str(), 0, MPFR_RNDD) == 0 &&
                    mpfr_set_str(hi, hi_hex.c_str(), 0, MPFR_RNDU) == 0;
    if (ok) {
      ThetaCheckpoint ck;
      ck.x = x;
      ck.count = count;
      ck.theta = Interval::from_endpoints(lo, hi, 256);
      out.push_back(std::move(ck));
    }
    mpfr_clear(lo);
    mpfr_clear(hi);
  }
  return out;
}

namespace {

struct ScanPass {
  bool straddled = false;
  std::optional<std::uint64_t> violation;
  std::uint64_t count = 0;
};

// One full pass at working precision wp.  Appends checkpoints when dir is
// set; resumes from the newest usable checkpoint when allow_resume.
ScanPass theta_scan_pass(std::uint64_t limit, mpfr_prec_t wp, bool allow_resume,
                         const std::string& dir) {
  ScanPass pass;
  Interval T = Interval::zero(wp);
  std::uint64_t next = 2;
  std::string path;
  if (!dir.empty()) {
    std::filesystem::create_directories(dir);
    path = dir + "/theta_scan.ckpt";
  }
  if (allow_resume && !path.empty()) {
    const auto cks = read_theta_checkpoints(path);
    const ThetaCheckpoint* best = nullptr;
    for (const auto& c : cks) {
      if (c.x <= limit && (!best || c.x > best->x)) best = &c;
    }
    if (best) {
      // Outward rounding keeps the resumed value a valid enclosure at wp.
      T = Interval::from_endpoints(best->theta.lo(), best->theta.hi(), wp);
      pass.count = best->count;
      next = best->x + 1;
    }
  }
  while (next <= limit && !pass.straddled && !pass.violation) {
    const std::uint64_t region_hi =
        std::min(limit, (next / kCheckpointStride + 1) * kCheckpointStride);
    for_prime_blocks_stop(
        next, region_hi + 1,
        [&](std::uint64_t, std::uint64_t,
            const std::vector<std::uint64_t>& ps) {
          if (ps.empty()) return true;
          // Upper bound on log of any prime in this block.
          const double lub = Interval::log_ui(ps.back(), 64).hi_d();
          std::size_t i = 0;
          while (i < ps.size()) {
            const std::uint64_t q = ps[i];
            if (q >= 65536 && lub > 2.5) {
              // theta(q') < q' follows for a whole run of primes at once:
              // with Th >= theta so far and prime gaps >= 2, the m-th prime
              // ahead satisfies theta <= Th + m*lub and exceeds q + 2(m-1),
              // so any m below the cap below is certified without touching
              // the enclosure per prime.  Slack absorbs double rounding.
              const double th = T.hi_d();
              const double slack =
                  64.0 + std::ldexp(static_cast<double>(q), -40);
              const double cap =
                  (static_cast<double>(q) - slack - 2.0 - th) / (lub - 2.0);
              if (cap >= 16.0) {
                const auto m = static_cast<std::size_t>(cap);
                const std::size_t take = std::min(m, ps.size() - i);
                T.add_assign(
                    Interval::log_mpz(prime_product(ps, i, i + take), wp));
                pass.count += take;
                i += take;
                continue;
              }
            }
            T.add_assign(Interval::log_ui(q, wp));
            ++pass.count;
            if (mpfr_cmp_ui(T.hi(), q) < 0) {
              ++i;
              continue;
            }
            if (mpfr_cmp_ui(T.lo(), q) >= 0) {
              pass.violation = q;
              return false;
            }
            pass.straddled = true;
            return false;
          }
          return true;
        });
    if (pass.straddled || pass.violation) break;
    if (!path.empty() && region_hi % kCheckpointStride == 0) {
      std::ofstream ck(path, std::ios::app);
      ck << region_hi << '\t' << pass.count << '\t' << hex_of(T.lo()) << '\t'
         << hex_of(T.hi()) << '\n';
    }
    next = region_hi + 1;
  }
  return pass;
}

}  // namespace

bounds::VerificationReport theta_lt_x_scan(std::uint64_t limit,
                                           mpfr_prec_t precision,
                                           mpfr_prec_t max_precision,
                                           const std::string& cache_dir) {
  if (limit < 2) throw std::domain_error("theta_lt_x_scan: limit >= 2 required");
  if (limit > default_sieve_limit()) {
    throw std::out_of_range("theta_lt_x_scan: beyond sieve limit");
  }
  const auto t0 = std::chrono::steady_clock::now();
  bounds::VerificationReport rep;
  rep.inequality = "theta_lt_x";
  rep.lo = 2;
  rep.hi = static_cast<unsigned long>(limit);
  for (mpfr_prec_t wp = precision;; wp *= 2) {
    if (wp > max_precision) {
      throw rigor::UndecidedError(
          "theta_lt_x_scan: comparison straddles at max precision");
    }
    // Resume only at the base precision; an escalated pass rebuilds from
    // scratch so its enclosure is genuinely tighter.
    ScanPass pass = theta_scan_pass(limit, wp, wp == precision, cache_dir);
    if (pass.straddled) continue;
    rep.precision_used = wp;
    if (pass.violation) {
      rep.verdict = bounds::Verdict::FailuresAt;
      rep.failures.emplace_back(static_cast<unsigned long>(*pass.violation));
    } else {
      rep.verdict = bounds::Verdict::AllHold;
    }
    break;
  }
  rep.runtime_s =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
          .count();
  return rep;
}

}  // namespace primlab::primes
