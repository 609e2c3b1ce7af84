#include "primlab/arithfun.hpp"

#include <algorithm>
#include <mutex>
#include <numeric>
#include <sstream>
#include <stdexcept>

#include "primlab/primes.hpp"

namespace primlab::arithfun {

namespace {

using rigor::Interval;

Interval log10_of_factors(const std::vector<FactoredInteger::Factor>& fs) {
  const mpfr_prec_t prec = 128;
  Interval sum = Interval::zero(prec + 16);
  for (const auto& [p, e] : fs) {
    sum.add_assign(Interval::log_ui(p, prec + 16).mul_ui(e));
  }
  Interval r = sum / Interval::log_ui(10, prec + 16);
  return Interval::from_endpoints(r.lo(), r.hi(), prec);
}

void check_factors(const std::vector<FactoredInteger::Factor>& fs) {
  std::uint64_t prev = 0;
  for (const auto& [p, e] : fs) {
    if (p <= prev) {
      throw std::invalid_argument("FactoredInteger: primes must ascend");
    }
    if (e == 0) throw std::invalid_argument("FactoredInteger: exponent 0");
    if (!is_prime_u64(p)) {
      throw std::invalid_argument("FactoredInteger: non-prime base");
    }
    prev = p;
  }
}

}  // namespace

FactoredInteger::FactoredInteger() : log10_(Interval::zero(128)) {}

FactoredInteger::FactoredInteger(std::vector<Factor> factors)
    : factors_(std::move(factors)), log10_(Interval::zero(128)) {
  check_factors(factors_);
  if (!factors_.empty()) log10_ = log10_of_factors(factors_);
}

unsigned FactoredInteger::exponent_of(std::uint64_t p) const {
  auto it = std::lower_bound(
      factors_.begin(), factors_.end(), p,
      [](const Factor& f, std::uint64_t v) { return f.first < v; });
  return (it != factors_.end() && it->first == p) ? it->second : 0;
}

mpz_class FactoredInteger::value() const {
  mpz_class v = 1;
  mpz_class pw;
  for (const auto& [p, e] : factors_) {
    mpz_ui_pow_ui(pw.get_mpz_t(), static_cast<unsigned long>(p), e);
    v *= pw;
  }
  return v;
}

rigor::Interval FactoredInteger::log_natural(mpfr_prec_t precision) const {
  Interval sum = Interval::zero(precision);
  for (const auto& [p, e] : factors_) {
    sum.add_assign(Interval::log_ui(p, precision).mul_ui(e));
  }
  return sum;
}

FactoredInteger FactoredInteger::with_exponent(std::uint64_t p,
                                               unsigned e) const {
  std::vector<Factor> fs;
  fs.reserve(factors_.size() + 1);
  bool placed = false;
  for (const auto& f : factors_) {
    if (f.first == p) {
      if (e > 0) fs.emplace_back(p, e);
      placed = true;
    } else {
      if (!placed && f.first > p && e > 0) {
        fs.emplace_back(p, e);
        placed = true;
      }
      fs.push_back(f);
    }
  }
  if (!placed && e > 0) fs.emplace_back(p, e);
  return FactoredInteger(std::move(fs));
}

std::string FactoredInteger::str() const {
  if (factors_.empty()) return "1";
  std::ostringstream out;
  bool first = true;
  for (const auto& [p, e] : factors_) {
    if (!first) out << " * ";
    first = false;
    out << p;
    if (e > 1) out << "^" << e;
  }
  return out.str();
}

FactoredInteger FactoredInteger::parse(const std::string& text) {
  std::vector<Factor> fs;
  std::istringstream in(text);
  std::string tok;
  bool expect_star = false;
  while (in >> tok) {
    if (tok == "*") {
      if (!expect_star) throw std::invalid_argument("parse: stray '*'");
      expect_star = false;
      continue;
    }
    if (expect_star) throw std::invalid_argument("parse: missing '*'");
    if (tok == "1" && fs.empty()) {
      expect_star = true;  // "1" stands alone
      continue;
    }
    std::uint64_t p = 0;
    unsigned e = 1;
    auto caret = tok.find('^');
    try {
      if (caret == std::string::npos) {
        p = std::stoull(tok);
      } else {
        p = std::stoull(tok.substr(0, caret));
        e = static_cast<unsigned>(std::stoul(tok.substr(caret + 1)));
      }
    } catch (const std::exception&) {
      throw std::invalid_argument("parse: bad factor token '" + tok + "'");
    }
    fs.emplace_back(p, e);
    expect_star = true;
  }
  return FactoredInteger(std::move(fs));
}

mpq_class sigma_ratio(const FactoredInteger& n) {
  mpq_class r(1);
  mpz_class pe, pe1;
  for (const auto& [p, e] : n.factors()) {
    mpz_ui_pow_ui(pe.get_mpz_t(), static_cast<unsigned long>(p), e);
    pe1 = pe * static_cast<unsigned long>(p);
    // (p^(e+1) - 1) / ((p - 1) * p^e)
    mpq_class term(pe1 - 1, (static_cast<unsigned long>(p) - 1) * pe);
    term.canonicalize();
    r *= term;
  }
  r.canonicalize();
  return r;
}

mpq_class phi_ratio(const FactoredInteger& n) {
  mpq_class r(1);
  for (const auto& [p, e] : n.factors()) {
    (void)e;
    mpq_class term(static_cast<unsigned long>(p),
                   static_cast<unsigned long>(p) - 1);
    r *= term;
  }
  r.canonicalize();
  return r;
}

FactoredInteger primorial(std::uint64_t k) {
  if (k < 1) throw std::invalid_argument("primorial: k >= 1");
  const std::uint64_t pk = primes::nth_prime(k);
  std::vector<FactoredInteger::Factor> fs;
  fs.reserve(k);
  primes::for_primes(2, pk + 1,
                     [&](std::uint64_t p) { fs.emplace_back(p, 1); });
  return FactoredInteger(std::move(fs));
}

namespace {

// Primorial ladder: values[i] = N_{i+1} exactly, logs10[i] encloses its
// log10.  Grown on demand, guarded for concurrent scans.
struct Ladder {
  std::vector<mpz_class> values;
  std::vector<Interval> logs10;
  std::vector<std::uint64_t> primes_used;
  std::mutex mu;

  void ensure_above(const mpz_class& n) {
    std::lock_guard<std::mutex> lock(mu);
    while (values.empty() || values.back() <= n) {
      grow();
    }
  }

  void grow() {
    std::uint64_t next = values.empty() ? 2 : 0;
    if (next == 0) {
      std::uint64_t last = primes_used.back();
      // next prime after last; the gap below 2^40 is tiny
      auto r = primes::sieve_segment(last + 1, last + 1 + 512);
      if (r.primes.empty()) throw std::logic_error("ladder: prime gap > 512");
      next = r.primes.front();
    }
    primes_used.push_back(next);
    mpz_class v = values.empty() ? mpz_class(2)
                                 : mpz_class(values.back() *
                                             static_cast<unsigned long>(next));
    Interval lg = values.empty()
                      ? log10_of_factors({{2, 1}})
                      : logs10.back() + (Interval::log_ui(next, 144) /
                                         Interval::log_ui(10, 144));
    values.push_back(std::move(v));
    logs10.push_back(std::move(lg));
  }
};

Ladder& ladder() {
  static Ladder l;
  return l;
}

}  // namespace

std::uint64_t primorial_count(const mpz_class& n) {
  if (n < 2) throw std::domain_error("primorial_count: n >= 2 required");
  Ladder& l = ladder();
  l.ensure_above(n);
  std::lock_guard<std::mutex> lock(l.mu);
  // exact binary search: first index with value > n
  std::size_t lo = 0, hi = l.values.size();
  while (lo < hi) {
    std::size_t mid = (lo + hi) / 2;
    if (l.values[mid] <= n) {
      lo = mid + 1;
    } else {
      hi = mid;
    }
  }
  return lo;  // N_lo > n >= N_{lo-1}; K = lo with 1-based primorials
}

std::uint64_t primorial_count(const FactoredInteger& n) {
  if (n.is_one()) throw std::domain_error("primorial_count: n >= 2 required");
  Ladder& l = ladder();
  {
    // Need the ladder to reach past n; the log10 cache tells us how far.
    std::lock_guard<std::mutex> lock(l.mu);
    while (l.values.empty() ||
           !rigor::Interval::certainly_less(n.log10(), l.logs10.back())) {
      l.grow();
      if (l.values.size() > 100000) {
        throw std::length_error("primorial_count: input absurdly large");
      }
    }
  }
  std::lock_guard<std::mutex> lock(l.mu);
  // log-space binary search; exact fallback when enclosures touch
  std::size_t lo = 0, hi = l.values.size();
  while (lo < hi) {
    std::size_t mid = (lo + hi) / 2;
    bool ladder_le;  // N_{mid+1} <= n ?
    if (rigor::Interval::certainly_less(l.logs10[mid], n.log10())) {
      ladder_le = true;
    } else if (rigor::Interval::certainly_less(n.log10(), l.logs10[mid])) {
      ladder_le = false;
    } else {
      ladder_le = l.values[mid] <= n.value();  // enclosures overlap: go exact
    }
    if (ladder_le) {
      lo = mid + 1;
    } else {
      hi = mid;
    }
  }
  return lo;
}

rigor::Interval champion_product(std::uint64_t k, mpfr_prec_t precision) {
  if (k < 1) throw std::invalid_argument("champion_product: k >= 1");
  const std::uint64_t pk = primes::nth_prime(k);
  Interval sum = Interval::zero(precision + 16);
  primes::for_primes(2, pk + 1, [&](std::uint64_t p) {
    sum.add_assign(Interval::neg_log1m_inv_ui(p, precision + 16));
  });
  Interval r = sum.exp();
  return Interval::from_endpoints(r.lo(), r.hi(), precision);
}

namespace {

std::uint64_t mulmod_u64(std::uint64_t a, std::uint64_t b, std::uint64_t m) {
  return static_cast<std::uint64_t>(
      (static_cast<unsigned __int128>(a) * b) % m);
}

std::uint64_t powmod_u64(std::uint64_t a, std::uint64_t e, std::uint64_t m) {
  std::uint64_t r = 1 % m;
  a %= m;
  while (e) {
    if (e & 1) r = mulmod_u64(r, a, m);
    a = mulmod_u64(a, a, m);
    e >>= 1;
  }
  return r;
}

std::uint64_t pollard_rho(std::uint64_t n) {
  // Floyd cycle with a fresh increment on failure; n is odd and composite, so
  // a nontrivial factor always turns up.
  for (std::uint64_t c = 1;; ++c) {
    auto f = [&](std::uint64_t x) { return (mulmod_u64(x, x, n) + c) % n; };
    std::uint64_t x = 2, y = 2, d = 1;
    int steps = 0;
    while (d == 1) {
      x = f(x);
      y = f(f(y));
      d = std::gcd(x > y ? x - y : y - x, n);
      if (++steps > (1 << 22)) break;  // degenerate cycle, try another c
    }
    if (d != 1 && d != n) return d;
  }
}

}  // namespace

bool is_prime_u64(std::uint64_t n) {
  if (n < 2) return false;
  for (std::uint64_t p : {2ull, 3ull, 5ull, 7ull, 11ull, 13ull, 17ull, 19ull,
                          23ull, 29ull, 31ull, 37ull}) {
    if (n % p == 0) return n == p;
  }
  std::uint64_t d = n - 1;
  int s = 0;
  while ((d & 1) == 0) {
    d >>= 1;
    ++s;
  }
  // These witnesses decide primality for every 64-bit integer.
  for (std::uint64_t a : {2ull, 3ull, 5ull, 7ull, 11ull, 13ull, 17ull, 19ull,
                          23ull, 29ull, 31ull, 37ull}) {
    std::uint64_t x = powmod_u64(a, d, n);
    if (x == 1 || x == n - 1) continue;
    bool composite = true;
    for (int r = 1; r < s; ++r) {
      x = mulmod_u64(x, x, n);
      if (x == n - 1) {
        composite = false;
        break;
      }
    }
    if (composite) return false;
  }
  return true;
}

FactoredInteger factorize(std::uint64_t n) {
  if (n == 0) throw std::invalid_argument("factorize: n >= 1");
  std::vector<FactoredInteger::Factor> fs;
  if (n == 1) return FactoredInteger(std::move(fs));

  static const std::vector<std::uint64_t> small = [] {
    std::vector<std::uint64_t> v;
    primes::for_primes(2, 1'000'001, [&](std::uint64_t p) { v.push_back(p); });
    return v;
  }();

  std::uint64_t rest = n;
  for (std::uint64_t p : small) {
    if (p * p > rest) break;
    if (rest % p) continue;
    unsigned e = 0;
    while (rest % p == 0) {
      rest /= p;
      ++e;
    }
    fs.emplace_back(p, e);
  }
  if (rest > 1) {
    if (is_prime_u64(rest)) {
      fs.emplace_back(rest, 1);
    } else {
      // no factor below 1e6 and composite: a semiprime (or prime square)
      // since rest <= 10^18 < (10^6)^3
      std::uint64_t d = pollard_rho(rest);
      std::uint64_t q = rest / d;
      if (d == q) {
        fs.emplace_back(d, 2);
      } else {
        fs.emplace_back(std::min(d, q), 1);
        fs.emplace_back(std::max(d, q), 1);
      }
    }
    std::sort(fs.begin(), fs.end());
  }
  return FactoredInteger(std::move(fs));
}

}  // namespace primlab::arithfun
