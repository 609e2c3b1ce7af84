#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstdint>
#include <fstream>
#include <random>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "primlab/abundant.hpp"
#include "primlab/arithfun.hpp"
#include "primlab/bounds.hpp"
#include "primlab/primes.hpp"

using primlab::arithfun::FactoredInteger;
using primlab::rigor::Interval;
namespace abundant = primlab::abundant;
namespace arithfun = primlab::arithfun;
namespace bounds = primlab::bounds;

namespace {

mpq_class q_of(long num, long den) {
  mpq_class q{mpz_class(num), mpz_class(den)};
  q.canonicalize();
  return q;
}

// The 66-digit champion at parameter 0.00133 and its two near-miss
// perturbations swap the top prime 149 for 151 or 157.
const char* kChampion133 =
    "2^9 * 3^5 * 5^3 * 7^2 * 11^2 * 13^2 * 17 * 19 * 23 * 29 * 31 * 37 * 41 * "
    "43 * 47 * 53 * 59 * 61 * 67 * 71 * 73 * 79 * 83 * 89 * 97 * 101 * 103 * "
    "107 * 109 * 113 * 127 * 131 * 137 * 139 * 149";

abundant::BenefitScanConfig config_at(const mpq_class& eps, long bnum,
                                      long bden) {
  abundant::BenefitScanConfig cfg;
  cfg.reference = abundant::ca_number(eps);
  cfg.epsilon = eps;
  cfg.budget = q_of(bnum, bden);
  return cfg;
}

// Divisor-sum sieve records: every n whose sigma(n)/n strictly exceeds the
// ratio of all smaller integers.
std::vector<std::uint64_t> sieve_records(std::uint64_t limit) {
  std::vector<std::uint64_t> sig(limit + 1, 0);
  for (std::uint64_t d = 1; d <= limit; ++d)
    for (std::uint64_t m = d; m <= limit; m += d) sig[m] += d;
  std::vector<std::uint64_t> out;
  std::uint64_t bn = 1, bs = 0;  // bs/bn = best ratio so far, starts below 1
  for (std::uint64_t n = 1; n <= limit; ++n) {
    if (sig[n] * bn > bs * n) {
      out.push_back(n);
      bn = n;
      bs = sig[n];
    }
  }
  return out;
}

}  // namespace

TEST_CASE("optimal exponents at sample parameters") {
  mpq_class e65 = q_of(65, 10000);
  CHECK(abundant::mu_exponent(2, e65) == 6);
  CHECK(abundant::mu_exponent(3, e65) == 4);
  CHECK(abundant::mu_exponent(7, e65) == 2);
  CHECK(abundant::mu_exponent(11, e65) == 1);
  CHECK(abundant::mu_exponent(37, e65) == 1);
  CHECK(abundant::mu_exponent(41, e65) == 0);

  mpq_class e133 = q_of(133, 100000);
  CHECK(abundant::mu_exponent(149, e133) == 1);
  CHECK(abundant::mu_exponent(151, e133) == 0);
  CHECK(abundant::mu_exponent(1000003, e133) == 0);

  // Straddling the exponent-1 threshold of p = 2 (log2(3) - 1): one part in
  // 10^15 on either side still resolves, through the exact rational test.
  mpq_class lo{mpz_class("584962500721156"), mpz_class("1000000000000000")};
  mpq_class hi{mpz_class("584962500721157"), mpz_class("1000000000000000")};
  lo.canonicalize();
  hi.canonicalize();
  CHECK(abundant::mu_exponent(2, lo) == 1);
  CHECK(abundant::mu_exponent(2, hi) == 0);

  CHECK_THROWS_AS(abundant::mu_exponent(4, e65), std::invalid_argument);
  CHECK_THROWS_AS(abundant::mu_exponent(2, mpq_class(0)), std::domain_error);
  CHECK_THROWS_AS(abundant::mu_exponent(2, mpq_class(-1)), std::domain_error);
}

TEST_CASE("parameterized champions and their windows") {
  auto c65 = abundant::ca_number(q_of(65, 10000));
  CHECK(c65.n.value() == mpz_class("224403121196654400"));

  auto c133 = abundant::ca_number(q_of(133, 100000));
  CHECK(c133.n == FactoredInteger::parse(kChampion133));

  // Above the first threshold every exponent is zero.
  CHECK(abundant::ca_number(mpq_class(10)).n.value() == 1);
  // Between the first two thresholds the champion is the single prime 2.
  CHECK(abundant::ca_number(q_of(1, 2)).n.value() == 2);

  // The recorded window rationals are parameters of the same champion.
  for (const auto* ca : {&c65, &c133}) {
    CHECK(ca->epsilon_lo < ca->epsilon_hi);
    CHECK(abundant::ca_number(ca->epsilon_lo).n == ca->n);
    CHECK(abundant::ca_number(ca->epsilon_hi).n == ca->n);
  }

  CHECK_THROWS_AS(abundant::ca_number(mpq_class(0)), std::domain_error);
}

TEST_CASE("champion ladder climbs one prime at a time") {
  auto seq = abundant::ca_sequence(160);
  REQUIRE(seq.size() == 160);

  const std::uint64_t first8[] = {2, 6, 12, 60, 120, 360, 2520, 5040};
  for (int i = 0; i < 8; ++i)
    CHECK(seq[i].n.value() == mpz_class(static_cast<unsigned long>(first8[i])));

  for (std::size_t k = 0; k + 1 < seq.size(); ++k) {
    mpz_class quot = seq[k + 1].n.value() / seq[k].n.value();
    CHECK(seq[k + 1].n.value() % seq[k].n.value() == 0);
    CHECK(mpz_probab_prime_p(quot.get_mpz_t(), 30) != 0);
    // windows are disjoint and strictly descending
    CHECK(seq[k + 1].epsilon_hi < seq[k].epsilon_lo);
  }

  CHECK(seq[159].n.log10().truncated_decimal(3) == "326.273");

  // Interior parameters of each recorded window rebuild the same champion.
  for (std::size_t k = 0; k < 24; ++k) {
    const auto& w = seq[k];
    mpq_class mid = (w.epsilon_lo + w.epsilon_hi) / 2;
    CHECK(abundant::ca_number(w.epsilon_lo).n == w.n);
    CHECK(abundant::ca_number(mid).n == w.n);
    CHECK(abundant::ca_number(w.epsilon_hi).n == w.n);
  }

  CHECK_THROWS_AS(abundant::ca_sequence(0), std::invalid_argument);
}

TEST_CASE("parameterized champions appear in the superabundant list") {
  auto sa = abundant::enumerate_superabundant(25.0);
  auto seq = abundant::ca_sequence(40);
  std::size_t found = 0;
  for (const auto& ca : seq) {
    if (ca.n.value() > sa.back().n.value()) break;
    bool present = false;
    for (const auto& r : sa)
      if (r.n == ca.n) {
        present = true;
        break;
      }
    CHECK(present);
    ++found;
  }
  CHECK(found >= 15);

  // The champion at 0.00133 sits at position 425 of the full list.
  auto sa66 = abundant::enumerate_superabundant(66.0);
  auto c133 = abundant::ca_number(q_of(133, 100000));
  REQUIRE(sa66.size() >= 425);
  CHECK(sa66[424].n == c133.n);
  CHECK(sa66[424].index == 425);
}

TEST_CASE("superabundant list matches a divisor-sum sieve") {
  auto brute = sieve_records(1000000);
  auto sa = abundant::enumerate_superabundant(6.0);
  REQUIRE(sa.size() == brute.size());
  for (std::size_t i = 0; i < sa.size(); ++i) {
    CHECK(sa[i].n.value() == mpz_class(static_cast<unsigned long>(brute[i])));
    CHECK(sa[i].index == i + 1);
    CHECK(sa[i].ratio == arithfun::sigma_ratio(sa[i].n));
  }
}

TEST_CASE("superabundant prefix and large anchors") {
  auto sa = abundant::enumerate_superabundant(70.6);
  const std::uint64_t first17[] = {1,  2,   4,   6,   12,  24,   36,  48, 60,
                                   120, 180, 240, 360, 720, 840, 1260, 1680};
  REQUIRE(sa.size() == 456);
  for (int i = 0; i < 17; ++i)
    CHECK(sa[i].n.value() == mpz_class(static_cast<unsigned long>(first17[i])));

  CHECK(sa[105].n.value() == mpz_class("224403121196654400"));
  CHECK(sa[106].n.value() == mpz_class("448806242393308800"));
  CHECK(Interval::of_mpq(sa[105].ratio, 192).truncated_decimal(5) == "6.40729");
  CHECK(sa[116].log10.truncated_decimal(3) == "19.264");
  CHECK(Interval::of_mpq(sa[116].ratio, 192).truncated_decimal(3) == "6.589");

  for (const auto& r : sa) {
    const auto& f = r.n.factors();
    // support is a prefix of the primes, exponents never increase
    for (std::size_t i = 0; i < f.size(); ++i) {
      CHECK(f[i].first == primlab::primes::nth_prime(i + 1));
      if (i + 1 < f.size()) CHECK(f[i].second >= f[i + 1].second);
    }
    // the top prime enters linearly; 4 and 36 are the lone exceptions
    if (!f.empty() && r.n.value() != 4 && r.n.value() != 36)
      CHECK(f.back().second == 1);
  }

  CHECK(abundant::enumerate_superabundant(-1.0).empty());
  CHECK_THROWS_AS(abundant::enumerate_superabundant(121.0), std::domain_error);
}

TEST_CASE("benefit vanishes at the reference and splits per prime") {
  auto cfg = config_at(q_of(133, 100000), 594, 1000000);
  const FactoredInteger& ref = cfg.reference.n;

  auto at_ref = abundant::benefit(ref, cfg);
  CHECK(at_ref.lo_d() == 0.0);
  CHECK(at_ref.hi_d() == 0.0);
  CHECK(abundant::benefit_sign(ref, cfg) == 0);

  // the two swaps of the top prime stay within the 0.000594 budget
  auto j0 = ref.with_exponent(151, 1).with_exponent(149, 0);
  auto h2 = ref.with_exponent(157, 1).with_exponent(149, 0);
  for (const auto& n : {j0, h2}) {
    auto b = abundant::benefit(n, cfg);
    CHECK(b.lo_d() > 0.0);
    CHECK(Interval::certainly_less(b, cfg.budget));
    CHECK(abundant::benefit_sign(n, cfg) == 1);
  }

  // deviations on disjoint primes add
  auto n1 = ref.with_exponent(2, 10);
  auto n2 = ref.with_exponent(151, 1);
  auto n12 = ref.with_exponent(2, 10).with_exponent(151, 1);
  auto b1 = abundant::benefit(n1, cfg);
  auto b2 = abundant::benefit(n2, cfg);
  auto b12 = abundant::benefit(n12, cfg);
  CHECK(std::abs(b12.lo_d() - (b1.lo_d() + b2.lo_d())) < 1e-15);
  CHECK(std::abs(b12.hi_d() - (b1.hi_d() + b2.hi_d())) < 1e-15);
}

TEST_CASE("benefit is nonnegative across random perturbations") {
  // Small-denominator parameter keeps the exact sign test cheap.
  auto cfg = config_at(q_of(1, 20), 1, 100);
  const FactoredInteger& ref = cfg.reference.n;
  CHECK(ref.value() == 2520);

  std::mt19937_64 rng(0x5eed5a5aULL);
  const std::uint64_t pool[] = {2, 3, 5, 7, 11, 13, 17};
  int zeros = 0;
  for (int iter = 0; iter < 10000; ++iter) {
    FactoredInteger n = ref;
    unsigned devs = 1 + rng() % 3;
    for (unsigned d = 0; d < devs; ++d) {
      std::uint64_t p = pool[rng() % 7];
      n = n.with_exponent(p, rng() % 6);
    }
    auto b = abundant::benefit(n, cfg);
    CHECK(b.hi_d() >= 0.0);
    CHECK(b.lo_d() >= -1e-18);
    int s = abundant::benefit_sign(n, cfg);
    CHECK(s >= 0);
    if (s == 0) {
      CHECK(n == ref);
      ++zeros;
    }
    if (n == ref) CHECK(s == 0);
  }
  CHECK(zeros >= 1);  // the identity perturbation does come up
}

TEST_CASE("benefit scan finds exactly the near-champions") {
  // budget 0.000594 around the 66-digit champion
  auto cfg = config_at(q_of(133, 100000), 594, 1000000);
  cfg.lo = cfg.reference.n.value();
  cfg.hi = arithfun::primorial(39).value();
  auto hits = abundant::benefit_scan(cfg);
  REQUIRE(hits.size() == 2);
  mpz_class base = cfg.reference.n.value() / 149;
  CHECK(hits[0].value() == base * 151);
  CHECK(hits[1].value() == base * 157);

  // of the two, only the first has divisor-sum ratio beyond 8.8272
  mpq_class gate = q_of(88272, 10000);
  CHECK(arithfun::sigma_ratio(hits[0]) > gate);
  CHECK(arithfun::sigma_ratio(hits[1]) < gate);

  // budget 0.007 around the 18-digit champion
  auto cfg2 = config_at(q_of(65, 10000), 7, 1000);
  cfg2.lo = mpz_class("448806242393308800");
  cfg2.hi = mpz_class("614889782588491410");
  auto hits2 = abundant::benefit_scan(cfg2);
  REQUIRE(hits2.size() == 2);
  CHECK(hits2[0].value() == mpz_class("497325836165558400"));
  CHECK(hits2[1].value() == mpz_class("521585633051683200"));

  // a vanishing budget leaves the reference alone
  auto cfg3 = config_at(q_of(1, 2), 1, 1000000000);
  cfg3.lo = 1;
  cfg3.hi = 1000;
  auto hits3 = abundant::benefit_scan(cfg3);
  REQUIRE(hits3.size() == 1);
  CHECK(hits3[0].value() == 2);

  // a budget that admits primes past the cutoff bound is rejected
  auto cfg4 = config_at(q_of(1, 2), 10, 1);
  cfg4.lo = 1;
  cfg4.hi = 1000;
  CHECK_THROWS_AS(abundant::benefit_scan(cfg4), abundant::BudgetTooLarge);

  auto bad = config_at(q_of(1, 2), 1, 100);
  bad.lo = 10;
  bad.hi = 5;
  CHECK_THROWS_AS(abundant::benefit_scan(bad), std::invalid_argument);
}

TEST_CASE("divisor-sum threshold verdicts carry the domain flag") {
  auto at = [](unsigned long n) {
    return abundant::robin_check(arithfun::factorize(n));
  };
  auto r5040 = at(5040);
  CHECK(r5040.verdict == bounds::CheckResult::Fails);
  CHECK_FALSE(r5040.in_domain);
  auto r6 = at(6);
  CHECK(r6.verdict == bounds::CheckResult::Fails);
  CHECK_FALSE(r6.in_domain);
  auto r10080 = at(10080);
  CHECK(r10080.verdict == bounds::CheckResult::Holds);
  CHECK(r10080.in_domain);
  auto r55440 = at(55440);
  CHECK(r55440.verdict == bounds::CheckResult::Holds);
  CHECK(r55440.in_domain);
}

TEST_CASE("primorial rows locate the bracketing champion") {
  auto sa = abundant::enumerate_superabundant(75.0);

  auto row = abundant::sa_interval_bound(40, 41,
                                         abundant::RowThreshold::ExpGammaF, sa);
  CHECK(row.m == 456);
  CHECK(row.log10_nb.truncated_decimal(6) == "70.474501");
  CHECK(row.log10_sa.truncated_decimal(6) == "70.564827");
  CHECK(Interval::of_mpq(row.ratio, 192).truncated_decimal(6) == "8.949341");
  CHECK(row.threshold.truncated_decimal(6) == "8.952168");
  CHECK(row.ratio_below);

  auto row2 =
      abundant::sa_interval_bound(37, 39, abundant::RowThreshold::G, sa);
  CHECK(row2.m == 426);
  CHECK(row2.log10_nb.truncated_decimal(6) == "65.983602");
  CHECK(row2.log10_sa.truncated_decimal(6) == "66.189950");
  CHECK(Interval::of_mpq(row2.ratio, 192).truncated_decimal(6) == "8.834195");
  CHECK(row2.threshold.truncated_decimal(6) == "8.858198");
  CHECK(row2.ratio_below);

  auto row3 =
      abundant::sa_interval_bound(16, 17, abundant::RowThreshold::G, sa);
  CHECK(row3.m == 130);
  CHECK(Interval::of_mpq(row3.ratio, 192).truncated_decimal(6) == "6.759540");
  CHECK(row3.threshold.truncated_decimal(6) == "6.767193");
  CHECK(row3.ratio_below);

  auto small = abundant::enumerate_superabundant(10.0);
  CHECK_THROWS_AS(abundant::sa_interval_bound(
                      40, 41, abundant::RowThreshold::ExpGammaF, small),
                  std::runtime_error);
  CHECK_THROWS_AS(
      abundant::sa_interval_bound(5, 5, abundant::RowThreshold::G, sa),
      std::invalid_argument);
  CHECK_THROWS_AS(
      abundant::sa_interval_bound(1, 3, abundant::RowThreshold::G, sa),
      std::invalid_argument);
}

TEST_CASE("champion cache round-trips and rejects tampering") {
  auto sa = abundant::enumerate_superabundant(25.0);
  const std::string path = "sa_cache_test.tsv";
  abundant::write_sa_cache(path, sa);
  auto back = abundant::read_sa_cache(path);
  REQUIRE(back.size() == sa.size());
  for (std::size_t i = 0; i < sa.size(); ++i) {
    CHECK(back[i].index == sa[i].index);
    CHECK(back[i].n == sa[i].n);
    CHECK(back[i].ratio == sa[i].ratio);
  }

  std::vector<std::string> lines;
  {
    std::ifstream in(path);
    std::string line;
    while (std::getline(in, line)) lines.push_back(line);
  }
  REQUIRE(lines.size() == sa.size());

  auto rewrite = [&](const std::vector<std::string>& ls) {
    std::ofstream out(path, std::ios::trunc);
    for (const auto& l : ls) out << l << '\n';
  };

  // ratio column inconsistent with the factorization
  auto bad = lines;
  {
    std::istringstream ss(bad[2]);
    std::string idx, fact, ratio, lg;
    std::getline(ss, idx, '\t');
    std::getline(ss, fact, '\t');
    std::getline(ss, ratio, '\t');
    std::getline(ss, lg);
    bad[2] = idx + "\t" + fact + "\t99/7\t" + lg;
  }
  rewrite(bad);
  CHECK_THROWS_AS(abundant::read_sa_cache(path), std::runtime_error);

  // missing line breaks the index sequence
  bad = lines;
  bad.erase(bad.begin() + 1);
  rewrite(bad);
  CHECK_THROWS_AS(abundant::read_sa_cache(path), std::runtime_error);

  // short line
  bad = lines;
  bad[0] = "1\t1";
  rewrite(bad);
  CHECK_THROWS_AS(abundant::read_sa_cache(path), std::runtime_error);

  rewrite(lines);
  CHECK(abundant::read_sa_cache(path).size() == sa.size());
  std::remove(path.c_str());
}
