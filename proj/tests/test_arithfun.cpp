#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "oracles.hpp"
#include "primlab/arithfun.hpp"

using primlab::arithfun::FactoredInteger;
using primlab::arithfun::champion_product;
using primlab::arithfun::factorize;
using primlab::arithfun::phi_ratio;
using primlab::arithfun::primorial;
using primlab::arithfun::primorial_count;
using primlab::arithfun::sigma_ratio;
using primlab::rigor::Interval;

namespace {

const char* kJ0Text =
    "2^9 * 3^5 * 5^3 * 7^2 * 11^2 * 13^2 * 17 * 19 * 23 * 29 * 31 * 37 * 41 * "
    "43 * 47 * 53 * 59 * 61 * 67 * 71 * 73 * 79 * 83 * 89 * 97 * 101 * 103 * "
    "107 * 109 * 113 * 127 * 131 * 137 * 139 * 151";

FactoredInteger random_factored(std::mt19937_64& rng) {
  static const std::vector<std::uint64_t> pool = [] {
    auto ps = oracle::naive_primes(300);
    ps.push_back(1009);
    ps.push_back(65537);
    ps.push_back(1'000'003);
    return ps;
  }();
  std::vector<FactoredInteger::Factor> fs;
  std::size_t count = 1 + rng() % 6;
  std::vector<std::uint64_t> picks;
  while (picks.size() < count) {
    std::uint64_t p = pool[rng() % pool.size()];
    bool dup = false;
    for (auto q : picks) dup |= (q == p);
    if (!dup) picks.push_back(p);
  }
  std::sort(picks.begin(), picks.end());
  for (auto p : picks) fs.emplace_back(p, 1 + rng() % 5);
  return FactoredInteger(std::move(fs));
}

}  // namespace

TEST_CASE("factored integer construction and text form") {
  FactoredInteger one;
  CHECK(one.is_one());
  CHECK(one.value() == 1);
  CHECK(one.str() == "1");

  auto n = factorize(1680);
  CHECK(n.str() == "2^4 * 3 * 5 * 7");
  CHECK(n.value() == 1680);
  CHECK(n.exponent_of(2) == 4);
  CHECK(n.exponent_of(11) == 0);

  auto back = FactoredInteger::parse(n.str());
  CHECK(back == n);
  CHECK(FactoredInteger::parse("1").is_one());

  CHECK_THROWS_AS(FactoredInteger({{4, 1}}), std::invalid_argument);
  CHECK_THROWS_AS(FactoredInteger({{3, 1}, {2, 1}}), std::invalid_argument);
  CHECK_THROWS_AS(FactoredInteger({{2, 0}}), std::invalid_argument);
}

TEST_CASE("with_exponent edits one prime") {
  auto n = factorize(12);  // 2^2 * 3
  CHECK(n.with_exponent(2, 3).value() == 24);
  CHECK(n.with_exponent(3, 0).value() == 4);
  CHECK(n.with_exponent(5, 1).value() == 60);
  CHECK(n.with_exponent(7, 2).value() == 588);
  CHECK(n.value() == 12);  // untouched
}

TEST_CASE("log10 cache brackets the true magnitude") {
  auto n = factorize(1000);
  CHECK(n.log10().lo_d() <= 3.0);
  CHECK(n.log10().hi_d() >= 3.0);
  CHECK(n.log10().width_d() < 1e-30);

  auto j0 = FactoredInteger::parse(kJ0Text);
  CHECK(j0.log10().lo_d() > 65.8946);
  CHECK(j0.log10().hi_d() < 65.8948);

  auto ln = factorize(97).log_natural(128);
  auto direct = Interval::log_ui(97, 192);
  CHECK(mpfr_cmp(ln.lo(), direct.hi()) <= 0);
  CHECK(mpfr_cmp(direct.lo(), ln.hi()) <= 0);
}

TEST_CASE("sigma ratio on knowns") {
  CHECK(sigma_ratio(FactoredInteger()) == 1);
  CHECK(sigma_ratio(factorize(5040)) == mpq_class(403, 105));

  // brute-force oracle over assorted small n
  std::mt19937_64 rng(11);
  for (int t = 0; t < 200; ++t) {
    std::uint64_t n = 2 + rng() % 20000;
    mpq_class want(oracle::sigma_brute(mpz_class(static_cast<unsigned long>(n))),
                   mpz_class(static_cast<unsigned long>(n)));
    want.canonicalize();
    CHECK(sigma_ratio(factorize(n)) == want);
  }
}

TEST_CASE("sigma ratio decimal head for the 18-digit record holder") {
  auto n = factorize(224'403'121'196'654'400ull);
  CHECK(n.str() == "2^6 * 3^4 * 5^2 * 7^2 * 11 * 13 * 17 * 19 * 23 * 29 * 31 * 37");
  mpq_class r = sigma_ratio(n);
  // truncated 5-decimal head of the exact rational
  mpz_class scaled = (r.get_num() * 100000) / r.get_den();
  CHECK(scaled == 640729);
}

TEST_CASE("phi ratio on knowns and brute oracle") {
  CHECK(phi_ratio(FactoredInteger()) == 1);
  CHECK(phi_ratio(factorize(6)) == 3);
  CHECK(phi_ratio(factorize(72)) == 3);  // 2^3 * 3^2
  std::mt19937_64 rng(13);
  for (int t = 0; t < 120; ++t) {
    unsigned long n = 2 + rng() % 3000;
    mpq_class want(mpz_class(n), oracle::phi_brute(n));
    want.canonicalize();
    CHECK(phi_ratio(factorize(n)) == want);
  }
}

TEST_CASE("primorials") {
  CHECK(primorial(1).value() == 2);
  CHECK(primorial(5).value() == 2310);
  CHECK(primorial(15).value() == mpz_class("614889782588491410"));
  auto n7 = primorial(7);
  CHECK(n7.value() == 510510);
  for (const auto& [p, e] : n7.factors()) {
    (void)p;
    CHECK(e == 1);
  }
}

TEST_CASE("primorial count basics") {
  CHECK(primorial_count(mpz_class(2310)) == 5);
  CHECK(primorial_count(mpz_class(2)) == 1);
  CHECK(primorial_count(mpz_class(3)) == 1);
  CHECK(primorial_count(mpz_class(5)) == 1);
  CHECK(primorial_count(mpz_class(6)) == 2);
  CHECK(primorial_count(mpz_class(1'000'000)) == 7);  // 510510 fits, 9699690 not
  CHECK_THROWS_AS(primorial_count(mpz_class(1)), std::domain_error);
  CHECK_THROWS_AS(primorial_count(FactoredInteger()), std::domain_error);
}

TEST_CASE("primorial count at the boundary record") {
  auto j0 = FactoredInteger::parse(kJ0Text);
  CHECK(primorial_count(j0) == 38);
  CHECK(primorial_count(j0.value()) == 38);
}

TEST_CASE("primorial count steps exactly at each rung") {
  for (std::uint64_t k = 2; k <= 30; ++k) {
    mpz_class nk = primorial(k).value();
    CHECK(primorial_count(nk) == k);
    CHECK(primorial_count(nk - 1) == k - 1);
    CHECK(primorial_count(nk + 1) == k);
  }
  // factored-input path agrees with the big-integer path
  for (std::uint64_t k : {2ull, 9ull, 17ull, 30ull}) {
    auto nk = primorial(k);
    CHECK(primorial_count(nk) == primorial_count(nk.value()));
  }
}

TEST_CASE("champion product small and oracle ranges") {
  auto c1 = champion_product(1);
  CHECK(c1.contains_mpq(mpq_class(2)));
  auto c3 = champion_product(3);
  CHECK(c3.contains_mpq(mpq_class(15, 4)));

  // exact rational oracle for k <= 1000, spot checks beyond
  auto ps = oracle::naive_primes(8000);
  mpq_class exact(1);
  for (std::uint64_t k = 1; k <= 1000; ++k) {
    exact *= mpq_class(ps[k - 1], ps[k - 1] - 1);
    exact.canonicalize();
    if (k <= 16 || k % 97 == 0 || k == 1000) {
      CHECK(champion_product(k).contains_mpq(exact));
    }
  }
}

TEST_CASE("champion product at ten thousand primes") {
  auto ps = oracle::naive_primes(105'000);
  REQUIRE(ps.size() >= 10'000);
  mpq_class exact(1);
  for (std::size_t i = 0; i < 10'000; ++i) {
    exact *= mpq_class(ps[i], ps[i] - 1);
  }
  exact.canonicalize();
  CHECK(champion_product(10'000).contains_mpq(exact));
}

TEST_CASE("factorize handles the hard shapes") {
  CHECK(factorize(1).is_one());
  CHECK(factorize(1'000'000'007).str() == "1000000007");
  CHECK(factorize(1'000'003ull * 1'000'033ull).str() ==
        "1000003 * 1000033");
  CHECK(factorize(1'000'003ull * 1'000'003ull).str() == "1000003^2");
  CHECK(factorize(999'999'999'989ull).str() == "999999999989");  // prime
  CHECK_THROWS_AS(factorize(0), std::invalid_argument);

  std::mt19937_64 rng(17);
  for (int t = 0; t < 400; ++t) {
    std::uint64_t n = 1 + rng() % 100'000'000;
    CHECK(factorize(n).value() == n);
  }
  // near the upper end of the supported range
  CHECK(factorize(999'999'999'999'999'989ull).str() ==
        "999999999999999989");
  CHECK(factorize(999'999'937ull * 999'999'937ull).str() == "999999937^2");
}

TEST_CASE("sigma and phi are tied by the exact divisor identity") {
  std::mt19937_64 rng(20260817);
  for (int t = 0; t < 10'000; ++t) {
    auto n = random_factored(rng);
    mpq_class lhs = sigma_ratio(n);
    mpq_class rhs = phi_ratio(n);
    for (const auto& [p, e] : n.factors()) {
      mpz_class pe1;
      mpz_ui_pow_ui(pe1.get_mpz_t(), static_cast<unsigned long>(p), e + 1);
      mpq_class factor(pe1 - 1, pe1);
      factor.canonicalize();
      rhs *= factor;
    }
    rhs.canonicalize();
    CHECK(lhs == rhs);
    if (!n.is_one()) {
      CHECK(sigma_ratio(n) < phi_ratio(n));  // strict for n >= 2
    }
  }
  for (std::uint64_t n = 2; n <= 2000; ++n) {
    CHECK(sigma_ratio(factorize(n)) < phi_ratio(factorize(n)));
  }
}

TEST_CASE("no n below the seventh primorial beats its champion") {
  const mpq_class champ = phi_ratio(primorial(6));
  const mpz_class rad_target = 30030;  // 2*3*5*7*11*13
  int equal_cases = 0;
  for (std::uint64_t n = 2; n < 510'510; ++n) {
    auto f = factorize(n);
    mpq_class r = phi_ratio(f);
    CHECK(r <= champ);
    if (r == champ) {
      ++equal_cases;
      mpz_class rad = 1;
      for (const auto& [p, e] : f.factors()) {
        (void)e;
        rad *= static_cast<unsigned long>(p);
      }
      CHECK(rad == rad_target);
    }
  }
  CHECK(equal_cases == 16);  // 30030 m for every m <= 16 (all 13-smooth)
}
