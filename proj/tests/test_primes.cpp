#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <random>

#include "oracles.hpp"
#include "primlab/primes.hpp"

using primlab::primes::sieve_segment;
using primlab::primes::for_primes;
using primlab::primes::nth_prime;
using primlab::primes::prime_count;
using primlab::primes::prime_count_meissel;
using primlab::primes::theta;
using primlab::primes::theta_lt_x_scan;
using primlab::rigor::Interval;

TEST_CASE("segment sieve matches the hand list below 30") {
  auto r = sieve_segment(0, 30);
  std::vector<std::uint64_t> want = {2, 3, 5, 7, 11, 13, 17, 19, 23, 29};
  CHECK(r.primes == want);
  CHECK(r.lo == 0);
  CHECK(r.hi == 30);
}

TEST_CASE("segment sieve agrees with a naive sieve on random windows") {
  auto all = oracle::naive_primes(10'000'000);
  // whole-range check in slices
  std::vector<std::uint64_t> got;
  for_primes(0, 10'000'001, [&](std::uint64_t p) { got.push_back(p); });
  CHECK(got == all);

  std::mt19937_64 rng(20260817);
  for (int t = 0; t < 50; ++t) {
    std::uint64_t lo = rng() % 9'900'000;
    std::uint64_t hi = lo + 1 + rng() % 90'000;
    auto r = sieve_segment(lo, hi);
    std::vector<std::uint64_t> want;
    for (auto p : all) {
      if (p >= lo && p < hi) want.push_back(p);
    }
    CHECK(r.primes == want);
  }
}

TEST_CASE("segment sieve window above 10^6") {
  auto r = sieve_segment(1'000'000, 1'000'100);
  REQUIRE(r.primes.size() == 6);
  CHECK(r.primes.front() == 1'000'003);
}

TEST_CASE("segment sieve near 10^19 finds the last prime below it") {
  const std::uint64_t ten19 = 10'000'000'000'000'000'000ull;
  auto r = sieve_segment(ten19 - 100, ten19);
  bool found = false;
  for (auto p : r.primes) {
    if (p == 9'999'999'999'999'999'961ull) found = true;
  }
  CHECK(found);
}

TEST_CASE("segment sieve rejects bad spans") {
  CHECK_THROWS_AS(sieve_segment(10, 10), std::invalid_argument);
  CHECK_THROWS_AS(sieve_segment(0, primlab::primes::kSegmentSpan + 1),
                  std::length_error);
}

TEST_CASE("segment concatenation") {
  auto ab = sieve_segment(100, 5000);
  auto bc = sieve_segment(5000, 9000);
  auto ac = sieve_segment(100, 9000);
  std::vector<std::uint64_t> joined = ab.primes;
  joined.insert(joined.end(), bc.primes.begin(), bc.primes.end());
  CHECK(joined == ac.primes);
}

TEST_CASE("nth_prime basics") {
  CHECK(nth_prime(1) == 2);
  CHECK(nth_prime(2) == 3);
  CHECK(nth_prime(5) == 11);
  CHECK(nth_prime(6) == 13);
  auto all = oracle::naive_primes(100'000);
  CHECK(nth_prime(100) == all[99]);
  CHECK(nth_prime(1000) == all[999]);
  CHECK(nth_prime(all.size()) == all.back());
  CHECK_THROWS_AS(nth_prime(0), std::invalid_argument);
}

TEST_CASE("nth_prime at the million mark and self-consistency") {
  std::uint64_t p = nth_prime(1'000'000);
  CHECK(p == 15'485'863);
  CHECK(prime_count(p) == 1'000'000);

  std::uint64_t q = nth_prime(740'322);
  CHECK(prime_count(q) == 740'322);
}

TEST_CASE("nth_prime respects the sieve limit") {
  auto saved = primlab::primes::default_sieve_limit();
  primlab::primes::set_default_sieve_limit(1'000'000);
  CHECK_THROWS_AS(nth_prime(100'000'000), std::out_of_range);
  primlab::primes::set_default_sieve_limit(saved);
}

TEST_CASE("prime_count basics") {
  CHECK(prime_count(0) == 0);
  CHECK(prime_count(1) == 0);
  CHECK(prime_count(2) == 1);
  CHECK(prime_count(100) == 25);
  auto all = oracle::naive_primes(1'000'000);
  CHECK(prime_count(1'000'000) == all.size());
  CHECK(prime_count(999'983) == all.size());  // 999983 is the last one below 1e6
}

TEST_CASE("combinatorial count agrees with streaming count") {
  CHECK(prime_count_meissel(1) == 0);
  CHECK(prime_count_meissel(2) == 1);
  CHECK(prime_count_meissel(100) == 25);
  CHECK(prime_count_meissel(1'000'000) == 78'498);
  std::mt19937_64 rng(7);
  for (int t = 0; t < 12; ++t) {
    std::uint64_t x = 2 + rng() % 3'000'000;
    CHECK(prime_count_meissel(x) == prime_count(x));
  }
  CHECK(prime_count_meissel(1'000'000'000) == 50'847'534);
}

TEST_CASE("theta encloses log 2 at x=2") {
  auto t = theta(2, 128);
  auto l2 = Interval::log_ui(2, 256);
  CHECK(mpfr_cmp(t.lo(), l2.hi()) <= 0);
  CHECK(mpfr_cmp(l2.lo(), t.hi()) <= 0);
  CHECK(t.width_d() < 1e-30);
}

TEST_CASE("theta agrees with per-prime summation at 4x precision") {
  for (std::uint64_t x : {100ull, 4096ull, 100'000ull}) {
    auto t = theta(x, 128);
    // independent oracle: plain left-fold of per-prime logs at 512 bits
    Interval acc = Interval::zero(512);
    for (auto p : oracle::naive_primes(x)) {
      acc.add_assign(Interval::log_ui(p, 512));
    }
    // the tight oracle enclosure must sit inside the library's enclosure
    CHECK(mpfr_cmp(t.lo(), acc.lo()) <= 0);
    CHECK(mpfr_cmp(acc.hi(), t.hi()) <= 0);
    CHECK(t.width_d() < 1e-25);
  }
}

TEST_CASE("theta refines monotonically with precision") {
  for (std::uint64_t x : {1000ull, 50'000ull}) {
    auto w64 = theta(x, 64).width_d();
    auto w128 = theta(x, 128).width_d();
    auto w256 = theta(x, 256).width_d();
    CHECK(w128 < w64);
    CHECK(w256 < w128);
  }
}

TEST_CASE("theta rejects out-of-domain arguments") {
  CHECK_THROWS_AS(theta(1, 128), std::domain_error);
  auto saved = primlab::primes::default_sieve_limit();
  primlab::primes::set_default_sieve_limit(1'000'000);
  CHECK_THROWS_AS(theta(2'000'000, 128), std::out_of_range);
  primlab::primes::set_default_sieve_limit(saved);
}

TEST_CASE("theta stays below x up to a million") {
  auto rep = theta_lt_x_scan(1'000'000);
  CHECK(rep.verdict == primlab::bounds::Verdict::AllHold);
  CHECK(rep.inequality == "theta_lt_x");
  CHECK(rep.lo == 2);
  CHECK(rep.hi == 1'000'000);
  CHECK(rep.precision_used == 128);
}

TEST_CASE("theta scan trivial and oracle-sized limits") {
  auto rep2 = theta_lt_x_scan(2);
  CHECK(rep2.verdict == primlab::bounds::Verdict::AllHold);

  auto rep4 = theta_lt_x_scan(10'000);
  CHECK(rep4.verdict == primlab::bounds::Verdict::AllHold);
  // naive oracle: the max of theta(p)/p stays below 1, and not by accident
  auto ps = oracle::naive_primes(10'000);
  double acc = 0.0, worst = 0.0;
  for (auto p : ps) {
    acc += std::log(static_cast<double>(p));
    worst = std::max(worst, acc / static_cast<double>(p));
  }
  CHECK(worst < 1.0);
  CHECK(worst > 0.9);  // the margin the scan certifies is genuinely thin
}

TEST_CASE("theta scan checkpoints round-trip and resume") {
  namespace fs = std::filesystem;
  fs::path dir = fs::temp_directory_path() / "primlab_ckpt_test";
  fs::remove_all(dir);

  auto rep = theta_lt_x_scan(220'000'000, 128, 1024, dir.string());
  CHECK(rep.verdict == primlab::bounds::Verdict::AllHold);

  auto cks = primlab::primes::read_theta_checkpoints(
      (dir / "theta_scan.ckpt").string());
  REQUIRE(cks.size() == 2);
  CHECK(cks[0].x == 100'000'000);
  CHECK(cks[0].count == 5'761'455);
  CHECK(cks[1].x == 200'000'000);
  CHECK(cks[1].count == 11'078'937);

  // theta at the checkpoint recomputed from scratch must agree
  auto t = theta(100'000'000, 160);
  CHECK(mpfr_cmp(cks[0].theta.lo(), t.hi()) <= 0);
  CHECK(mpfr_cmp(t.lo(), cks[0].theta.hi()) <= 0);

  // resumed run: same verdict, and no new checkpoint lines for old ground
  auto rep2 = theta_lt_x_scan(220'000'000, 128, 1024, dir.string());
  CHECK(rep2.verdict == primlab::bounds::Verdict::AllHold);
  auto cks2 = primlab::primes::read_theta_checkpoints(
      (dir / "theta_scan.ckpt").string());
  CHECK(cks2.size() == 2);

  // a longer scan picks up where the file ends
  auto rep3 = theta_lt_x_scan(320'000'000, 128, 1024, dir.string());
  CHECK(rep3.verdict == primlab::bounds::Verdict::AllHold);
  auto cks3 = primlab::primes::read_theta_checkpoints(
      (dir / "theta_scan.ckpt").string());
  REQUIRE(cks3.size() == 3);
  CHECK(cks3[2].x == 300'000'000);
  CHECK(cks3[2].count == 16'252'325);
  fs::remove_all(dir);
}

TEST_CASE("report serialization is stable") {
  primlab::bounds::VerificationReport rep;
  rep.inequality = "theta_lt_x";
  rep.lo = 2;
  rep.hi = 1000;
  rep.verdict = primlab::bounds::Verdict::AllHold;
  rep.precision_used = 128;
  rep.runtime_s = 1.5;
  CHECK(rep.to_json(true) ==
        "{\"inequality\":\"theta_lt_x\",\"range\":[2,1000],"
        "\"verdict\":\"AllHold\",\"failures\":[],\"threshold\":null,"
        "\"precision_bits\":128,\"runtime_s\":\"-\"}");

  rep.verdict = primlab::bounds::Verdict::FailuresAt;
  rep.failures = {mpz_class(6), mpz_class(12)};
  CHECK(rep.to_json(true).find("\"failures\":[6,12]") != std::string::npos);

  rep.verdict = primlab::bounds::Verdict::ThresholdFound;
  rep.threshold = 740'322;
  CHECK(rep.to_json(true).find("\"threshold\":740322") != std::string::npos);
}
