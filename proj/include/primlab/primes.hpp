#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "primlab/interval.hpp"
#include "primlab/report.hpp"

namespace primlab::primes {

// Span limit for a single sieve_segment call; scans iterate blocks of this
// size.  2^22 keeps the odd-only bitmap at 256 KiB.
inline constexpr std::uint64_t kSegmentSpan = 1ull << 22;

// Interval between scan checkpoints written to disk.
inline constexpr std::uint64_t kCheckpointStride = 100'000'000ull;

struct PrimeRange {
  std::uint64_t lo = 0;  // inclusive
  std::uint64_t hi = 0;  // exclusive
  std::vector<std::uint64_t> primes;
};

struct ThetaCheckpoint {
  std::uint64_t x = 0;
  std::uint64_t count = 0;  // number of primes <= x
  rigor::Interval theta;    // encloses sum of log p over primes <= x
};

// Soft cap on how far index-based queries will sieve.  Settable from the CLI
// (--sieve-limit); queries that would run past it throw instead of grinding.
std::uint64_t default_sieve_limit();
void set_default_sieve_limit(std::uint64_t limit);

// Exactly the primes in [lo, hi).  hi - lo must be <= kSegmentSpan; base
// primes up to sqrt(hi) are streamed internally, so windows near 10^19 work.
PrimeRange sieve_segment(std::uint64_t lo, std::uint64_t hi);

// Calls fn(p) for every prime p in [lo, hi) in increasing order.
void for_primes(std::uint64_t lo, std::uint64_t hi,
                const std::function<void(std::uint64_t)>& fn);

// k-th prime, 1-indexed (p_1 = 2).  Sieve-backed up to ~10^10; beyond that a
// combinatorial count locates the neighborhood first.  Throws if the answer
// would exceed default_sieve_limit().
std::uint64_t nth_prime(std::uint64_t k);

// pi(x): number of primes <= x.  Streaming count; x is capped by the sieve
// limit.
std::uint64_t prime_count(std::uint64_t x);

// Combinatorial pi(x) in ~x^(2/3) time, no enumeration.  Used to cross-check
// streaming counts and to reach the two paper-scale indices near 10^13.
std::uint64_t prime_count_meissel(std::uint64_t x);

// Enclosure of theta(x) = sum of log p over primes <= x.  Per-segment exact
// integer products feed one big-integer log each; partial sums combine by a
// fixed balanced tree, so the result is deterministic for a given precision.
rigor::Interval theta(std::uint64_t x, mpfr_prec_t precision = 128);

// Value of PRIMLAB_CACHE_DIR, or empty when unset.
std::string cache_dir_from_env();

// Certifies theta(p) < p at every prime p <= limit (theta is constant between
// primes, so prime arguments suffice).  Writes resumable checkpoints every
// kCheckpointStride integers when cache_dir is non-empty.  A comparison that
// still straddles at max_precision throws rigor::UndecidedError.
bounds::VerificationReport theta_lt_x_scan(std::uint64_t limit,
                                           mpfr_prec_t precision = 128,
                                           mpfr_prec_t max_precision = 1024,
                                           const std::string& cache_dir = cache_dir_from_env());

std::vector<ThetaCheckpoint> read_theta_checkpoints(const std::string& path);

}  // namespace primlab::primes
