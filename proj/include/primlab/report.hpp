#pragma once

#include <gmpxx.h>
#include <mpfr.h>

#include <string>
#include <vector>

namespace primlab::bounds {

enum class Verdict { AllHold, FailuresAt, ThresholdFound };

// Outcome of one verification pass over an index range.  The same record type
// is shared by prime-side scans (theta checks) and inequality scans, so the
// serialized form of every campaign stays uniform.
struct VerificationReport {
  std::string inequality;
  mpz_class lo;
  mpz_class hi;
  Verdict verdict = Verdict::AllHold;
  std::vector<mpz_class> failures;  // populated when verdict == FailuresAt
  mpz_class threshold;              // populated when verdict == ThresholdFound
  mpfr_prec_t precision_used = 0;
  double runtime_s = 0.0;

  // Single-line JSON with a fixed key order (inequality, range, verdict,
  // failures, threshold, precision_bits, runtime_s).  normalize_runtime
  // writes "-" in place of the timing so repeated runs are byte-identical.
  std::string to_json(bool normalize_runtime) const;
};

std::string verdict_name(Verdict v);

}  // namespace primlab::bounds
