#pragma once

#include <mpfr.h>
#include <gmpxx.h>

#include <cstdint>
#include <functional>
#include <stdexcept>
#include <string>

namespace primlab::rigor {

// Directed-rounding enclosure [lo, hi] of a real number. lo is rounded
// toward -inf, hi toward +inf, so the exact value of any expression built
// from enclosed operands stays inside the result.
class Interval {
public:
    explicit Interval(mpfr_prec_t prec = 128);
    Interval(const Interval& other);
    Interval(Interval&& other) noexcept;
    Interval& operator=(const Interval& other);
    Interval& operator=(Interval&& other) noexcept;
    ~Interval();

    static Interval exact_ui(unsigned long v, mpfr_prec_t prec);
    static Interval exact_si(long v, mpfr_prec_t prec);
    static Interval of_mpz(const mpz_class& v, mpfr_prec_t prec);
    static Interval of_mpq(const mpq_class& v, mpfr_prec_t prec);
    // Parses a decimal literal; the enclosure brackets the exact decimal.
    static Interval of_decimal(const std::string& s, mpfr_prec_t prec);
    static Interval zero(mpfr_prec_t prec);
    // Assembles an enclosure from endpoints the caller already rounded
    // outward. Requires lo <= hi.
    static Interval from_endpoints(const mpfr_t& lo, const mpfr_t& hi,
                                   mpfr_prec_t prec);

    mpfr_prec_t precision() const { return prec_; }
    const mpfr_t& lo() const { return lo_; }
    const mpfr_t& hi() const { return hi_; }
    double lo_d() const { return mpfr_get_d(lo_, MPFR_RNDD); }
    double hi_d() const { return mpfr_get_d(hi_, MPFR_RNDU); }

    bool valid() const { return mpfr_lessequal_p(lo_, hi_); }
    bool contains_zero() const;
    bool is_positive() const { return mpfr_sgn(lo_) > 0; }
    bool is_negative() const { return mpfr_sgn(hi_) < 0; }
    bool contains(const mpfr_t& x) const;
    bool contains_mpq(const mpq_class& q) const;
    // True when this is a subset of [other.lo, other.hi].
    bool inside(const Interval& other) const;
    double width_d() const;

    // a.hi strictly below b.lo: every member of a is below every member of b.
    static bool certainly_less(const Interval& a, const Interval& b);
    static bool certainly_less(const mpq_class& a, const Interval& b);
    static bool certainly_less(const Interval& a, const mpq_class& b);

    Interval operator+(const Interval& b) const;
    Interval operator-(const Interval& b) const;
    Interval operator*(const Interval& b) const;
    Interval operator/(const Interval& b) const;
    Interval operator-() const;

    Interval& add_assign(const Interval& b);   // in place, no realloc churn
    Interval& sub_assign(const Interval& b);

    Interval add_ui(unsigned long v) const;
    Interval sub_ui(unsigned long v) const;
    Interval mul_ui(unsigned long v) const;
    Interval div_ui(unsigned long v) const;
    Interval mul_2exp(long e) const;  // exact scaling by 2^e

    Interval log() const;       // requires lo > 0
    Interval exp() const;
    Interval sqrt() const;      // requires lo >= 0
    Interval pow_int(long n) const;
    Interval inv() const;       // 1/x, requires 0 not contained
    Interval square() const;    // correct when the interval straddles 0

    // log of an exact integer, a frequent hot-path operation
    static Interval log_ui(unsigned long v, mpfr_prec_t prec);
    static Interval log_mpz(const mpz_class& v, mpfr_prec_t prec);
    static Interval log_mpq(const mpq_class& v, mpfr_prec_t prec);
    // log(1 + 1/v) without forming the quotient
    static Interval log1p_inv_ui(unsigned long v, mpfr_prec_t prec);
    // -log(1 - 1/v) = log(v/(v-1)), the champion-product term
    static Interval neg_log1m_inv_ui(unsigned long v, mpfr_prec_t prec);

    // Decimal string "lo hi" for diagnostics.
    std::string str(int digits = 20) const;

    // Truncated decimal expansion (toward zero) with `digits` fractional
    // digits, certified: throws if lo and hi truncate differently.
    std::string truncated_decimal(int digits) const;

private:
    mpfr_prec_t prec_;
    mpfr_t lo_;
    mpfr_t hi_;

    static mpfr_prec_t join_prec(const Interval& a, const Interval& b);
};

enum class Order { LessThan, GreaterThan, Undecided };

// Thrown when a certified decision is required but the comparison still
// straddles at the maximum allowed precision.  Signals misconfiguration
// (or an exact tie), never a silently wrong verdict.
struct UndecidedError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Re-evaluates both sides at doubling precision (64, 128, ... max_precision)
// until the enclosures separate. Undecided only after max_precision.
Order certify_compare(const std::function<Interval(mpfr_prec_t)>& lhs,
                      const std::function<Interval(mpfr_prec_t)>& rhs,
                      mpfr_prec_t max_precision = 1024);

struct ConstantTable {
    Interval gamma;       // Euler-Mascheroni
    Interval exp_gamma;
    Interval zeta2;       // pi^2/6
    Interval mertens_B;   // gamma + sum_p (log(1-1/p) + 1/p)

    explicit ConstantTable(mpfr_prec_t prec);
};

// Cached per-precision table, built on first use.
const ConstantTable& constants(mpfr_prec_t prec);

}  // namespace primlab::rigor
