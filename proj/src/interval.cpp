#include "primlab/interval.hpp"

#include <algorithm>
#include <map>
#include <mutex>
#include <vector>

namespace primlab::rigor {

Interval::Interval(mpfr_prec_t prec) : prec_(prec) {
    mpfr_init2(lo_, prec);
    mpfr_init2(hi_, prec);
    mpfr_set_zero(lo_, 1);
    mpfr_set_zero(hi_, 1);
}

Interval::Interval(const Interval& other) : prec_(other.prec_) {
    mpfr_init2(lo_, prec_);
    mpfr_init2(hi_, prec_);
    mpfr_set(lo_, other.lo_, MPFR_RNDD);
    mpfr_set(hi_, other.hi_, MPFR_RNDU);
}

Interval::Interval(Interval&& other) noexcept : prec_(other.prec_) {
    mpfr_init2(lo_, 2);
    mpfr_init2(hi_, 2);
    mpfr_swap(lo_, other.lo_);
    mpfr_swap(hi_, other.hi_);
}

Interval& Interval::operator=(const Interval& other) {
    if (this != &other) {
        if (prec_ != other.prec_) {
            mpfr_set_prec(lo_, other.prec_);
            mpfr_set_prec(hi_, other.prec_);
            prec_ = other.prec_;
        }
        mpfr_set(lo_, other.lo_, MPFR_RNDD);
        mpfr_set(hi_, other.hi_, MPFR_RNDU);
    }
    return *this;
}

Interval& Interval::operator=(Interval&& other) noexcept {
    mpfr_swap(lo_, other.lo_);
    mpfr_swap(hi_, other.hi_);
    std::swap(prec_, other.prec_);
    return *this;
}

Interval::~Interval() {
    mpfr_clear(lo_);
    mpfr_clear(hi_);
}

Interval Interval::exact_ui(unsigned long v, mpfr_prec_t prec) {
    Interval r(prec);
    mpfr_set_ui(r.lo_, v, MPFR_RNDD);
    mpfr_set_ui(r.hi_, v, MPFR_RNDU);
    return r;
}

Interval Interval::exact_si(long v, mpfr_prec_t prec) {
    Interval r(prec);
    mpfr_set_si(r.lo_, v, MPFR_RNDD);
    mpfr_set_si(r.hi_, v, MPFR_RNDU);
    return r;
}

Interval Interval::of_mpz(const mpz_class& v, mpfr_prec_t prec) {
    Interval r(prec);
    mpfr_set_z(r.lo_, v.get_mpz_t(), MPFR_RNDD);
    mpfr_set_z(r.hi_, v.get_mpz_t(), MPFR_RNDU);
    return r;
}

Interval Interval::of_mpq(const mpq_class& v, mpfr_prec_t prec) {
    Interval r(prec);
    mpfr_set_q(r.lo_, v.get_mpq_t(), MPFR_RNDD);
    mpfr_set_q(r.hi_, v.get_mpq_t(), MPFR_RNDU);
    return r;
}

Interval Interval::of_decimal(const std::string& s, mpfr_prec_t prec) {
    Interval r(prec);
    if (mpfr_set_str(r.lo_, s.c_str(), 10, MPFR_RNDD) != 0) {
        throw std::invalid_argument("bad decimal literal: " + s);
    }
    mpfr_set_str(r.hi_, s.c_str(), 10, MPFR_RNDU);
    return r;
}

Interval Interval::zero(mpfr_prec_t prec) { return Interval(prec); }

Interval Interval::from_endpoints(const mpfr_t& lo, const mpfr_t& hi,
                                  mpfr_prec_t prec) {
    Interval r(prec);
    mpfr_set(r.lo_, lo, MPFR_RNDD);
    mpfr_set(r.hi_, hi, MPFR_RNDU);
    if (!r.valid()) throw std::invalid_argument("from_endpoints: lo > hi");
    return r;
}

bool Interval::contains_zero() const {
    return mpfr_sgn(lo_) <= 0 && mpfr_sgn(hi_) >= 0;
}

bool Interval::contains(const mpfr_t& x) const {
    return mpfr_lessequal_p(lo_, x) && mpfr_lessequal_p(x, hi_);
}

bool Interval::contains_mpq(const mpq_class& q) const {
    return mpfr_cmp_q(lo_, q.get_mpq_t()) <= 0 &&
           mpfr_cmp_q(hi_, q.get_mpq_t()) >= 0;
}

bool Interval::inside(const Interval& other) const {
    return mpfr_lessequal_p(other.lo_, lo_) && mpfr_lessequal_p(hi_, other.hi_);
}

double Interval::width_d() const {
    mpfr_t w;
    mpfr_init2(w, 64);
    mpfr_sub(w, hi_, lo_, MPFR_RNDU);
    double d = mpfr_get_d(w, MPFR_RNDU);
    mpfr_clear(w);
    return d;
}

bool Interval::certainly_less(const Interval& a, const Interval& b) {
    return mpfr_less_p(a.hi_, b.lo_);
}

bool Interval::certainly_less(const mpq_class& a, const Interval& b) {
    return mpfr_cmp_q(b.lo_, a.get_mpq_t()) > 0;
}

bool Interval::certainly_less(const Interval& a, const mpq_class& b) {
    return mpfr_cmp_q(a.hi_, b.get_mpq_t()) < 0;
}

mpfr_prec_t Interval::join_prec(const Interval& a, const Interval& b) {
    return std::max(a.prec_, b.prec_);
}

Interval Interval::operator+(const Interval& b) const {
    Interval r(join_prec(*this, b));
    mpfr_add(r.lo_, lo_, b.lo_, MPFR_RNDD);
    mpfr_add(r.hi_, hi_, b.hi_, MPFR_RNDU);
    return r;
}

Interval Interval::operator-(const Interval& b) const {
    Interval r(join_prec(*this, b));
    mpfr_sub(r.lo_, lo_, b.hi_, MPFR_RNDD);
    mpfr_sub(r.hi_, hi_, b.lo_, MPFR_RNDU);
    return r;
}

Interval& Interval::add_assign(const Interval& b) {
    mpfr_add(lo_, lo_, b.lo_, MPFR_RNDD);
    mpfr_add(hi_, hi_, b.hi_, MPFR_RNDU);
    return *this;
}

Interval& Interval::sub_assign(const Interval& b) {
    mpfr_sub(lo_, lo_, b.hi_, MPFR_RNDD);
    mpfr_sub(hi_, hi_, b.lo_, MPFR_RNDU);
    return *this;
}

Interval Interval::operator*(const Interval& b) const {
    Interval r(join_prec(*this, b));
    // Fast path: both operands nonnegative.
    if (mpfr_sgn(lo_) >= 0 && mpfr_sgn(b.lo_) >= 0) {
        mpfr_mul(r.lo_, lo_, b.lo_, MPFR_RNDD);
        mpfr_mul(r.hi_, hi_, b.hi_, MPFR_RNDU);
        return r;
    }
    // General case: min/max over the four endpoint products, each rounded
    // in the direction it feeds.
    mpfr_t t;
    mpfr_init2(t, r.prec_);
    mpfr_mul(r.lo_, lo_, b.lo_, MPFR_RNDD);
    mpfr_mul(t, lo_, b.hi_, MPFR_RNDD);
    mpfr_min(r.lo_, r.lo_, t, MPFR_RNDD);
    mpfr_mul(t, hi_, b.lo_, MPFR_RNDD);
    mpfr_min(r.lo_, r.lo_, t, MPFR_RNDD);
    mpfr_mul(t, hi_, b.hi_, MPFR_RNDD);
    mpfr_min(r.lo_, r.lo_, t, MPFR_RNDD);

    mpfr_mul(r.hi_, lo_, b.lo_, MPFR_RNDU);
    mpfr_mul(t, lo_, b.hi_, MPFR_RNDU);
    mpfr_max(r.hi_, r.hi_, t, MPFR_RNDU);
    mpfr_mul(t, hi_, b.lo_, MPFR_RNDU);
    mpfr_max(r.hi_, r.hi_, t, MPFR_RNDU);
    mpfr_mul(t, hi_, b.hi_, MPFR_RNDU);
    mpfr_max(r.hi_, r.hi_, t, MPFR_RNDU);
    mpfr_clear(t);
    return r;
}

Interval Interval::operator/(const Interval& b) const {
    if (b.contains_zero()) {
        throw std::domain_error("interval division by enclosure containing 0");
    }
    return *this * b.inv();
}

Interval Interval::inv() const {
    if (contains_zero()) {
        throw std::domain_error("interval inverse of enclosure containing 0");
    }
    Interval r(prec_);
    mpfr_ui_div(r.lo_, 1, hi_, MPFR_RNDD);
    mpfr_ui_div(r.hi_, 1, lo_, MPFR_RNDU);
    return r;
}

Interval Interval::operator-() const {
    Interval r(prec_);
    mpfr_neg(r.lo_, hi_, MPFR_RNDD);
    mpfr_neg(r.hi_, lo_, MPFR_RNDU);
    return r;
}

Interval Interval::add_ui(unsigned long v) const {
    Interval r(prec_);
    mpfr_add_ui(r.lo_, lo_, v, MPFR_RNDD);
    mpfr_add_ui(r.hi_, hi_, v, MPFR_RNDU);
    return r;
}

Interval Interval::sub_ui(unsigned long v) const {
    Interval r(prec_);
    mpfr_sub_ui(r.lo_, lo_, v, MPFR_RNDD);
    mpfr_sub_ui(r.hi_, hi_, v, MPFR_RNDU);
    return r;
}

Interval Interval::mul_ui(unsigned long v) const {
    Interval r(prec_);
    mpfr_mul_ui(r.lo_, lo_, v, MPFR_RNDD);
    mpfr_mul_ui(r.hi_, hi_, v, MPFR_RNDU);
    return r;
}

Interval Interval::div_ui(unsigned long v) const {
    if (v == 0) throw std::domain_error("division by zero");
    Interval r(prec_);
    mpfr_div_ui(r.lo_, lo_, v, MPFR_RNDD);
    mpfr_div_ui(r.hi_, hi_, v, MPFR_RNDU);
    return r;
}

Interval Interval::mul_2exp(long e) const {
    Interval r(prec_);
    mpfr_mul_2si(r.lo_, lo_, e, MPFR_RNDD);
    mpfr_mul_2si(r.hi_, hi_, e, MPFR_RNDU);
    return r;
}

Interval Interval::log() const {
    if (mpfr_sgn(lo_) <= 0) {
        throw std::domain_error("interval log requires lo > 0");
    }
    Interval r(prec_);
    mpfr_log(r.lo_, lo_, MPFR_RNDD);
    mpfr_log(r.hi_, hi_, MPFR_RNDU);
    return r;
}

Interval Interval::exp() const {
    Interval r(prec_);
    mpfr_exp(r.lo_, lo_, MPFR_RNDD);
    mpfr_exp(r.hi_, hi_, MPFR_RNDU);
    return r;
}

Interval Interval::sqrt() const {
    if (mpfr_sgn(lo_) < 0) {
        throw std::domain_error("interval sqrt requires lo >= 0");
    }
    Interval r(prec_);
    mpfr_sqrt(r.lo_, lo_, MPFR_RNDD);
    mpfr_sqrt(r.hi_, hi_, MPFR_RNDU);
    return r;
}

Interval Interval::square() const {
    Interval r(prec_);
    if (mpfr_sgn(lo_) >= 0) {
        mpfr_sqr(r.lo_, lo_, MPFR_RNDD);
        mpfr_sqr(r.hi_, hi_, MPFR_RNDU);
    } else if (mpfr_sgn(hi_) <= 0) {
        mpfr_sqr(r.lo_, hi_, MPFR_RNDD);
        mpfr_sqr(r.hi_, lo_, MPFR_RNDU);
    } else {
        mpfr_set_zero(r.lo_, 1);
        mpfr_t a, b;
        mpfr_init2(a, prec_);
        mpfr_init2(b, prec_);
        mpfr_sqr(a, lo_, MPFR_RNDU);
        mpfr_sqr(b, hi_, MPFR_RNDU);
        mpfr_max(r.hi_, a, b, MPFR_RNDU);
        mpfr_clear(a);
        mpfr_clear(b);
    }
    return r;
}

Interval Interval::pow_int(long n) const {
    if (n == 0) return exact_ui(1, prec_);
    if (n < 0) return pow_int(-n).inv();
    if (n == 2) return square();
    Interval r(prec_);
    if (mpfr_sgn(lo_) >= 0) {
        mpfr_pow_ui(r.lo_, lo_, (unsigned long)n, MPFR_RNDD);
        mpfr_pow_ui(r.hi_, hi_, (unsigned long)n, MPFR_RNDU);
        return r;
    }
    if (n % 2 == 1) {  // odd power is monotone
        mpfr_pow_ui(r.lo_, lo_, (unsigned long)n, MPFR_RNDD);
        mpfr_pow_ui(r.hi_, hi_, (unsigned long)n, MPFR_RNDU);
        return r;
    }
    // even power of an interval reaching below 0
    return square().pow_int(n / 2);
}

Interval Interval::log_ui(unsigned long v, mpfr_prec_t prec) {
    if (v == 0) throw std::domain_error("log of 0");
    Interval r(prec);
    mpfr_log_ui(r.lo_, v, MPFR_RNDD);
    mpfr_log_ui(r.hi_, v, MPFR_RNDU);
    return r;
}

Interval Interval::log_mpz(const mpz_class& v, mpfr_prec_t prec) {
    if (sgn(v) <= 0) throw std::domain_error("log of nonpositive integer");
    return of_mpz(v, prec).log();
}

Interval Interval::log_mpq(const mpq_class& v, mpfr_prec_t prec) {
    if (sgn(v) <= 0) throw std::domain_error("log of nonpositive rational");
    return of_mpq(v, prec).log();
}

Interval Interval::log1p_inv_ui(unsigned long v, mpfr_prec_t prec) {
    Interval r(prec);
    mpfr_t q;
    mpfr_init2(q, prec);
    mpfr_set_ui(q, 1, MPFR_RNDD);
    mpfr_div_ui(q, q, v, MPFR_RNDD);
    mpfr_log1p(r.lo_, q, MPFR_RNDD);
    mpfr_set_ui(q, 1, MPFR_RNDU);
    mpfr_div_ui(q, q, v, MPFR_RNDU);
    mpfr_log1p(r.hi_, q, MPFR_RNDU);
    mpfr_clear(q);
    return r;
}

Interval Interval::neg_log1m_inv_ui(unsigned long v, mpfr_prec_t prec) {
    if (v < 2) throw std::domain_error("need v >= 2");
    // -log(1 - 1/v) = log(1 + 1/(v-1))
    return log1p_inv_ui(v - 1, prec);
}

std::string Interval::str(int digits) const {
    char* s = nullptr;
    mpfr_asprintf(&s, "[%.*RDg, %.*RUg]", digits, lo_, digits, hi_);
    std::string out(s);
    mpfr_free_str(s);
    return out;
}

std::string Interval::truncated_decimal(int digits) const {
    auto trunc_one = [&](const mpfr_t& v, mpfr_rnd_t rnd) {
        char* s = nullptr;
        // RNDZ format gives truncation toward zero at `digits` fractionals
        mpfr_asprintf(&s, "%.*R*f", digits, rnd, v);
        std::string out(s);
        mpfr_free_str(s);
        return out;
    };
    std::string a = trunc_one(lo_, MPFR_RNDZ);
    std::string b = trunc_one(hi_, MPFR_RNDZ);
    if (a != b) {
        throw std::runtime_error(
            "enclosure too wide to certify " + std::to_string(digits) +
            "-digit truncation: " + str(digits + 4));
    }
    return a;
}

Order certify_compare(const std::function<Interval(mpfr_prec_t)>& lhs,
                      const std::function<Interval(mpfr_prec_t)>& rhs,
                      mpfr_prec_t max_precision) {
    for (mpfr_prec_t p = 64;; p *= 2) {
        if (p > max_precision) p = max_precision;
        Interval a = lhs(p);
        Interval b = rhs(p);
        if (Interval::certainly_less(a, b)) return Order::LessThan;
        if (Interval::certainly_less(b, a)) return Order::GreaterThan;
        if (p >= max_precision) break;
    }
    return Order::Undecided;
}

namespace {

// Mertens constant by its defining prime sum over p <= cutoff, with the
// tail over larger primes bounded via |log(1-1/p) + 1/p| < 1/(2p(p-1))
// and sum_{n>X} 1/(2n(n-1)) = 1/(2X), then widened by 2^(-prec+8) to
// absorb the accumulated per-term rounding.
Interval mertens_sum(mpfr_prec_t prec, const Interval& gamma) {
    const unsigned long cutoff = 1000000;
    std::vector<char> composite(cutoff + 1, 0);
    mpfr_t sum_lo, sum_hi, t, q;
    mpfr_init2(sum_lo, prec);
    mpfr_init2(sum_hi, prec);
    mpfr_init2(t, prec);
    mpfr_init2(q, prec);
    mpfr_set_zero(sum_lo, 1);
    mpfr_set_zero(sum_hi, 1);
    for (unsigned long p = 2; p <= cutoff; ++p) {
        if (composite[p]) continue;
        for (unsigned long m = p * p; m <= cutoff; m += p) composite[m] = 1;
        // log(1 - 1/p) + 1/p, each endpoint rounded outward
        mpfr_set_si(q, -1, MPFR_RNDD);
        mpfr_div_ui(q, q, p, MPFR_RNDD);
        mpfr_log1p(t, q, MPFR_RNDD);
        mpfr_set_ui(q, 1, MPFR_RNDD);
        mpfr_div_ui(q, q, p, MPFR_RNDD);
        mpfr_add(q, t, q, MPFR_RNDD);
        mpfr_add(sum_lo, sum_lo, q, MPFR_RNDD);
        mpfr_set_si(q, -1, MPFR_RNDU);
        mpfr_div_ui(q, q, p, MPFR_RNDU);
        mpfr_log1p(t, q, MPFR_RNDU);
        mpfr_set_ui(q, 1, MPFR_RNDU);
        mpfr_div_ui(q, q, p, MPFR_RNDU);
        mpfr_add(q, t, q, MPFR_RNDU);
        mpfr_add(sum_hi, sum_hi, q, MPFR_RNDU);
    }
    // tail in [-1/(2*cutoff), 0], plus safety widening on both sides
    mpfr_set_si(t, -1, MPFR_RNDD);
    mpfr_div_ui(t, t, 2 * cutoff, MPFR_RNDD);
    mpfr_add(sum_lo, sum_lo, t, MPFR_RNDD);
    mpfr_set_ui_2exp(t, 1, -(long)prec + 8, MPFR_RNDU);
    mpfr_add(sum_hi, sum_hi, t, MPFR_RNDU);
    mpfr_neg(t, t, MPFR_RNDD);
    mpfr_add(sum_lo, sum_lo, t, MPFR_RNDD);
    Interval sum = Interval::from_endpoints(sum_lo, sum_hi, prec);
    mpfr_clears(sum_lo, sum_hi, t, q, (mpfr_ptr)nullptr);
    return gamma + sum;
}

}  // namespace

ConstantTable::ConstantTable(mpfr_prec_t prec)
    : gamma(prec), exp_gamma(prec), zeta2(prec), mertens_B(prec) {
    mpfr_t a, b;
    mpfr_init2(a, prec);
    mpfr_init2(b, prec);
    mpfr_const_euler(a, MPFR_RNDD);
    mpfr_const_euler(b, MPFR_RNDU);
    gamma = Interval::from_endpoints(a, b, prec);
    exp_gamma = gamma.exp();
    mpfr_const_pi(a, MPFR_RNDD);
    mpfr_const_pi(b, MPFR_RNDU);
    zeta2 = Interval::from_endpoints(a, b, prec).square().div_ui(6);
    mpfr_clears(a, b, (mpfr_ptr)nullptr);
    mertens_B = mertens_sum(prec, gamma);
}

const ConstantTable& constants(mpfr_prec_t prec) {
    static std::mutex mu;
    static std::map<mpfr_prec_t, ConstantTable> cache;
    std::scoped_lock lock(mu);
    auto it = cache.find(prec);
    if (it == cache.end()) {
        it = cache.emplace(prec, ConstantTable(prec)).first;
    }
    return it->second;
}

}  // namespace primlab::rigor
