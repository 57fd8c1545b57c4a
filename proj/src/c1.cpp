#include <mpfr.h>

#include <algorithm>
#include <stdexcept>

#include "proppwalk/numerics.hpp"

namespace proppwalk {

namespace {

constexpr mpfr_prec_t kPrec = 96;

// RAII wrapper; mpfr_t is an array type and awkward to hold by value.
struct Real {
  mpfr_t v;
  Real() { mpfr_init2(v, kPrec); }
  ~Real() { mpfr_clear(v); }
  Real(const Real&) = delete;
  Real& operator=(const Real&) = delete;
};

Rational to_rational(const mpfr_t v) {
  Rational q;
  mpfr_get_q(q.get_mpq_t(), v);
  return q;
}

// Encloses |inf(y, t)| = y * C(t, m) / (t * 2^t), m = (t + y) / 2, in
// [lo, hi] through log C(t, m) = lgamma(t+1) - lgamma(m+1) - lgamma(t-m+1).
class TermEnclosure {
 public:
  TermEnclosure() {
    mpfr_const_log2(log2_lo_.v, MPFR_RNDD);
    mpfr_const_log2(log2_hi_.v, MPFR_RNDU);
  }

  void operator()(std::int64_t y, std::int64_t t, mpfr_t lo, mpfr_t hi) {
    const std::int64_t m = (t + y) / 2;
    // lgamma rounded to nearest is within half an ulp; stepping one ulp out
    // gives a rigorous enclosure of each of the three values.
    lngamma_enclose(t + 1, gt_lo_.v, gt_hi_.v);
    lngamma_enclose(m + 1, gm_lo_.v, gm_hi_.v);
    lngamma_enclose(t - m + 1, gr_lo_.v, gr_hi_.v);

    mpfr_sub(a_.v, gt_lo_.v, gm_hi_.v, MPFR_RNDD);
    mpfr_sub(a_.v, a_.v, gr_hi_.v, MPFR_RNDD);
    mpfr_mul_si(x_.v, log2_hi_.v, t, MPFR_RNDU);
    mpfr_sub(a_.v, a_.v, x_.v, MPFR_RNDD);

    mpfr_sub(b_.v, gt_hi_.v, gm_lo_.v, MPFR_RNDU);
    mpfr_sub(b_.v, b_.v, gr_lo_.v, MPFR_RNDU);
    mpfr_mul_si(x_.v, log2_lo_.v, t, MPFR_RNDD);
    mpfr_sub(b_.v, b_.v, x_.v, MPFR_RNDU);

    mpfr_exp(lo, a_.v, MPFR_RNDD);
    mpfr_exp(hi, b_.v, MPFR_RNDU);
    mpfr_mul_ui(lo, lo, static_cast<unsigned long>(y), MPFR_RNDD);
    mpfr_mul_ui(hi, hi, static_cast<unsigned long>(y), MPFR_RNDU);
    mpfr_div_ui(lo, lo, static_cast<unsigned long>(t), MPFR_RNDD);
    mpfr_div_ui(hi, hi, static_cast<unsigned long>(t), MPFR_RNDU);
  }

 private:
  void lngamma_enclose(std::int64_t n, mpfr_t lo, mpfr_t hi) {
    mpfr_set_si(x_.v, n, MPFR_RNDN);
    mpfr_lngamma(lo, x_.v, MPFR_RNDN);
    mpfr_set(hi, lo, MPFR_RNDN);
    mpfr_nextbelow(lo);
    mpfr_nextabove(hi);
  }

  Real log2_lo_;
  Real log2_hi_;
  Real a_;
  Real b_;
  Real x_;
  Real gt_lo_, gt_hi_, gm_lo_, gm_hi_, gr_lo_, gr_hi_;
};

}  // namespace

Rational c1_tail_constant() { return Rational(2073, 250); }  // 8.292

Rational c1_tail_bound(std::int64_t y_cut) {
  if (y_cut < 1) {
    throw std::invalid_argument("c1_tail_bound: y_cut must be >= 1");
  }
  Rational out = c1_tail_constant() / Rational(y_cut);
  out.canonicalize();
  return out;
}

C1Bracket c1_bracket(std::int64_t y_cut) {
  if (y_cut < 1) {
    throw std::invalid_argument("c1_bracket: y_cut must be >= 1");
  }
  const std::int64_t exact = std::min(y_cut, kC1ExactTerms);
  Dyadic exact_sum;
  for (std::int64_t y = 1; y <= exact; ++y) {
    exact_sum += inf(y, t_max(y)).abs();
  }

  Real lo_sum;
  Real hi_sum;
  mpfr_set_zero(lo_sum.v, 1);
  mpfr_set_zero(hi_sum.v, 1);
  if (y_cut > exact) {
    TermEnclosure enclose;
    Real lo;
    Real hi;
    for (std::int64_t y = exact + 1; y <= y_cut; ++y) {
      enclose(y, t_max(y), lo.v, hi.v);
      mpfr_add(lo_sum.v, lo_sum.v, lo.v, MPFR_RNDD);
      mpfr_add(hi_sum.v, hi_sum.v, hi.v, MPFR_RNDU);
    }
  }

  C1Bracket out;
  const Rational base = exact_sum.to_rational();
  out.lower = 2 * (base + to_rational(lo_sum.v));
  out.upper = 2 * (base + to_rational(hi_sum.v)) + c1_tail_bound(y_cut);
  out.lower.canonicalize();
  out.upper.canonicalize();
  out.terms_used = y_cut;
  out.exact_terms = exact;
  return out;
}

}  // namespace proppwalk
