#ifndef MAHLER_RATFUN_HPP
#define MAHLER_RATFUN_HPP

#include <stdexcept>

#include "poly.hpp"
#include "series.hpp"

namespace mahler {

/// Quotient of polynomials, kept gcd-reduced.  The denominator is scaled to
/// constant term 1 when it does not vanish at 0, otherwise to monic.
template <class F>
class RationalFunction {
public:
    RationalFunction(Polynomial<F> num, Polynomial<F> den)
        : num_(std::move(num)), den_(std::move(den)) {
        if (den_.is_zero()) throw std::domain_error("zero denominator");
        auto g = gcd(num_, den_);
        if (!g.is_constant()) {
            num_ = exact_div(num_, g);
            den_ = exact_div(den_, g);
        }
        auto c = den_.constant_term();
        auto scale = is_zero(c) ? den_.leading() : c;
        typename F::Scalar inv = num_.field().one() / scale;
        num_ = num_ * inv;
        den_ = den_ * inv;
    }

    const Polynomial<F>& numerator() const { return num_; }
    const Polynomial<F>& denominator() const { return den_; }

    /// Power-series expansion at 0; requires denominator(0) != 0.
    TruncatedSeries<F> expand(std::size_t precision) const {
        auto d = TruncatedSeries<F>::from_polynomial(den_, precision);
        return num_ * series_invert(d);
    }

    friend bool operator==(const RationalFunction& a, const RationalFunction& b) {
        return a.num_ == b.num_ && a.den_ == b.den_;
    }

private:
    Polynomial<F> num_, den_;
};

}  // namespace mahler

#endif
