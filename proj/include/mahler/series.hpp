#ifndef MAHLER_SERIES_HPP
#define MAHLER_SERIES_HPP

#include <cstddef>
#include <stdexcept>
#include <vector>

#include "fields.hpp"
#include "poly.hpp"

namespace mahler {

struct ZeroConstantTerm : std::runtime_error {
    ZeroConstantTerm() : std::runtime_error("series has zero constant term") {}
};

/// Finite prefix of a formal power series: exactly `precision` coefficients
/// f(0)..f(N-1).  Every operation returns the tightest precision provable
/// from its inputs; products and sums take the minimum of the operand
/// precisions.
template <class F>
class TruncatedSeries {
public:
    using K = typename F::Scalar;

    explicit TruncatedSeries(F field = F{}) : field_(field) {}
    TruncatedSeries(F field, std::vector<K> coeffs) : field_(field), c_(std::move(coeffs)) {}
    /// Zero series at a given precision.
    TruncatedSeries(F field, std::size_t precision)
        : field_(field), c_(precision, field.zero()) {}

    static TruncatedSeries from_polynomial(const Polynomial<F>& p, std::size_t precision) {
        TruncatedSeries s(p.field(), precision);
        for (std::size_t i = 0; i < precision; ++i) s.c_[i] = p.coeff(i);
        return s;
    }

    const F& field() const { return field_; }
    std::size_t precision() const { return c_.size(); }
    const std::vector<K>& coeffs() const { return c_; }
    K coeff(std::size_t i) const {
        if (i >= c_.size()) throw std::out_of_range("series coefficient beyond precision");
        return c_[i];
    }
    K& at(std::size_t i) { return c_.at(i); }

    bool is_zero_prefix() const {
        for (const auto& x : c_)
            if (!mahler::is_zero(x)) return false;
        return true;
    }

    TruncatedSeries truncate(std::size_t n) const {
        if (n >= c_.size()) return *this;
        return TruncatedSeries(field_, std::vector<K>(c_.begin(), c_.begin() + static_cast<long>(n)));
    }

    friend TruncatedSeries operator+(const TruncatedSeries& a, const TruncatedSeries& b) {
        a.check(b);
        std::size_t n = std::min(a.precision(), b.precision());
        TruncatedSeries r(a.field_, n);
        for (std::size_t i = 0; i < n; ++i) r.c_[i] = a.c_[i] + b.c_[i];
        return r;
    }
    friend TruncatedSeries operator-(const TruncatedSeries& a, const TruncatedSeries& b) {
        a.check(b);
        std::size_t n = std::min(a.precision(), b.precision());
        TruncatedSeries r(a.field_, n);
        for (std::size_t i = 0; i < n; ++i) r.c_[i] = a.c_[i] - b.c_[i];
        return r;
    }
    TruncatedSeries operator-() const {
        TruncatedSeries r = *this;
        for (auto& x : r.c_) x = -x;
        return r;
    }
    friend TruncatedSeries operator*(const TruncatedSeries& a, const TruncatedSeries& b) {
        a.check(b);
        std::size_t n = std::min(a.precision(), b.precision());
        TruncatedSeries r(a.field_, n);
        for (std::size_t i = 0; i < n && i < a.c_.size(); ++i) {
            if (mahler::is_zero(a.c_[i])) continue;
            for (std::size_t j = 0; i + j < n; ++j) r.c_[i + j] += a.c_[i] * b.c_[j];
        }
        return r;
    }
    /// Polynomials are exact, so multiplying by one preserves precision.
    friend TruncatedSeries operator*(const Polynomial<F>& p, const TruncatedSeries& s) {
        if (!(p.field() == s.field_)) throw FieldMismatch();
        TruncatedSeries r(s.field_, s.precision());
        for (std::size_t i = 0; i <= static_cast<std::size_t>(std::max(p.degree(), 0L)) && !p.is_zero();
             ++i) {
            K pi = p.coeff(i);
            if (mahler::is_zero(pi)) continue;
            for (std::size_t j = 0; i + j < r.precision(); ++j) r.c_[i + j] += pi * s.c_[j];
        }
        return r;
    }

    friend bool operator==(const TruncatedSeries& a, const TruncatedSeries& b) {
        if (a.precision() != b.precision()) return false;
        for (std::size_t i = 0; i < a.c_.size(); ++i)
            if (!(a.c_[i] == b.c_[i])) return false;
        return true;
    }

    /// Index of the first nonzero coefficient, or precision() if none.
    std::size_t first_nonzero() const {
        for (std::size_t i = 0; i < c_.size(); ++i)
            if (!mahler::is_zero(c_[i])) return i;
        return c_.size();
    }

    /// Head/tail split F = head + x^a * tail; tail precision drops by a.
    TruncatedSeries tail_from(std::size_t a) const {
        if (a > c_.size()) throw std::out_of_range("tail_from beyond precision");
        return TruncatedSeries(field_, std::vector<K>(c_.begin() + static_cast<long>(a), c_.end()));
    }
    Polynomial<F> head(std::size_t a) const {
        return Polynomial<F>(field_, std::vector<K>(c_.begin(),
                                                    c_.begin() + static_cast<long>(std::min(a, c_.size()))));
    }

private:
    void check(const TruncatedSeries& o) const {
        if (!(field_ == o.field_)) throw FieldMismatch();
    }

    F field_;
    std::vector<K> c_;
};

/// F(x^e); precision grows to e*N since every skipped index is known zero.
template <class F>
TruncatedSeries<F> substitute_power(const TruncatedSeries<F>& f, std::size_t e) {
    if (e == 0) throw std::invalid_argument("substitute_power: e must be >= 1");
    if (e == 1) return f;
    TruncatedSeries<F> r(f.field(), f.precision() * e);
    for (std::size_t i = 0; i < f.precision(); ++i) r.at(i * e) = f.coeffs()[i];
    return r;
}

/// Lambda_b(F) = sum f(k*i + b) x^i with precision ceil((N - b) / k).
template <class F>
TruncatedSeries<F> cartier_section(const TruncatedSeries<F>& f, std::size_t k, std::size_t b) {
    if (k < 2) throw std::invalid_argument("cartier_section: base must be >= 2");
    if (b >= k) throw std::invalid_argument("cartier_section: digit out of range");
    std::size_t n = f.precision() > b ? (f.precision() - b + k - 1) / k : 0;
    TruncatedSeries<F> r(f.field(), n);
    for (std::size_t i = 0; i < n; ++i) r.at(i) = f.coeffs()[k * i + b];
    return r;
}

/// Multiplicative inverse of a series with nonzero constant term.
template <class F>
TruncatedSeries<F> series_invert(const TruncatedSeries<F>& f) {
    if (f.precision() == 0) return f;
    if (is_zero(f.coeffs()[0])) throw ZeroConstantTerm();
    std::size_t n = f.precision();
    TruncatedSeries<F> g(f.field(), n);
    typename F::Scalar c0inv = f.field().one() / f.coeffs()[0];
    g.at(0) = c0inv;
    for (std::size_t m = 1; m < n; ++m) {
        auto acc = f.field().zero();
        for (std::size_t j = 0; j < m; ++j) acc += f.coeffs()[m - j] * g.coeffs()[j];
        g.at(m) = -acc * c0inv;
    }
    return g;
}

}  // namespace mahler

#endif
