#ifndef MAHLER_POLY_HPP
#define MAHLER_POLY_HPP

#include <cstddef>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "fields.hpp"

namespace mahler {

/// Dense univariate polynomial over an exact field.  Coefficients are
/// indexed from degree 0 and kept trimmed: the zero polynomial is the
/// empty coefficient list.
template <class F>
class Polynomial {
public:
    using K = typename F::Scalar;

    explicit Polynomial(F field = F{}) : field_(field) {}
    Polynomial(F field, std::vector<K> coeffs) : field_(field), c_(std::move(coeffs)) { trim(); }

    static Polynomial constant(F field, K v) { return Polynomial(field, {std::move(v)}); }
    static Polynomial monomial(F field, K v, std::size_t deg) {
        std::vector<K> c(deg + 1, field.zero());
        c[deg] = std::move(v);
        return Polynomial(field, std::move(c));
    }
    static Polynomial one(F field) { return constant(field, field.one()); }

    const F& field() const { return field_; }
    const std::vector<K>& coeffs() const { return c_; }
    bool is_zero() const { return c_.empty(); }
    bool is_constant() const { return c_.size() <= 1; }
    /// Degree of the zero polynomial is reported as -1.
    long degree() const { return static_cast<long>(c_.size()) - 1; }
    /// Order of vanishing at x = 0; 0 for the zero polynomial.
    std::size_t low_order() const {
        for (std::size_t i = 0; i < c_.size(); ++i)
            if (!mahler::is_zero(c_[i])) return i;
        return 0;
    }
    K coeff(std::size_t i) const { return i < c_.size() ? c_[i] : field_.zero(); }
    K constant_term() const { return coeff(0); }
    K leading() const {
        if (c_.empty()) return field_.zero();
        return c_.back();
    }

    K eval(const K& x) const {
        K r = field_.zero();
        for (std::size_t i = c_.size(); i-- > 0;) r = r * x + c_[i];
        return r;
    }

    friend Polynomial operator+(const Polynomial& a, const Polynomial& b) {
        a.check(b);
        std::vector<K> c(std::max(a.c_.size(), b.c_.size()), a.field_.zero());
        for (std::size_t i = 0; i < c.size(); ++i) c[i] = a.coeff(i) + b.coeff(i);
        return Polynomial(a.field_, std::move(c));
    }
    friend Polynomial operator-(const Polynomial& a, const Polynomial& b) {
        a.check(b);
        std::vector<K> c(std::max(a.c_.size(), b.c_.size()), a.field_.zero());
        for (std::size_t i = 0; i < c.size(); ++i) c[i] = a.coeff(i) - b.coeff(i);
        return Polynomial(a.field_, std::move(c));
    }
    Polynomial operator-() const {
        std::vector<K> c(c_);
        for (auto& x : c) x = -x;
        return Polynomial(field_, std::move(c));
    }
    friend Polynomial operator*(const Polynomial& a, const Polynomial& b) {
        a.check(b);
        if (a.is_zero() || b.is_zero()) return Polynomial(a.field_);
        std::vector<K> c(a.c_.size() + b.c_.size() - 1, a.field_.zero());
        for (std::size_t i = 0; i < a.c_.size(); ++i)
            for (std::size_t j = 0; j < b.c_.size(); ++j) c[i + j] += a.c_[i] * b.c_[j];
        return Polynomial(a.field_, std::move(c));
    }
    Polynomial operator*(const K& s) const {
        std::vector<K> c(c_);
        for (auto& x : c) x = x * s;
        return Polynomial(field_, std::move(c));
    }
    Polynomial& operator+=(const Polynomial& o) { return *this = *this + o; }
    Polynomial& operator-=(const Polynomial& o) { return *this = *this - o; }
    Polynomial& operator*=(const Polynomial& o) { return *this = *this * o; }

    friend bool operator==(const Polynomial& a, const Polynomial& b) {
        if (a.c_.size() != b.c_.size()) return false;
        for (std::size_t i = 0; i < a.c_.size(); ++i)
            if (!(a.c_[i] == b.c_[i])) return false;
        return true;
    }
    friend bool operator!=(const Polynomial& a, const Polynomial& b) { return !(a == b); }

    /// P(x^e).
    Polynomial substitute_power(std::size_t e) const {
        if (e == 0) throw std::invalid_argument("substitute_power: e must be >= 1");
        if (c_.empty() || e == 1) return *this;
        std::vector<K> c((c_.size() - 1) * e + 1, field_.zero());
        for (std::size_t i = 0; i < c_.size(); ++i) c[i * e] = c_[i];
        return Polynomial(field_, std::move(c));
    }

    /// Cartier section: picks coefficients at indices k*i + b.
    Polynomial cartier_section(std::size_t k, std::size_t b) const {
        std::vector<K> c;
        for (std::size_t i = b; i < c_.size(); i += k) c.push_back(c_[i]);
        return Polynomial(field_, std::move(c));
    }

    /// Multiplies by x^m.
    Polynomial shift_up(std::size_t m) const {
        if (c_.empty()) return *this;
        std::vector<K> c(c_.size() + m, field_.zero());
        for (std::size_t i = 0; i < c_.size(); ++i) c[i + m] = c_[i];
        return Polynomial(field_, std::move(c));
    }
    /// Divides by x^m; throws if not exactly divisible.
    Polynomial shift_down(std::size_t m) const {
        if (c_.empty()) return *this;
        if (low_order() < m) throw std::domain_error("shift_down: not divisible by x^m");
        return Polynomial(field_, std::vector<K>(c_.begin() + static_cast<long>(m), c_.end()));
    }

    /// Euclidean division; returns (quotient, remainder).
    friend std::pair<Polynomial, Polynomial> divmod(const Polynomial& a, const Polynomial& b) {
        a.check(b);
        if (b.is_zero()) throw std::domain_error("polynomial division by zero");
        Polynomial q(a.field_), r = a;
        K lead_inv = a.field_.one() / b.leading();
        std::vector<K> qc;
        if (r.c_.size() >= b.c_.size()) qc.assign(r.c_.size() - b.c_.size() + 1, a.field_.zero());
        while (!r.is_zero() && r.c_.size() >= b.c_.size()) {
            std::size_t shift = r.c_.size() - b.c_.size();
            K f = r.leading() * lead_inv;
            qc[shift] = f;
            for (std::size_t i = 0; i < b.c_.size(); ++i) r.c_[i + shift] -= f * b.c_[i];
            r.trim();
        }
        return {Polynomial(a.field_, std::move(qc)), r};
    }

    /// Exact quotient; throws if the division leaves a remainder.
    friend Polynomial exact_div(const Polynomial& a, const Polynomial& b) {
        auto [q, r] = divmod(a, b);
        if (!r.is_zero()) throw std::domain_error("exact_div: nonzero remainder");
        return q;
    }

    /// Monic gcd; gcd(0, 0) = 0.
    friend Polynomial gcd(Polynomial a, Polynomial b) {
        while (!b.is_zero()) {
            auto [q, r] = divmod(a, b);
            (void)q;
            a = std::move(b);
            b = std::move(r);
        }
        if (!a.is_zero()) a = a * (a.field_.one() / a.leading());
        return a;
    }

private:
    void trim() {
        while (!c_.empty() && mahler::is_zero(c_.back())) c_.pop_back();
    }
    void check(const Polynomial& o) const {
        if (!(field_ == o.field_)) throw FieldMismatch();
    }

    F field_;
    std::vector<K> c_;
};

/// gcd of a list of polynomials (monic unless all zero).
template <class F>
Polynomial<F> gcd_all(const std::vector<Polynomial<F>>& ps) {
    if (ps.empty()) throw std::invalid_argument("gcd_all: empty list");
    Polynomial<F> g = ps.front();
    for (std::size_t i = 1; i < ps.size(); ++i) g = gcd(g, ps[i]);
    return g;
}

}  // namespace mahler

#endif
