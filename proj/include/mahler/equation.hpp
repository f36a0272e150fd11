#ifndef MAHLER_EQUATION_HPP
#define MAHLER_EQUATION_HPP

#include <algorithm>
#include <cstddef>
#include <optional>
#include <stdexcept>
#include <vector>

#include "fields.hpp"
#include "linalg.hpp"
#include "poly.hpp"
#include "series.hpp"

namespace mahler {

struct DegenerateEquation : std::runtime_error {
    DegenerateEquation() : std::runtime_error("equation collapses to 0 = 0") {}
};
struct UnderdeterminedInput : std::runtime_error {
    UnderdeterminedInput() : std::runtime_error("too few initial terms for the recursion") {}
};
struct InconsistentInitialSegment : std::runtime_error {
    explicit InconsistentInitialSegment(std::size_t i)
        : std::runtime_error("initial terms contradict the equation at coefficient " +
                             std::to_string(i)),
          index(i) {}
    std::size_t index;
};
struct InsufficientPrecision : std::runtime_error {
    InsufficientPrecision() : std::runtime_error("series precision too small for the search bounds") {}
};
struct PolynomialInput : std::runtime_error {
    PolynomialInput() : std::runtime_error("series is a polynomial within its precision") {}
};
struct PrecisionExhausted : std::runtime_error {
    PrecisionExhausted() : std::runtime_error("not enough precision to carry out the decomposition") {}
};
struct ConstantTermNotOne : std::runtime_error {
    ConstantTermNotOne() : std::runtime_error("leading coefficient must have constant term 1") {}
};
struct InvalidExponents : std::runtime_error {
    InvalidExponents() : std::runtime_error("derived base is not an integer >= 2") {}
};

inline std::size_t pow_sz(std::size_t b, std::size_t e) {
    std::size_t r = 1;
    while (e--) {
        if (b != 0 && r > static_cast<std::size_t>(-1) / b)
            throw std::overflow_error("power overflows size_t");
        r *= b;
    }
    return r;
}

/// A(x) + P_0(x)F(x) + P_1(x)F(x^k) + ... + P_n(x)F(x^{k^n}) = 0.
template <class F>
struct MahlerEquation {
    F field;
    std::size_t base = 2;
    Polynomial<F> inhomogeneous;
    std::vector<Polynomial<F>> coeffs;  // P_0 .. P_n
    bool normalized = false;

    std::size_t order() const {
        if (coeffs.empty()) throw std::logic_error("equation has no coefficients");
        return coeffs.size() - 1;
    }
    const Polynomial<F>& p(std::size_t i) const { return coeffs.at(i); }
};

struct VerifyResult {
    bool holds = false;
    std::size_t holds_to = 0;  // set when holds
    std::size_t fails_at = 0;  // set when !holds
};

/// Left-hand side A + sum P_i F(x^{k^i}) truncated to F's precision.
template <class F>
TruncatedSeries<F> equation_residual(const MahlerEquation<F>& eq, const TruncatedSeries<F>& f) {
    if (!(eq.field == f.field())) throw FieldMismatch();
    std::size_t n = f.precision();
    auto res = TruncatedSeries<F>::from_polynomial(eq.inhomogeneous, n);
    for (std::size_t i = 0; i < eq.coeffs.size(); ++i) {
        if (eq.coeffs[i].is_zero()) continue;
        auto fi = substitute_power(f, pow_sz(eq.base, i)).truncate(n);
        res = res + eq.coeffs[i] * fi;
    }
    return res;
}

template <class F>
VerifyResult verify_equation(const MahlerEquation<F>& eq, const TruncatedSeries<F>& f) {
    auto res = equation_residual(eq, f);
    VerifyResult r;
    std::size_t fz = res.first_nonzero();
    if (fz == res.precision()) {
        r.holds = true;
        r.holds_to = res.precision();
    } else {
        r.holds = false;
        r.fails_at = fz;
    }
    return r;
}

/// Extends an initial segment to `target` coefficients using the recursion
/// read off coefficient ord(P_0) + n of the equation.
template <class F>
TruncatedSeries<F> solve_series(const MahlerEquation<F>& eq,
                                const std::vector<typename F::Scalar>& initial,
                                std::size_t target) {
    if (eq.coeffs.empty() || eq.coeffs[0].is_zero())
        throw DegenerateEquation();
    const auto& p0 = eq.coeffs[0];
    std::size_t ord = p0.low_order();
    std::size_t t = initial.size();
    if (static_cast<long>(t) <= p0.degree() + static_cast<long>(ord)) throw UnderdeterminedInput();

    std::size_t n_total = std::max(target, t);
    std::vector<typename F::Scalar> f(n_total, eq.field.zero());
    for (std::size_t i = 0; i < t && i < n_total; ++i) f[i] = initial[i];

    auto lead = p0.coeff(ord);
    // Coefficient j of the whole relation with the f(n)-term removed when skip_n.
    auto relation_coeff = [&](std::size_t j, bool skip_lead, std::size_t n) {
        auto acc = eq.inhomogeneous.coeff(j);
        std::size_t ki = 1;
        for (std::size_t i = 0; i < eq.coeffs.size(); ++i, ki *= eq.base) {
            const auto& pi = eq.coeffs[i];
            if (!pi.is_zero()) {
                for (std::size_t q = 0; ki * q <= j; ++q) {
                    std::size_t m = j - ki * q;
                    if (skip_lead && i == 0 && q == n) continue;
                    auto c = pi.coeff(m);
                    if (!is_zero(c)) acc += c * f[q];
                }
            }
        }
        return acc;
    };

    for (std::size_t n = t; n < n_total; ++n)
        f[n] = -relation_coeff(ord + n, true, n) / lead;

    // The supplied terms must satisfy every relation coefficient that the
    // recursion itself did not enforce.
    for (std::size_t j = 0; j < ord + t && j < n_total; ++j)
        if (!is_zero(relation_coeff(j, false, 0))) throw InconsistentInitialSegment(j);

    TruncatedSeries<F> s(eq.field, std::move(f));
    return s.truncate(target);
}

template <class F>
struct FoundEquation {
    MahlerEquation<F> equation;
    std::size_t certified_to = 0;  // identity checked only up to this precision
};

/// Searches for a relation sum P_i(x) F(x^{k^i}) = 0 with order <= max_order
/// and deg P_i <= max_degree, preferring minimal order and then minimal
/// degree.  With with_inhomogeneous an extra polynomial block A(x) of the
/// same degree bound joins the system, so A + sum P_i F(x^{k^i}) = 0 is
/// searched instead.
template <class F>
std::optional<FoundEquation<F>> find_equation(const TruncatedSeries<F>& f, std::size_t k,
                                              std::size_t max_order, std::size_t max_degree,
                                              bool with_inhomogeneous = false) {
    if (k < 2) throw std::invalid_argument("find_equation: base must be >= 2");
    std::size_t prec = f.precision();
    if (prec < (max_order + 1) * (max_degree + 1) + max_degree) throw InsufficientPrecision();

    for (std::size_t n = 0; n <= max_order; ++n) {
        for (std::size_t d = 0; d <= max_degree; ++d) {
            std::size_t a_cols = with_inhomogeneous ? d + 1 : 0;
            std::size_t cols = (n + 1) * (d + 1) + a_cols;
            // Row j encodes coefficient x^j of the candidate relation; the
            // optional A block occupies the trailing columns.
            auto fill = [&](Matrix<F>& m, std::size_t rows) {
                for (std::size_t j = 0; j < rows; ++j) {
                    std::size_t ki = 1;
                    for (std::size_t i = 0; i <= n; ++i, ki *= k) {
                        for (std::size_t deg = 0; deg <= d && deg <= j; ++deg) {
                            std::size_t rem = j - deg;
                            if (rem % ki == 0)
                                m(j, i * (d + 1) + deg) = f.coeffs()[rem / ki];
                        }
                    }
                    if (with_inhomogeneous && j <= d)
                        m(j, (n + 1) * (d + 1) + j) = f.field().one();
                }
            };
            std::size_t rows = std::min(prec, cols + 32);
            std::vector<std::vector<typename F::Scalar>> ker;
            for (;;) {
                Matrix<F> m(f.field(), rows, cols);
                fill(m, rows);
                ker = nullspace(m);
                if (ker.empty() || rows == prec) break;
                rows = std::min(prec, rows * 2);
            }
            if (ker.empty()) continue;

            for (const auto& v : ker) {
                std::vector<Polynomial<F>> ps;
                for (std::size_t i = 0; i <= n; ++i)
                    ps.emplace_back(f.field(),
                                    std::vector<typename F::Scalar>(
                                        v.begin() + static_cast<long>(i * (d + 1)),
                                        v.begin() + static_cast<long>((i + 1) * (d + 1))));
                bool some_p = false;
                for (const auto& p : ps) some_p = some_p || !p.is_zero();
                if (!some_p) continue;
                Polynomial<F> a(f.field());
                if (with_inhomogeneous)
                    a = Polynomial<F>(f.field(),
                                      std::vector<typename F::Scalar>(
                                          v.begin() + static_cast<long>((n + 1) * (d + 1)),
                                          v.end()));
                MahlerEquation<F> eq{f.field(), k, std::move(a), ps, false};
                if (rows < prec) {
                    auto vr = verify_equation(eq, f);
                    if (!vr.holds) continue;
                }
                // Scale: lowest-order nonzero coefficient of the first
                // nonzero polynomial becomes 1.
                for (auto& p : eq.coeffs) {
                    if (p.is_zero()) continue;
                    typename F::Scalar inv = f.field().one() / p.coeff(p.low_order());
                    for (auto& q : eq.coeffs) q = q * inv;
                    eq.inhomogeneous = eq.inhomogeneous * inv;
                    break;
                }
                return FoundEquation<F>{eq, prec};
            }
        }
    }
    return std::nullopt;
}

/// Brings an equation to the normal form: homogeneous, P_0 P_n != 0,
/// gcd of all coefficients 1, lowest nonzero coefficient of P_0 equal 1.
template <class F>
MahlerEquation<F> normalize(MahlerEquation<F> eq) {
    std::size_t k = eq.base;
    bool all_zero = true;
    for (const auto& p : eq.coeffs) all_zero &= p.is_zero();
    if (all_zero && eq.inhomogeneous.is_zero()) throw DegenerateEquation();

    // (a) eliminate the inhomogeneous term by cross-multiplication with the
    // x -> x^k image of the relation; the order grows by one.
    if (!eq.inhomogeneous.is_zero()) {
        if (all_zero) throw DegenerateEquation();
        const auto& a = eq.inhomogeneous;
        auto ak = a.substitute_power(k);
        std::vector<Polynomial<F>> q(eq.coeffs.size() + 1, Polynomial<F>(eq.field));
        for (std::size_t i = 0; i < q.size(); ++i) {
            if (i < eq.coeffs.size()) q[i] += ak * eq.coeffs[i];
            if (i >= 1) q[i] -= a * eq.coeffs[i - 1].substitute_power(k);
        }
        eq.coeffs = std::move(q);
        eq.inhomogeneous = Polynomial<F>(eq.field);
    }

    // (b) while P_0 vanishes, apply a Cartier section chosen to keep the
    // first surviving coefficient nonzero; indices shift down by one.
    for (;;) {
        while (!eq.coeffs.empty() && eq.coeffs.back().is_zero()) eq.coeffs.pop_back();
        if (eq.coeffs.empty()) throw DegenerateEquation();
        if (!eq.coeffs[0].is_zero()) break;
        std::size_t j = 0;
        while (eq.coeffs[j].is_zero()) ++j;
        std::size_t b = eq.coeffs[j].low_order() % k;
        std::vector<Polynomial<F>> q;
        for (std::size_t i = 1; i < eq.coeffs.size(); ++i)
            q.push_back(eq.coeffs[i].cartier_section(k, b));
        eq.coeffs = std::move(q);
        if (eq.coeffs.empty()) throw DegenerateEquation();
    }

    // (d) divide out the content and scale.
    auto g = gcd_all(eq.coeffs);
    if (!g.is_constant())
        for (auto& p : eq.coeffs) p = exact_div(p, g);
    typename F::Scalar inv = eq.field.one() / eq.coeffs[0].coeff(eq.coeffs[0].low_order());
    for (auto& p : eq.coeffs) p = p * inv;
    eq.normalized = true;
    return eq;
}

template <class F>
struct ShiftDecomposition {
    std::size_t a = 0;
    Polynomial<F> head;                 // T_a, degree < a
    TruncatedSeries<F> tail_series;     // F_0 with nonzero constant term
    MahlerEquation<F> tail_equation;    // satisfied by F_0; Q_0(0) = 1
};

/// Splits F = T_a + x^a F_0 with F_0(0) != 0 and rebuilds a Mahler equation
/// for F_0 whose leading coefficient has constant term 1.
template <class F>
ShiftDecomposition<F> shift_decompose(const MahlerEquation<F>& eq, const TruncatedSeries<F>& f,
                                      std::size_t min_index = 0) {
    if (!(eq.field == f.field())) throw FieldMismatch();
    std::size_t k = eq.base;
    const auto& p0 = eq.coeffs.at(0);
    if (p0.is_zero()) throw DegenerateEquation();
    std::size_t bigN = p0.low_order();

    std::size_t a = f.precision();
    for (std::size_t i = std::max(bigN + 1, min_index); i < f.precision(); ++i)
        if (!is_zero(f.coeffs()[i])) { a = i; break; }
    if (a == f.precision()) throw PolynomialInput();
    if (f.precision() <= a + 1) throw PrecisionExhausted();

    auto head = f.head(a);
    auto f0 = f.tail_from(a);

    // C = -sum P_i T_a(x^{k^i}), exactly divisible by x^{a+N}.
    Polynomial<F> c(eq.field);
    for (std::size_t i = 0; i < eq.coeffs.size(); ++i)
        c -= eq.coeffs[i] * head.substitute_power(pow_sz(k, i));
    Polynomial<F> c0 = c.shift_down(a + bigN);
    Polynomial<F> s = p0.shift_down(bigN);
    auto c0k = c0.substitute_power(k);

    std::size_t nn = eq.coeffs.size();  // n + 1
    std::vector<Polynomial<F>> q(nn + 1, Polynomial<F>(eq.field));
    q[0] = c0k * s;
    for (std::size_t i = 1; i <= nn; ++i) {
        auto pi = i < nn ? eq.coeffs[i] : Polynomial<F>(eq.field);
        auto bracket = c0k.shift_up((k - 1) * (a + bigN)) * pi -
                       c0 * eq.coeffs[i - 1].substitute_power(k);
        if (bracket.is_zero()) continue;
        std::size_t up = pow_sz(k, i) * a;
        std::size_t down = k * (a + bigN);
        q[i] = up >= down ? bracket.shift_up(up - down) : bracket.shift_down(down - up);
    }
    while (q.size() > 1 && q.back().is_zero()) q.pop_back();

    auto g = gcd(c0, c0k);
    if (!g.is_constant()) {
        bool divides = true;
        for (const auto& p : q)
            if (!p.is_zero()) {
                auto [quo, rem] = divmod(p, g);
                (void)quo;
                if (!rem.is_zero()) { divides = false; break; }
            }
        if (divides)
            for (auto& p : q)
                if (!p.is_zero()) p = exact_div(p, g);
    }
    typename F::Scalar inv = eq.field.one() / q[0].constant_term();
    for (auto& p : q) p = p * inv;

    ShiftDecomposition<F> out{a, head, f0,
                             MahlerEquation<F>{eq.field, k, Polynomial<F>(eq.field), q, false}};
    if (is_zero(out.tail_series.coeffs()[0])) throw PrecisionExhausted();
    auto vr = verify_equation(out.tail_equation, out.tail_series);
    if (!vr.holds) throw std::logic_error("shift decomposition failed its residual check");
    return out;
}

template <class F>
struct BeckerDecomposition {
    TruncatedSeries<F> product_inverse;  // (prod_{i>=0} P_0(x^{k^i}))^{-1}
    TruncatedSeries<F> becker_part;      // G = H F
    MahlerEquation<F> becker_equation;   // G + sum Q_i G(x^{k^i}) = 0, Q_0 = 1
};

/// Factors F = H^{-1} G where G satisfies a Becker-form equation
/// G(x) = sum B_i(x) G(x^{k^i}).
template <class F>
BeckerDecomposition<F> becker_decompose(const MahlerEquation<F>& eq, const TruncatedSeries<F>& f) {
    if (!(eq.field == f.field())) throw FieldMismatch();
    const auto& p0 = eq.coeffs.at(0);
    if (!is_one(p0.constant_term())) throw ConstantTermNotOne();
    std::size_t k = eq.base, prec = f.precision();

    auto h = TruncatedSeries<F>::from_polynomial(Polynomial<F>::one(eq.field), prec);
    for (std::size_t ki = 1; ki <= prec; ki *= k) {
        h = p0.substitute_power(ki) * h;
        if (ki > prec / k) break;
    }
    auto g = h * f;

    std::vector<Polynomial<F>> q(eq.coeffs.size(), Polynomial<F>(eq.field));
    q[0] = Polynomial<F>::one(eq.field);
    auto tail_prod = Polynomial<F>::one(eq.field);  // prod_{j=1}^{i-1} P_0(x^{k^j})
    for (std::size_t i = 1; i < eq.coeffs.size(); ++i) {
        if (i >= 2) tail_prod *= p0.substitute_power(pow_sz(k, i - 1));
        q[i] = eq.coeffs[i] * tail_prod;  // Q_i = -B_i = P_i * prod
    }

    BeckerDecomposition<F> out{series_invert(h), g,
                              MahlerEquation<F>{eq.field, k, Polynomial<F>(eq.field), q, false}};
    auto vr = verify_equation(out.becker_equation, g);
    if (!vr.holds) throw std::logic_error("Becker decomposition failed its residual check");
    return out;
}

/// Looks for an equation in the combined base m = k^a l^b.
template <class F>
std::optional<FoundEquation<F>> derive_m_mahler(const TruncatedSeries<F>& f,
                                                const MahlerEquation<F>& eq_k,
                                                const MahlerEquation<F>& eq_l, long a, long b,
                                                std::size_t max_order, std::size_t max_degree) {
    Rat m = 1;
    Rat rk(static_cast<long>(eq_k.base)), rl(static_cast<long>(eq_l.base));
    for (long i = 0; i < (a >= 0 ? a : -a); ++i) m *= (a >= 0 ? rk : 1 / rk);
    for (long i = 0; i < (b >= 0 ? b : -b); ++i) m *= (b >= 0 ? rl : 1 / rl);
    if (m.get_den() != 1 || m < 2) throw InvalidExponents();
    if (!m.get_num().fits_ulong_p()) throw InvalidExponents();
    return find_equation(f, m.get_num().get_ui(), max_order, max_degree);
}

}  // namespace mahler

#endif
