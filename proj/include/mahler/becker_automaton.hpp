#ifndef MAHLER_BECKER_AUTOMATON_HPP
#define MAHLER_BECKER_AUTOMATON_HPP

#include <cstddef>
#include <stdexcept>
#include <vector>

#include "dfao.hpp"
#include "equation.hpp"
#include "linrep.hpp"

namespace mahler {

struct DegreeBoundOverflow : std::runtime_error {
    DegreeBoundOverflow() : std::runtime_error("Cartier image escaped the bounded-degree module") {}
};
struct PurelyPeriodicOrbit : std::runtime_error {
    PurelyPeriodicOrbit()
        : std::runtime_error("orbit of a under x -> x^k is purely periodic") {}
};

/// Module of tuples (Q_1..Q_n) of polynomials of degree <= D standing for
/// sum_i Q_i(x) G(x^{k^{i-1}}); the Cartier sections act linearly on it and
/// G itself is the starting element.
template <class F>
LinearRepresentation<F> becker_representation(const MahlerEquation<F>& becker_eq,
                                              typename F::Scalar g0) {
    std::size_t k = becker_eq.base;
    std::size_t n = becker_eq.order();
    if (n == 0) throw std::invalid_argument("Becker equation must have positive order");
    if (!is_one(becker_eq.coeffs[0].constant_term()) || becker_eq.coeffs[0].degree() != 0)
        throw ConstantTermNotOne();

    std::vector<Polynomial<F>> b;  // B_i with G = sum B_i(x) G(x^{k^i})
    long maxdeg = 0;
    for (std::size_t i = 1; i <= n; ++i) {
        b.push_back(-becker_eq.coeffs[i]);
        maxdeg = std::max(maxdeg, b.back().degree());
    }
    std::size_t d_bound =
        maxdeg <= 0 ? 0 : (static_cast<std::size_t>(maxdeg) + k - 2) / (k - 1);
    std::size_t width = d_bound + 1, dim = n * width;
    auto idx = [&](std::size_t slot, std::size_t s) { return slot * width + s; };

    LinearRepresentation<F> rep{becker_eq.field, k,
                                std::vector<typename F::Scalar>(dim, becker_eq.field.zero()), {},
                                std::vector<typename F::Scalar>(dim, becker_eq.field.zero())};
    for (std::size_t slot = 0; slot < n; ++slot) rep.row[idx(slot, 0)] = g0;
    rep.col[idx(0, 0)] = becker_eq.field.one();

    for (std::size_t digit = 0; digit < k; ++digit) {
        Matrix<F> m(becker_eq.field, dim, dim);
        for (std::size_t s = 0; s <= d_bound; ++s) {
            // slot 0 carries Q_1(x) G(x); substitute the equation for G,
            // then apply twisted multiplicativity per summand.
            auto mono = Polynomial<F>::monomial(becker_eq.field, becker_eq.field.one(), s);
            for (std::size_t j = 0; j < n; ++j) {
                auto img = (mono * b[j]).cartier_section(k, digit);
                if (img.degree() > static_cast<long>(d_bound)) throw DegreeBoundOverflow();
                for (std::size_t t = 0; t <= static_cast<std::size_t>(
                                                 std::max(img.degree(), 0L));
                     ++t)
                    if (!is_zero(img.coeff(t))) m(idx(j, t), idx(0, s)) += img.coeff(t);
            }
            // slot i >= 1 carries Q_{i+1}(x) G(x^{k^i}); the section strips
            // one power of k from the inner substitution.
            for (std::size_t slot = 1; slot < n; ++slot)
                if (s % k == digit) m(idx(slot - 1, s / k), idx(slot, s)) = becker_eq.field.one();
        }
        rep.digit.push_back(std::move(m));
    }
    return rep;
}

/// Constructive closure over a prime field: the bounded-degree module is
/// finite, so the orbit of G is a finite automaton.
inline DFAO<PField> becker_automatize_mod_p(const MahlerEquation<PField>& becker_eq, Fp g0,
                                            std::size_t validate_terms = 2048) {
    auto rep = becker_representation(becker_eq, g0);
    auto dfao = dfao_minimize(kernel_closure(rep));
    if (validate_terms) {
        auto s = solve_series(becker_eq, {g0}, validate_terms);
        for (std::size_t i = 0; i < validate_terms; ++i)
            if (!(dfao_eval(dfao, i) == s.coeff(i)))
                throw std::logic_error("Becker closure disagrees with the series recursion");
    }
    return dfao;
}

template <class F>
struct UnitProduct {
    Polynomial<F> q;  // prod_{j<N} (1 - b x^{k^j})
    Polynomial<F> s;  // Q(x^k) / ((1 - a x) Q(x))
};

/// Splits the orbit of a under repeated k-th powers into its preperiodic
/// part Q and the Becker quotient S.
template <class F>
UnitProduct<F> unit_product_split(const F& field, typename F::Scalar a, std::size_t k) {
    using K = typename F::Scalar;
    auto kth_power = [&](const K& x) {
        K r = x;
        for (std::size_t t = 1; t < k; ++t) r = r * x;
        return r;
    };
    // The orbit a, a^k, a^{k^2}, ... must enter its cycle strictly after a.
    {
        std::vector<K> seen{a};
        for (;;) {
            K x = kth_power(seen.back());
            if (x == a) throw PurelyPeriodicOrbit();
            bool repeat = false;
            for (const auto& y : seen)
                if (y == x) { repeat = true; break; }
            if (repeat) break;
            seen.push_back(x);
            if (seen.size() > 1u << 20)
                throw std::invalid_argument("orbit of a under k-th powers does not close");
        }
    }
    auto power_tower = [&](std::size_t steps) {
        K x = a;
        for (std::size_t j = 0; j < steps; ++j) {
            K xk = x;
            for (std::size_t t = 1; t < k; ++t) xk = xk * x;
            x = xk;
        }
        return x;
    };
    std::size_t n_pre = 1;
    while (!(power_tower(n_pre) == power_tower(2 * n_pre))) ++n_pre;

    K b = power_tower(n_pre);
    auto q = Polynomial<F>::one(field);
    std::size_t kj = 1;
    for (std::size_t j = 0; j < n_pre; ++j, kj *= k) {
        std::vector<K> f(kj + 1, field.zero());
        f[0] = field.one();
        f[kj] = -b;
        q *= Polynomial<F>(field, std::move(f));
    }
    auto denom = Polynomial<F>(field, {field.one(), -a}) * q;
    auto s = exact_div(q.substitute_power(k), denom);
    if (q.substitute_power(k) != denom * s)
        throw std::logic_error("unit product split violates its defining identity");
    return {q, s};
}

/// Over F_p additionally assembles the automaton of
/// prod_{j>=0} (1 - a x^{k^j})^{-1} = Q(x) G(x).
struct UnitProductAutomaton {
    Polynomial<PField> q;
    Polynomial<PField> s;
    DFAO<PField> dfao;
};

/// Linear representation of prod_{j>=0} (1 - a x^{k^j})^{-1} = Q(x) G(x).
/// G solves G(x) = S(x) G(x^k) with G(0) = 1.  The module
/// {P(x) G(x) : deg P <= M} is Cartier-stable once M >= deg S / (k-1),
/// since Lambda_b(P G) = Lambda_b(P S) G, and it contains Q G.
template <class F>
LinearRepresentation<F> unit_product_representation(const UnitProduct<F>& split, const F& field,
                                                    std::size_t k) {
    long deg_s = split.s.degree(), deg_q = split.q.degree();
    std::size_t stable =
        deg_s <= 0 ? 0 : (static_cast<std::size_t>(deg_s) + k - 2) / (k - 1);
    std::size_t m_bound = std::max(stable, deg_q <= 0 ? 0 : static_cast<std::size_t>(deg_q));
    std::size_t dim = m_bound + 1;

    LinearRepresentation<F> rep{field, k,
                                std::vector<typename F::Scalar>(dim, field.zero()), {},
                                std::vector<typename F::Scalar>(dim, field.zero())};
    rep.row[0] = field.one();  // (P G)(0) = P(0) G(0)
    for (std::size_t s = 0; s < dim; ++s) rep.col[s] = split.q.coeff(s);
    for (std::size_t b = 0; b < k; ++b) {
        Matrix<F> m(field, dim, dim);
        for (std::size_t s = 0; s < dim; ++s) {
            auto img = (Polynomial<F>::monomial(field, field.one(), s) * split.s)
                           .cartier_section(k, b);
            if (img.degree() > static_cast<long>(m_bound)) throw DegreeBoundOverflow();
            for (long t = 0; t <= img.degree(); ++t)
                m(static_cast<std::size_t>(t), s) = img.coeff(static_cast<std::size_t>(t));
        }
        rep.digit.push_back(std::move(m));
    }
    return rep;
}

inline UnitProductAutomaton unit_product_automatize(const PField& field, Fp a, std::size_t k,
                                                    std::size_t validate_terms = 2048) {
    auto split = unit_product_split(field, a, k);
    auto rep = unit_product_representation(split, field, k);
    auto dfao = dfao_minimize(kernel_closure(rep));
    if (validate_terms) {
        MahlerEquation<PField> geq{field, k, Polynomial<PField>(field),
                                   {Polynomial<PField>::one(field), -split.s}, false};
        auto g = solve_series(geq, {field.one()}, validate_terms);
        auto f = split.q * g;
        for (std::size_t i = 0; i < validate_terms; ++i)
            if (!(dfao_eval(dfao, i) == f.coeff(i)))
                throw std::logic_error("unit product automaton disagrees with its series");
    }
    return {split.q, split.s, dfao};
}

}  // namespace mahler

#endif
