#ifndef MAHLER_RATIONALITY_HPP
#define MAHLER_RATIONALITY_HPP

#include <cstddef>
#include <numeric>
#include <optional>
#include <utility>
#include <vector>

#include <gmpxx.h>

#include "equation.hpp"
#include "linalg.hpp"
#include "poly.hpp"
#include "ratfun.hpp"
#include "series.hpp"

namespace mahler {

/// Rationality test on the Hankel matrix of the coefficient sequence,
/// shifted past index d so that numerator degrees stay within d.  The
/// window uses every available column; kernel vectors are read off the
/// reduced row echelon form with the first free column set to 1.
template <class F>
std::optional<RationalFunction<F>> hankel_rationality(const TruncatedSeries<F>& f,
                                                      std::size_t d) {
    std::size_t prec = f.precision();
    if (prec < 4 * d + 16) throw InsufficientPrecision();
    std::size_t width = prec - 2 * d - 1;

    // Kernel vectors with leading zeros stand for low-degree denominators;
    // restricting to suffixes of the rows, shortest first, makes the search
    // return the reduced fraction deterministically.
    for (std::size_t start = d + 1; start-- > 0;) {
        Matrix<F> window(f.field(), width, d + 1 - start);
        for (std::size_t i = start; i <= d; ++i)
            for (std::size_t j = 0; j < width; ++j)
                window(j, i - start) = f.coeffs()[d + 1 + i + j];
        for (const auto& c : nullspace(window)) {
            std::vector<typename F::Scalar> b(d + 1, f.field().zero());
            for (std::size_t i = start; i <= d; ++i) b[d - i] = c[i - start];
            Polynomial<F> denom(f.field(), std::move(b));
            auto prod = denom * f;
            bool poly = true;
            for (std::size_t j = d + 1; j < prec && poly; ++j)
                poly = is_zero(prod.coeffs()[j]);
            if (!poly) continue;
            std::vector<typename F::Scalar> a(prod.coeffs().begin(),
                                              prod.coeffs().begin() + static_cast<long>(d + 1));
            return RationalFunction<F>(Polynomial<F>(f.field(), std::move(a)), denom);
        }
    }
    return std::nullopt;
}

inline std::size_t euler_phi(std::size_t n) {
    std::size_t r = n;
    for (std::size_t p = 2; p * p <= n; ++p)
        if (n % p == 0) {
            while (n % p == 0) n /= p;
            r -= r / p;
        }
    if (n > 1) r -= r / n;
    return r;
}

template <class F>
Polynomial<F> cyclotomic_polynomial(const F& field, std::size_t n) {
    std::vector<typename F::Scalar> xn(n + 1, field.zero());
    xn[0] = -field.one();
    xn[n] = field.one();
    auto p = Polynomial<F>(field, std::move(xn));
    for (std::size_t d = 1; d < n; ++d)
        if (n % d == 0) p = exact_div(p, cyclotomic_polynomial(field, d));
    return p;
}

template <class F>
struct CyclotomicSplit {
    Polynomial<F> unit_part;  // S_0, every root a root of unity
    Polynomial<F> free_part;  // S_1, no root-of-unity roots
    std::vector<std::pair<std::size_t, std::size_t>> indices;  // (n, multiplicity)
};

/// Splits P = S_0 S_1 with both factors normalized to constant term 1.
/// A root of unity dividing P has order n with phi(n) <= deg P, so trial
/// division by the cyclotomic polynomials of those finitely many orders
/// captures S_0 together with its indices and multiplicities.
template <class F>
CyclotomicSplit<F> cyclotomic_split(const Polynomial<F>& p) {
    if (!is_one(p.constant_term())) throw ConstantTermNotOne();
    const F& field = p.field();
    CyclotomicSplit<F> out{Polynomial<F>::one(field), p, {}};
    if (p.degree() < 1) return out;
    std::size_t deg = static_cast<std::size_t>(p.degree());

    auto s0 = Polynomial<F>::one(field);
    auto rest = p;
    // phi(n) >= sqrt(n/2), so orders beyond 2 deg^2 cannot occur.
    for (std::size_t n = 1; n <= 2 * deg * deg; ++n) {
        if (rest.degree() < 1) break;
        if (euler_phi(n) > deg) continue;
        auto phi_n = cyclotomic_polynomial(field, n);
        std::size_t mult = 0;
        for (;;) {
            auto [quot, rem] = divmod(rest, phi_n);
            if (!rem.is_zero()) break;
            rest = quot;
            s0 *= phi_n;
            ++mult;
        }
        if (mult) out.indices.emplace_back(n, mult);
    }

    typename F::Scalar inv = field.one() / s0.constant_term();
    out.unit_part = s0 * inv;
    out.free_part = rest * s0.constant_term();
    if (out.unit_part * out.free_part != p)
        throw std::logic_error("cyclotomic split does not multiply back");
    return out;
}

struct FixedRootCheck {
    bool ok = true;
    std::size_t violating_index = 0;  // least offending n when !ok
};

/// A primitive n-th root of unity alpha satisfies alpha^{k^j} = alpha for
/// some j >= 1 exactly when gcd(n, k) = 1.
inline FixedRootCheck fixed_root_check(const std::vector<std::pair<std::size_t, std::size_t>>& indices,
                                       std::size_t k) {
    FixedRootCheck r;
    for (const auto& [n, mult] : indices) {
        (void)mult;
        if (std::gcd(n, k) != 1) continue;
        if (r.ok || n < r.violating_index) {
            r.ok = false;
            r.violating_index = n;
        }
    }
    return r;
}

}  // namespace mahler

#endif
