#ifndef MAHLER_MODP_HPP
#define MAHLER_MODP_HPP

#include <cstddef>
#include <cstdint>
#include <map>
#include <numeric>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "equation.hpp"
#include "fields.hpp"
#include "poly.hpp"
#include "series.hpp"

namespace mahler {

struct BadPrime : std::runtime_error {
    explicit BadPrime(std::uint64_t p)
        : std::runtime_error("a coefficient denominator is divisible by " + std::to_string(p)),
          p(p) {}
    std::uint64_t p;
};

inline Fp reduce_mod_p(const Rat& q, const PField& field) {
    std::uint64_t p = field.p;
    mpz_class den = q.get_den() % static_cast<unsigned long>(p);
    if (den == 0) throw BadPrime(p);
    mpz_class num = q.get_num() % static_cast<unsigned long>(p);
    if (num < 0) num += static_cast<unsigned long>(p);
    Fp a = field.of(static_cast<long long>(num.get_ui()));
    Fp b = field.of(static_cast<long long>(den.get_ui()));
    return a * b.inverse();
}

inline Polynomial<PField> reduce_mod_p(const Polynomial<QField>& poly, const PField& field) {
    std::vector<Fp> c;
    c.reserve(poly.coeffs().size());
    for (const auto& q : poly.coeffs()) c.push_back(reduce_mod_p(q, field));
    return Polynomial<PField>(field, std::move(c));
}

inline TruncatedSeries<PField> reduce_mod_p(const TruncatedSeries<QField>& s,
                                            const PField& field) {
    std::vector<Fp> c;
    c.reserve(s.precision());
    for (const auto& q : s.coeffs()) c.push_back(reduce_mod_p(q, field));
    return TruncatedSeries<PField>(field, std::move(c));
}

inline MahlerEquation<PField> reduce_mod_p(const MahlerEquation<QField>& eq,
                                           const PField& field) {
    MahlerEquation<PField> out{field, eq.base, reduce_mod_p(eq.inhomogeneous, field), {}, false};
    for (const auto& p : eq.coeffs) out.coeffs.push_back(reduce_mod_p(p, field));
    if (out.coeffs.empty() || out.coeffs[0].is_zero()) throw DegenerateEquation();
    return out;
}

struct PrimeReport {
    std::uint64_t p = 0;
    bool splits = false;
    // root of the reduced polynomial -> least n with 1 - a x^{k^n} rootless,
    // where a is the inverse of the root; roots without a witness are absent.
    std::map<std::uint64_t, std::size_t> k_witnesses;
    std::map<std::uint64_t, std::size_t> l_witnesses;
    bool passed = false;
};

namespace detail {

/// gcd(k^n, m) without forming k^n.
inline std::uint64_t gcd_power(std::uint64_t k, std::size_t n, std::uint64_t m) {
    std::uint64_t g = 1;
    for (std::size_t i = 0; i < n; ++i) {
        std::uint64_t d = std::gcd(k, m);
        if (d == 1) break;
        g *= d;
        m /= d;
    }
    return g;
}

/// Roots with multiplicity by linear-factor stripping; second result tells
/// whether the polynomial split completely.
inline std::pair<std::vector<std::uint64_t>, bool> strip_roots(Polynomial<PField> poly) {
    const PField& field = poly.field();
    std::vector<std::uint64_t> roots;
    for (std::uint64_t r = 0; r < field.p && poly.degree() > 0; ++r) {
        Fp x = field.of(static_cast<long long>(r));
        Polynomial<PField> lin(field, {-x, field.one()});
        while (poly.degree() > 0 && is_zero(poly.eval(x))) {
            roots.push_back(r);
            poly = exact_div(poly, lin);
        }
    }
    return {roots, poly.degree() == 0};
}

/// Least n <= n_max such that a^{-1} is not a k^n-th power in F_p^*, i.e.
/// 1 - a x^{k^n} has no root; a is the inverse of the supplied root.
inline std::optional<std::size_t> power_witness(const PField& field, std::uint64_t root,
                                                std::uint64_t k, std::size_t n_max) {
    std::uint64_t m = field.p - 1;
    Fp r = field.of(static_cast<long long>(root));  // r = a^{-1}
    for (std::size_t n = 1; n <= n_max; ++n) {
        std::uint64_t g = gcd_power(k, n, m);
        if (!is_one(r.pow(m / g))) return n;
    }
    return std::nullopt;
}

}  // namespace detail

/// Tests each prime p <= p_max: does S1*T1 split into linear factors mod p,
/// and does every root admit a rootlessness witness exponent n <= n_max for
/// the respective base.  Roots of S1 are tested against k, roots of T1
/// against l.  Primes where reduction fails or a leading coefficient drops
/// are skipped.
inline std::vector<PrimeReport> prime_search(const Polynomial<QField>& s1,
                                             const Polynomial<QField>& t1, std::uint64_t k,
                                             std::uint64_t l, std::uint64_t p_max,
                                             std::size_t n_max) {
    std::vector<PrimeReport> out;
    for (std::uint64_t p = 2; p <= p_max; ++p) {
        if (!PField::is_prime(p)) continue;
        PField field(p);
        Polynomial<PField> rs(field), rt(field);
        try {
            rs = reduce_mod_p(s1, field);
            rt = reduce_mod_p(t1, field);
        } catch (const BadPrime&) {
            continue;
        }
        if (rs.degree() != s1.degree() || rt.degree() != t1.degree()) continue;
        if (is_zero(rs.constant_term()) || is_zero(rt.constant_term())) continue;

        PrimeReport rep;
        rep.p = p;
        auto [k_roots, k_split] = detail::strip_roots(rs);
        auto [l_roots, l_split] = detail::strip_roots(rt);
        rep.splits = k_split && l_split;
        bool all = true;
        for (std::uint64_t r : k_roots) {
            auto w = detail::power_witness(field, r, k, n_max);
            if (w)
                rep.k_witnesses[r] = *w;
            else
                all = false;
        }
        for (std::uint64_t r : l_roots) {
            auto w = detail::power_witness(field, r, l, n_max);
            if (w)
                rep.l_witnesses[r] = *w;
            else
                all = false;
        }
        rep.passed = rep.splits && all;
        out.push_back(std::move(rep));
    }
    return out;
}

}  // namespace mahler

#endif
