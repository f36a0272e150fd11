#ifndef MAHLER_CORPUS_HPP
#define MAHLER_CORPUS_HPP

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <gmpxx.h>

#include "dfao.hpp"
#include "equation.hpp"
#include "fields.hpp"
#include "poly.hpp"
#include "series.hpp"

namespace mahler {

struct UnknownName : std::runtime_error {
    explicit UnknownName(const std::string& n) : std::runtime_error("unknown series name: " + n) {}
};

inline std::size_t padic_valuation(const mpz_class& n, unsigned long p) {
    if (n == 0) throw std::invalid_argument("valuation of zero");
    mpz_class m = n, q, r;
    std::size_t v = 0;
    for (;;) {
        mpz_fdiv_qr_ui(q.get_mpz_t(), r.get_mpz_t(), m.get_mpz_t(), p);
        if (r != 0) return v;
        m = q;
        ++v;
    }
}

inline mpz_class central_binomial(std::size_t n) {
    mpz_class b;
    mpz_bin_uiui(b.get_mpz_t(), 2 * n, n);
    return b;
}

/// Which partial sum the 3-adic valuation is taken of: the displayed
/// formula sums central binomials to n, but the displayed identity only
/// validates with the sum stopping at n-1.  Both variants stay available;
/// data picks the winner.
enum class ZagierConvention { SumToN, SumToNMinus1 };

/// a(n) = nu_3 of the running sum of central binomials.  Under SumToNMinus1
/// the n = 0 sum is empty; a(0) is set to 0 by convention.
inline std::vector<std::size_t> zagier_sequence(std::size_t n_max, ZagierConvention conv) {
    std::vector<std::size_t> a;
    a.reserve(n_max + 1);
    mpz_class sum = 0;
    for (std::size_t n = 0; n <= n_max; ++n) {
        if (conv == ZagierConvention::SumToNMinus1) {
            a.push_back(sum == 0 ? 0 : padic_valuation(sum, 3));
            sum += central_binomial(n);
        } else {
            sum += central_binomial(n);
            a.push_back(padic_valuation(sum, 3));
        }
    }
    return a;
}

struct ZagierIdentityReport {
    ZagierConvention convention;
    bool holds = true;
    std::size_t first_fail = 0;  // least 1 <= n <= n_max violating the identity
};

/// nu_3(sum of central binomials) = nu_3(n^2 C(2n,n)) for 1 <= n <= n_max.
inline ZagierIdentityReport zagier_identity_check(std::size_t n_max, ZagierConvention conv) {
    ZagierIdentityReport rep{conv, true, 0};
    auto a = zagier_sequence(n_max, conv);
    for (std::size_t n = 1; n <= n_max; ++n) {
        mpz_class rhs = central_binomial(n) * static_cast<unsigned long>(n) *
                        static_cast<unsigned long>(n);
        if (a[n] != padic_valuation(rhs, 3)) {
            rep.holds = false;
            rep.first_fail = n;
            return rep;
        }
    }
    return rep;
}

namespace detail {

inline TruncatedSeries<QField> zagier_f1(std::size_t n, ZagierConvention conv) {
    const QField q{};
    auto a = zagier_sequence(n == 0 ? 0 : n - 1, conv);
    TruncatedSeries<QField> s(q, n);
    for (std::size_t i = 0; i < n; ++i) s.at(i) = q.of(static_cast<long>(a[i]));
    return s;
}

inline Polynomial<QField> zagier_poly(std::initializer_list<std::pair<long, long>> terms) {
    const QField q{};
    std::size_t deg = 0;
    for (auto [e, c] : terms) deg = std::max(deg, static_cast<std::size_t>(e));
    std::vector<Rat> v(deg + 1, q.zero());
    for (auto [e, c] : terms) v[static_cast<std::size_t>(e)] = q.of(c);
    return Polynomial<QField>(q, std::move(v));
}

}  // namespace detail

/// The printed scalar relation a_0 + a_1 f1(z) + a_2 f1(z^3) + a_3 f1(z^9)
/// + a_4 f1(z^27) = 0.
inline std::vector<Polynomial<QField>> zagier_scalar_coefficients() {
    using detail::zagier_poly;
    return {
        zagier_poly({{1, 1},   {2, 2},   {3, -1},  {4, 1},   {5, 3},   {7, -1},
                     {8, 3},   {9, 1},   {11, -1}, {12, 3},  {14, -2}, {15, -1},
                     {16, 2},  {17, -2}, {18, -2}, {21, 2}}),
        zagier_poly({{0, -1}, {4, -1}, {8, -1}, {9, 1}, {13, 1}, {17, 1}}),
        zagier_poly({{0, 1},   {1, 1},   {2, 1},   {3, 1},   {4, 1},   {5, 1},
                     {6, 1},   {7, 1},   {8, 1},   {13, -1}, {14, -1}, {15, -1},
                     {16, -1}, {17, -1}, {18, -1}, {19, -1}, {20, -1}, {21, -1}}),
        zagier_poly({{3, -1},  {6, -1},  {7, -1},  {9, -1},  {10, -1}, {11, -1},
                     {13, -1}, {14, -1}, {16, 1},  {17, -1}, {19, 1},  {20, 1},
                     {22, 1},  {23, 1},  {24, 1},  {26, 1},  {27, 1},  {30, 1}}),
        zagier_poly({{21, 1}, {48, -1}}),
    };
}

struct ZagierConventionResult {
    bool scalar_ok = false;
    std::size_t scalar_fail = 0;  // first nonzero residual index when !scalar_ok
    bool system_ok = false;
    std::size_t system_fail = 0;
};

struct ZagierSystemReport {
    ZagierConventionResult sum_to_n;
    ZagierConventionResult sum_to_n_minus_1;
    std::optional<ZagierConvention> validated;  // convention passing both checks
    std::size_t checked_to = 0;
};

/// Tests the printed 3x3 system and the printed scalar relation against the
/// sequence built under each convention, to order N.  Denominators are
/// cleared by z^3 (1+z+z^2)(z-1) so every residual is a polynomial identity
/// between truncated series.
inline ZagierSystemReport zagier_system_check(std::size_t n) {
    if (n < 300) throw std::invalid_argument("system check needs precision at least 300");
    const QField q{};
    using detail::zagier_poly;
    ZagierSystemReport rep;

    auto first_nonzero = [](const TruncatedSeries<QField>& s) -> std::optional<std::size_t> {
        for (std::size_t i = 0; i < s.precision(); ++i)
            if (!is_zero(s.coeffs()[i])) return i;
        return std::nullopt;
    };

    auto scalar = zagier_scalar_coefficients();
    // z^3 (1+z+z^2)(z-1) f_i(z^3) = (z-1) M f(z) + Bnum, with M and Bnum the
    // displayed numerators.
    std::vector<std::vector<Polynomial<QField>>> msys{
        {zagier_poly({{1, 1}, {2, 1}, {3, 1}}), zagier_poly({{2, -1}}), zagier_poly({{1, -1}})},
        {Polynomial<QField>(q), zagier_poly({{2, 1}, {3, 1}}), zagier_poly({{4, -1}})},
        {Polynomial<QField>(q), zagier_poly({{2, -1}}), zagier_poly({{2, 1}, {3, 1}})}};
    std::vector<Polynomial<QField>> bnum{zagier_poly({{1, -1}, {3, 2}}), zagier_poly({{4, -1}}),
                                         zagier_poly({{2, 1}, {3, 1}})};
    auto zm1 = zagier_poly({{0, -1}, {1, 1}});
    auto clear = zagier_poly({{3, 1}, {4, 1}, {5, 1}}) * zm1;  // z^3 (1+z+z^2)(z-1)

    for (ZagierConvention conv : {ZagierConvention::SumToN, ZagierConvention::SumToNMinus1}) {
        ZagierConventionResult res;
        auto a = zagier_sequence(3 * n + 1, conv);
        TruncatedSeries<QField> f1(q, n), f2(q, n), f3(q, n);
        for (std::size_t i = 0; i < n; ++i) f1.at(i) = q.of(static_cast<long>(a[i]));
        for (std::size_t i = 0; i < n; ++i) {
            f2.at(i) = q.of(static_cast<long>(a[3 * i]));
            f3.at(i) = q.of(static_cast<long>(a[3 * i + 1]));
        }

        // scalar relation to order n
        auto residual = TruncatedSeries<QField>::from_polynomial(scalar[0], n);
        std::size_t e = 1;
        for (std::size_t i = 1; i <= 4; ++i) {
            residual = residual + (scalar[i] * substitute_power(f1, e).truncate(n));
            e *= 3;
        }
        auto fail = first_nonzero(residual);
        res.scalar_ok = !fail.has_value();
        res.scalar_fail = fail.value_or(0);

        // matrix system to order n
        std::vector<TruncatedSeries<QField>> f{f1.truncate(n), f2, f3};
        res.system_ok = true;
        for (std::size_t i = 0; i < 3 && res.system_ok; ++i) {
            auto lhs = clear * substitute_power(f[i], 3).truncate(n);
            auto rhs = TruncatedSeries<QField>::from_polynomial(bnum[i], n);
            for (std::size_t j = 0; j < 3; ++j) rhs = rhs + ((zm1 * msys[i][j]) * f[j]);
            auto diff = first_nonzero(lhs - rhs);
            if (diff) {
                res.system_ok = false;
                res.system_fail = *diff;
            }
        }

        (conv == ZagierConvention::SumToN ? rep.sum_to_n : rep.sum_to_n_minus_1) = res;
        if (res.scalar_ok && res.system_ok && !rep.validated) rep.validated = conv;
    }
    rep.checked_to = n;
    return rep;
}

/// Named corpus generators: power-indicator(k) marks the powers k^j (j >= 0),
/// geometric(c) is 1/(1-cx), nu-p-central-binomial-squared(p) is
/// nu_p(C(2n,n)^2).
inline TruncatedSeries<QField> standard_series(const std::string& name, std::size_t param,
                                               std::size_t n) {
    const QField q{};
    TruncatedSeries<QField> s(q, n);
    if (name == "power-indicator") {
        if (param < 2) throw std::invalid_argument("power-indicator needs base >= 2");
        for (std::size_t e = 1; e < n; e *= param) s.at(e) = q.one();
    } else if (name == "geometric") {
        Rat c = q.of(static_cast<long>(param)), acc = q.one();
        for (std::size_t i = 0; i < n; ++i) {
            s.at(i) = acc;
            acc *= c;
        }
    } else if (name == "nu-p-central-binomial-squared") {
        if (!PField::is_prime(param)) throw std::invalid_argument("parameter must be prime");
        for (std::size_t i = 0; i < n; ++i)
            s.at(i) = q.of(static_cast<long>(
                i == 0 ? 0 : 2 * padic_valuation(central_binomial(i), param)));
    } else {
        throw UnknownName(name);
    }
    return s;
}

/// The two-state machine of the paper's figure: q0/0 and q1/1, 0 loops,
/// 1 swaps; it outputs the parity of the binary digit sum.
inline DFAO<QField> thue_morse_dfao() {
    const QField q{};
    return DFAO<QField>{q, 2, 0, {{0, 1}, {1, 0}}, {q.zero(), q.one()}};
}

}  // namespace mahler

#endif
