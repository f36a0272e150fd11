#ifndef MAHLER_ASYMPTOTICS_HPP
#define MAHLER_ASYMPTOTICS_HPP

#include <cmath>
#include <complex>
#include <cstddef>
#include <cstdint>
#include <numeric>
#include <optional>
#include <stdexcept>
#include <vector>

#include "fields.hpp"
#include "linalg.hpp"
#include "poly.hpp"

namespace mahler {

// The only floating-point corner of the library.  Everything here is a
// numeric spot-check of an analytic statement, computed in long double
// (80-bit extended precision on x86).

struct FactorVanishes : std::runtime_error {
    FactorVanishes() : std::runtime_error("product factor vanishes at the evaluation point") {}
};

/// Optional root-of-unity rotation e^{2 pi i num/den} for the evaluation
/// point t * alpha.
struct RootOfUnity {
    std::size_t num = 0;
    std::size_t den = 1;
};

inline long double eval_real(const Polynomial<QField>& p, long double x) {
    long double acc = 0;
    for (long i = p.degree(); i >= 0; --i)
        acc = acc * x + static_cast<long double>(p.coeff(static_cast<std::size_t>(i)).get_d());
    return acc;
}

inline std::complex<long double> eval_complex(const Polynomial<QField>& p,
                                              std::complex<long double> x) {
    std::complex<long double> acc = 0;
    for (long i = p.degree(); i >= 0; --i)
        acc = acc * x + static_cast<long double>(p.coeff(static_cast<std::size_t>(i)).get_d());
    return acc;
}

/// |prod_{j>=0} P((t alpha)^{k^j})|^{-1}, truncated once the factors settle
/// within 1e-15 of 1.  The tail factors converge to P(0) = 1, so the cut
/// changes the value by less than 1e-12.
inline long double product_growth(const Polynomial<QField>& p, std::size_t k, long double t,
                                  std::optional<RootOfUnity> alpha = std::nullopt) {
    if (!(t > 0.0L && t < 1.0L)) throw std::invalid_argument("t must lie in (0,1)");
    const long double pi = 3.14159265358979323846264338327950288L;
    std::complex<long double> point(t, 0.0L);
    if (alpha) {
        long double theta = 2.0L * pi * static_cast<long double>(alpha->num) /
                            static_cast<long double>(alpha->den);
        point *= std::complex<long double>(std::cos(theta), std::sin(theta));
    }
    std::complex<long double> prod = 1.0L;
    for (std::size_t guard = 0; guard < 1u << 20; ++guard) {
        auto factor = eval_complex(p, point);
        if (std::abs(factor) < 1e-30L) throw FactorVanishes();
        prod *= factor;
        if (std::abs(factor - std::complex<long double>(1.0L)) < 1e-15L) break;
        std::complex<long double> next = point;
        for (std::size_t i = 1; i < k; ++i) next *= point;
        point = next;
    }
    return 1.0L / std::abs(prod);
}

struct SumInequalitySample {
    long double t = 0;
    long double lhs = 0;   // -ln(1 - t)
    long double rhs = 0;   // (1 - 1/k) sum t^{k^i}
    long double margin = 0;
    bool holds = false;
};

struct SumInequalityReport {
    std::vector<SumInequalitySample> samples;
    bool all_hold = true;
    long double min_margin = 0;
};

/// -ln(1-t) >= (1 - 1/k) sum_{i>=0} t^{k^i}; the tail is truncated once a
/// term drops below 1e-18.
inline SumInequalityReport check_sum_inequality(std::size_t k,
                                                const std::vector<long double>& ts) {
    if (k < 2) throw std::invalid_argument("k must be at least 2");
    SumInequalityReport rep;
    bool first = true;
    for (long double t : ts) {
        if (!(t > 0.0L && t < 1.0L)) throw std::invalid_argument("samples must lie in (0,1)");
        long double sum = 0, power = t;
        for (std::size_t guard = 0; guard < 1u << 20 && power >= 1e-18L; ++guard) {
            sum += power;
            long double next = power;
            // t^{k^{i+1}} = (t^{k^i})^k
            for (std::size_t i = 1; i < k; ++i) next *= power;
            power = next;
        }
        SumInequalitySample s;
        s.t = t;
        s.lhs = -std::log1p(-t);
        s.rhs = (1.0L - 1.0L / static_cast<long double>(k)) * sum;
        s.margin = s.lhs - s.rhs;
        s.holds = s.margin >= 0;
        rep.all_hold = rep.all_hold && s.holds;
        rep.min_margin = first ? s.margin : std::min(rep.min_margin, s.margin);
        first = false;
        rep.samples.push_back(s);
    }
    return rep;
}

/// A companion-shaped matrix (ones on the subdiagonal, the given first row)
/// is nilpotent exactly when its first row vanishes; the exact d-th power
/// cross-checks the criterion.
template <class F>
bool companion_nilpotent(const F& field, const std::vector<typename F::Scalar>& first_row,
                         std::size_t d) {
    if (d < 1 || first_row.size() != d) throw std::invalid_argument("bad companion dimension");
    bool row_zero = true;
    for (const auto& c : first_row) row_zero = row_zero && is_zero(c);

    Matrix<F> m(field, d, d);
    for (std::size_t j = 0; j < d; ++j) m(0, j) = first_row[j];
    for (std::size_t i = 1; i < d; ++i) m(i, i - 1) = field.one();
    auto power = Matrix<F>::identity(field, d);
    for (std::size_t i = 0; i < d; ++i) power = power * m;
    bool power_zero = true;
    for (std::size_t i = 0; i < d; ++i)
        for (std::size_t j = 0; j < d; ++j) power_zero = power_zero && is_zero(power(i, j));

    if (row_zero != power_zero)
        throw std::logic_error("companion nilpotency criteria disagree");
    return row_zero;
}

/// Element h_i of prod Z/d_j with the additive order of its i-th coordinate
/// recorded as r_i; the search needs sum 1/r_i < 1 for its guarantee.
struct GroupInstance {
    std::vector<std::uint64_t> moduli;
    std::vector<std::vector<std::uint64_t>> generators;
    std::vector<std::uint64_t> coordinate_orders;
};

inline std::uint64_t additive_order(std::uint64_t x, std::uint64_t d) {
    return d / std::gcd(x % d, d);
}

inline void validate_group_instance(const GroupInstance& g) {
    std::size_t m = g.moduli.size();
    if (g.generators.size() != m || g.coordinate_orders.size() != m)
        throw std::invalid_argument("group instance sizes disagree");
    for (std::size_t i = 0; i < m; ++i) {
        if (g.moduli[i] < 1 || g.generators[i].size() != m)
            throw std::invalid_argument("bad group instance");
        if (additive_order(g.generators[i][i], g.moduli[i]) != g.coordinate_orders[i])
            throw std::invalid_argument("recorded coordinate order is wrong");
    }
}

struct GroupWitness {
    std::optional<std::vector<std::uint64_t>> element;   // all coordinates nonzero
    std::vector<std::uint64_t> coefficients;             // x_i with h = sum x_i h_i
    bool hypothesis_met = true;  // sum 1/r_i < 1
};

/// Searches sum_i x_i h_i over 0 <= x_i < lcm(moduli) for an element with
/// every coordinate nonzero, lexicographically first in (x_1, ..., x_m).
/// When sum 1/r_i < 1 a witness exists; with the hypothesis unmet the search
/// still runs and the report says so.
inline GroupWitness group_search(const GroupInstance& g) {
    validate_group_instance(g);
    std::size_t m = g.moduli.size();
    GroupWitness w;
    long double inv_sum = 0;
    for (auto r : g.coordinate_orders) inv_sum += 1.0L / static_cast<long double>(r);
    w.hypothesis_met = inv_sum < 1.0L;

    std::uint64_t bound = 1;
    for (auto d : g.moduli) bound = std::lcm(bound, d);

    std::vector<std::uint64_t> x(m, 0);
    for (;;) {
        std::vector<std::uint64_t> h(m, 0);
        for (std::size_t i = 0; i < m; ++i)
            for (std::size_t j = 0; j < m; ++j)
                h[j] = (h[j] + x[i] * (g.generators[i][j] % g.moduli[j])) % g.moduli[j];
        bool all_nonzero = true;
        for (std::size_t j = 0; j < m; ++j) all_nonzero = all_nonzero && h[j] != 0;
        if (all_nonzero) {
            w.element = std::move(h);
            w.coefficients = x;
            return w;
        }
        std::size_t i = m;
        while (i-- > 0) {
            if (++x[i] < bound) break;
            x[i] = 0;
            if (i == 0) return w;  // exhausted, no witness
        }
    }
}

}  // namespace mahler

#endif
