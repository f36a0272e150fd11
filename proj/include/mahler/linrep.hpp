#ifndef MAHLER_LINREP_HPP
#define MAHLER_LINREP_HPP

#include <array>
#include <cstddef>
#include <cstdint>
#include <map>
#include <stdexcept>
#include <vector>

#include "dfao.hpp"
#include "fields.hpp"
#include "linalg.hpp"
#include "poly.hpp"
#include "series.hpp"

namespace mahler {

struct BaseMismatch : std::runtime_error {
    BaseMismatch() : std::runtime_error("representations use different bases") {}
};

/// f(n) = row . M_{d_1} ... M_{d_s} . col for the base-k digits of n,
/// most significant first.
template <class F>
struct LinearRepresentation {
    using K = typename F::Scalar;

    F field;
    std::size_t base = 2;
    std::vector<K> row;             // lambda
    std::vector<Matrix<F>> digit;   // M_0 .. M_{k-1}
    std::vector<K> col;             // gamma

    std::size_t dim() const { return row.size(); }
};

template <class F>
typename F::Scalar rep_eval(const LinearRepresentation<F>& rep, std::uint64_t n) {
    auto v = rep.row;
    for (std::size_t d : digits_msd(n, rep.base)) v = rep.digit[d].apply_left(v);
    auto acc = rep.field.zero();
    for (std::size_t i = 0; i < v.size(); ++i) acc += v[i] * rep.col[i];
    return acc;
}

/// First `n` sequence values as a series.
template <class F>
TruncatedSeries<F> rep_series(const LinearRepresentation<F>& rep, std::size_t n) {
    TruncatedSeries<F> s(rep.field, n);
    for (std::size_t i = 0; i < n; ++i) s.at(i) = rep_eval(rep, i);
    return s;
}

/// States are indicator row vectors; digit matrices pull outputs back along
/// the transition function.
template <class F>
LinearRepresentation<F> rep_from_dfao(const DFAO<F>& a) {
    std::size_t m = a.states();
    LinearRepresentation<F> rep{a.field, a.base, std::vector<typename F::Scalar>(m, a.field.zero()),
                                {}, a.outputs};
    rep.row[a.initial] = a.field.one();
    for (std::size_t d = 0; d < a.base; ++d) {
        Matrix<F> mb(a.field, m, m);
        for (std::size_t q = 0; q < m; ++q) mb(q, a.transitions[q][d]) = a.field.one();
        rep.digit.push_back(std::move(mb));
    }
    return rep;
}

/// Coefficient sequence of a polynomial: the module is polynomials of
/// degree <= deg p, acted on by the Cartier sections.
template <class F>
LinearRepresentation<F> rep_from_polynomial(const Polynomial<F>& p, std::size_t k) {
    std::size_t dim = p.is_zero() ? 1 : static_cast<std::size_t>(p.degree()) + 1;
    LinearRepresentation<F> rep{p.field(), k,
                                std::vector<typename F::Scalar>(dim, p.field().zero()), {},
                                std::vector<typename F::Scalar>(dim, p.field().zero())};
    rep.row[0] = p.field().one();
    for (std::size_t i = 0; i < dim; ++i) rep.col[i] = p.coeff(i);
    for (std::size_t b = 0; b < k; ++b) {
        Matrix<F> mb(p.field(), dim, dim);
        for (std::size_t t = 0; t < dim; ++t)
            if (k * t + b < dim) mb(t, k * t + b) = p.field().one();
        rep.digit.push_back(std::move(mb));
    }
    return rep;
}

/// Whether feeding a leading zero digit leaves the evaluation row fixed,
/// i.e. the digit matrices genuinely implement the Cartier sections on
/// every module element (including the constant coefficient).
template <class F>
bool leading_zero_invariant(const LinearRepresentation<F>& rep) {
    auto moved = rep.digit[0].apply_left(rep.row);
    return moved == rep.row;
}

/// Adjoins a delta-at-zero coordinate so that the digit matrices implement
/// the Cartier sections exactly; the new representation computes the same
/// sequence and satisfies leading_zero_invariant.
template <class F>
LinearRepresentation<F> rep_augment(const LinearRepresentation<F>& rep) {
    std::size_t n = rep.dim(), k = rep.base;
    LinearRepresentation<F> out{rep.field, k, rep.row, {}, rep.col};
    out.row.push_back(rep.field.one());
    out.col.push_back(rep.field.zero());
    for (std::size_t b = 0; b < k; ++b) {
        Matrix<F> m(rep.field, n + 1, n + 1);
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j) m(i, j) = rep.digit[b](i, j);
        if (b == 0) {
            // Lambda_0 keeps the constant coefficient: the correction is
            // lambda - lambda M_0 applied to the module part.
            auto moved = rep.digit[0].apply_left(rep.row);
            for (std::size_t j = 0; j < n; ++j) m(n, j) = rep.row[j] - moved[j];
            m(n, n) = rep.field.one();
        }
        out.digit.push_back(std::move(m));
    }
    return out;
}

/// Cauchy-product closure.  The module is spanned by x^e F_u G_w for
/// e in {0,1,2} and kernel elements of the two factors; dimension
/// 3 * dim1 * dim2 after normalizing both factors.
template <class F>
LinearRepresentation<F> representation_product(LinearRepresentation<F> r1,
                                               LinearRepresentation<F> r2) {
    if (!(r1.field == r2.field)) throw FieldMismatch();
    if (r1.base != r2.base) throw BaseMismatch();
    if (!leading_zero_invariant(r1)) r1 = rep_augment(r1);
    if (!leading_zero_invariant(r2)) r2 = rep_augment(r2);
    std::size_t k = r1.base, n1 = r1.dim(), n2 = r2.dim();
    std::size_t block = n1 * n2, dim = 3 * block;
    auto idx = [&](std::size_t e, std::size_t i, std::size_t j) { return e * block + i * n2 + j; };

    LinearRepresentation<F> out{r1.field, k,
                                std::vector<typename F::Scalar>(dim, r1.field.zero()), {},
                                std::vector<typename F::Scalar>(dim, r1.field.zero())};
    for (std::size_t i = 0; i < n1; ++i)
        for (std::size_t j = 0; j < n2; ++j) {
            out.row[idx(0, i, j)] = r1.row[i] * r2.row[j];
            out.col[idx(0, i, j)] = r1.col[i] * r2.col[j];
        }

    for (std::size_t b = 0; b < k; ++b) {
        Matrix<F> mb(r1.field, dim, dim);
        // Terms x^{c+d+e} F_c(x^k) G_d(x^k) regroup under Lambda_b into the
        // levels listed here as (source level, digit sum, target level).
        std::vector<std::array<long, 3>> rules;
        rules.push_back({0, static_cast<long>(b), 0});
        rules.push_back({0, static_cast<long>(b + k), 1});
        if (b >= 1) {
            rules.push_back({1, static_cast<long>(b - 1), 0});
            rules.push_back({1, static_cast<long>(b + k - 1), 1});
        } else {
            rules.push_back({1, static_cast<long>(k - 1), 1});
        }
        if (b >= 2) {
            rules.push_back({2, static_cast<long>(b - 2), 0});
            rules.push_back({2, static_cast<long>(b + k - 2), 1});
        } else if (b == 1) {
            rules.push_back({2, static_cast<long>(k - 1), 1});
        } else {
            rules.push_back({2, static_cast<long>(k - 2), 1});
            rules.push_back({2, static_cast<long>(2 * k - 2), 2});
        }
        for (const auto& [src, sum, dst] : rules) {
            for (std::size_t c = 0; c < k; ++c) {
                long d = sum - static_cast<long>(c);
                if (d < 0 || d >= static_cast<long>(k)) continue;
                const auto& m1 = r1.digit[c];
                const auto& m2 = r2.digit[static_cast<std::size_t>(d)];
                for (std::size_t i2 = 0; i2 < n1; ++i2)
                    for (std::size_t i = 0; i < n1; ++i) {
                        if (is_zero(m1(i2, i))) continue;
                        for (std::size_t j2 = 0; j2 < n2; ++j2)
                            for (std::size_t j = 0; j < n2; ++j)
                                mb(idx(static_cast<std::size_t>(dst), i2, j2),
                                   idx(static_cast<std::size_t>(src), i, j)) +=
                                    m1(i2, i) * m2(j2, j);
                    }
            }
        }
        out.digit.push_back(std::move(mb));
    }
    return out;
}

/// Restricts a representation to the invariant subspace spanned by the
/// vectors M_w col.  Row vectors of the restriction are functionals on that
/// span, so two of them coincide exactly when they compute the same
/// sequence; orbit enumerations on the result stay proportional to the
/// kernel of the sequence instead of the raw vector count.
template <class F>
LinearRepresentation<F> rep_observable(const LinearRepresentation<F>& rep) {
    using K = typename F::Scalar;
    std::size_t k = rep.base, dim = rep.dim();

    std::vector<std::vector<K>> basis;  // reduced echelon, unit pivots
    std::vector<std::size_t> piv;
    auto coords = [&](std::vector<K> v) {
        std::vector<K> c(basis.size(), rep.field.zero());
        for (std::size_t j = 0; j < basis.size(); ++j) {
            K a = v[piv[j]];
            if (is_zero(a)) continue;
            c[j] = a;
            for (std::size_t i = 0; i < dim; ++i) v[i] -= a * basis[j][i];
        }
        return std::pair<std::vector<K>, std::vector<K>>(std::move(c), std::move(v));
    };
    auto apply_col = [&](const Matrix<F>& m, const std::vector<K>& v) {
        std::vector<K> r(dim, rep.field.zero());
        for (std::size_t i = 0; i < dim; ++i)
            for (std::size_t j = 0; j < dim; ++j) r[i] += m(i, j) * v[j];
        return r;
    };

    std::vector<std::vector<K>> work{rep.col};
    while (!work.empty()) {
        auto v = std::move(work.back());
        work.pop_back();
        auto [c, residual] = coords(std::move(v));
        std::size_t p = 0;
        while (p < dim && is_zero(residual[p])) ++p;
        if (p == dim) continue;
        K inv = rep.field.one() / residual[p];
        for (std::size_t i = 0; i < dim; ++i) residual[i] *= inv;
        for (std::size_t j = 0; j < basis.size(); ++j) {
            K a = basis[j][p];
            if (is_zero(a)) continue;
            for (std::size_t i = 0; i < dim; ++i) basis[j][i] -= a * residual[i];
        }
        for (std::size_t d = 0; d < k; ++d) work.push_back(apply_col(rep.digit[d], residual));
        basis.push_back(std::move(residual));
        piv.push_back(p);
    }

    std::size_t r = basis.size();
    LinearRepresentation<F> out{rep.field, k, std::vector<K>(r, rep.field.zero()), {},
                                std::vector<K>(r, rep.field.zero())};
    for (std::size_t j = 0; j < r; ++j) {
        for (std::size_t i = 0; i < dim; ++i) out.row[j] += rep.row[i] * basis[j][i];
        out.col[j] = rep.col[piv[j]];
    }
    for (std::size_t d = 0; d < k; ++d) {
        Matrix<F> m(rep.field, r, r);
        for (std::size_t j = 0; j < r; ++j) {
            auto [c, residual] = coords(apply_col(rep.digit[d], basis[j]));
            for (std::size_t i = 0; i < dim; ++i)
                if (!is_zero(residual[i]))
                    throw std::logic_error("column span is not invariant under the digit action");
            for (std::size_t i = 0; i < r; ++i) m(i, j) = c[i];
        }
        out.digit.push_back(std::move(m));
    }
    return out;
}

/// Closes the orbit of row vectors under the digit matrices.  The
/// representation is first cut down to its observable part, so the state
/// count matches the kernel of the sequence.
inline DFAO<PField> kernel_closure(const LinearRepresentation<PField>& full) {
    auto rep = rep_observable(full);
    std::size_t k = rep.base, dim = rep.dim();
    if (dim == 0)
        return DFAO<PField>{rep.field, k, 0, {std::vector<std::size_t>(k, 0)}, {rep.field.zero()}};
    auto key_of = [&](const std::vector<Fp>& v) {
        std::vector<std::uint64_t> key(dim);
        for (std::size_t i = 0; i < dim; ++i) key[i] = v[i].residue();
        return key;
    };
    std::map<std::vector<std::uint64_t>, std::size_t> index;
    std::vector<std::vector<Fp>> states;

    auto intern = [&](std::vector<Fp> v) {
        auto key = key_of(v);
        auto it = index.find(key);
        if (it != index.end()) return it->second;
        std::size_t id = states.size();
        index.emplace(std::move(key), id);
        states.push_back(std::move(v));
        return id;
    };

    DFAO<PField> out{rep.field, k, intern(rep.row), {}, {}};
    for (std::size_t q = 0; q < states.size(); ++q) {
        if (states.size() > (1u << 22))
            throw std::runtime_error("kernel closure exceeded the state budget");
        std::vector<std::size_t> row;
        for (std::size_t d = 0; d < k; ++d)
            row.push_back(intern(rep.digit[d].apply_left(states[q])));
        out.transitions.push_back(std::move(row));
        auto o = rep.field.zero();
        for (std::size_t i = 0; i < dim; ++i) o += states[q][i] * rep.col[i];
        out.outputs.push_back(o);
    }
    return out;
}

}  // namespace mahler

#endif
