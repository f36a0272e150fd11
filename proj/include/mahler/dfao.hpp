#ifndef MAHLER_DFAO_HPP
#define MAHLER_DFAO_HPP

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <map>
#include <stdexcept>
#include <vector>

#include "fields.hpp"

namespace mahler {

/// Base-k digits, most significant first; n = 0 gives the empty word.
inline std::vector<std::size_t> digits_msd(std::uint64_t n, std::size_t k) {
    std::vector<std::size_t> d;
    while (n) {
        d.push_back(n % k);
        n /= static_cast<std::uint64_t>(k);
    }
    std::reverse(d.begin(), d.end());
    return d;
}

/// Deterministic finite automaton with output.  Digits are consumed most
/// significant first and leading zeros are never fed.
template <class F>
struct DFAO {
    using K = typename F::Scalar;

    F field;
    std::size_t base = 2;
    std::size_t initial = 0;
    std::vector<std::vector<std::size_t>> transitions;  // [state][digit]
    std::vector<K> outputs;

    std::size_t states() const { return transitions.size(); }
    std::size_t step(std::size_t q, std::size_t d) const { return transitions.at(q).at(d); }
};

template <class F>
typename F::Scalar dfao_eval(const DFAO<F>& a, std::uint64_t n) {
    std::size_t q = a.initial;
    for (std::size_t d : digits_msd(n, a.base)) q = a.step(q, d);
    return a.outputs[q];
}

/// Drops unreachable states, renumbering in discovery order.
template <class F>
DFAO<F> dfao_trim(const DFAO<F>& a) {
    std::vector<long> renum(a.states(), -1);
    std::vector<std::size_t> order;
    renum[a.initial] = 0;
    order.push_back(a.initial);
    for (std::size_t i = 0; i < order.size(); ++i)
        for (std::size_t d = 0; d < a.base; ++d) {
            std::size_t t = a.transitions[order[i]][d];
            if (renum[t] < 0) {
                renum[t] = static_cast<long>(order.size());
                order.push_back(t);
            }
        }
    DFAO<F> out{a.field, a.base, 0, {}, {}};
    for (std::size_t q : order) {
        std::vector<std::size_t> row;
        for (std::size_t d = 0; d < a.base; ++d)
            row.push_back(static_cast<std::size_t>(renum[a.transitions[q][d]]));
        out.transitions.push_back(std::move(row));
        out.outputs.push_back(a.outputs[q]);
    }
    return out;
}

/// Moore partition refinement; result is trim and minimal.
template <class F>
DFAO<F> dfao_minimize(const DFAO<F>& input) {
    DFAO<F> a = dfao_trim(input);
    std::size_t m = a.states();
    std::vector<std::size_t> cls(m);
    {
        std::vector<typename F::Scalar> seen;
        for (std::size_t q = 0; q < m; ++q) {
            std::size_t c = seen.size();
            for (std::size_t i = 0; i < seen.size(); ++i)
                if (seen[i] == a.outputs[q]) { c = i; break; }
            if (c == seen.size()) seen.push_back(a.outputs[q]);
            cls[q] = c;
        }
    }
    for (;;) {
        std::map<std::vector<std::size_t>, std::size_t> sig_to_class;
        std::vector<std::size_t> next(m);
        for (std::size_t q = 0; q < m; ++q) {
            std::vector<std::size_t> sig{cls[q]};
            for (std::size_t d = 0; d < a.base; ++d) sig.push_back(cls[a.transitions[q][d]]);
            auto [it, inserted] = sig_to_class.emplace(sig, sig_to_class.size());
            next[q] = it->second;
        }
        bool stable = true;
        for (std::size_t q = 0; q < m && stable; ++q)
            for (std::size_t r = q + 1; r < m; ++r)
                if ((cls[q] == cls[r]) != (next[q] == next[r])) { stable = false; break; }
        cls = std::move(next);
        if (stable) break;
    }
    std::size_t nclasses = 0;
    for (auto c : cls) nclasses = std::max(nclasses, c + 1);
    DFAO<F> out{a.field, a.base, cls[a.initial],
                std::vector<std::vector<std::size_t>>(nclasses,
                                                      std::vector<std::size_t>(a.base, 0)),
                std::vector<typename F::Scalar>(nclasses, a.field.zero())};
    for (std::size_t q = 0; q < m; ++q) {
        out.outputs[cls[q]] = a.outputs[q];
        for (std::size_t d = 0; d < a.base; ++d)
            out.transitions[cls[q]][d] = cls[a.transitions[q][d]];
    }
    return dfao_trim(out);
}

}  // namespace mahler

#endif
