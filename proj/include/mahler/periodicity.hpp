#ifndef MAHLER_PERIODICITY_HPP
#define MAHLER_PERIODICITY_HPP

#include <cstddef>
#include <cstdint>
#include <map>
#include <tuple>
#include <vector>

#include "dfao.hpp"

namespace mahler {

struct PeriodicityVerdict {
    bool periodic = false;
    std::size_t preperiod = 0;     // t
    std::size_t period = 0;        // m
    std::size_t max_period = 0;    // bounds searched when aperiodic
    std::size_t max_preperiod = 0;
};

namespace detail {

/// Exact check that f(n) = f(n+m) for all n >= t, via emptiness of the
/// product automaton that feeds digits least significant first and tracks
/// the add-m carry.  Returns false as well when the search exceeds the
/// state cap, so a true result is always a proof.
template <class F>
bool verify_periodicity(const DFAO<F>& a, std::size_t m, std::size_t t,
                        std::size_t state_cap = 2000000) {
    std::size_t k = a.base, ns = a.states();
    std::vector<std::size_t> mdig, tdig;
    for (std::uint64_t v = m; v; v /= k) mdig.push_back(v % k);
    for (std::uint64_t v = t; v; v /= k) tdig.push_back(v % k);
    std::size_t poslim = std::max(mdig.size(), tdig.size()) + 1;

    // phi maps "start state" to "state after reading the processed low
    // digits"; prepending a more significant digit d precomposes delta_d.
    using Fn = std::vector<std::uint32_t>;
    Fn id(ns);
    for (std::size_t i = 0; i < ns; ++i) id[i] = static_cast<std::uint32_t>(i);
    auto precompose = [&](const Fn& phi, std::size_t d) {
        Fn r(ns);
        for (std::size_t q = 0; q < ns; ++q)
            r[q] = phi[a.transitions[q][d]];
        return r;
    };

    // geq: low digits so far compare >= the low digits of t
    // big: some digit beyond t's length was nonzero
    struct Node {
        std::size_t pos;  // capped at poslim
        std::size_t carry;
        bool geq, big;
        Fn phi_n, phi_m;
    };
    auto key_of = [](const Node& nd) {
        std::vector<std::uint32_t> key{static_cast<std::uint32_t>(nd.pos),
                                       static_cast<std::uint32_t>(nd.carry),
                                       static_cast<std::uint32_t>(nd.geq),
                                       static_cast<std::uint32_t>(nd.big)};
        key.insert(key.end(), nd.phi_n.begin(), nd.phi_n.end());
        key.insert(key.end(), nd.phi_m.begin(), nd.phi_m.end());
        return key;
    };

    // Evaluates f(n) != f(n+m) for the number closed off at this node.
    auto mismatch_at = [&](const Node& nd) {
        std::size_t q_n = nd.phi_n[a.initial];
        // remaining high part of n+m: carry plus the unread digits of m
        std::uint64_t rest = nd.carry;
        std::uint64_t scale = 1;
        for (std::size_t i = nd.pos; i < mdig.size(); ++i, scale *= k)
            rest += static_cast<std::uint64_t>(mdig[i]) * scale;
        Fn phi = nd.phi_m;
        for (; rest; rest /= k) phi = precompose(phi, rest % k);
        std::size_t q_m = phi[a.initial];
        return !(a.outputs[q_n] == a.outputs[q_m]);
    };
    auto n_ge_t = [&](const Node& nd) {
        if (nd.big) return true;
        if (nd.pos >= tdig.size()) return nd.geq || tdig.empty();
        return false;  // fewer digits than t, so n < t
    };

    std::map<std::vector<std::uint32_t>, bool> seen;
    std::vector<Node> work;
    Node start{0, 0, true, false, id, id};
    // n = 0 (empty digit string)
    if (n_ge_t(start) && mismatch_at(start)) return false;
    seen.emplace(key_of(start), true);
    work.push_back(start);

    while (!work.empty()) {
        Node nd = work.back();
        work.pop_back();
        for (std::size_t d = 0; d < k; ++d) {
            std::size_t md = nd.pos < mdig.size() ? mdig[nd.pos] : 0;
            std::size_t sum = d + md + nd.carry;
            Node nx;
            nx.pos = std::min(nd.pos + 1, poslim);
            nx.carry = sum / k;
            nx.phi_n = precompose(nd.phi_n, d);
            nx.phi_m = precompose(nd.phi_m, sum % k);
            if (nd.pos < tdig.size()) {
                std::size_t td = tdig[nd.pos];
                nx.geq = d > td || (d == td && nd.geq);
                nx.big = false;
            } else {
                nx.geq = nd.geq && !tdig.empty();
                nx.big = nd.big || d > 0;
            }
            if (d > 0 && n_ge_t(nx) && mismatch_at(nx)) return false;
            auto key = key_of(nx);
            if (seen.emplace(std::move(key), true).second) {
                if (seen.size() > state_cap) return false;
                work.push_back(std::move(nx));
            }
        }
    }
    return true;
}

}  // namespace detail

/// Candidate periods are read off a finite prefix, then each candidate is
/// proved or refuted exactly; a periodic verdict is therefore a proof.
template <class F>
PeriodicityVerdict eventual_periodicity(const DFAO<F>& a, std::size_t max_period,
                                        std::size_t max_preperiod) {
    std::size_t probe = max_preperiod + 2 * max_period * 64;
    std::vector<typename F::Scalar> f;
    f.reserve(probe);
    for (std::size_t n = 0; n < probe; ++n) f.push_back(dfao_eval(a, n));

    for (std::size_t m = 1; m <= max_period; ++m) {
        std::size_t t = 0;
        for (std::size_t n = 0; n + m < probe; ++n)
            if (!(f[n] == f[n + m])) t = n + 1;
        if (t > max_preperiod) continue;
        if (detail::verify_periodicity(a, m, t))
            return {true, t, m, max_period, max_preperiod};
    }
    return {false, 0, 0, max_period, max_preperiod};
}

}  // namespace mahler

#endif
