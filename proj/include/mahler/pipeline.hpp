#ifndef MAHLER_PIPELINE_HPP
#define MAHLER_PIPELINE_HPP

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "base_pair.hpp"
#include "becker_automaton.hpp"
#include "equation.hpp"
#include "linrep.hpp"
#include "modp.hpp"
#include "periodicity.hpp"
#include "rationality.hpp"
#include "ratfun.hpp"

namespace mahler {

struct PipelineParams {
    std::uint64_t p_max = 500;
    std::size_t n_max = 8;
    std::size_t min_primes = 3;
    std::size_t validate_terms = 2048;
    std::size_t max_period = 512;
    std::size_t max_preperiod = 256;
    std::size_t find_order = 2;   // bounds for deriving a missing equation
    std::size_t find_degree = 8;
    std::size_t hankel_degree = 0;  // 0 = derive from the coefficient degrees
};

struct StageRecord {
    std::string name;
    bool ok = false;
    bool exact = false;          // proof rather than truncation-level evidence
    std::size_t certified_to = 0;  // precision backing a non-exact stage
    std::string detail;
};

struct PrimeCertification {
    std::uint64_t p = 0;
    bool assembled_k = false;
    bool assembled_l = false;
    std::size_t automaton_states_k = 0;
    std::size_t automaton_states_l = 0;
    std::size_t validated_terms = 0;
    bool periodic = false;
    std::size_t period = 0;
    std::size_t preperiod = 0;
    std::string note;
};

enum class Verdict { Rational, Inconclusive, HypothesisViolated };

struct PipelineReport {
    std::vector<StageRecord> stages;
    std::vector<PrimeReport> prime_reports;
    std::vector<PrimeCertification> prime_runs;
    Verdict verdict = Verdict::Inconclusive;
    std::string reason;
    std::optional<RationalFunction<QField>> fraction;
};

namespace detail {

/// Automaton of F_0 mod p from the Becker part G and the roots of P_0:
/// F_0 = G * prod_i U_{a_i}^{m_i} with U_a = prod_j (1 - a x^{k^j})^{-1} and
/// G(0) = F_0(0).  The unit factors can have enormous automata on their own,
/// so they enter as linear representations; the orbit is enumerated only for
/// the finished product, whose kernel is small again.  Dimensions are cut to
/// the observable part after each product.
inline DFAO<PField> assemble_mod_p(const MahlerEquation<PField>& tail_eq, Fp f0_constant,
                                   std::size_t* states_out) {
    const PField& field = tail_eq.field;
    std::size_t k = tail_eq.base;
    const auto& p0 = tail_eq.coeffs[0];
    auto [roots, split] = strip_roots(p0);
    if (!split) throw std::runtime_error("leading coefficient does not split");

    // G = H F_0 with H = prod_j P_0(x^{k^j}) satisfies the Becker-form
    // equation with Q_0 = 1 and Q_i = P_i prod_{j=1}^{i-1} P_0(x^{k^j}).
    std::vector<Polynomial<PField>> bq(tail_eq.coeffs.size(), Polynomial<PField>(field));
    bq[0] = Polynomial<PField>::one(field);
    auto tail_prod = Polynomial<PField>::one(field);
    for (std::size_t i = 1; i < tail_eq.coeffs.size(); ++i) {
        if (i >= 2) tail_prod *= p0.substitute_power(pow_sz(k, i - 1));
        bq[i] = tail_eq.coeffs[i] * tail_prod;
    }
    MahlerEquation<PField> becker_eq{field, k, Polynomial<PField>(field), bq, false};

    auto rep = becker_representation(becker_eq, f0_constant);
    for (std::uint64_t r : roots) {
        Fp a = field.of(static_cast<long long>(r)).inverse();
        auto split = unit_product_split(field, a, k);
        rep = rep_observable(
            representation_product(rep, unit_product_representation(split, field, k)));
    }
    auto dfao = dfao_minimize(kernel_closure(rep));
    if (states_out) *states_out = dfao.states();
    return dfao;
}

}  // namespace detail

/// End-to-end rationality run: normalize both equations, shift to leading
/// constant term 1, split off the cyclotomic parts, check the fixed-root
/// hypothesis, find suitable primes, certify eventual periodicity of the
/// reduction mod each prime, reconstruct a candidate fraction and verify it
/// exactly against both equations.  Stage failures land in the report.
inline PipelineReport pipeline_rationality(const TruncatedSeries<QField>& f,
                                           const MahlerEquation<QField>& eq_k_in,
                                           std::optional<MahlerEquation<QField>> eq_l_in,
                                           const PipelineParams& params = {}) {
    PipelineReport rep;
    const QField q{};
    auto stage = [&](std::string name, bool ok, bool exact, std::size_t cert,
                     std::string detail) -> StageRecord& {
        rep.stages.push_back({std::move(name), ok, exact, cert, std::move(detail)});
        return rep.stages.back();
    };
    auto fail = [&](Verdict v, std::string reason) {
        rep.verdict = v;
        rep.reason = std::move(reason);
        return rep;
    };

    // --- equations present and verified ---
    std::size_t k = eq_k_in.base;
    MahlerEquation<QField> eq_l_src{q, 0, Polynomial<QField>(q), {}, false};
    if (eq_l_in) {
        eq_l_src = *eq_l_in;
    } else {
        std::size_t l = k == 2 ? 3 : 2;
        std::optional<FoundEquation<QField>> found;
        try {
            found = find_equation(f, l, params.find_order, params.find_degree);
        } catch (const std::exception& e) {
            stage("derive-l-equation", false, false, 0, e.what());
            return fail(Verdict::Inconclusive, "missing l-equation");
        }
        if (!found) {
            stage("derive-l-equation", false, false, f.precision(), "no relation within bounds");
            return fail(Verdict::Inconclusive, "missing l-equation");
        }
        stage("derive-l-equation", true, false, found->certified_to, "base " + std::to_string(l));
        eq_l_src = found->equation;
    }
    std::size_t l = eq_l_src.base;

    auto vk = verify_equation(eq_k_in, f);
    auto vl = verify_equation(eq_l_src, f);
    stage("verify", vk.holds && vl.holds, false, std::min(vk.holds_to, vl.holds_to), "");
    if (!vk.holds) return fail(Verdict::Inconclusive, "k-equation fails at coefficient " +
                                                          std::to_string(vk.fails_at));
    if (!vl.holds) return fail(Verdict::Inconclusive, "l-equation fails at coefficient " +
                                                          std::to_string(vl.fails_at));

    // --- multiplicative independence ---
    try {
        auto bp = base_pair(k, l);
        stage("independence", true, true, 0,
              "separating primes " + std::to_string(bp.p) + ", " + std::to_string(bp.q));
    } catch (const MultiplicativelyDependent&) {
        stage("independence", false, true, 0, "");
        return fail(Verdict::Inconclusive, "bases are multiplicatively dependent");
    }

    // --- normalize ---
    MahlerEquation<QField> eq_k{q, 0, Polynomial<QField>(q), {}, false}, eq_l = eq_k;
    try {
        eq_k = normalize(eq_k_in);
        eq_l = normalize(eq_l_src);
        stage("normalize", true, true, 0,
              "orders " + std::to_string(eq_k.order()) + ", " + std::to_string(eq_l.order()));
    } catch (const std::exception& e) {
        stage("normalize", false, true, 0, e.what());
        return fail(Verdict::Inconclusive, std::string("normalize: ") + e.what());
    }

    // --- common shift to P_0(0) = Q_0(0) = 1 and F_0(0) != 0 ---
    auto f0 = f;
    Polynomial<QField> head(q);
    std::size_t shift_a = 0;
    MahlerEquation<QField> tail_k = eq_k, tail_l = eq_l;
    bool need_shift = eq_k.coeffs[0].low_order() > 0 || eq_l.coeffs[0].low_order() > 0 ||
                      f.precision() == 0 || is_zero(f.coeffs()[0]);
    if (need_shift) {
        try {
            std::size_t floor =
                std::max(eq_k.coeffs[0].low_order(), eq_l.coeffs[0].low_order()) + 1;
            auto sk = shift_decompose(eq_k, f, floor);
            auto sl = shift_decompose(eq_l, f, floor);
            if (sk.a != sl.a) throw std::logic_error("shift indices disagree");
            shift_a = sk.a;
            head = sk.head;
            f0 = sk.tail_series;
            tail_k = sk.tail_equation;
            tail_l = sl.tail_equation;
            stage("shift", true, false, f0.precision(), "a = " + std::to_string(shift_a));
        } catch (const std::exception& e) {
            stage("shift", false, false, 0, e.what());
            return fail(Verdict::Inconclusive, std::string("shift: ") + e.what());
        }
    } else {
        stage("shift", true, true, 0, "not needed");
    }

    // --- cyclotomic split and fixed-root hypothesis ---
    CyclotomicSplit<QField> split_k{Polynomial<QField>(q), Polynomial<QField>(q), {}};
    auto split_l = split_k;
    try {
        split_k = cyclotomic_split(tail_k.coeffs[0]);
        split_l = cyclotomic_split(tail_l.coeffs[0]);
        stage("split", true, true, 0,
              "unit degrees " + std::to_string(std::max(split_k.unit_part.degree(), 0L)) + ", " +
                  std::to_string(std::max(split_l.unit_part.degree(), 0L)));
    } catch (const std::exception& e) {
        stage("split", false, true, 0, e.what());
        return fail(Verdict::Inconclusive, std::string("split: ") + e.what());
    }
    auto fr_k = fixed_root_check(split_k.indices, k);
    auto fr_l = fixed_root_check(split_l.indices, l);
    stage("fixed-check", fr_k.ok && fr_l.ok, true, 0, "");
    if (!fr_k.ok || !fr_l.ok)
        return fail(Verdict::HypothesisViolated,
                    "fixed_root_check: index " +
                        std::to_string(fr_k.ok ? fr_l.violating_index : fr_k.violating_index));

    // --- Becker decompositions over Q (structure check) ---
    try {
        auto bk = becker_decompose(tail_k, f0);
        auto bl = becker_decompose(tail_l, f0);
        stage("becker", true, false, std::min(bk.becker_part.precision(), bl.becker_part.precision()),
              "");
    } catch (const std::exception& e) {
        stage("becker", false, false, 0, e.what());
        return fail(Verdict::Inconclusive, std::string("becker: ") + e.what());
    }

    // --- prime search on the non-cyclotomic parts ---
    rep.prime_reports =
        prime_search(split_k.free_part, split_l.free_part, k, l, params.p_max, params.n_max);
    std::vector<std::uint64_t> passing;
    for (const auto& pr : rep.prime_reports)
        if (pr.passed) passing.push_back(pr.p);
    stage("primes", passing.size() >= params.min_primes, true, 0,
          std::to_string(passing.size()) + " passing");
    if (passing.size() < params.min_primes)
        return fail(Verdict::Inconclusive, "only " + std::to_string(passing.size()) +
                                               " primes pass the witness search");

    // --- per-prime automatization and periodicity, ascending, until enough ---
    std::size_t certified = 0;
    for (std::uint64_t p : passing) {
        if (certified >= params.min_primes) break;
        PrimeCertification cert;
        cert.p = p;
        try {
            PField field(p);
            auto tk = reduce_mod_p(tail_k, field);
            auto tl = reduce_mod_p(tail_l, field);
            auto fp = reduce_mod_p(f0, field);

            auto ak = detail::assemble_mod_p(tk, fp.coeffs()[0], &cert.automaton_states_k);
            cert.assembled_k = true;
            auto al = detail::assemble_mod_p(tl, fp.coeffs()[0], &cert.automaton_states_l);
            cert.assembled_l = true;

            auto extended = solve_series(
                tk, std::vector<Fp>(fp.coeffs().begin(), fp.coeffs().end()),
                std::max(params.validate_terms, fp.precision()));
            for (std::size_t n = 0; n < extended.precision(); ++n) {
                if (!(dfao_eval(ak, n) == extended.coeffs()[n]))
                    throw std::logic_error("k-side automaton disagrees with the series");
                if (!(dfao_eval(al, n) == extended.coeffs()[n]))
                    throw std::logic_error("l-side automaton disagrees with the series");
            }
            cert.validated_terms = extended.precision();

            auto pv = eventual_periodicity(ak, params.max_period, params.max_preperiod);
            cert.periodic = pv.periodic;
            cert.period = pv.period;
            cert.preperiod = pv.preperiod;
            if (pv.periodic) ++certified;
            else cert.note = "no certified period within bounds";
        } catch (const std::exception& e) {
            cert.note = e.what();
        }
        rep.prime_runs.push_back(std::move(cert));
    }
    stage("periodicity", certified >= params.min_primes, true, 0,
          std::to_string(certified) + " primes certified");
    if (certified < params.min_primes)
        return fail(Verdict::Inconclusive, "only " + std::to_string(certified) +
                                               " primes certified eventually periodic");

    // --- Hankel reconstruction over Q ---
    std::size_t d = params.hankel_degree;
    if (d == 0) {
        for (const auto& pl : tail_k.coeffs) d = std::max(d, static_cast<std::size_t>(std::max(pl.degree(), 0L)));
        for (const auto& pl : tail_l.coeffs) d = std::max(d, static_cast<std::size_t>(std::max(pl.degree(), 0L)));
        d += static_cast<std::size_t>(std::max(head.degree(), 0L)) + shift_a + 1;
        if (f0.precision() >= 16 && 4 * d + 16 > f0.precision()) d = (f0.precision() - 16) / 4;
    }
    std::optional<RationalFunction<QField>> frac0;
    try {
        frac0 = hankel_rationality(f0, d);
    } catch (const std::exception& e) {
        stage("hankel", false, false, 0, e.what());
        return fail(Verdict::Inconclusive, std::string("hankel: ") + e.what());
    }
    stage("hankel", frac0.has_value(), false, f0.precision(), "degree bound " + std::to_string(d));
    if (!frac0) return fail(Verdict::Inconclusive, "Hankel reconstruction found no fraction");

    // F = head + x^a F_0.
    auto shift_mono = Polynomial<QField>::monomial(q, q.one(), shift_a);
    RationalFunction<QField> frac(head * frac0->denominator() + shift_mono * frac0->numerator(),
                                  frac0->denominator());

    // --- exact symbolic verification against both original equations ---
    auto substitution_zero = [&](const MahlerEquation<QField>& eq) {
        // Clear denominators: A prod_i D(x^{k^i}) + sum_i P_i N(x^{k^i}) prod_{j!=i} D(x^{k^j}).
        std::size_t n = eq.coeffs.size();
        std::vector<Polynomial<QField>> dsub, nsub;
        for (std::size_t i = 0; i < n; ++i) {
            std::size_t e = pow_sz(eq.base, i);
            dsub.push_back(frac.denominator().substitute_power(e));
            nsub.push_back(frac.numerator().substitute_power(e));
        }
        auto total = eq.inhomogeneous;
        for (std::size_t i = 0; i < n; ++i) total = total * dsub[i];
        for (std::size_t i = 0; i < n; ++i) {
            auto term = eq.coeffs[i] * nsub[i];
            for (std::size_t j = 0; j < n; ++j)
                if (j != i) term = term * dsub[j];
            total += term;
        }
        return total.is_zero();
    };
    bool exact_k = substitution_zero(eq_k_in);
    bool exact_l = substitution_zero(eq_l_src);
    stage("final-verification", exact_k && exact_l, true, 0, "");
    if (!exact_k || !exact_l)
        return fail(Verdict::Inconclusive, "reconstructed fraction fails the exact substitution");

    rep.fraction = frac;
    rep.verdict = Verdict::Rational;
    rep.reason = "";
    return rep;
}

}  // namespace mahler

#endif
