#ifndef MAHLER_BASE_PAIR_HPP
#define MAHLER_BASE_PAIR_HPP

#include <algorithm>
#include <cstdint>
#include <stdexcept>
#include <utility>
#include <vector>

#include <gmpxx.h>

namespace mahler {

struct MultiplicativelyDependent : std::runtime_error {
    MultiplicativelyDependent()
        : std::runtime_error("bases are multiplicatively dependent") {}
};

/// Replacement bases k', l' together with primes p | k', p not | l' and
/// q | l', q not | k'.
struct BasePair {
    std::uint64_t k_prime = 0;
    std::uint64_t l_prime = 0;
    std::uint64_t p = 0;
    std::uint64_t q = 0;
};

inline std::vector<std::pair<std::uint64_t, std::uint64_t>> factorize(std::uint64_t n) {
    std::vector<std::pair<std::uint64_t, std::uint64_t>> f;
    for (std::uint64_t d = 2; d * d <= n; ++d)
        if (n % d == 0) {
            std::uint64_t e = 0;
            while (n % d == 0) { n /= d; ++e; }
            f.emplace_back(d, e);
        }
    if (n > 1) f.emplace_back(n, 1);
    return f;
}

/// Picks replacement bases with a prime separating each side, by exact
/// exponent-vector arithmetic on the shared prime support.
inline BasePair base_pair(std::uint64_t k, std::uint64_t l) {
    if (k < 2 || l < 2) throw std::invalid_argument("bases must be >= 2");
    auto fk = factorize(k), fl = factorize(l);

    std::vector<std::uint64_t> primes;
    for (auto& [p, e] : fk) primes.push_back(p);
    for (auto& [p, e] : fl)
        if (std::find(primes.begin(), primes.end(), p) == primes.end()) primes.push_back(p);
    std::sort(primes.begin(), primes.end());

    std::size_t r = primes.size();
    std::vector<long> a(r, 0), b(r, 0);
    for (std::size_t i = 0; i < r; ++i) {
        for (auto& [p, e] : fk)
            if (p == primes[i]) a[i] = static_cast<long>(e);
        for (auto& [p, e] : fl)
            if (p == primes[i]) b[i] = static_cast<long>(e);
    }

    bool dependent = true;
    for (std::size_t i = 0; i < r && dependent; ++i)
        for (std::size_t j = 0; j < r; ++j)
            if (a[i] * b[j] != a[j] * b[i]) { dependent = false; break; }
    if (dependent) throw MultiplicativelyDependent();

    long ai0 = -1, bj0 = -1;
    for (std::size_t i = 0; i < r; ++i) {
        if (a[i] == 0) ai0 = static_cast<long>(i);
        if (b[i] == 0) bj0 = static_cast<long>(i);
    }
    if (ai0 >= 0 && bj0 >= 0)
        return {k, l, primes[static_cast<std::size_t>(bj0)], primes[static_cast<std::size_t>(ai0)]};

    // i0 minimizes a_i / b_i over primes dividing l.
    std::size_t i0 = r;
    for (std::size_t i = 0; i < r; ++i) {
        if (b[i] == 0) continue;
        if (i0 == r || a[i] * b[i0] < a[i0] * b[i]) i0 = i;
    }

    mpz_class kp;
    {
        mpz_class num, den;
        mpz_ui_pow_ui(num.get_mpz_t(), k, static_cast<unsigned long>(b[i0]));
        mpz_ui_pow_ui(den.get_mpz_t(), l, static_cast<unsigned long>(a[i0]));
        mpz_class rem;
        mpz_fdiv_qr(kp.get_mpz_t(), rem.get_mpz_t(), num.get_mpz_t(), den.get_mpz_t());
        if (rem != 0) throw std::logic_error("replacement base k' is not an integer");
    }

    // Exponent of prime j in k'.
    std::vector<long> c(r);
    for (std::size_t j = 0; j < r; ++j) c[j] = a[j] * b[i0] - b[j] * a[i0];

    // i1 maximizes c_j / b_j; a prime with b_j = 0 and c_j > 0 counts as
    // infinitely large.
    std::size_t i1 = r;
    for (std::size_t j = 0; j < r; ++j) {
        if (c[j] == 0 && b[j] == 0) continue;
        if (i1 == r) { i1 = j; continue; }
        bool j_inf = b[j] == 0, i_inf = b[i1] == 0;
        if (i_inf) continue;
        if (j_inf || c[j] * b[i1] > c[i1] * b[j]) i1 = j;
    }

    mpz_class lp;
    {
        mpz_class num, den;
        mpz_ui_pow_ui(num.get_mpz_t(), l, static_cast<unsigned long>(c[i1]));
        mpz_pow_ui(den.get_mpz_t(), kp.get_mpz_t(), static_cast<unsigned long>(b[i1]));
        mpz_class rem;
        mpz_fdiv_qr(lp.get_mpz_t(), rem.get_mpz_t(), num.get_mpz_t(), den.get_mpz_t());
        if (rem != 0) throw std::logic_error("replacement base l' is not an integer");
    }

    if (!kp.fits_ulong_p() || !lp.fits_ulong_p())
        throw std::overflow_error("replacement base does not fit in 64 bits");
    BasePair out{static_cast<std::uint64_t>(kp.get_ui()), static_cast<std::uint64_t>(lp.get_ui()),
                 primes[i1], primes[i0]};
    if (out.k_prime < 2 || out.l_prime < 2 || out.k_prime % out.p != 0 ||
        out.l_prime % out.p == 0 || out.l_prime % out.q != 0 || out.k_prime % out.q == 0)
        throw std::logic_error("replacement bases violate their separation invariants");
    return out;
}

}  // namespace mahler

#endif
