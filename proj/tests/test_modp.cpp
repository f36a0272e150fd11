#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <numeric>
#include <set>

#include <mahler/modp.hpp>
#include <mahler/ratfun.hpp>

using namespace mahler;

namespace {

using QPoly = Polynomial<QField>;
using QSeries = TruncatedSeries<QField>;

const QField q{};

QPoly poly(std::initializer_list<long> c) {
    std::vector<Rat> v;
    for (long x : c) v.push_back(q.of(x));
    return QPoly(q, std::move(v));
}

}  // namespace

TEST_CASE("series reduction gives modular powers") {
    auto f = RationalFunction<QField>(poly({1}), poly({1, -3})).expand(16);
    PField f5(5);
    auto r = reduce_mod_p(f, f5);
    std::vector<std::uint64_t> want{1, 3, 4, 2, 1, 3, 4, 2, 1, 3, 4, 2, 1, 3, 4, 2};
    for (std::size_t i = 0; i < want.size(); ++i) CHECK(r.coeffs()[i].residue() == want[i]);
}

TEST_CASE("polynomial reduction is the residue map") {
    auto p = poly({7, -3, 10, 23});
    PField f7(7);
    auto r = reduce_mod_p(p, f7);
    CHECK(r.coeff(0).residue() == 0);
    CHECK(r.coeff(1).residue() == 4);
    CHECK(r.coeff(2).residue() == 3);
    CHECK(r.coeff(3).residue() == 2);
}

TEST_CASE("denominator divisible by p is rejected") {
    PField f5(5);
    CHECK_THROWS_AS(reduce_mod_p(Rat(1, 5), f5), BadPrime);
    CHECK_THROWS_AS(reduce_mod_p(QPoly(q, {Rat(1), Rat(2, 15)}), f5), BadPrime);
    CHECK(reduce_mod_p(Rat(3, 4), PField(5)).residue() == 2);
}

TEST_CASE("equation reduction preserves the relation") {
    MahlerEquation<QField> eq{q, 2, QPoly(q), {poly({1, -3}), -poly({1, 0, -3})}, false};
    auto f = RationalFunction<QField>(poly({1}), poly({1, -3})).expand(128);
    REQUIRE(verify_equation(eq, f).holds);
    PField f7(7);
    auto req = reduce_mod_p(eq, f7);
    auto rf = reduce_mod_p(f, f7);
    CHECK(verify_equation(req, rf).holds);
}

TEST_CASE("prime search on 1-3x with bases 2 and 3") {
    auto s1 = poly({1, -3});
    auto reports = prime_search(s1, s1, 2, 3, 100, 8);

    std::set<std::uint64_t> passed;
    for (const auto& r : reports)
        if (r.passed) passed.insert(r.p);
    CHECK(passed == std::set<std::uint64_t>{7, 19, 31, 37, 43, 73, 79, 97});

    for (const auto& r : reports) {
        if (r.p == 7) {
            CHECK(r.splits);
            CHECK(r.passed);
            REQUIRE(r.k_witnesses.size() == 1);
            CHECK(r.k_witnesses.at(5) == 1);  // 3^{-1} = 5 mod 7, not a square
            CHECK(r.l_witnesses.at(5) == 1);  // and not a cube
        }
        if (r.p == 5) {
            CHECK(r.splits);
            CHECK(!r.passed);  // every element of F_5^* is a cube
            CHECK(r.k_witnesses.count(2) == 1);
            CHECK(r.l_witnesses.empty());
        }
        // p = 3 divides the leading coefficient and is skipped
        CHECK(r.p != 3);
    }
}

TEST_CASE("trivial factors pass vacuously") {
    auto one = poly({1});
    auto reports = prime_search(one, one, 2, 3, 30, 8);
    CHECK(reports.size() == 10);  // primes up to 30
    for (const auto& r : reports) {
        CHECK(r.splits);
        CHECK(r.passed);
        CHECK(r.k_witnesses.empty());
        CHECK(r.l_witnesses.empty());
    }
}

TEST_CASE("irreducible quadratic mod p fails to split") {
    // x^2 + 1 has no root mod 7
    auto s1 = poly({1, 0, 1});
    auto reports = prime_search(s1, poly({1}), 2, 3, 7, 8);
    for (const auto& r : reports)
        if (r.p == 7) {
            CHECK(!r.splits);
            CHECK(!r.passed);
        }
}

TEST_CASE("gcd of k^n with m computed without overflow") {
    for (std::uint64_t k = 2; k <= 12; ++k)
        for (std::size_t n = 0; n <= 6; ++n)
            for (std::uint64_t m = 1; m <= 360; ++m) {
                std::uint64_t kn = 1;
                for (std::size_t i = 0; i < n; ++i) kn *= k;
                CHECK(detail::gcd_power(k, n, m) == std::gcd(kn, m));
            }
}
