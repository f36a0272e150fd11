#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <numeric>
#include <random>

#include <mahler/rationality.hpp>

using namespace mahler;

namespace {

using QPoly = Polynomial<QField>;
using QSeries = TruncatedSeries<QField>;
using QRat = RationalFunction<QField>;

const QField q{};

QPoly poly(std::initializer_list<long> c) {
    std::vector<Rat> v;
    for (long x : c) v.push_back(q.of(x));
    return QPoly(q, std::move(v));
}

QSeries powers_of_two_indicator(std::size_t n) {
    QSeries s(q, n);
    for (std::size_t e = 1; e < n; e *= 2) s.at(e) = q.one();
    return s;
}

}  // namespace

TEST_CASE("hankel recovers a geometric series") {
    auto f = QRat(poly({1}), poly({1, -3})).expand(40);
    auto r = hankel_rationality(f, 3);
    REQUIRE(r.has_value());
    CHECK(r->numerator() == poly({1}));
    CHECK(r->denominator() == poly({1, -3}));
}

TEST_CASE("hankel returns the polynomial itself over denominator one") {
    auto p = poly({1, 2, 0, 0, 0, 7});
    auto f = QSeries::from_polynomial(p, 60);
    for (std::size_t d = 5; d <= 8; ++d) {
        auto r = hankel_rationality(f, d);
        REQUIRE(r.has_value());
        CHECK(r->numerator() == p);
        CHECK(r->denominator() == poly({1}));
    }
}

TEST_CASE("hankel rejects the powers-of-two indicator") {
    auto f = powers_of_two_indicator(600);
    CHECK(!hankel_rationality(f, 8).has_value());
}

TEST_CASE("hankel precision guard") {
    auto f = QRat(poly({1}), poly({1, -3})).expand(40);
    CHECK_THROWS_AS(hankel_rationality(f, 7), InsufficientPrecision);
    CHECK_NOTHROW(hankel_rationality(f, 6));
}

TEST_CASE("hankel re-expansion and degree soundness on random fractions") {
    std::mt19937 rng(4242);
    std::uniform_int_distribution<long> coeff(-5, 5);
    for (int trial = 0; trial < 40; ++trial) {
        std::vector<Rat> nc, dc;
        for (int i = 0; i <= 3; ++i) nc.push_back(q.of(coeff(rng)));
        dc.push_back(q.one());
        for (int i = 1; i <= 3; ++i) dc.push_back(q.of(coeff(rng)));
        QRat target(QPoly(q, nc), QPoly(q, dc));
        auto f = target.expand(64);

        auto r = hankel_rationality(f, 3);
        REQUIRE(r.has_value());
        CHECK(*r == target);
        CHECK(r->expand(64) == f);

        auto r6 = hankel_rationality(f, 6);
        REQUIRE(r6.has_value());
        CHECK(*r6 == target);
    }
}

TEST_CASE("cyclotomic polynomial table") {
    CHECK(cyclotomic_polynomial(q, 1) == poly({-1, 1}));
    CHECK(cyclotomic_polynomial(q, 2) == poly({1, 1}));
    CHECK(cyclotomic_polynomial(q, 3) == poly({1, 1, 1}));
    CHECK(cyclotomic_polynomial(q, 4) == poly({1, 0, 1}));
    CHECK(cyclotomic_polynomial(q, 6) == poly({1, -1, 1}));
    CHECK(cyclotomic_polynomial(q, 12) == poly({1, 0, -1, 0, 1}));
}

TEST_CASE("cyclotomic split of (1-x)(1-3x)") {
    auto s = cyclotomic_split(poly({1, -1}) * poly({1, -3}));
    CHECK(s.unit_part == poly({1, -1}));
    CHECK(s.free_part == poly({1, -3}));
    REQUIRE(s.indices.size() == 1);
    CHECK(s.indices[0] == std::pair<std::size_t, std::size_t>{1, 1});
}

TEST_CASE("cyclotomic split of a constant") {
    auto s = cyclotomic_split(poly({1}));
    CHECK(s.unit_part == poly({1}));
    CHECK(s.free_part == poly({1}));
    CHECK(s.indices.empty());
}

TEST_CASE("cyclotomic split captures multiplicity") {
    auto phi3 = poly({1, 1, 1});
    auto s = cyclotomic_split(phi3 * phi3);
    CHECK(s.unit_part == phi3 * phi3);
    CHECK(s.free_part == poly({1}));
    REQUIRE(s.indices.size() == 1);
    CHECK(s.indices[0] == std::pair<std::size_t, std::size_t>{3, 2});
}

TEST_CASE("cyclotomic split invariants on random inputs") {
    std::mt19937 rng(909);
    std::uniform_int_distribution<int> pick(0, 5);
    std::vector<std::size_t> unit_indices{1, 2, 3, 4, 6};
    std::vector<QPoly> free_factors{poly({1, -3}), poly({1, -2}), poly({1, 2, 2})};
    for (int trial = 0; trial < 25; ++trial) {
        auto p = poly({1});
        std::map<std::size_t, std::size_t> want;
        for (std::size_t n : unit_indices) {
            int m = pick(rng) % 3;
            for (int i = 0; i < m; ++i) p *= cyclotomic_polynomial(q, n);
            if (m) want[n] = static_cast<std::size_t>(m);
        }
        for (const auto& f : free_factors)
            if (pick(rng) % 2) p *= f;
        Rat c0 = p.constant_term();
        REQUIRE(!is_zero(c0));
        Rat inv = q.one() / c0;
        p = p * inv;

        auto s = cyclotomic_split(p);
        CHECK(s.unit_part * s.free_part == p);
        CHECK(is_one(s.unit_part.constant_term()));
        CHECK(is_one(s.free_part.constant_term()));
        std::map<std::size_t, std::size_t> got(s.indices.begin(), s.indices.end());
        CHECK(got == want);
        for (const auto& [n, mult] : s.indices) {
            CHECK(euler_phi(n) <= static_cast<std::size_t>(p.degree()));
            auto power = poly({1});
            for (std::size_t i = 0; i < mult; ++i) power *= cyclotomic_polynomial(q, n);
            CHECK(divmod(p, power).second.is_zero());
        }
    }
}

TEST_CASE("fixed root check examples") {
    auto idx = [](std::initializer_list<std::size_t> ns) {
        std::vector<std::pair<std::size_t, std::size_t>> v;
        for (auto n : ns) v.emplace_back(n, 1);
        return v;
    };
    auto r1 = fixed_root_check(idx({1}), 2);
    CHECK(!r1.ok);
    CHECK(r1.violating_index == 1);
    CHECK(fixed_root_check(idx({2}), 2).ok);
    auto r3 = fixed_root_check(idx({3}), 2);
    CHECK(!r3.ok);
    CHECK(r3.violating_index == 3);
    CHECK(fixed_root_check(idx({3}), 3).ok);
    auto rm = fixed_root_check(idx({4, 6, 9, 15}), 2);
    CHECK(!rm.ok);
    CHECK(rm.violating_index == 9);
}

TEST_CASE("fixed root check agrees with direct exponent search") {
    for (std::size_t n = 1; n <= 200; ++n)
        for (std::size_t k = 2; k <= 16; ++k) {
            bool fixed = false;
            std::size_t kj = k % n;
            for (std::size_t j = 1; j <= 256 && !fixed; ++j) {
                if (n == 1 || kj == 1) fixed = true;
                kj = (kj * k) % n;
            }
            auto r = fixed_root_check({{n, 1}}, k);
            CHECK(r.ok == !fixed);
            if (!r.ok) CHECK(r.violating_index == n);
        }
}
