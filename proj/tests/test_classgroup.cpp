#include "agm/classgroup.hpp"
#include "agm/ff.hpp"

#include "doctest.h"
#include "oracles.hpp"

#include <numeric>
#include <set>
#include <tuple>

using namespace agm::cg;

using oracle::naive_reduce;

TEST_CASE("reduced forms") {
    CHECK(reduced_forms(-3) == std::vector<QuadForm>{{1, 1, 1}});
    CHECK(reduced_forms(-23) == std::vector<QuadForm>{{1, 1, 6}, {2, 1, 3}, {2, -1, 3}});
    CHECK(reduced_forms(-16) == std::vector<QuadForm>{{1, 0, 4}});
    CHECK(class_number(-4) == 1);
    CHECK(class_number(-47) == 5);
    CHECK(class_number(-71) == 7);
    CHECK(class_number(-163) == 1);
    CHECK(class_number(-84) == 4);
    CHECK_THROWS_AS(reduced_forms(-5), agm::PreconditionError);
    CHECK_THROWS_AS(reduced_forms(12), agm::PreconditionError);
    for (const auto& f : reduced_forms(-1999 * 4)) {
        CHECK(f.is_reduced());
        CHECK(f.is_primitive());
        CHECK(f.disc() == -1999 * 4);
    }
}

TEST_CASE("class numbers agree with brute-force reduction for |D| <= 2000") {
    bool ok = true;
    long bad = 0;
    for (long D = -3; D >= -2000; --D) {
        if (!is_discriminant(D)) continue;
        if (class_number(D) != oracle::class_number(D)) {
            ok = false;
            bad = D;
            break;
        }
    }
    CAPTURE(bad);
    CHECK(ok);
}

TEST_CASE("reduce lands on the same class as the naive moves") {
    for (long a = 1; a < 40; ++a)
        for (long b = -60; b <= 60; ++b)
            for (long c = 1; c < 40; ++c) {
                if (b * b - 4 * a * c >= 0) continue;
                auto [na, nb, nc] = naive_reduce(a, b, c);
                QuadForm r = reduce({a, b, c});
                REQUIRE(r == QuadForm{na, nb, nc});
            }
}

TEST_CASE("composition") {
    QuadForm g{2, 1, 3};
    CHECK(compose_reduce(identity(-23), g) == g);
    CHECK(compose_reduce(g, g) == QuadForm{2, -1, 3});
    CHECK(compose_reduce(g, inverse(g)) == identity(-23));
    CHECK_THROWS_AS(compose_reduce(g, identity(-7)), agm::PreconditionError);
}

TEST_CASE("class group axioms for every discriminant down to -500") {
    for (long D = -3; D >= -500; --D) {
        if (!is_discriminant(D)) continue;
        CAPTURE(D);
        const auto& forms = reduced_forms(D);
        std::set<QuadForm> as_set(forms.begin(), forms.end());
        const QuadForm e = identity(D);
        bool ok = as_set.count(e) == 1;
        for (const auto& f : forms) {
            ok &= compose_reduce(f, e) == f;
            ok &= compose_reduce(f, inverse(f)) == e;
            for (const auto& g : forms) {
                QuadForm fg = compose_reduce(f, g);
                ok &= as_set.count(fg) == 1;
                ok &= fg == compose_reduce(g, f);
                for (const auto& h : forms) ok &= compose_reduce(fg, h) == compose_reduce(f, compose_reduce(g, h));
            }
        }
        REQUIRE(ok);
    }
}

TEST_CASE("order of the class above 2") {
    CHECK(h2_order(-7) == 1);
    CHECK(h2_order(-23) == 3);
    CHECK(h2_order(-15) == 2);
    CHECK(h2_order(ImagQuadOrder(-7, 1)) == 1);
    CHECK_THROWS_AS(h2_order(-4), agm::PreconditionError);
    CHECK_THROWS_AS(h2_order(-3), agm::PreconditionError);
    for (long D = -7; D >= -3000; D -= 8) {
        CAPTURE(D);
        std::uint64_t h2 = h2_order(D);
        CHECK(class_number(D) % h2 == 0);
        CHECK(kronecker_2(D) == 1);
        // the other sign of b gives the inverse class, of the same order
        QuadForm other = reduce({2, -1, (1 - D) / 8});
        CHECK(form_order(other) == h2);
        CHECK(compose_reduce(other, prime_form_2(D)) == identity(D));
    }
}

TEST_CASE("fundamental discriminants") {
    CHECK(fundamental_part(-16) == Fundamental{-4, 2});
    CHECK(fundamental_part(-112) == Fundamental{-7, 4});
    CHECK(fundamental_part(-3) == Fundamental{-3, 1});
    CHECK(fundamental_part(-12) == Fundamental{-3, 2});
    CHECK(fundamental_part(-8) == Fundamental{-8, 1});
    CHECK(fundamental_part(-72) == Fundamental{-8, 3});
    CHECK(fundamental_part(-99) == Fundamental{-11, 3});
    CHECK(is_fundamental(-20));
    CHECK_FALSE(is_fundamental(-28));
    CHECK_THROWS_AS(ImagQuadOrder(-28, 1), agm::PreconditionError);
    CHECK(ImagQuadOrder::of_disc(-28).d_K == -7);
    for (long D = -3; D >= -3000; --D) {
        if (!is_discriminant(D)) continue;
        auto [dk, f] = fundamental_part(D);
        REQUIRE(f * f * dk == D);
        REQUIRE(is_discriminant(dk));
        // no smaller order sits above d_K
        for (long g = 2; g * g <= -dk; ++g)
            if (dk % (g * g) == 0) REQUIRE_FALSE(is_discriminant(dk / (g * g)));
    }
}

TEST_CASE("Hurwitz class numbers") {
    CHECK(hurwitz(3) == Rational(1, 3));
    CHECK(hurwitz(4) == Rational(1, 2));
    CHECK(hurwitz(16) == Rational(3, 2));
    CHECK(hurwitz(7) == Rational(1));
    CHECK(hurwitz(20) == Rational(2));
    CHECK(hurwitz(12) == Rational(4, 3));
    CHECK(hurwitz(1) == Rational(0));
    CHECK(hurwitz(0) == Rational(0));
    CHECK(hurwitz_unweighted(12) == 2);
    CHECK(hurwitz_unweighted(3) == 1);
    CHECK(hurwitz_unweighted(4) == 1);
    for (long N = 1; N <= 3000; ++N) {
        Rational H = hurwitz(N);
        REQUIRE(6 % H.den == 0);
        if (is_fundamental(-N) && N != 3 && N != 4) REQUIRE(H == Rational(static_cast<long>(class_number(-N))));
    }
}

TEST_CASE("rational arithmetic") {
    CHECK(Rational(2, 4) == Rational(1, 2));
    CHECK(Rational(1, -3) == Rational(-1, 3));
    CHECK(Rational(1, 3) + Rational(1, 6) == Rational(1, 2));
    CHECK(Rational(3, 2) * Rational(4) == Rational(6));
    CHECK(Rational(4, 3).str() == "4/3");
    CHECK(Rational(0, 5).str() == "0");
    CHECK_THROWS_AS(Rational(1, 0), agm::PreconditionError);
}

TEST_CASE("Kronecker symbol at 2") {
    CHECK(kronecker_2(-7) == 1);
    CHECK(kronecker_2(-4) == 0);
    CHECK(kronecker_2(-3) == -1);
    CHECK(kronecker_2(-15) == 1);
    CHECK(kronecker_2(-11) == -1);
}

TEST_CASE("2-adic trace congruence") {
    auto t17 = trace_congruence_46(17);
    CHECK(t17.root == 41);
    CHECK(t17.traces == std::array<std::uint32_t, 2>{94, 34});
    auto t9 = trace_congruence_46(9);
    CHECK(t9.root == 3);
    CHECK(t9.traces == std::array<std::uint32_t, 2>{10, 118});
    CHECK_THROWS_AS(trace_congruence_46(13), agm::PreconditionError);
    for (std::uint64_t q = 9; q < 20000; q += 8) {
        auto t = trace_congruence_46(q);
        REQUIRE(t.root * t.root % 128 == q % 128);
        REQUIRE(t.root % 8 == (q % 16 == 1 ? 1u : 3u));
        REQUIRE((t.traces[0] + t.traces[1]) % 128 == 0);
        // the other admissible root gives the same traces
        auto alt = (t.root + 64) % 128;
        REQUIRE(46 * alt % 128 == t.traces[0]);
    }
}
