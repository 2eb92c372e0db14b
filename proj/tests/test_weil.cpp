#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "test_support.hpp"
#include "weilforge/parser.hpp"
#include "weilforge/superpoly.hpp"

using namespace weilforge;
using weilforge::testing::random_superpoly;

TEST_CASE("parser: odd anticommutativity and squares") {
    CHECK(parse_element("th1*th2 + th2*th1", Ctx::W, 3).is_zero());
    CHECK(parse_element("th1*th1", Ctx::W, 3).is_zero());
    SuperPolynomial p = parse_element("th2*th1", Ctx::W, 3);
    SuperPolynomial q = parse_element("th1*th2", Ctx::W, 3);
    CHECK(p == -q);
}

TEST_CASE("parser: v1^2*th3 builds the expected monomial") {
    SuperPolynomial p = parse_element("v1^2*th3", Ctx::W, 3);
    REQUIRE(p.terms().size() == 1);
    const auto& [m, c] = *p.terms().begin();
    CHECK(c == 1);
    CHECK(m.even == std::vector<int>{2, 0, 0});
    CHECK(m.odd == (1u << 2));
    CHECK(m.weighted_degree() == 5);
}

TEST_CASE("parser: errors carry their kind") {
    CHECK_THROWS_AS(parse_element("th1^2", Ctx::W, 3), OddPower);
    CHECK_THROWS_AS(parse_element("u1", Ctx::W, 3), UnknownGenerator);
    CHECK_THROWS_AS(parse_element("v7", Ctx::W, 3), IndexOutOfRange);
    CHECK_THROWS_AS(parse_element("v1 +", Ctx::W, 3), SyntaxError);
    CHECK_THROWS_AS(parse_element("1.5*v1", Ctx::W, 3), SyntaxError);
    CHECK_THROWS_AS(parse_element("c1", Ctx::W, 3), UnknownGenerator);
    CHECK(parse_element("c1", Ctx::STG, 3).terms().size() == 1);
    CHECK(parse_element("3/4*v1 - 1/2", Ctx::W, 3).terms().size() == 2);
}

TEST_CASE("multiplication sign rules") {
    const int n = 3;
    auto th = [&](int i) { return SuperPolynomial::odd_gen(Ctx::W, n, i); };
    auto v = [&](int i) { return SuperPolynomial::even_gen(Ctx::W, n, i); };
    CHECK(th(0) * th(1) == -(th(1) * th(0)));
    CHECK((th(0) * th(1)) * (th(1) * th(2)) == SuperPolynomial::zero(Ctx::W, n));
    SuperPolynomial lhs = (v(0) + th(0) * th(1)) * v(0);
    SuperPolynomial rhs = v(0).pow(2) + v(0) * th(0) * th(1);
    CHECK(lhs == rhs);
}

TEST_CASE("associativity and supercommutativity on random elements") {
    std::mt19937 rng(11);
    for (int trial = 0; trial < 40; ++trial) {
        SuperPolynomial p = random_superpoly(rng, Ctx::W, 3, 4);
        SuperPolynomial q = random_superpoly(rng, Ctx::W, 3, 4);
        SuperPolynomial r = random_superpoly(rng, Ctx::W, 3, 4);
        CHECK((p * q) * r == p * (q * r));
    }
    // sign law on homogeneous-parity elements
    for (int trial = 0; trial < 40; ++trial) {
        auto monos = monomials_up_to(Ctx::W, 3, 4);
        std::uniform_int_distribution<std::size_t> pick(0, monos.size() - 1);
        Monomial ma = monos[pick(rng)], mb = monos[pick(rng)];
        auto p = SuperPolynomial::from_monomial(Ctx::W, 3, ma, Rat(1));
        auto q = SuperPolynomial::from_monomial(Ctx::W, 3, mb, Rat(1));
        int sign = (ma.odd_count() % 2) && (mb.odd_count() % 2) ? -1 : 1;
        CHECK(p * q == (q * p) * Rat(sign));
    }
}

TEST_CASE("grading: product adds weighted degrees") {
    std::mt19937 rng(5);
    for (int trial = 0; trial < 20; ++trial) {
        auto monos = monomials_up_to(Ctx::W, 3, 5);
        std::uniform_int_distribution<std::size_t> pick(0, monos.size() - 1);
        Monomial ma = monos[pick(rng)], mb = monos[pick(rng)];
        if (ma.odd & mb.odd) continue;
        auto p = SuperPolynomial::from_monomial(Ctx::W, 3, ma, Rat(1));
        auto q = SuperPolynomial::from_monomial(Ctx::W, 3, mb, Rat(1));
        if ((p * q).is_zero()) continue;
        CHECK((p * q).max_weighted_degree() == ma.weighted_degree() + mb.weighted_degree());
    }
}

TEST_CASE("tau0 on so(3): vh1 -> v1 - th2 th3, identity on odd") {
    QuadraticLieAlgebra g = make_so3();
    SuperPolynomial vh1 = parse_element("vh1", Ctx::WK, 3);
    CHECK(tau0(g, vh1) == parse_element("v1 - th2*th3", Ctx::W, 3));
    CHECK(tau0(g, parse_element("th1", Ctx::WK, 3)) == parse_element("th1", Ctx::W, 3));
}

TEST_CASE("tau0 round trip on random elements of degree <= 5") {
    QuadraticLieAlgebra g = make_so3();
    std::mt19937 rng(23);
    for (int trial = 0; trial < 25; ++trial) {
        SuperPolynomial p = random_superpoly(rng, Ctx::WK, 3, 5, 5);
        CHECK(tau0_inverse(g, tau0(g, p)) == p);
        SuperPolynomial q = random_superpoly(rng, Ctx::W, 3, 5, 5);
        CHECK(tau0(g, tau0_inverse(g, q)) == q);
    }
}

TEST_CASE("sigma0 on so(3): generator images and multiplicativity") {
    QuadraticLieAlgebra g = make_so3();
    CHECK(sigma0(g, parse_element("eb1*eb2", Ctx::STG, 3)) ==
          parse_element("th1*th2", Ctx::W, 3));
    CHECK(sigma0(g, parse_element("c1*e1", Ctx::STG, 3)) ==
          parse_element("v1 - th2*th3", Ctx::W, 3));
    std::mt19937 rng(31);
    for (int trial = 0; trial < 25; ++trial) {
        SuperPolynomial p = random_superpoly(rng, Ctx::STG, 3, 4);
        SuperPolynomial q = random_superpoly(rng, Ctx::STG, 3, 4);
        CHECK(sigma0(g, p * q) == sigma0(g, p) * sigma0(g, q));
    }
}

TEST_CASE("sigma0 inverse on the c-free subalgebra") {
    QuadraticLieAlgebra g = make_so3();
    std::mt19937 rng(37);
    for (int trial = 0; trial < 25; ++trial) {
        SuperPolynomial q = random_superpoly(rng, Ctx::W, 3, 5, 5);
        CHECK(sigma0(g, sigma0_inverse(g, q)) == q);
    }
}

TEST_CASE("commuting triangle: sigma0 with c:=1 equals tau0 after renaming") {
    QuadraticLieAlgebra g = make_so3();
    // on every monomial of degree <= 5: sigma0(rename(m)) == tau0(m)
    for (const Monomial& m : monomials_up_to(Ctx::WK, 3, 5)) {
        SuperPolynomial wk = SuperPolynomial::from_monomial(Ctx::WK, 3, m, Rat(1));
        Monomial stg;
        stg.even = m.even;
        stg.even.push_back(0); // c-exponent 0
        stg.odd = m.odd;
        SuperPolynomial st = SuperPolynomial::from_monomial(Ctx::STG, 3, stg, Rat(1));
        CHECK(sigma0(g, st) == tau0(g, wk));
    }
}

TEST_CASE("printing is parseable and deterministic") {
    SuperPolynomial p = parse_element("3/2*v1^2*th1*th3 - th2 + 1/7", Ctx::W, 3);
    SuperPolynomial q = parse_element(p.to_string(), Ctx::W, 3);
    CHECK(p == q);
}
