#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "test_support.hpp"
#include "weilforge/gdiff.hpp"
#include "weilforge/ncweil.hpp"
#include "weilforge/parser.hpp"

using namespace weilforge;

TEST_CASE("apply: the W differential on generators (so(3))") {
    QuadraticLieAlgebra g = make_so3();
    DerivationOperator d = DerivationOperator::d(g, Space::W);
    CHECK(d.apply(parse_element("th1", Ctx::W, 3)) ==
          parse_element("v1 - th2*th3", Ctx::W, 3));
    CHECK(d.apply(parse_element("1", Ctx::W, 3)).is_zero());
    // dv^1 = -f^1_{bc} th^b v^c = -(th2 v3 - th3 v2)
    CHECK(d.apply(parse_element("v1", Ctx::W, 3)) ==
          parse_element("th3*v2 - th2*v3", Ctx::W, 3));
}

TEST_CASE("apply: iota on W^K matches Eq. iota vh^b = -f^b_{ak} th^k") {
    QuadraticLieAlgebra g = make_so3();
    DerivationOperator i1 = DerivationOperator::iota(g, Space::WK, 0);
    CHECK(i1.apply(parse_element("vh2", Ctx::WK, 3)) == parse_element("th3", Ctx::WK, 3));
    DerivationOperator dk = DerivationOperator::d(g, Space::WK);
    CHECK(dk.apply(parse_element("1", Ctx::WK, 3)).is_zero());
    CHECK(dk.apply(parse_element("th2", Ctx::WK, 3)) == parse_element("vh2", Ctx::WK, 3));
    CHECK(dk.apply(parse_element("vh2", Ctx::WK, 3)).is_zero());
}

TEST_CASE("super-Leibniz rule holds for the extended operators") {
    QuadraticLieAlgebra g = make_so3();
    std::mt19937 rng(41);
    std::vector<DerivationOperator> ops;
    ops.push_back(DerivationOperator::d(g, Space::W));
    ops.push_back(DerivationOperator::iota(g, Space::W, 1));
    ops.push_back(DerivationOperator::L(g, Space::W, 2));
    for (const auto& op : ops) {
        for (int trial = 0; trial < 20; ++trial) {
            auto monos = monomials_up_to(Ctx::W, 3, 3);
            std::uniform_int_distribution<std::size_t> pick(0, monos.size() - 1);
            Monomial ma = monos[pick(rng)], mb = monos[pick(rng)];
            auto x = SuperPolynomial::from_monomial(Ctx::W, 3, ma, Rat(1));
            auto y = SuperPolynomial::from_monomial(Ctx::W, 3, mb, Rat(1));
            int sign = (op.parity() && (ma.odd_count() & 1)) ? -1 : 1;
            CHECK(op.apply(x * y) == op.apply(x) * y + (x * op.apply(y)) * Rat(sign));
        }
    }
}

TEST_CASE("hat-g relations hold on all four spaces over so(3)") {
    QuadraticLieAlgebra g = make_so3();
    for (Space s : {Space::W, Space::WK, Space::NW, Space::NWK}) {
        Report rep = check_hat_g_relations(g, s, 3);
        if (!rep.all_ok()) {
            for (const auto& r : rep.records)
                if (!r.ok) MESSAGE(space_name(s), " ", r.relation, " ", r.counterexample);
        }
        CHECK(rep.all_ok());
    }
}

TEST_CASE("hat-g relations on W^K(abelian): the pure Koszul case") {
    QuadraticLieAlgebra g = make_abelian(2);
    CHECK(check_hat_g_relations(g, Space::WK, 4).all_ok());
}

TEST_CASE("classify: basic, horizontal and invariant examples") {
    QuadraticLieAlgebra g = make_so3();
    auto casimir = parse_element("v1^2 + v2^2 + v3^2", Ctx::W, 3);
    auto cls = classify(g, casimir, Space::W);
    CHECK(cls.horizontal);
    CHECK(cls.invariant);
    CHECK(cls.basic);

    auto th1 = parse_element("th1", Ctx::W, 3);
    auto cls2 = classify(g, th1, Space::W);
    CHECK_FALSE(cls2.horizontal);
    CHECK_FALSE(cls2.invariant);

    CHECK(classify(g, parse_element("1", Ctx::W, 3), Space::W).basic);
    CHECK(classify(g, parse_element("1", Ctx::WK, 3), Space::WK).basic);
    auto nc_one = parse_nc_element("1", NCtx::NW, &g);
    CHECK(classify(g, nc_one, Space::NW).basic);

    // v1 is not basic: L_2 v1 != 0
    CHECK_FALSE(classify(g, parse_element("v1", Ctx::W, 3), Space::W).basic);
}

TEST_CASE("Koszul acyclicity of W^K(so(3)) up to degree 6") {
    QuadraticLieAlgebra g = make_so3();
    Report rep = verify_koszul_acyclicity(g, Space::WK, 6);
    CHECK(rep.all_ok());
    CHECK(rep.records.size() == 7); // H^0 .. H^6
}

TEST_CASE("Koszul acyclicity of W^K(abelian R^1) up to degree 4") {
    QuadraticLieAlgebra g = make_abelian(1);
    CHECK(verify_koszul_acyclicity(g, Space::WK, 4).all_ok());
}

TEST_CASE("acyclicity of W(so(3)) via the tau0-conjugated differential") {
    QuadraticLieAlgebra g = make_so3();
    CHECK(verify_koszul_acyclicity(g, Space::W, 4).all_ok());
}

TEST_CASE("slice cap triggers DegreeTooLarge") {
    QuadraticLieAlgebra g = make_so3();
    CHECK_THROWS_AS(verify_koszul_acyclicity(g, Space::WK, 6, 3), DegreeTooLarge);
}

TEST_CASE("d = theta^b L_b on horizontal elements; d kills basics") {
    QuadraticLieAlgebra g = make_so3();
    CHECK(check_d_equals_thetaL_on_horizontal(g, 4).all_ok());
}

TEST_CASE("tau0 and tau1 intertwine d, iota, L") {
    QuadraticLieAlgebra g = make_so3();
    Report rep = verify_tau_intertwine(g, 4);
    for (const auto& r : rep.records)
        if (!r.ok) MESSAGE(r.space, " ", r.relation, " ", r.counterexample);
    CHECK(rep.all_ok());
}

TEST_CASE("sigma0 correspondence: L_a <-> [e_a,.], iota_a <-> [eb_a,.]") {
    QuadraticLieAlgebra g = make_so3();
    Report rep = verify_sigma0_correspondence(g, 3);
    for (const auto& r : rep.records)
        if (!r.ok) MESSAGE(r.space, " ", r.relation, " ", r.counterexample);
    CHECK(rep.all_ok());
}

TEST_CASE("Lemma: sigma0 of the generator brackets equals L/iota of images") {
    QuadraticLieAlgebra g = make_so3();
    const int n = 3;
    for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b) {
            auto eb = SuperPolynomial::even_gen(Ctx::STG, n, b);
            auto ebar = SuperPolynomial::odd_gen(Ctx::STG, n, b);
            auto La = DerivationOperator::L(g, Space::W, a);
            auto Ia = DerivationOperator::iota(g, Space::W, a);
            CHECK(sigma0(g, stg_ad_even(g, a, eb)) == La.apply(sigma0(g, eb)));
            CHECK(sigma0(g, stg_ad_even(g, a, ebar)) == La.apply(sigma0(g, ebar)));
            CHECK(sigma0(g, stg_ad_odd(g, a, eb)) == Ia.apply(sigma0(g, eb)));
            CHECK(sigma0(g, stg_ad_odd(g, a, ebar)) == Ia.apply(sigma0(g, ebar)));
        }
}

TEST_CASE("sigma0 identifies S(T~g[1])^inv with the basic subalgebra, degree <= 4") {
    QuadraticLieAlgebra g = make_so3();
    Report rep = verify_sigma0_invariants_basic(g, 4);
    CHECK(rep.all_ok());
}

TEST_CASE("space mismatch raises") {
    QuadraticLieAlgebra g = make_so3();
    DerivationOperator d = DerivationOperator::d(g, Space::W);
    CHECK_THROWS_AS(d.apply(parse_element("vh1", Ctx::WK, 3)), SpaceMismatch);
}
