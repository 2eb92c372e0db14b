#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "test_support.hpp"
#include "weilforge/duflo.hpp"
#include "weilforge/gdiff.hpp"
#include "weilforge/ncweil.hpp"
#include "weilforge/parser.hpp"

using namespace weilforge;

namespace {

// independent series oracle: (1/2) ln(sinh(x/2)/(x/2)) via explicit division-free
// Taylor manipulation, duplicated on purpose (the implementation derives f from
// b; this one recomputes both from scratch)
std::vector<Rat> oracle_b2k(int kmax) {
    const int order = 2 * kmax;
    std::vector<Rat> s(order + 1, Rat(0)); // sinh(x/2)/(x/2)
    Rat pow4 = 1, fact = 1;
    for (int k = 0; 2 * k <= order; ++k) {
        s[2 * k] = Rat(1) / (pow4 * fact);
        pow4 *= 4;
        fact *= (2 * k + 2) * (2 * k + 3);
    }
    // log via the ODE: (log s)' = s'/s, i.e. l' s = s'
    std::vector<Rat> l(order + 1, Rat(0));
    for (int m = 1; m <= order; ++m) {
        // coefficient of x^{m-1} in l' s equals coefficient of x^{m-1} in s'
        Rat rhs = m <= order ? s[m] * m : Rat(0);
        Rat acc = 0;
        for (int j = 1; j < m; ++j) acc += Rat(j) * l[j] * s[m - j];
        l[m] = (rhs - acc) / m;
    }
    std::vector<Rat> out;
    for (int k = 1; k <= kmax; ++k) out.push_back(l[2 * k] / 2);
    return out;
}

// independent oracle for f(s) = (1/2)(e^s+1)/(e^s-1) - 1/s by series division:
// f(s) * (s (e^s - 1)) = (s/2)(e^s + 1) - (e^s - 1)
std::vector<Rat> oracle_f_coeffs(int kmax) {
    const int order = 2 * kmax + 2;
    auto fact = [](int k) {
        Rat f = 1;
        for (int i = 2; i <= k; ++i) f *= i;
        return f;
    };
    std::vector<Rat> denom(order + 1, Rat(0)); // s(e^s - 1) = sum_{k>=1} s^{k+1}/k!
    for (int k = 1; k + 1 <= order; ++k) denom[k + 1] = Rat(1) / fact(k);
    std::vector<Rat> numer(order + 1, Rat(0)); // (s/2)(e^s+1) - (e^s-1)
    numer[1] += Rat(1); // s/2 * 2 from e^0 + 1
    for (int k = 1; k + 1 <= order; ++k) numer[k + 1] += Rat(1, 2) / fact(k);
    for (int k = 1; k <= order; ++k) numer[k] -= Rat(1) / fact(k);
    // divide: numer = f * denom with denom starting at s^2
    std::vector<Rat> f(order + 1, Rat(0));
    for (int m = 0; m + 2 <= order; ++m) {
        Rat acc = numer[m + 2];
        for (int j = 0; j < m; ++j) acc -= f[j] * denom[m - j + 2];
        f[m] = acc / denom[2];
    }
    std::vector<Rat> out;
    for (int k = 1; k <= kmax; ++k) out.push_back(f[2 * k - 1]);
    return out;
}

} // namespace

TEST_CASE("modified Bernoulli numbers match the paper wheels coefficients") {
    auto b = bernoulli_b2k(3);
    CHECK(b[0] == Rat(1, 48));
    CHECK(b[1] == Rat(-1, 5760));
    CHECK(b[2] == Rat(1, 362880));
    auto oracle = oracle_b2k(6);
    auto impl = bernoulli_b2k(6);
    for (int k = 0; k < 6; ++k) CHECK(impl[k] == oracle[k]);
}

TEST_CASE("f(s) coefficients: 1/12, -1/720, 1/30240 and the series oracle") {
    auto c = f_series_coeffs(3);
    CHECK(c[0] == Rat(1, 12));
    CHECK(c[1] == Rat(-1, 720));
    CHECK(c[2] == Rat(1, 30240));
    auto oracle = oracle_f_coeffs(5);
    auto impl = f_series_coeffs(5);
    for (int k = 0; k < 5; ++k) CHECK(impl[k] == oracle[k]);
}

TEST_CASE("Tr(ad_x^2) = -2|x|^2 on so(3), by brute-force matrix products") {
    QuadraticLieAlgebra g = make_so3();
    std::mt19937 rng(71);
    for (int trial = 0; trial < 10; ++trial) {
        std::vector<Rat> x(3);
        for (auto& v : x) v = weilforge::testing::random_rational(rng);
        RatMatrix ad = g.adjoint_matrix(x);
        RatMatrix ad2 = mat_mul(ad, ad);
        Rat tr = ad2[0][0] + ad2[1][1] + ad2[2][2];
        Rat norm2 = x[0] * x[0] + x[1] * x[1] + x[2] * x[2];
        CHECK(tr == Rat(-2) * norm2);
    }
}

TEST_CASE("apply_jhalf: constants, linears, and the so(3) Casimir") {
    QuadraticLieAlgebra g = make_so3();
    auto op = jhalf_operator(g, 4);
    CHECK(apply_jhalf(op, parse_element("1", Ctx::SG, 3)) == parse_element("1", Ctx::SG, 3));
    CHECK(apply_jhalf(op, parse_element("e1", Ctx::SG, 3)) == parse_element("e1", Ctx::SG, 3));
    // j^{1/2} = 1 - |x|^2/24 + ... and -(1/24) sum_a d_a^2 (sum_b e_b^2) = -1/4
    CHECK(apply_jhalf(op, parse_element("e1^2+e2^2+e3^2", Ctx::SG, 3)) ==
          parse_element("e1^2+e2^2+e3^2 - 1/4", Ctx::SG, 3));
    CHECK_THROWS_AS(apply_jhalf(jhalf_operator(g, 1), parse_element("e1^2", Ctx::SG, 3)),
                    TruncationTooLow);
}

TEST_CASE("duflo_map: Casimir example and the algebra property on invariants") {
    QuadraticLieAlgebra g = make_so3();
    auto c2 = parse_element("e1^2+e2^2+e3^2", Ctx::SG, 3);
    auto img = duflo_map(g, c2, 4);
    CHECK(img == parse_nc_element("u1^2+u2^2+u3^2 - 1/4", NCtx::U, &g));
    CHECK(duflo_map(g, parse_element("e1", Ctx::SG, 3), 2) ==
          parse_nc_element("u1", NCtx::U, &g));
    // Duflo property: Upsilon(c2^m) = Upsilon(c2)^m for m = 2, 3
    for (int m : {2, 3}) {
        auto lhs = duflo_map(g, c2.pow(m), 2 * m + 2);
        auto rhs = nc_power(img, m);
        CHECK(lhs == rhs);
    }
}

TEST_CASE("apply_T: trivial on purely even and single-theta inputs") {
    QuadraticLieAlgebra g = make_so3();
    auto op = T_operator(g, 4);
    auto even = parse_element("v1^2*v2", Ctx::W, 3);
    CHECK(apply_T(op, even) == even);
    auto single = parse_element("v1^2*th1", Ctx::W, 3);
    CHECK(apply_T(op, single) == single);
}

TEST_CASE("apply_T lowers degree: the v3 th1 th2 example produces +1/12") {
    // (1/2) sum T_ab(d_v) iota_a iota_b on v3 th1 th2: contraction gives
    // -T_12(d_v) v3 and T_12 = (1/12)(ad)_12 + ... with (ad_x)_12 = -x3
    QuadraticLieAlgebra g = make_so3();
    auto op = T_operator(g, 3);
    auto p = parse_element("v3*th1*th2", Ctx::W, 3);
    CHECK(apply_T(op, p) == parse_element("v3*th1*th2 + 1/12", Ctx::W, 3));
}

TEST_CASE("quantization map: unit, odd pairs, and the Casimir") {
    QuadraticLieAlgebra g = make_so3();
    CHECK(quantization_Q(g, parse_element("1", Ctx::W, 3), 2) ==
          parse_nc_element("1", NCtx::NW, &g));
    // the main theorem forces the correction on Q(th1 th2) to vanish
    CHECK(quantization_Q(g, parse_element("th1*th2", Ctx::W, 3), 3) ==
          parse_nc_element("xi1*xi2", NCtx::NW, &g));
    CHECK(quantization_Q(g, parse_element("v1^2+v2^2+v3^2", Ctx::W, 3), 4) ==
          parse_nc_element("u1^2+u2^2+u3^2 - 1/4", NCtx::NW, &g));
}

TEST_CASE("super_duflo equals pbw_chi and guards the supertrace") {
    QuadraticLieAlgebra g = make_so3();
    SuperLieAlgebra s = build_odd_double(g);
    auto p = parse_element("eb1*eb2", Ctx::STG, 3);
    CHECK(super_duflo(g, s, p, 4) == pbw_chi(g, p));
    auto q = parse_element("e1*e2", Ctx::STG, 3);
    CHECK(super_duflo(g, s, q, 4) == pbw_chi(g, q));
    CHECK(super_duflo(g, s, parse_element("1", Ctx::STG, 3), 2) ==
          parse_nc_element("1", NCtx::UTG, &g));
}

TEST_CASE("main theorem: Q . sigma0 = sigma1 . chi on so(3) up to degree 4") {
    QuadraticLieAlgebra g = make_so3();
    Report rep = verify_main_theorem(g, 4);
    for (const auto& r : rep.records)
        if (!r.ok) MESSAGE(r.relation, ": ", r.counterexample);
    CHECK(rep.all_ok());
}

TEST_CASE("main theorem degenerates to chi (x) q on abelian R^3") {
    QuadraticLieAlgebra g = make_abelian(3);
    CHECK(verify_main_theorem(g, 4).all_ok());
    // Q itself equals chi (x) q here: T and j are trivial
    auto p = parse_element("v1^2*th1*th2", Ctx::W, 3);
    CHECK(quantization_Q(g, p, 4) == parse_nc_element("u1^2*xi1*xi2", NCtx::NW, &g));
}

TEST_CASE("chain map: Q intertwines d, iota_a, L_a on so(3) up to degree 3") {
    QuadraticLieAlgebra g = make_so3();
    Report rep = verify_chain_map(g, 3);
    for (const auto& r : rep.records)
        if (!r.ok) MESSAGE(r.relation, ": ", r.counterexample);
    CHECK(rep.all_ok());
}

TEST_CASE("chain map on the abelian algebra: both sides Koszul") {
    QuadraticLieAlgebra g = make_abelian(2);
    CHECK(verify_chain_map(g, 3).all_ok());
}

TEST_CASE("corollary: Q is multiplicative on powers of the basic Casimir") {
    QuadraticLieAlgebra g = make_so3();
    auto p = parse_element("v1^2+v2^2+v3^2", Ctx::W, 3);
    Report rep = verify_invariant_homomorphism(g, p, {2, 3});
    for (const auto& r : rep.records)
        if (!r.ok) MESSAGE(r.relation, ": ", r.counterexample);
    CHECK(rep.all_ok());
    CHECK(verify_invariant_homomorphism(g, parse_element("1", Ctx::W, 3), {2, 5}).all_ok());
    CHECK_THROWS_AS(verify_invariant_homomorphism(g, parse_element("v1", Ctx::W, 3), {2}),
                    NotBasic);
}

TEST_CASE("Q restrictions: odd basis is chevalley_q, even part is duflo_map") {
    QuadraticLieAlgebra g = make_so3();
    CHECK(verify_q_restrictions(g, 4).all_ok());
}

TEST_CASE("Q is a linear bijection on the filtered slice of degree <= 4") {
    QuadraticLieAlgebra g = make_so3();
    CHECK(verify_q_bijective(g, 4).all_ok());
}

TEST_CASE("d_{j^{1/2}} preserves L-invariance up to degree 4") {
    QuadraticLieAlgebra g = make_so3();
    CHECK(verify_jhalf_preserves_invariance(g, 4).all_ok());
}
