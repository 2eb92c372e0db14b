#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "test_support.hpp"
#include "weilforge/parser.hpp"
#include <unsupported/Eigen/MatrixFunctions>

#include "weilforge/spinfact.hpp"

using namespace weilforge;

namespace {

RatMat rot_gen_2d(const Rat& t) {
    return {{Rat(0), t}, {-t, Rat(0)}};
}

} // namespace

TEST_CASE("rho: Clifford relation and action on 1") {
    QuadraticLieAlgebra v = make_abelian(3);
    auto xi1 = parse_nc_element("xi1", NCtx::CL, &v);
    MatrixXd r = rho_matrix(3, xi1);
    MatrixXd sq = r * r;
    CHECK((sq - 0.5 * MatrixXd::Identity(8, 8)).cwiseAbs().maxCoeff() == 0.0);
    // rho(e1) . 1 = e1
    VectorXd col = r.col(0);
    CHECK(col(1) == 1.0);
    CHECK(col.cwiseAbs().sum() == 1.0);
}

TEST_CASE("rho is an algebra map, exactly over the rationals") {
    QuadraticLieAlgebra v = make_abelian(3);
    std::mt19937 rng(5);
    auto monos = nc_monomials_up_to(NCtx::CL, 3, 3);
    std::uniform_int_distribution<std::size_t> pick(0, monos.size() - 1);
    for (int trial = 0; trial < 12; ++trial) {
        NormalOrderedElement a(NCtx::CL, &v), b(NCtx::CL, &v);
        for (int t = 0; t < 2; ++t) {
            a.add_term(monos[pick(rng)], weilforge::testing::random_rational(rng));
            b.add_term(monos[pick(rng)], weilforge::testing::random_rational(rng));
        }
        RatMat ra = rho_matrix_rat(3, a), rb = rho_matrix_rat(3, b);
        RatMat rab = rho_matrix_rat(3, nc_multiply(a, b));
        for (int i = 0; i < 8; ++i)
            for (int j = 0; j < 8; ++j) {
                Rat s = 0;
                for (int k = 0; k < 8; ++k) s += ra[i][k] * rb[k][j];
                CHECK(s == rab[i][j]);
            }
    }
}

TEST_CASE("rho(xi1 xi2) acting on e2 equals the product of generator matrices") {
    QuadraticLieAlgebra v = make_abelian(2);
    auto w = parse_nc_element("xi1*xi2", NCtx::CL, &v);
    MatrixXd m = rho_matrix(2, w);
    MatrixXd m1 = rho_matrix(2, parse_nc_element("xi1", NCtx::CL, &v));
    MatrixXd m2 = rho_matrix(2, parse_nc_element("xi2", NCtx::CL, &v));
    CHECK((m - m1 * m2).cwiseAbs().maxCoeff() < 1e-15);
}

TEST_CASE("tau_inverse_so: formula value and bracket consistency") {
    QuadraticLieAlgebra v2 = make_abelian(2);
    RatMat A = rot_gen_2d(Rat(1));
    auto elem = tau_inverse_so(v2, A);
    CHECK(elem == parse_nc_element("0 - xi1*xi2", NCtx::CL, &v2));

    CHECK(tau_inverse_so(v2, RatMat{{Rat(0), Rat(0)}, {Rat(0), Rat(0)}}).is_zero());
    CHECK_THROWS_AS(tau_inverse_so(v2, RatMat{{Rat(1), Rat(0)}, {Rat(0), Rat(1)}}),
                    NotAntisymmetric);

    // odd_bracket(tau^{-1}(A), xi_b) = sum_i A_bi xi_i (row action), exact, 4x4
    QuadraticLieAlgebra v4 = make_abelian(4);
    std::mt19937 rng(9);
    for (int trial = 0; trial < 6; ++trial) {
        RatMat B(4, std::vector<Rat>(4, Rat(0)));
        for (int i = 0; i < 4; ++i)
            for (int j = i + 1; j < 4; ++j) {
                B[i][j] = weilforge::testing::random_rational(rng);
                B[j][i] = -B[i][j];
            }
        auto q = tau_inverse_so(v4, B);
        for (int b = 0; b < 4; ++b) {
            auto xb = NormalOrderedElement::odd_gen(NCtx::CL, &v4, b);
            NormalOrderedElement expect(NCtx::CL, &v4);
            for (int i = 0; i < 4; ++i)
                if (B[b][i] != 0)
                    expect = expect + NormalOrderedElement::odd_gen(NCtx::CL, &v4, i) * B[b][i];
            CHECK(odd_bracket(q, xb) == expect);
        }
    }
}

TEST_CASE("h_embed: h(I) = I, B_W isometry, kappa round trips") {
    const int n = 3;
    CHECK((h_embed(MatrixXd::Identity(n, n)) - MatrixXd::Identity(2 * n, 2 * n))
              .cwiseAbs()
              .maxCoeff() == 0.0);
    // random orthogonal C = exp(antisymmetric)
    MatrixXd A = seeded_antisymmetric(n, 42);
    MatrixXd C = A.exp();
    MatrixXd H = h_embed(C), G = bw_gram(n);
    CHECK((H.transpose() * G * H - G).cwiseAbs().maxCoeff() < 1e-12);

    std::mt19937 rng(10);
    std::uniform_real_distribution<double> dist(-1, 1);
    VectorXd x(n), y(n);
    for (int i = 0; i < n; ++i) {
        x(i) = dist(rng);
        y(i) = dist(rng);
    }
    VectorXd w = kappa(x, y);
    // kappa is an isometry: B_W(kappa(x,y), kappa(x,y)) = |x|^2 - |y|^2
    // (this pins B_W(x, alpha) = alpha(x); the displayed 2 alpha(x) breaks it)
    double bw = w.transpose() * G * w;
    CHECK(std::abs(bw - (x.squaredNorm() - y.squaredNorm())) < 1e-12);
    auto [x2, y2] = kappa_inverse(w);
    CHECK((x2 - x).cwiseAbs().maxCoeff() < 1e-14);
    CHECK((y2 - y).cwiseAbs().maxCoeff() < 1e-14);
}

TEST_CASE("factorize: C = I is rejected") {
    MatrixXd I = MatrixXd::Identity(2, 2);
    MatrixXd J(2, 2);
    J << 0, 1, -1, 0;
    CHECK_THROWS_AS(factorize(I, J, 1e-10), SingularCMinusI);
}

TEST_CASE("factorize: n = 2 rotation with D = tJ reassembles h(C)") {
    MatrixXd J(2, 2);
    J << 0, 1, -1, 0;
    MatrixXd A = 0.7 * J;
    MatrixXd C = A.exp();
    FactorizationResult f = factorize(C, A, 1e-10);
    CHECK(f.reassembly_residual < 1e-10);
    CHECK((f.E1 + f.E1.transpose()).cwiseAbs().maxCoeff() < 1e-12);
    CHECK((f.E2 + f.E2.transpose()).cwiseAbs().maxCoeff() < 1e-12);
    // exact scalars computed by hand for the rotation block
    double t = 0.7;
    double alpha = 1.0 / t - 0.5 / std::tan(t / 2);
    CHECK(std::abs(f.E1(0, 1) - alpha) < 1e-12);
    CHECK(std::abs(f.det_sqrt_R - t / (2 * std::sin(t / 2))) < 1e-12);
}

TEST_CASE("factorize: n = 4 block rotations") {
    MatrixXd A = block_rotation_antisym(4, 0.7); // angles 0.7, 1.3
    MatrixXd C = A.exp();
    FactorizationResult f = factorize(C, A, 1e-10);
    CHECK(f.reassembly_residual < 1e-10);
    // nonzero commuting antisymmetric perturbation of E1 breaks the reassembly
    MatrixXd E1p = f.E1;
    E1p(0, 1) += 0.05;
    E1p(1, 0) -= 0.05;
    MatrixXd I = MatrixXd::Identity(4, 4);
    MatrixXd lower1 = MatrixXd::Identity(8, 8);
    lower1.bottomLeftCorner(4, 4) = E1p;
    MatrixXd upper = MatrixXd::Identity(8, 8);
    upper.topRightCorner(4, 4) = f.D;
    MatrixXd lower2 = MatrixXd::Identity(8, 8);
    lower2.bottomLeftCorner(4, 4) = f.E2;
    MatrixXd glr = MatrixXd::Zero(8, 8);
    glr.topLeftCorner(4, 4) = f.R;
    glr.bottomRightCorner(4, 4) = f.R.inverse().transpose();
    double res = (lower1 * upper * lower2 * glr - h_embed(C)).cwiseAbs().maxCoeff();
    CHECK(res > 1e-4);
}

TEST_CASE("non-commuting D is rejected") {
    MatrixXd A = seeded_antisymmetric(4, 3);
    MatrixXd C = A.exp();
    MatrixXd D = block_rotation_antisym(4, 0.9);
    CHECK_THROWS_AS(factorize(C, D, 1e-10), NonCommuting);
}

TEST_CASE("spin factorization: n = 2 analytic case") {
    MatrixXd A = block_rotation_antisym(2, 0.7);
    Report rep = verify_spin_factorization(2, A, 1e-8);
    for (const auto& r : rep.records)
        if (!r.ok) MESSAGE(r.relation, " ", r.counterexample);
    CHECK(rep.all_ok());
}

TEST_CASE("spin factorization: n = 4 block rotations and seeded A") {
    CHECK(verify_spin_factorization(4, block_rotation_antisym(4, 0.7), 1e-8).all_ok());
    for (unsigned seed : {1u, 2u, 3u}) {
        MatrixXd A = seeded_antisymmetric(4, seed);
        Report rep = verify_spin_factorization(4, A, 1e-8);
        for (const auto& r : rep.records)
            if (!r.ok) MESSAGE("seed ", seed, " ", r.relation, " ", r.counterexample);
        CHECK(rep.all_ok());
    }
}

TEST_CASE("spin factorization: n = 6 seeded") {
    MatrixXd A = seeded_antisymmetric(6, 11);
    CHECK(verify_spin_factorization(6, A, 1e-8).all_ok());
}

TEST_CASE("eq:strongfac with a linear term over so(3) data") {
    QuadraticLieAlgebra g = make_so3();
    std::vector<Rat> mu{Rat(3, 10), Rat(1, 5), Rat(-1, 10)};
    std::vector<Rat> nu{Rat(1, 4), Rat(-1, 3), Rat(1, 2)};
    Report rep = verify_strongfac(g, mu, nu, 1e-8);
    for (const auto& r : rep.records)
        if (!r.ok) MESSAGE(r.relation, " ", r.counterexample);
    CHECK(rep.all_ok());
    // nu = 0 degenerates to eq:specialfac
    CHECK(verify_strongfac(g, mu, {Rat(0), Rat(0), Rat(0)}, 1e-8).all_ok());
}

TEST_CASE("duflo bridge: mu = 0 gives f = 0 and j^{1/2} = 1") {
    QuadraticLieAlgebra g = make_so3();
    Report rep = verify_duflo_bridge(g, {Rat(0), Rat(0), Rat(0)}, 6, 1e-10);
    CHECK(rep.all_ok());
}

TEST_CASE("duflo bridge: so(3) works analytically despite singular ad mu") {
    QuadraticLieAlgebra g = make_so3();
    Report rep = verify_duflo_bridge(g, {Rat(3, 10), Rat(0), Rat(0)}, 8, 1e-6);
    for (const auto& r : rep.records)
        if (!r.ok) MESSAGE(r.relation, " ", r.counterexample);
    CHECK(rep.all_ok());
}

TEST_CASE("duflo bridge: so(4) generic small mu at order 6 within 1e-6") {
    QuadraticLieAlgebra g = make_so3_plus_so3();
    std::vector<Rat> mu{Rat(1, 5), Rat(-1, 10), Rat(3, 10), Rat(1, 10), Rat(1, 4), Rat(-1, 5)};
    Report rep = verify_duflo_bridge(g, mu, 6, 1e-6);
    for (const auto& r : rep.records)
        if (!r.ok) MESSAGE(r.relation, " ", r.counterexample);
    CHECK(rep.all_ok());
}

TEST_CASE("dimension cap") {
    CHECK_THROWS_AS(verify_spin_factorization(14, MatrixXd::Zero(14, 14), 1e-8), DimensionCap);
}
