#include "weilforge/spinfact.hpp"

#include <complex>
#include <random>
#include <sstream>

#include <unsupported/Eigen/MatrixFunctions>

#include "weilforge/duflo.hpp"

namespace weilforge {

namespace {

constexpr int kDimCap = 12;

void check_dim(int n) {
    if (n > kDimCap)
        throw DimensionCap("dimension " + std::to_string(n) + " exceeds cap " +
                           std::to_string(kDimCap));
    if (n < 1) throw DimensionCap("dimension must be >= 1");
}

int wedge_sign(std::uint32_t mask, int j) {
    int below = __builtin_popcount(mask & ((1u << j) - 1));
    return (below & 1) ? -1 : 1;
}

std::string fmt(double x) {
    std::ostringstream os;
    os.precision(3);
    os << std::scientific << x;
    return os.str();
}

} // namespace

MatrixXd wedge_matrix(int n, int j) {
    const int dim = 1 << n;
    MatrixXd m = MatrixXd::Zero(dim, dim);
    for (std::uint32_t s = 0; s < static_cast<std::uint32_t>(dim); ++s) {
        if (s & (1u << j)) continue;
        m(s | (1u << j), s) = wedge_sign(s, j);
    }
    return m;
}

MatrixXd contraction_matrix(int n, int j) {
    const int dim = 1 << n;
    MatrixXd m = MatrixXd::Zero(dim, dim);
    for (std::uint32_t s = 0; s < static_cast<std::uint32_t>(dim); ++s) {
        if (!(s & (1u << j))) continue;
        m(s & ~(1u << j), s) = wedge_sign(s, j);
    }
    return m;
}

MatrixXd rho_matrix(int n, const NormalOrderedElement& a) {
    check_dim(n);
    if (a.ctx() != NCtx::CL) throw ContextMismatch("rho_matrix expects a Cl element");
    const int dim = 1 << n;
    std::vector<MatrixXd> letter(n);
    for (int j = 0; j < n; ++j) letter[j] = wedge_matrix(n, j) + 0.5 * contraction_matrix(n, j);
    MatrixXd out = MatrixXd::Zero(dim, dim);
    for (const auto& [m, c] : a.terms()) {
        MatrixXd word = MatrixXd::Identity(dim, dim);
        for (int j = n - 1; j >= 0; --j)
            if (m.odd & (1u << j)) word = letter[j] * word;
        out += c.get_d() * word;
    }
    return out;
}

RatMat rho_matrix_rat(int n, const NormalOrderedElement& a) {
    check_dim(n);
    if (a.ctx() != NCtx::CL) throw ContextMismatch("rho_matrix_rat expects a Cl element");
    const int dim = 1 << n;
    auto mul = [&](const RatMat& x, const RatMat& y) {
        RatMat r(dim, std::vector<Rat>(dim, Rat(0)));
        for (int i = 0; i < dim; ++i)
            for (int k = 0; k < dim; ++k) {
                if (x[i][k] == 0) continue;
                for (int j = 0; j < dim; ++j)
                    if (y[k][j] != 0) r[i][j] += x[i][k] * y[k][j];
            }
        return r;
    };
    std::vector<RatMat> letter(n, RatMat(dim, std::vector<Rat>(dim, Rat(0))));
    for (int j = 0; j < n; ++j)
        for (std::uint32_t s = 0; s < static_cast<std::uint32_t>(dim); ++s) {
            if (!(s & (1u << j)))
                letter[j][s | (1u << j)][s] += wedge_sign(s, j);
            else
                letter[j][s & ~(1u << j)][s] += Rat(wedge_sign(s, j)) / 2;
        }
    RatMat out(dim, std::vector<Rat>(dim, Rat(0)));
    for (const auto& [m, c] : a.terms()) {
        RatMat word(dim, std::vector<Rat>(dim, Rat(0)));
        for (int i = 0; i < dim; ++i) word[i][i] = 1;
        for (int j = n - 1; j >= 0; --j)
            if (m.odd & (1u << j)) word = mul(letter[j], word);
        for (int i = 0; i < dim; ++i)
            for (int k = 0; k < dim; ++k) out[i][k] += c * word[i][k];
    }
    return out;
}

NormalOrderedElement tau_inverse_so(const QuadraticLieAlgebra& v, const RatMat& A) {
    const int n = v.dim();
    if (static_cast<int>(A.size()) != n)
        throw LengthMismatch("matrix size does not match the metric space dimension");
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            if (A[i][j] != -A[j][i])
                throw NotAntisymmetric("A[" + std::to_string(i + 1) + "][" + std::to_string(j + 1) +
                                       "] != -A[j][i]");
    NormalOrderedElement out(NCtx::CL, &v);
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) {
            if (A[i][j] == 0) continue;
            Monomial m;
            m.even.assign(n, 0);
            m.odd = (1u << i) | (1u << j);
            out.add_term(m, -A[i][j]);
        }
    return out;
}

MatrixXd h_embed(const MatrixXd& C) {
    const int n = static_cast<int>(C.rows());
    MatrixXd h(2 * n, 2 * n);
    MatrixXd I = MatrixXd::Identity(n, n);
    h.topLeftCorner(n, n) = 0.5 * (C + I);
    h.topRightCorner(n, n) = C - I;
    h.bottomLeftCorner(n, n) = 0.25 * (C - I);
    h.bottomRightCorner(n, n) = 0.5 * (C + I);
    return h;
}

MatrixXd bw_gram(int n) {
    // B_W(x, alpha) = alpha(x): the normalization under which kappa is an
    // isometry and pi(x) = wedge, pi(alpha) = iota is a Cl(W) representation
    MatrixXd g = MatrixXd::Zero(2 * n, 2 * n);
    g.topRightCorner(n, n) = MatrixXd::Identity(n, n);
    g.bottomLeftCorner(n, n) = MatrixXd::Identity(n, n);
    return g;
}

VectorXd kappa(const VectorXd& x, const VectorXd& y) {
    const int n = static_cast<int>(x.size());
    VectorXd w(2 * n);
    w.head(n) = x + y;
    w.tail(n) = 0.5 * (x - y);
    return w;
}

std::pair<VectorXd, VectorXd> kappa_inverse(const VectorXd& w) {
    const int n = static_cast<int>(w.size()) / 2;
    VectorXd u = w.head(n), al = w.tail(n);
    return {0.5 * u + al, 0.5 * u - al};
}

FactorizationResult factorize(const MatrixXd& C, const MatrixXd& D, double tol) {
    const int n = static_cast<int>(C.rows());
    MatrixXd I = MatrixXd::Identity(n, n);
    if (std::abs((C - I).determinant()) <= tol)
        throw SingularCMinusI("det(C - I) = " + fmt((C - I).determinant()));
    if (std::abs(D.determinant()) <= tol)
        throw SingularD("det(D) = " + fmt(D.determinant()));
    if ((C * D - D * C).cwiseAbs().maxCoeff() > tol)
        throw NonCommuting("C and D do not commute");
    FactorizationResult res;
    res.C = C;
    res.D = D;
    MatrixXd CmI_inv = (C - I).inverse();
    MatrixXd D_inv = D.inverse();
    MatrixXd C_inv = C.inverse();
    res.E1 = 0.5 * (C + I) * CmI_inv - D_inv;
    res.E2 = D_inv * D_inv * (0.5 * (C - C_inv) - D);
    res.R = D * (I - C_inv).inverse();
    res.det_sqrt_R = std::sqrt(std::abs(res.R.determinant()));
    // reassembled block product against h(C)
    MatrixXd lower1 = MatrixXd::Identity(2 * n, 2 * n);
    lower1.bottomLeftCorner(n, n) = res.E1;
    MatrixXd upper = MatrixXd::Identity(2 * n, 2 * n);
    upper.topRightCorner(n, n) = D;
    MatrixXd lower2 = MatrixXd::Identity(2 * n, 2 * n);
    lower2.bottomLeftCorner(n, n) = res.E2;
    MatrixXd glr = MatrixXd::Zero(2 * n, 2 * n);
    glr.topLeftCorner(n, n) = res.R;
    glr.bottomRightCorner(n, n) = res.R.inverse().transpose();
    res.reassembly_residual = (lower1 * upper * lower2 * glr - h_embed(C)).cwiseAbs().maxCoeff();
    return res;
}

MatrixXd exp_contraction_operator(int n, const MatrixXd& E) {
    const int dim = 1 << n;
    MatrixXd K = MatrixXd::Zero(dim, dim);
    std::vector<MatrixXd> iota(n);
    for (int j = 0; j < n; ++j) iota[j] = contraction_matrix(n, j);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            if (E(i, j) != 0.0) K += 0.5 * E(i, j) * (iota[i] * iota[j]);
    // K lowers exterior degree by 2: the series is finite
    MatrixXd out = MatrixXd::Identity(dim, dim);
    MatrixXd term = MatrixXd::Identity(dim, dim);
    for (int k = 1; k <= n / 2 + 1; ++k) {
        term = (K * term) / k;
        out += term;
    }
    return out;
}

VectorXd exp_wedge_element(int n, const MatrixXd& D, const VectorXd& nu) {
    const int dim = 1 << n;
    VectorXd elem = VectorXd::Zero(dim);
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j)
            if (D(i, j) != 0.0) elem((1u << i) | (1u << j)) += D(i, j); // (1/2)(D_ij - D_ji)
    for (int a = 0; a < n; ++a) elem(1u << a) += nu(a);
    // exp via repeated wedge multiplication (nilpotent)
    MatrixXd mult = wedge_mult_matrix(n, elem);
    VectorXd out = VectorXd::Zero(dim);
    out(0) = 1.0;
    VectorXd term = out;
    for (int k = 1; k <= n; ++k) {
        term = (mult * term) / k;
        if (term.cwiseAbs().maxCoeff() == 0.0) break;
        out += term;
    }
    return out;
}

MatrixXd wedge_mult_matrix(int n, const VectorXd& elem) {
    const int dim = 1 << n;
    MatrixXd out = MatrixXd::Zero(dim, dim);
    std::vector<MatrixXd> w(n);
    for (int j = 0; j < n; ++j) w[j] = wedge_matrix(n, j);
    for (std::uint32_t s = 0; s < static_cast<std::uint32_t>(dim); ++s) {
        if (elem(s) == 0.0) continue;
        MatrixXd word = MatrixXd::Identity(dim, dim);
        for (int j = n - 1; j >= 0; --j)
            if (s & (1u << j)) word = w[j] * word;
        out += elem(s) * word;
    }
    return out;
}

MatrixXd exterior_extension(int n, const MatrixXd& R) {
    const int dim = 1 << n;
    MatrixXd out = MatrixXd::Zero(dim, dim);
    std::vector<MatrixXd> w(n);
    for (int j = 0; j < n; ++j) w[j] = wedge_matrix(n, j);
    for (std::uint32_t s = 0; s < static_cast<std::uint32_t>(dim); ++s) {
        VectorXd v = VectorXd::Zero(dim);
        v(0) = 1.0;
        for (int j = n - 1; j >= 0; --j) {
            if (!(s & (1u << j))) continue;
            MatrixXd colop = MatrixXd::Zero(dim, dim);
            for (int i = 0; i < n; ++i)
                if (R(i, j) != 0.0) colop += R(i, j) * w[i];
            v = colop * v;
        }
        out.col(s) = v;
    }
    return out;
}

namespace {

// quadratic lift operator (1/2) sum A_ij rho(xi_i) rho(xi_j)
MatrixXd quad_rho(int n, const MatrixXd& A) {
    const int dim = 1 << n;
    std::vector<MatrixXd> letter(n);
    for (int j = 0; j < n; ++j) letter[j] = wedge_matrix(n, j) + 0.5 * contraction_matrix(n, j);
    MatrixXd out = MatrixXd::Zero(dim, dim);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            if (A(i, j) != 0.0) out += 0.5 * A(i, j) * (letter[i] * letter[j]);
    return out;
}

} // namespace

Report verify_spin_factorization(int n, const MatrixXd& A, double tol) {
    check_dim(n);
    Report rep;
    MatrixXd C = A.exp();
    MatrixXd D = A;
    FactorizationResult fac = factorize(C, D, tol);
    rep.add("spinfact", "h(C) reassembly", fac.reassembly_residual <= tol,
            "residual=" + fmt(fac.reassembly_residual));
    rep.add("spinfact", "E1 antisymmetric",
            (fac.E1 + fac.E1.transpose()).cwiseAbs().maxCoeff() <= tol, "");
    rep.add("spinfact", "E2 antisymmetric",
            (fac.E2 + fac.E2.transpose()).cwiseAbs().maxCoeff() <= tol, "");
    double comm = 0;
    for (const MatrixXd* m : {&fac.E1, &fac.E2, &fac.R}) {
        comm = std::max(comm, ((*m) * C - C * (*m)).cwiseAbs().maxCoeff());
        comm = std::max(comm, ((*m) * D - D * (*m)).cwiseAbs().maxCoeff());
    }
    rep.add("spinfact", "E1,E2,R commute with C,D", comm <= tol, "residual=" + fmt(comm));

    const int dim = 1 << n;
    MatrixXd lhs = quad_rho(n, A).exp();
    MatrixXd rhs0 = exp_contraction_operator(n, fac.E1) *
                    wedge_mult_matrix(n, exp_wedge_element(n, D, VectorXd::Zero(n))) *
                    exp_contraction_operator(n, fac.E2) * exterior_extension(n, fac.R);
    double res_plus = (lhs - rhs0 / fac.det_sqrt_R).cwiseAbs().maxCoeff();
    double res_minus = (lhs + rhs0 / fac.det_sqrt_R).cwiseAbs().maxCoeff();
    bool plus = res_plus <= res_minus;
    double residual = plus ? res_plus : res_minus;
    rep.add("spinfact", "eq_fac entrywise (2^n basis)", residual <= tol,
            "residual=" + fmt(residual) + " detSqrt sign=" + (plus ? "+" : "-"));

    VectorXd symb_lhs = lhs.col(0);
    VectorXd symb_rhs = exp_contraction_operator(n, fac.E1) *
                        exp_wedge_element(n, D, VectorXd::Zero(n)) /
                        (plus ? fac.det_sqrt_R : -fac.det_sqrt_R);
    double symb_res = (symb_lhs - symb_rhs).cwiseAbs().maxCoeff();
    rep.add("spinfact", "eq_symb (action on 1)", symb_res <= tol, "residual=" + fmt(symb_res));

    // double cover consistency: conjugation by the lift is the SO action
    MatrixXd lhs_inv = (-quad_rho(n, A)).exp();
    double cover = 0;
    for (int b = 0; b < n; ++b) {
        MatrixXd rb = wedge_matrix(n, b) + 0.5 * contraction_matrix(n, b);
        MatrixXd conj = lhs * rb * lhs_inv;
        MatrixXd expect = MatrixXd::Zero(dim, dim);
        for (int i = 0; i < n; ++i)
            expect += C(i, b) * (wedge_matrix(n, i) + 0.5 * contraction_matrix(n, i));
        cover = std::max(cover, (conj - expect).cwiseAbs().maxCoeff());
    }
    rep.add("spinfact", "covering (conjugation = SO action)", cover <= tol,
            "residual=" + fmt(cover));
    return rep;
}

MatrixXd adjoint_double(const QuadraticLieAlgebra& g, const std::vector<Rat>& mu) {
    RatMatrix ad = g.adjoint_matrix(mu);
    const int n = g.dim();
    MatrixXd m(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) m(i, j) = ad[i][j].get_d();
    return m;
}

Report verify_strongfac(const QuadraticLieAlgebra& g, const std::vector<Rat>& mu,
                        const std::vector<Rat>& nu, double tol) {
    // The nu^a are odd parameters (the proof compares their coefficients), so
    // the check runs over Lambda(V) (x) Lambda(nu_1..nu_n): letters 0..n-1 are
    // the e_a, letters n..2n-1 the parameters.  Both sides are compared on the
    // full 4^n basis, i.e. on every nu-multilinear coefficient at once.
    const int n = g.dim();
    if (2 * n > kDimCap) throw DimensionCap("strongfac needs 2n <= cap");
    Report rep;
    MatrixXd M = adjoint_double(g, mu);
    const int N = 2 * n;
    const int dim = 1 << N;
    std::vector<MatrixXd> rho(n), wedge(N);
    for (int j = 0; j < N; ++j) wedge[j] = wedge_matrix(N, j);
    for (int j = 0; j < n; ++j) rho[j] = wedge[j] + 0.5 * contraction_matrix(N, j);

    // LHS: exp_Cl(1/2 sum M_ab xi_a xi_b + sum nu_a xi_a) acting on 1
    MatrixXd X = MatrixXd::Zero(dim, dim);
    for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b)
            if (M(a, b) != 0.0) X += 0.5 * M(a, b) * (rho[a] * rho[b]);
    for (int a = 0; a < n; ++a) {
        double c = nu[a].get_d();
        if (c != 0.0) X += c * (wedge[n + a] * rho[a]); // nu_a xi_a
    }
    VectorXd lhs = X.exp().col(0);

    // RHS: j^{1/2}(M) exp(iota_{gamma(E1)}) exp_Lambda(same exponent)
    const int order = 12;
    std::vector<Rat> fc = f_series_coeffs(order / 2);
    MatrixXd E1 = MatrixXd::Zero(n, n);
    MatrixXd M2 = M * M, P = M;
    for (std::size_t k = 0; k < fc.size(); ++k) {
        E1 += fc[k].get_d() * P;
        P = P * M2;
    }
    std::vector<Rat> b = bernoulli_b2k(order / 2);
    double logj = 0;
    MatrixXd Q = M2;
    for (std::size_t k = 0; k < b.size(); ++k) {
        logj += b[k].get_d() * Q.trace();
        Q = Q * M2;
    }
    double jhalf = std::exp(logj);

    MatrixXd K = MatrixXd::Zero(dim, dim);
    std::vector<MatrixXd> iota(n);
    for (int j = 0; j < n; ++j) iota[j] = contraction_matrix(N, j);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            if (E1(i, j) != 0.0) K += 0.5 * E1(i, j) * (iota[i] * iota[j]);
    MatrixXd expK = MatrixXd::Identity(dim, dim);
    MatrixXd term = MatrixXd::Identity(dim, dim);
    for (int k = 1; k <= n + 1; ++k) {
        term = (K * term) / k;
        expK += term;
    }

    // exterior exponent: 1/2 sum M_ab e_a e_b + sum nu_a ^ e_a
    MatrixXd D2 = MatrixXd::Zero(N, N);
    D2.topLeftCorner(n, n) = M;
    for (int a = 0; a < n; ++a) {
        double c = nu[a].get_d();
        D2(a, n + a) = -c; // pair (a, n+a) with i < j: coefficient of e_a ^ nu_a
        D2(n + a, a) = c;
    }
    VectorXd rhs = jhalf * (expK * exp_wedge_element(N, D2, VectorXd::Zero(N)));

    double res = (lhs - rhs).cwiseAbs().maxCoeff();
    rep.add("spinfact", "eq_strongfac", res <= tol, "residual=" + fmt(res));
    return rep;
}

Report verify_duflo_bridge(const QuadraticLieAlgebra& g, const std::vector<Rat>& mu, int order,
                           double tol) {
    Report rep;
    const int n = g.dim();
    MatrixXd M = adjoint_double(g, mu);

    // analytic route: eigendecomposition of the (normal) matrix ad_mu
    Eigen::ComplexEigenSolver<MatrixXd> es(M);
    auto evals = es.eigenvalues();
    auto evecs = es.eigenvectors();
    auto matfunc = [&](auto f) {
        Eigen::MatrixXcd diag = Eigen::MatrixXcd::Zero(n, n);
        for (int i = 0; i < n; ++i) diag(i, i) = f(evals(i));
        return MatrixXd((evecs * diag * evecs.inverse()).real());
    };
    MatrixXd E1_num = matfunc([](std::complex<double> s) -> std::complex<double> {
        if (std::abs(s) < 1e-12) return 0.0;
        return 0.5 * (std::exp(s) + 1.0) / (std::exp(s) - 1.0) - 1.0 / s;
    });
    double det_R = 1.0;
    for (int i = 0; i < n; ++i) {
        std::complex<double> s = evals(i);
        std::complex<double> phi = std::abs(s) < 1e-12
                                       ? std::complex<double>(1.0, 0.0)
                                       : s / (1.0 - std::exp(-s));
        det_R *= std::abs(phi);
    }
    double inv_det_sqrt_num = 1.0 / std::sqrt(det_R);

    // exact truncated series route
    std::vector<Rat> fc = f_series_coeffs(std::max(1, order / 2));
    MatrixXd E1_ser = MatrixXd::Zero(n, n);
    MatrixXd M2 = M * M, P = M;
    for (std::size_t k = 0; k < fc.size(); ++k) {
        E1_ser += fc[k].get_d() * P;
        P = P * M2;
    }
    std::vector<Rat> b = bernoulli_b2k(std::max(1, order / 2));
    double logj = 0;
    MatrixXd Q = M2;
    for (std::size_t k = 0; k < b.size(); ++k) {
        logj += b[k].get_d() * Q.trace();
        Q = Q * M2;
    }
    double jhalf_ser = std::exp(logj);

    double e1_res = (E1_num - E1_ser).cwiseAbs().maxCoeff();
    double j_res = std::abs(inv_det_sqrt_num - jhalf_ser);
    rep.add("duflo_bridge[" + g.name() + "]", "E1 = f(ad mu)", e1_res <= tol,
            "residual=" + fmt(e1_res));
    rep.add("duflo_bridge[" + g.name() + "]", "1/|det|^{1/2}(R^) = j^{1/2}(ad mu)", j_res <= tol,
            "residual=" + fmt(j_res));
    return rep;
}

MatrixXd seeded_antisymmetric(int n, unsigned seed) {
    std::mt19937 rng(seed);
    std::uniform_real_distribution<double> dist(-1.0, 1.0);
    MatrixXd G(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) G(i, j) = dist(rng);
    MatrixXd A = 0.5 * (G - G.transpose());
    double norm = A.norm();
    if (norm > 1.0) A /= norm;
    return A;
}

MatrixXd block_rotation_antisym(int n, double t) {
    MatrixXd A = MatrixXd::Zero(n, n);
    for (int b = 0; 2 * b + 1 < n; ++b) {
        double angle = t + 0.6 * b;
        A(2 * b, 2 * b + 1) = angle;
        A(2 * b + 1, 2 * b) = -angle;
    }
    return A;
}

} // namespace weilforge
