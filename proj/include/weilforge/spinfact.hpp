#ifndef WEILFORGE_SPINFACT_HPP
#define WEILFORGE_SPINFACT_HPP

#include <Eigen/Dense>

#include "weilforge/liealg.hpp"
#include "weilforge/ncweil.hpp"
#include "weilforge/ratlinalg.hpp"
#include "weilforge/report.hpp"

namespace weilforge {

using Eigen::MatrixXd;
using Eigen::VectorXd;

// Sign conventions, fixed once by the eq:symb / eq:fac calibration run:
// the quadratic lift of A in Cl(V) is exp(+1/2 sum A_ij xi_i xi_j), the wedge
// element is +1/2 sum D_ij e_i e_j, the contraction operator is
// +1/2 sum E_ij iota_i iota_j, and the GL factor R acts columnwise.  With these
// choices conjugation by the lift reproduces C = exp(A) acting by columns.

struct FactorizationResult {
    MatrixXd C, D, E1, E2, R;
    double det_sqrt_R = 1.0;        // positive square root of |det R|
    double reassembly_residual = 0; // entrywise h(C) defect of eq:factorization
};

// matrix of rho(a) on the 2^n odd-subset basis of Lambda(V); identity metric
MatrixXd rho_matrix(int n, const NormalOrderedElement& a);
RatMat rho_matrix_rat(int n, const NormalOrderedElement& a); // exact variant

// wedge and contraction letter operators on the 2^n basis
MatrixXd wedge_matrix(int n, int j);
MatrixXd contraction_matrix(int n, int j);

// - sum_{i<j} A_ij xi_i xi_j in Cl(V); V is modelled as the abelian quadratic
// algebra of the same dimension.  Satisfies odd_bracket(tau_inverse_so(A), xi_b)
// = sum_i A_bi xi_i (row action; the column-action element is tau_inverse_so(-A)).
NormalOrderedElement tau_inverse_so(const QuadraticLieAlgebra& v, const RatMat& A);

// h : SO(g) -> SO(W), block matrix [[ (C+I)/2, C-I ], [ (C-I)/4, (C+I)/2 ]]
MatrixXd h_embed(const MatrixXd& C);
// Gram matrix of B_W in the basis (e_a, e^a): off-diagonal blocks 2I
MatrixXd bw_gram(int n);
VectorXd kappa(const VectorXd& x, const VectorXd& y);
std::pair<VectorXd, VectorXd> kappa_inverse(const VectorXd& w);

FactorizationResult factorize(const MatrixXd& C, const MatrixXd& D, double tol);

// exp of the contraction operator (1/2) sum E_ij iota_i iota_j (nilpotent)
MatrixXd exp_contraction_operator(int n, const MatrixXd& E);
// vector of exp_Lambda((1/2) sum D_ij e_i e_j + sum nu_a e_a) in the 2^n basis
VectorXd exp_wedge_element(int n, const MatrixXd& D, const VectorXd& nu);
// left wedge-multiplication by a Lambda(V) element given as a basis vector
MatrixXd wedge_mult_matrix(int n, const VectorXd& elem);
// Lambda(R): the algebra-automorphism extension of R to Lambda(V)
MatrixXd exterior_extension(int n, const MatrixXd& R);

// full entrywise check of eq:fac on the 2^n basis plus the eq:symb column;
// records the metaplectic sign choice for det_sqrt
Report verify_spin_factorization(int n, const MatrixXd& A, double tol);

// eq:strongfac with a linear term: q^{-1}(exp_Cl(quad + nu^a xi_a)) =
// iota_{C(mu)} exp_Lambda(quad + nu^a e_a) with quad = (1/2)(ad mu)_ij xi_i xi_j
Report verify_strongfac(const QuadraticLieAlgebra& g, const std::vector<Rat>& mu,
                        const std::vector<Rat>& nu, double tol);

// 1/|det|^{1/2}(R^) = j^{1/2}(ad mu) and E1 = f(ad mu): eigendecomposition-based
// analytic matrix functions against the exact truncated series at order N
Report verify_duflo_bridge(const QuadraticLieAlgebra& g, const std::vector<Rat>& mu, int order,
                           double tol);

// reproducible pseudorandom antisymmetric matrix with Frobenius norm <= 1
MatrixXd seeded_antisymmetric(int n, unsigned seed);
// block-diagonal rotation generator with angles t, t + 0.6, t + 1.2, ...
MatrixXd block_rotation_antisym(int n, double t);

MatrixXd adjoint_double(const QuadraticLieAlgebra& g, const std::vector<Rat>& mu);

} // namespace weilforge

#endif
