#ifndef WEILFORGE_DUFLO_HPP
#define WEILFORGE_DUFLO_HPP

#include <vector>

#include "weilforge/liealg.hpp"
#include "weilforge/ncweil.hpp"
#include "weilforge/report.hpp"
#include "weilforge/superpoly.hpp"

namespace weilforge {

// Modified Bernoulli numbers b_{2k} of (1/2) ln(sinh(x/2)/(x/2)) = sum b_{2k} x^{2k};
// returns [b_2, b_4, ..., b_{2kmax}].  b_2 = 1/48, b_4 = -1/5760, b_6 = 1/362880.
std::vector<Rat> bernoulli_b2k(int kmax);

// Odd Taylor coefficients of f(s) = (ln j)'(s) = (1/2)(e^s+1)/(e^s-1) - 1/s;
// returns [c_1, c_3, ...] with c_{2k-1} = 4k b_{2k}; c_1 = 1/12, c_3 = -1/720.
std::vector<Rat> f_series_coeffs(int kmax);

// A truncated series operator: either the scalar series j^{1/2}(x) or the
// antisymmetric matrix series T_ab(x) = f(ad_x)_ab.  In both cases the series
// variable x_a acts as d/dv^a, so each correction strictly lowers degree and
// results are exact once the truncation covers the input degree.
struct TruncatedSeriesOperator {
    enum class Kind { JHalf, TExp };
    Kind kind = Kind::JHalf;
    int truncation = 0;
    int n = 0;
    SuperPolynomial jhalf_poly;                   // SG context, constant term 1
    std::vector<std::vector<SuperPolynomial>> T;  // SG-context entries, antisymmetric
};

TruncatedSeriesOperator jhalf_operator(const QuadraticLieAlgebra& g, int trunc);
TruncatedSeriesOperator T_operator(const QuadraticLieAlgebra& g, int trunc);

// d_{j^{1/2}}: series variables become derivatives in the even generators.
SuperPolynomial apply_jhalf(const TruncatedSeriesOperator& op, const SuperPolynomial& p);
// exp((1/2) T_ab(d_v) iota_a iota_b) on W (identity metric).
SuperPolynomial apply_T(const TruncatedSeriesOperator& op, const SuperPolynomial& p);

// chi (x) q: symmetrize the even part into U(g), send theta-subsets to
// Clifford words; the degree-preserving skeleton of the quantization map.
NormalOrderedElement chi_tensor_q(const QuadraticLieAlgebra& g, const SuperPolynomial& p);

// Duflo map S(g) -> U(g): pbw_chi . d_{j^{1/2}}.
NormalOrderedElement duflo_map(const QuadraticLieAlgebra& g, const SuperPolynomial& p, int trunc);

// Quantization map W -> W~ : (chi (x) q) . d_{j^{1/2}} . exp((1/2) T iota iota).
NormalOrderedElement quantization_Q(const QuadraticLieAlgebra& g, const SuperPolynomial& p,
                                    int trunc);

// Duflo map of T~g[1]: verifies the supertrace vanishing, then super-symmetrizes.
NormalOrderedElement super_duflo(const QuadraticLieAlgebra& g, const SuperLieAlgebra& salg,
                                 const SuperPolynomial& p, int trunc);

// Q . sigma0 = sigma1 . super-symmetrization on all c-free monomials of degree <= max_degree.
Report verify_main_theorem(const QuadraticLieAlgebra& g, int max_degree);

// Q(p^m) = Q(p)^m for basic p.
Report verify_invariant_homomorphism(const QuadraticLieAlgebra& g, const SuperPolynomial& p,
                                     const std::vector<int>& powers);

// Q . op = op . Q for op in {d, iota_a, L_a} on W-monomials of degree <= max_degree.
Report verify_chain_map(const QuadraticLieAlgebra& g, int max_degree);

// Q restricted to the odd (resp. even) part equals chevalley_q (resp. duflo_map).
Report verify_q_restrictions(const QuadraticLieAlgebra& g, int max_degree);

// Q is a linear bijection on the filtered slice of degree <= max_degree.
Report verify_q_bijective(const QuadraticLieAlgebra& g, int max_degree);

// d_{j^{1/2}} maps L_a-invariant elements to L_a-invariant elements.
Report verify_jhalf_preserves_invariance(const QuadraticLieAlgebra& g, int max_degree);

} // namespace weilforge

#endif
