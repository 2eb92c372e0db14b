#ifndef WEILFORGE_GDIFF_HPP
#define WEILFORGE_GDIFF_HPP

#include <string>
#include <vector>

#include "weilforge/liealg.hpp"
#include "weilforge/ncweil.hpp"
#include "weilforge/report.hpp"
#include "weilforge/superpoly.hpp"

namespace weilforge {

enum class Space { W, WK, NW, NWK };

const char* space_name(Space s);
bool space_is_nc(Space s);
Ctx space_ctx(Space s);   // for W / WK
NCtx space_nctx(Space s); // for NW / NWK

// An operator on one of the four spaces, defined by generator images and a
// parity, extended as a super-derivation of the (possibly noncommutative)
// product.
class DerivationOperator {
public:
    enum class Kind { Iota, L, D };

    Space space() const { return space_; }
    Kind kind() const { return kind_; }
    int index() const { return index_; } // generator index for iota/L, -1 for d
    int parity() const { return parity_; }
    std::string name() const;

    SuperPolynomial apply(const SuperPolynomial& p) const;
    NormalOrderedElement apply(const NormalOrderedElement& p) const;

    static DerivationOperator iota(const QuadraticLieAlgebra& g, Space s, int a);
    static DerivationOperator L(const QuadraticLieAlgebra& g, Space s, int a);
    static DerivationOperator d(const QuadraticLieAlgebra& g, Space s);

private:
    Space space_ = Space::W;
    Kind kind_ = Kind::D;
    int index_ = -1;
    int parity_ = 1;
    const QuadraticLieAlgebra* g_ = nullptr;
    // commutative images
    std::vector<SuperPolynomial> ev_, od_;
    // noncommutative images
    std::vector<NormalOrderedElement> nev_, nod_;
};

// Super-derivations of S(T~g[1]) given by the adjoint action [x, .].
SuperPolynomial stg_ad_even(const QuadraticLieAlgebra& g, int a, const SuperPolynomial& p);
SuperPolynomial stg_ad_odd(const QuadraticLieAlgebra& g, int a, const SuperPolynomial& p);

// All six bracket relations of the super Lie algebra g^ as operator identities,
// on every generator and redundantly on all monomials of degree <= max_degree.
Report check_hat_g_relations(const QuadraticLieAlgebra& g, Space s, int max_degree);

struct Classification {
    bool horizontal = false;
    bool invariant = false;
    bool basic = false;
};
Classification classify(const QuadraticLieAlgebra& g, const SuperPolynomial& p, Space s);
Classification classify(const QuadraticLieAlgebra& g, const NormalOrderedElement& p, Space s);

// Exact homology of (W^K, d) (or W) per total degree 1..max_total_degree.
// Throws DegreeTooLarge when a graded slice exceeds slice_cap.
Report verify_koszul_acyclicity(const QuadraticLieAlgebra& g, Space s, int max_total_degree,
                                int slice_cap = 20000);

// d(omega) = theta^b L_b omega on horizontal (pure-v) monomials up to max_degree,
// plus the corollary that d vanishes on basic elements.
Report check_d_equals_thetaL_on_horizontal(const QuadraticLieAlgebra& g, int max_degree);

// tau0 / tau1 intertwine {d, iota_a, L_a} between the two presentations.
Report verify_tau_intertwine(const QuadraticLieAlgebra& g, int max_degree);

// Lemma: sigma0([e_a, .]) = L_a(sigma0(.)), sigma0([eb_a, .]) = iota_a(sigma0(.)),
// checked on all generators and on monomials of degree <= max_degree.
Report verify_sigma0_correspondence(const QuadraticLieAlgebra& g, int max_degree);

// substitute c := 1
SuperPolynomial stg_set_central_one(const SuperPolynomial& p);

// Per degree <= max_degree: sigma0 maps the invariants of S(T~g[1])/<c=1>
// (represented on c-free monomials) onto the basic subspace of W
// (solution-space comparison).
Report verify_sigma0_invariants_basic(const QuadraticLieAlgebra& g, int max_degree);

} // namespace weilforge

#endif
