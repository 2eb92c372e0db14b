#ifndef WEILFORGE_NCWEIL_HPP
#define WEILFORGE_NCWEIL_HPP

#include <string>
#include <vector>

#include "weilforge/liealg.hpp"
#include "weilforge/superpoly.hpp"

namespace weilforge {

// Normal-ordered contexts.
//   CL  : Cl(g), generators xi_a (odd)
//   U   : U(g), generators u_a (even)
//   NW  : U(g) (x) Cl(g) with commuting blocks, generators u_a, xi_a
//   NWK : same space presented on uh_a, xi_a with [uh_a, xi_b] = f_ab^c xi_c
//   UTG : U(T~g[1]) / <c = 1>, generators e_a (even), eb_a (odd)
// A monomial (E, S) denotes the word  xi^S * x^E  (odd block first); for CL, U
// and NW the block order is immaterial.
enum class NCtx { CL, U, NW, NWK, UTG };

const char* nctx_name(NCtx c);

class NormalOrderedElement {
public:
    NormalOrderedElement() = default;
    NormalOrderedElement(NCtx ctx, const QuadraticLieAlgebra* g) : ctx_(ctx), g_(g) {}

    static NormalOrderedElement zero(NCtx ctx, const QuadraticLieAlgebra* g);
    static NormalOrderedElement constant(NCtx ctx, const QuadraticLieAlgebra* g, const Rat& c);
    static NormalOrderedElement even_gen(NCtx ctx, const QuadraticLieAlgebra* g, int idx);
    static NormalOrderedElement odd_gen(NCtx ctx, const QuadraticLieAlgebra* g, int idx);
    static NormalOrderedElement from_monomial(NCtx ctx, const QuadraticLieAlgebra* g,
                                              const Monomial& m, const Rat& c);

    NCtx ctx() const { return ctx_; }
    const QuadraticLieAlgebra* algebra() const { return g_; }
    int n() const { return g_ ? g_->dim() : 0; }
    bool is_zero() const { return terms_.empty(); }
    const std::map<Monomial, Rat, MonomialLess>& terms() const { return terms_; }
    Rat coeff(const Monomial& m) const;
    void add_term(const Monomial& m, const Rat& c);
    int filtration_degree() const; // max over terms of 2*|E| + |S|

    NormalOrderedElement operator+(const NormalOrderedElement& o) const;
    NormalOrderedElement operator-(const NormalOrderedElement& o) const;
    NormalOrderedElement operator-() const;
    NormalOrderedElement operator*(const Rat& c) const;
    bool operator==(const NormalOrderedElement& o) const;

    std::string to_string() const;

private:
    friend NormalOrderedElement nc_multiply(const NormalOrderedElement&,
                                            const NormalOrderedElement&);
    NCtx ctx_ = NCtx::CL;
    const QuadraticLieAlgebra* g_ = nullptr;
    std::map<Monomial, Rat, MonomialLess> terms_;
};

inline NormalOrderedElement operator*(const Rat& c, const NormalOrderedElement& p) {
    return p * c;
}

NormalOrderedElement nc_multiply(const NormalOrderedElement& a, const NormalOrderedElement& b);
NormalOrderedElement nc_power(const NormalOrderedElement& a, int k);

// super bracket [a,b] = ab - (-1)^{|a||b|} ba of the filtered super algebra
NormalOrderedElement odd_bracket(const NormalOrderedElement& a, const NormalOrderedElement& b);

// Chevalley quantization Lambda(g) -> Cl(g) and its inverse (symbol map).
NormalOrderedElement chevalley_q(const QuadraticLieAlgebra& g, const SuperPolynomial& p);
SuperPolynomial symbol(const NormalOrderedElement& a);

// PBW super-symmetrization S(g) -> U(g) or S(T~g[1]) -> U(T~g[1]).
NormalOrderedElement pbw_chi(const QuadraticLieAlgebra& g, const SuperPolynomial& p);

// variable changes
NormalOrderedElement tau1(const NormalOrderedElement& a);          // NWK -> NW
NormalOrderedElement tau1_inverse(const NormalOrderedElement& a);  // NW -> NWK
NormalOrderedElement sigma1(const NormalOrderedElement& a);        // UTG -> NW

NormalOrderedElement parse_nc_element(const std::string& src, NCtx ctx,
                                      const QuadraticLieAlgebra* g);

// monomials of filtration degree <= d (same shapes as the commutative contexts)
std::vector<Monomial> nc_monomials_up_to(NCtx ctx, int n, int d);

} // namespace weilforge

#endif
