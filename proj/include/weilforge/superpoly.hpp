#ifndef WEILFORGE_SUPERPOLY_HPP
#define WEILFORGE_SUPERPOLY_HPP

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "weilforge/errors.hpp"
#include "weilforge/liealg.hpp"
#include "weilforge/rational.hpp"

namespace weilforge {

// Generator alphabets of the supercommutative algebras in play.
//   W   : even v_1..v_n,            odd th_1..th_n          (Weil algebra)
//   WK  : even vh_1..vh_n,          odd th_1..th_n          (Koszul presentation)
//   STG : even e_1..e_n and c,      odd eb_1..eb_n          (S(T~g[1]))
//   SG  : even e_1..e_n                                      (S(g))
//   EXT :                           odd eb_1..eb_n          (Lambda(g))
enum class Ctx { W, WK, STG, SG, EXT };

const char* ctx_name(Ctx c);

struct Monomial {
    std::vector<int> even; // exponents; for STG the last slot is the central c
    std::uint32_t odd = 0; // strictly increasing index subset as a bitmask

    int even_degree() const {
        int s = 0;
        for (int e : even) s += e;
        return s;
    }
    int odd_count() const { return __builtin_popcount(odd); }
    // grading of Sec. "degree 2 and 1": even generators weigh 2, odd weigh 1
    int weighted_degree() const { return 2 * even_degree() + odd_count(); }

    bool operator==(const Monomial& o) const { return even == o.even && odd == o.odd; }
};

struct MonomialLess {
    bool operator()(const Monomial& a, const Monomial& b) const {
        int da = a.weighted_degree(), db = b.weighted_degree();
        if (da != db) return da < db;
        if (a.even != b.even) return a.even < b.even;
        return a.odd < b.odd;
    }
};

// sign of moving the odd word for mask B through the odd word for mask A
// (masks assumed disjoint): (-1)^{#{(a,b): a in A, b in B, a > b}}
int koszul_sign(std::uint32_t a, std::uint32_t b);

class SuperPolynomial {
public:
    SuperPolynomial() = default;
    SuperPolynomial(Ctx ctx, int n) : ctx_(ctx), n_(n) {}

    static SuperPolynomial zero(Ctx ctx, int n) { return SuperPolynomial(ctx, n); }
    static SuperPolynomial constant(Ctx ctx, int n, const Rat& c);
    static SuperPolynomial even_gen(Ctx ctx, int n, int idx);    // 0-based
    static SuperPolynomial odd_gen(Ctx ctx, int n, int idx);     // 0-based
    static SuperPolynomial central_gen(Ctx ctx, int n);          // STG only
    static SuperPolynomial from_monomial(Ctx ctx, int n, Monomial m, const Rat& c);

    Ctx ctx() const { return ctx_; }
    int n() const { return n_; }
    int n_even_slots() const;
    bool is_zero() const { return terms_.empty(); }
    int max_weighted_degree() const;
    int max_even_degree() const;

    const std::map<Monomial, Rat, MonomialLess>& terms() const { return terms_; }
    Rat coeff(const Monomial& m) const;

    void add_term(const Monomial& m, const Rat& c);

    SuperPolynomial operator+(const SuperPolynomial& o) const;
    SuperPolynomial operator-(const SuperPolynomial& o) const;
    SuperPolynomial operator-() const;
    SuperPolynomial operator*(const SuperPolynomial& o) const; // supercommutative product
    SuperPolynomial operator*(const Rat& c) const;
    SuperPolynomial pow(int k) const;
    bool operator==(const SuperPolynomial& o) const;

    // partial derivative with respect to even generator idx
    SuperPolynomial d_even(int idx) const;
    // odd contraction d/d(theta_idx), acting as an odd derivation
    SuperPolynomial d_odd(int idx) const;

    // algebra morphism determined by generator images (even images must be even
    // elements of the target, odd images odd); central image used for STG
    SuperPolynomial apply_morphism(const std::vector<SuperPolynomial>& even_images,
                                   const std::vector<SuperPolynomial>& odd_images) const;

    std::string to_string() const;

private:
    void check_compatible(const SuperPolynomial& o) const;
    Ctx ctx_ = Ctx::W;
    int n_ = 0;
    std::map<Monomial, Rat, MonomialLess> terms_;
};

inline SuperPolynomial operator*(const Rat& c, const SuperPolynomial& p) { return p * c; }

// variable changes between the presentations (Eq. tau0 and sigma0 of the text)
SuperPolynomial tau0(const QuadraticLieAlgebra& g, const SuperPolynomial& p);          // WK -> W
SuperPolynomial tau0_inverse(const QuadraticLieAlgebra& g, const SuperPolynomial& p);  // W -> WK
SuperPolynomial sigma0(const QuadraticLieAlgebra& g, const SuperPolynomial& p);        // STG -> W
// inverse of sigma0 on the c-free subalgebra
SuperPolynomial sigma0_inverse(const QuadraticLieAlgebra& g, const SuperPolynomial& p); // W -> STG

// all monomials of the context with weighted degree <= (or ==) d
std::vector<Monomial> monomials_up_to(Ctx ctx, int n, int d);
std::vector<Monomial> monomials_of_degree(Ctx ctx, int n, int d);

// shared expression grammar, restricted to the context's generator alphabet
SuperPolynomial parse_element(const std::string& src, Ctx ctx, int n);

} // namespace weilforge

#endif
