#ifndef WEILFORGE_LIEALG_HPP
#define WEILFORGE_LIEALG_HPP

#include <iosfwd>
#include <string>
#include <vector>

#include "weilforge/errors.hpp"
#include "weilforge/rational.hpp"

namespace weilforge {

using RatMatrix = std::vector<std::vector<Rat>>;

// Raw description as read from an algebra spec file.  Brackets are given one
// orientation per pair; antisymmetric completion happens in load_algebra.
struct AlgebraSpec {
    std::string name;
    int dim = 0;
    // [e_a, e_b] contains coeff * e_c, 1-based indices.
    struct BracketEntry { int a, b, c; Rat coeff; };
    std::vector<BracketEntry> brackets;
    bool metric_identity = true;
    RatMatrix metric; // used when !metric_identity
};

class QuadraticLieAlgebra {
public:
    QuadraticLieAlgebra() = default;

    int dim() const { return n_; }
    const std::string& name() const { return name_; }
    bool metric_is_identity() const { return metric_identity_; }

    // Structure constants [e_a, e_b] = sum_c f(a,b,c) e_c, 0-based.
    const Rat& f(int a, int b, int c) const { return f_[(a * n_ + b) * n_ + c]; }
    // Metric t_ab, 0-based.
    const Rat& metric(int a, int b) const { return t_[a * n_ + b]; }
    // Fully lowered f_abc = sum_k f(a,b,k) t_kc; equals f(a,b,c) for identity metric.
    Rat f_lowered(int a, int b, int c) const;

    // Matrix of ad_x in the basis convention [x, e_b] = sum_a (ad_x)_{ab} e_a.
    RatMatrix adjoint_matrix(const std::vector<Rat>& x) const;

    friend QuadraticLieAlgebra load_algebra(const AlgebraSpec& spec);

private:
    int n_ = 0;
    std::string name_;
    std::vector<Rat> f_; // n^3, f_[(a n + b) n + c] = f_ab^c
    std::vector<Rat> t_; // n^2
    bool metric_identity_ = true;
};

// Validates all QuadraticLieAlgebra invariants; throws on violation.
QuadraticLieAlgebra load_algebra(const AlgebraSpec& spec);

// Parses the textual algebra spec format (see README) and loads it.
QuadraticLieAlgebra load_algebra_file(const std::string& path);
AlgebraSpec parse_algebra_spec(std::istream& in);

// Convenience constructors used throughout the tests.
QuadraticLieAlgebra make_so3();
QuadraticLieAlgebra make_abelian(int n);
QuadraticLieAlgebra make_so3_plus_so3(); // so(4) = so(3) (+) so(3)

// The odd double T~g[1]: generators e_1..e_n (even), eb_1..eb_n (odd), c (even, central).
class SuperLieAlgebra {
public:
    int even_dim() const { return n_even_; }
    int odd_dim() const { return n_odd_; }
    bool has_central() const { return central_; }
    int total_dim() const { return n_even_ + n_odd_ + (central_ ? 1 : 0); }
    int parity(int i) const { return parity_[i]; } // 0 even, 1 odd
    int central_index() const { return central_ ? total_dim() - 1 : -1; }

    // coefficient of g_k in [g_i, g_j]
    const Rat& bracket(int i, int j, int k) const {
        return br_[(i * total_dim() + j) * total_dim() + k];
    }

    RatMatrix adjoint_matrix(const std::vector<Rat>& x) const;
    // [str(ad_x^1), ..., str(ad_x^kmax)]
    std::vector<Rat> supertrace_powers(const std::vector<Rat>& x, int kmax) const;

    // Checks super antisymmetry and the super Jacobi identity on all generator
    // pairs/triples; throws JacobiViolation on failure.
    void verify_super_structure() const;

    friend SuperLieAlgebra build_odd_double(const QuadraticLieAlgebra& g);

private:
    int n_even_ = 0, n_odd_ = 0;
    bool central_ = false;
    std::vector<int> parity_;
    std::vector<Rat> br_;
    Rat& br(int i, int j, int k) { return br_[(i * total_dim() + j) * total_dim() + k]; }
};

SuperLieAlgebra build_odd_double(const QuadraticLieAlgebra& g);

Rat supertrace(const SuperLieAlgebra& s, const RatMatrix& m);
RatMatrix mat_mul(const RatMatrix& a, const RatMatrix& b);

} // namespace weilforge

#endif
