#ifndef WEILFORGE_DIAGRAMS_HPP
#define WEILFORGE_DIAGRAMS_HPP

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "weilforge/liealg.hpp"
#include "weilforge/ncweil.hpp"
#include "weilforge/report.hpp"
#include "weilforge/superpoly.hpp"

namespace weilforge {

enum class LegLabel { Plain, Even, Odd, Super };

const char* leg_label_name(LegLabel l);

// A vertex-oriented uni-trivalent graph.  Internal vertex v owns slots
// 3v, 3v+1, 3v+2 in cyclic order; leg i owns slot 3*n_internal + i.  `mate` is
// a perfect matching on slots.  The stored leg order is the sign convention for
// odd-labeled legs; based diagrams carry the attachment order along the line.
struct Diagram {
    struct Leg {
        std::string color;
        LegLabel label = LegLabel::Plain;
    };

    int n_internal = 0;
    std::vector<Leg> legs;
    std::vector<int> mate;
    bool based = false;
    std::vector<int> base_order; // leg indices in line order

    int total_slots() const { return 3 * n_internal + static_cast<int>(legs.size()); }
    int leg_slot(int i) const { return 3 * n_internal + i; }
    bool slot_is_leg(int s) const { return s >= 3 * n_internal; }
    int slot_leg_index(int s) const { return s - 3 * n_internal; }
    // degree = half the number of vertices (trivalent + univalent)
    int degree2x() const { return n_internal + static_cast<int>(legs.size()); }
    bool has_strut() const;
    void validate() const;
};

Diagram make_wheel(int spokes, LegLabel label = LegLabel::Plain, const std::string& color = "");
// cut the wheel open at leg `leg_index`: the leg and its vertex disappear, the
// two ring edges become odd legs (stored next-side end first)
Diagram split_at_leg(const Diagram& wheel, int leg_index);

// canonical form: relabeled representative, its encoding key, and the sign of
// the odd-leg permutation from the stored order to the canonical order
struct CanonicalForm {
    Diagram diagram;
    std::string key;
    int sign = 1;
};
CanonicalForm canonicalize(const Diagram& d);

class DiagramCombo {
public:
    DiagramCombo() = default;
    explicit DiagramCombo(const Diagram& d, const Rat& c = Rat(1)) { add(d, c); }
    static DiagramCombo empty_diagram(); // the unit: one empty diagram, coefficient 1

    void add(const Diagram& d, const Rat& c);
    bool is_zero() const { return terms_.empty(); }
    std::size_t size() const { return terms_.size(); }
    const std::map<std::string, std::pair<Diagram, Rat>>& terms() const { return terms_; }

    DiagramCombo operator+(const DiagramCombo& o) const;
    DiagramCombo operator-(const DiagramCombo& o) const;
    DiagramCombo operator*(const Rat& c) const;
    bool operator==(const DiagramCombo& o) const;
    std::string to_string() const;

private:
    std::map<std::string, std::pair<Diagram, Rat>> terms_;
};

Diagram disjoint_union(const Diagram& a, const Diagram& b);
DiagramCombo disjoint_union(const DiagramCombo& a, const DiagramCombo& b);
Diagram connect_sum_based(const Diagram& a, const Diagram& b);
DiagramCombo connect_sum_based(const DiagramCombo& a, const DiagramCombo& b);

DiagramCombo recolor_all(const DiagramCombo& c, const std::string& color);
// sum of the 2^legs colorings by {x, y}, ignoring the original coloring
DiagramCombo delta_coloring(const DiagramCombo& c, const std::string& x, const std::string& y);

// <C, D>: glue all legs of C to all legs of D (0 when counts differ); C strut-free
DiagramCombo inner_product(const DiagramCombo& c, const DiagramCombo& d);
// d_C(D): glue all legs of C to some legs of D; C strut-free
DiagramCombo apply_partial(const DiagramCombo& c, const DiagramCombo& d);

// d_Gamma: average the 1/k!-weighted attachments of all legs to the based line
DiagramCombo gamma_apply(const DiagramCombo& c);

// splitting derivative: kills connected non-wheels, multiplicative on unions
DiagramCombo split_P(const DiagramCombo& c);

// wheel series exp(sum b_{2k} w_{2k}) truncated at degree trunc
DiagramCombo omega(int trunc, LegLabel label = LegLabel::Plain, const std::string& color = "");
// split-wheel series exp(sum b_{2k} P(w_{2k})) truncated; equals split_P(omega)
DiagramCombo psi(int trunc, const std::string& color = "");

// weight-system evaluation over a quadratic Lie algebra (identity metric):
// unbased diagrams land in W (plain/even legs -> v, odd legs -> theta in stored
// order), based diagrams land in W~ (u resp. xi, multiplied in base order).
SuperPolynomial evaluate(const Diagram& d, const QuadraticLieAlgebra& g);
SuperPolynomial evaluate(const DiagramCombo& c, const QuadraticLieAlgebra& g);
NormalOrderedElement evaluate_based(const Diagram& d, const QuadraticLieAlgebra& g);
NormalOrderedElement evaluate_based(const DiagramCombo& c, const QuadraticLieAlgebra& g);

// wheeling maps Phi = d_Gamma . d_Omega and Phi~ = d_Gamma . d_Omega . d_Psi
DiagramCombo wheeling_phi(const DiagramCombo& d, int trunc);
DiagramCombo wheeling_phi_tilde(const DiagramCombo& d, int trunc);

// evaluate(Phi(D1 u D2)) = evaluate(Phi(D1)) evaluate(Phi(D2)) in U(g)
Report wheeling_check(const QuadraticLieAlgebra& g, const DiagramCombo& d1,
                      const DiagramCombo& d2, int trunc);
Report wheeling_tilde_check(const QuadraticLieAlgebra& g, const DiagramCombo& d1,
                            const DiagramCombo& d2, int trunc);

// diagram file format (see README): vertex/leg/base_order lines over edge ids
Diagram parse_diagram(std::istream& in);
Diagram parse_diagram_file(const std::string& path);

} // namespace weilforge

#endif
