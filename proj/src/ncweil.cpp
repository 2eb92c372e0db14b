#include "weilforge/ncweil.hpp"

#include <algorithm>
#include <sstream>

#include "weilforge/parser.hpp"

namespace weilforge {

const char* nctx_name(NCtx c) {
    switch (c) {
        case NCtx::CL: return "CL";
        case NCtx::U: return "U";
        case NCtx::NW: return "NW";
        case NCtx::NWK: return "NWK";
        case NCtx::UTG: return "UTG";
    }
    return "?";
}

namespace {

struct NShape {
    bool has_even, has_odd;
    bool even_odd_commute; // [x_a, xi_b] = 0
    const char* even_name;
    const char* odd_name;
};

NShape nshape(NCtx c) {
    switch (c) {
        case NCtx::CL: return {false, true, true, "", "xi"};
        case NCtx::U: return {true, false, true, "u", ""};
        case NCtx::NW: return {true, true, true, "u", "xi"};
        case NCtx::NWK: return {true, true, false, "uh", "xi"};
        case NCtx::UTG: return {true, true, false, "e", "eb"};
    }
    return {false, false, true, "", ""};
}

using TermMap = std::map<Monomial, Rat, MonomialLess>;

void accum(TermMap& t, const Monomial& m, const Rat& c) {
    if (c == 0) return;
    auto [it, inserted] = t.emplace(m, c);
    if (!inserted) {
        it->second += c;
        if (it->second == 0) t.erase(it);
    }
}

// Clifford normalization of an odd word given as a letter sequence.
// Relations: xi_i xi_j + xi_j xi_i = t_ij  (in particular xi_i^2 = t_ii / 2).
// Strategy of the design notes: repeatedly fix the leftmost out-of-order pair.
void normal_odd_word(const QuadraticLieAlgebra& g, const std::vector<int>& w, const Rat& coeff,
                     TermMap& out, const std::vector<int>& even_block) {
    std::size_t i = 0;
    for (; i + 1 < w.size(); ++i)
        if (w[i] >= w[i + 1]) break;
    if (w.size() < 2 || i + 1 >= w.size()) {
        Monomial m;
        m.even = even_block;
        m.odd = 0;
        for (int letter : w) m.odd |= 1u << letter;
        accum(out, m, coeff);
        return;
    }
    int a = w[i], b = w[i + 1];
    auto without_pair = [&] {
        std::vector<int> w2;
        w2.reserve(w.size() - 2);
        w2.insert(w2.end(), w.begin(), w.begin() + i);
        w2.insert(w2.end(), w.begin() + i + 2, w.end());
        return w2;
    };
    if (a == b) {
        Rat t = g.metric(a, a);
        if (t != 0) normal_odd_word(g, without_pair(), coeff * t / 2, out, even_block);
        return;
    }
    std::vector<int> swapped = w;
    std::swap(swapped[i], swapped[i + 1]);
    normal_odd_word(g, swapped, -coeff, out, even_block);
    Rat t = g.metric(a, b);
    if (t != 0) normal_odd_word(g, without_pair(), coeff * t, out, even_block);
}

struct Rewriter {
    const QuadraticLieAlgebra& g;
    NShape sh;

    // (E,S).x_j with x_j appended at the right end of the even block
    void append_even(const Monomial& m, const Rat& c, int j, TermMap& out) const {
        even_insert(m.even, j, c, m.odd, out);
    }

    // x^E x_j -> PBW straightening, odd mask carried along untouched
    void even_insert(const std::vector<int>& E, int j, const Rat& c, std::uint32_t odd,
                     TermMap& out) const {
        int last = -1;
        for (int i = static_cast<int>(E.size()) - 1; i >= 0; --i)
            if (E[i] > 0) { last = i; break; }
        if (last <= j) {
            Monomial m;
            m.even = E;
            m.even[j] += 1;
            m.odd = odd;
            accum(out, m, c);
            return;
        }
        std::vector<int> Ep = E;
        Ep[last] -= 1;
        // x^E x_j = (x^{E'} x_j) x_last + sum_c f(last,j,c) x^{E'} x_c
        TermMap tmp;
        even_insert(Ep, j, c, odd, tmp);
        for (const auto& [m2, c2] : tmp) even_insert(m2.even, last, c2, m2.odd, out);
        for (int cc = 0; cc < g.dim(); ++cc) {
            const Rat& fv = g.f(last, j, cc);
            if (fv != 0) even_insert(Ep, cc, c * fv, odd, out);
        }
    }

    // (E,S).xi_j : move xi_j leftwards through the even block x^E, then join the
    // odd block from the right.
    void append_odd(const Monomial& m, const Rat& c, int j, TermMap& out) const {
        if (sh.even_odd_commute) {
            odd_append(m.even, m.odd, j, c, out);
            return;
        }
        int last = -1;
        for (int i = static_cast<int>(m.even.size()) - 1; i >= 0; --i)
            if (m.even[i] > 0) { last = i; break; }
        if (last < 0) {
            odd_append(m.even, m.odd, j, c, out);
            return;
        }
        Monomial mp = m;
        mp.even[last] -= 1;
        // x^E xi_j = (x^{E'} xi_j) x_last + sum_c f(last,j,c) x^{E'} xi_c
        TermMap tmp;
        append_odd(mp, c, j, tmp);
        for (const auto& [m2, c2] : tmp) even_insert(m2.even, last, c2, m2.odd, out);
        for (int cc = 0; cc < g.dim(); ++cc) {
            const Rat& fv = g.f(last, j, cc);
            if (fv != 0) append_odd(mp, c * fv, cc, out);
        }
    }

    // xi^S xi_j with xi_j at the right end of the odd block
    void odd_append(const std::vector<int>& E, std::uint32_t S, int j, const Rat& c,
                    TermMap& out) const {
        std::vector<int> letters;
        for (int b = 0; b < 32; ++b)
            if (S & (1u << b)) letters.push_back(b);
        letters.push_back(j);
        normal_odd_word(g, letters, c, out, E);
    }
};

} // namespace

NormalOrderedElement NormalOrderedElement::zero(NCtx ctx, const QuadraticLieAlgebra* g) {
    return NormalOrderedElement(ctx, g);
}

NormalOrderedElement NormalOrderedElement::constant(NCtx ctx, const QuadraticLieAlgebra* g,
                                                    const Rat& c) {
    NormalOrderedElement e(ctx, g);
    Monomial m;
    m.even.assign(g->dim(), 0);
    e.add_term(m, c);
    return e;
}

NormalOrderedElement NormalOrderedElement::even_gen(NCtx ctx, const QuadraticLieAlgebra* g,
                                                    int idx) {
    if (!nshape(ctx).has_even)
        throw ContextMismatch(std::string(nctx_name(ctx)) + " has no even generators");
    NormalOrderedElement e(ctx, g);
    Monomial m;
    m.even.assign(g->dim(), 0);
    m.even[idx] = 1;
    e.add_term(m, Rat(1));
    return e;
}

NormalOrderedElement NormalOrderedElement::odd_gen(NCtx ctx, const QuadraticLieAlgebra* g,
                                                   int idx) {
    if (!nshape(ctx).has_odd)
        throw ContextMismatch(std::string(nctx_name(ctx)) + " has no odd generators");
    NormalOrderedElement e(ctx, g);
    Monomial m;
    m.even.assign(g->dim(), 0);
    m.odd = 1u << idx;
    e.add_term(m, Rat(1));
    return e;
}

NormalOrderedElement NormalOrderedElement::from_monomial(NCtx ctx, const QuadraticLieAlgebra* g,
                                                         const Monomial& m, const Rat& c) {
    NormalOrderedElement e(ctx, g);
    e.add_term(m, c);
    return e;
}

Rat NormalOrderedElement::coeff(const Monomial& m) const {
    auto it = terms_.find(m);
    return it == terms_.end() ? Rat(0) : it->second;
}

void NormalOrderedElement::add_term(const Monomial& m, const Rat& c) {
    accum(terms_, m, c);
}

int NormalOrderedElement::filtration_degree() const {
    int d = 0;
    for (const auto& [m, c] : terms_) d = std::max(d, m.weighted_degree());
    return d;
}

NormalOrderedElement NormalOrderedElement::operator+(const NormalOrderedElement& o) const {
    if (ctx_ != o.ctx_ || g_ != o.g_) throw ContextMismatch("nc context mismatch in +");
    NormalOrderedElement r = *this;
    for (const auto& [m, c] : o.terms_) r.add_term(m, c);
    return r;
}

NormalOrderedElement NormalOrderedElement::operator-(const NormalOrderedElement& o) const {
    if (ctx_ != o.ctx_ || g_ != o.g_) throw ContextMismatch("nc context mismatch in -");
    NormalOrderedElement r = *this;
    for (const auto& [m, c] : o.terms_) r.add_term(m, -c);
    return r;
}

NormalOrderedElement NormalOrderedElement::operator-() const {
    NormalOrderedElement r(ctx_, g_);
    for (const auto& [m, c] : terms_) r.terms_.emplace(m, -c);
    return r;
}

NormalOrderedElement NormalOrderedElement::operator*(const Rat& c) const {
    NormalOrderedElement r(ctx_, g_);
    if (c == 0) return r;
    for (const auto& [m, v] : terms_) r.terms_.emplace(m, v * c);
    return r;
}

bool NormalOrderedElement::operator==(const NormalOrderedElement& o) const {
    return ctx_ == o.ctx_ && g_ == o.g_ && terms_ == o.terms_;
}

NormalOrderedElement nc_multiply(const NormalOrderedElement& a, const NormalOrderedElement& b) {
    if (a.ctx() != b.ctx() || a.algebra() != b.algebra())
        throw ContextMismatch("nc context mismatch in multiply");
    const QuadraticLieAlgebra& g = *a.algebra();
    Rewriter rw{g, nshape(a.ctx())};
    NormalOrderedElement out(a.ctx(), a.algebra());
    TermMap result;
    for (const auto& [mb, cb] : b.terms()) {
        // right factor denotes xi^{S_b} x^{E_b}: append its letters in that order
        std::vector<std::pair<bool, int>> letters; // (is_odd, index)
        for (int i = 0; i < 32; ++i)
            if (mb.odd & (1u << i)) letters.emplace_back(true, i);
        for (std::size_t i = 0; i < mb.even.size(); ++i)
            for (int k = 0; k < mb.even[i]; ++k) letters.emplace_back(false, static_cast<int>(i));
        TermMap cur;
        for (const auto& [ma, ca] : a.terms()) accum(cur, ma, ca * cb);
        for (const auto& [is_odd, idx] : letters) {
            TermMap next;
            for (const auto& [m, c] : cur) {
                if (is_odd)
                    rw.append_odd(m, c, idx, next);
                else
                    rw.append_even(m, c, idx, next);
            }
            cur = std::move(next);
        }
        for (const auto& [m, c] : cur) accum(result, m, c);
    }
    for (const auto& [m, c] : result) out.add_term(m, c);
    return out;
}

NormalOrderedElement nc_power(const NormalOrderedElement& a, int k) {
    NormalOrderedElement r = NormalOrderedElement::constant(a.ctx(), a.algebra(), Rat(1));
    for (int i = 0; i < k; ++i) r = nc_multiply(r, a);
    return r;
}

NormalOrderedElement odd_bracket(const NormalOrderedElement& a, const NormalOrderedElement& b) {
    // split into parity-homogeneous parts and use [x,y] = xy - (-1)^{|x||y|} yx
    NormalOrderedElement out(a.ctx(), a.algebra());
    NormalOrderedElement parts_a[2] = {NormalOrderedElement(a.ctx(), a.algebra()),
                                       NormalOrderedElement(a.ctx(), a.algebra())};
    NormalOrderedElement parts_b[2] = {NormalOrderedElement(b.ctx(), b.algebra()),
                                       NormalOrderedElement(b.ctx(), b.algebra())};
    for (const auto& [m, c] : a.terms()) parts_a[m.odd_count() & 1].add_term(m, c);
    for (const auto& [m, c] : b.terms()) parts_b[m.odd_count() & 1].add_term(m, c);
    for (int pa = 0; pa < 2; ++pa)
        for (int pb = 0; pb < 2; ++pb) {
            if (parts_a[pa].is_zero() || parts_b[pb].is_zero()) continue;
            NormalOrderedElement ab = nc_multiply(parts_a[pa], parts_b[pb]);
            NormalOrderedElement ba = nc_multiply(parts_b[pb], parts_a[pa]);
            out = out + (pa == 1 && pb == 1 ? ab + ba : ab - ba);
        }
    return out;
}

NormalOrderedElement chevalley_q(const QuadraticLieAlgebra& g, const SuperPolynomial& p) {
    if (p.ctx() != Ctx::EXT) throw NotPurelyOdd("chevalley_q expects a Lambda(g) element");
    NormalOrderedElement out(NCtx::CL, &g);
    for (const auto& [m, c] : p.terms()) {
        if (m.even_degree() != 0) throw NotPurelyOdd("element has even part");
        Monomial w;
        w.even.assign(g.dim(), 0);
        w.odd = m.odd;
        out.add_term(w, c);
    }
    return out;
}

SuperPolynomial symbol(const NormalOrderedElement& a) {
    if (a.ctx() != NCtx::CL) throw ContextMismatch("symbol expects a Cl(g) element");
    const QuadraticLieAlgebra& g = *a.algebra();
    const int n = g.dim();
    SuperPolynomial out(Ctx::EXT, n);
    for (const auto& [m, c] : a.terms()) {
        // rho(xi_{s1} ... xi_{sk}) . 1, letters applied right to left
        SuperPolynomial alpha = SuperPolynomial::constant(Ctx::EXT, n, Rat(1));
        std::vector<int> letters;
        for (int b = 0; b < 32; ++b)
            if (m.odd & (1u << b)) letters.push_back(b);
        for (auto it = letters.rbegin(); it != letters.rend(); ++it) {
            int j = *it;
            SuperPolynomial next = SuperPolynomial::odd_gen(Ctx::EXT, n, j) * alpha;
            for (int b = 0; b < n; ++b) {
                const Rat& t = g.metric(j, b);
                if (t != 0) next = next + alpha.d_odd(b) * (t / 2);
            }
            alpha = next;
        }
        out = out + alpha * c;
    }
    return out;
}

NormalOrderedElement pbw_chi(const QuadraticLieAlgebra& g, const SuperPolynomial& p) {
    NCtx target;
    if (p.ctx() == Ctx::SG) target = NCtx::U;
    else if (p.ctx() == Ctx::STG) target = NCtx::UTG;
    else throw ContextMismatch("pbw_chi expects an S(g) or S(T~g[1]) element");
    const int n = g.dim();
    Rewriter rw{g, nshape(target)};
    NormalOrderedElement out(target, &g);
    for (const auto& [m, c] : p.terms()) {
        // letters: even j -> j, odd j -> n + j; c-exponent evaluates to 1
        std::vector<int> letters;
        for (int i = 0; i < n; ++i)
            for (int k = 0; k < m.even[i]; ++k) letters.push_back(i);
        std::vector<int> odd_orig;
        for (int b = 0; b < n; ++b)
            if (m.odd & (1u << b)) {
                letters.push_back(n + b);
                odd_orig.push_back(n + b);
            }
        const int k = static_cast<int>(letters.size());
        if (k == 0) {
            Monomial mm;
            mm.even.assign(n, 0);
            out.add_term(mm, c);
            continue;
        }
        Rat mult_fact = 1;
        {
            int run = 1;
            for (std::size_t i = 1; i < letters.size(); ++i) {
                if (letters[i] == letters[i - 1]) ++run;
                else run = 1;
                mult_fact *= run; // product of factorials of multiplicities
            }
        }
        Rat kfact = 1;
        for (int i = 2; i <= k; ++i) kfact *= i;
        std::vector<int> perm = letters; // sorted ascending already
        TermMap sum;
        do {
            // Koszul sign: parity of the odd subsequence relative to ascending order
            std::vector<int> odds;
            for (int v : perm)
                if (v >= n) odds.push_back(v);
            int inv = 0;
            for (std::size_t i = 0; i < odds.size(); ++i)
                for (std::size_t j = i + 1; j < odds.size(); ++j)
                    if (odds[i] > odds[j]) ++inv;
            Rat sgn = (inv & 1) ? -1 : 1;
            // build the word by successive appends
            Monomial id;
            id.even.assign(n, 0);
            TermMap cur;
            cur.emplace(id, sgn * c);
            for (int v : perm) {
                TermMap next;
                for (const auto& [mm, cc] : cur) {
                    if (v >= n) rw.append_odd(mm, cc, v - n, next);
                    else rw.append_even(mm, cc, v, next);
                }
                cur = std::move(next);
            }
            for (const auto& [mm, cc] : cur) accum(sum, mm, cc);
        } while (std::next_permutation(perm.begin(), perm.end()));
        for (const auto& [mm, cc] : sum) out.add_term(mm, cc * mult_fact / kfact);
    }
    return out;
}

namespace {

NormalOrderedElement apply_nc_morphism(const NormalOrderedElement& a, NCtx target,
                                       const std::vector<NormalOrderedElement>& even_images,
                                       const std::vector<NormalOrderedElement>& odd_images) {
    const QuadraticLieAlgebra* g = a.algebra();
    NormalOrderedElement out(target, g);
    for (const auto& [m, c] : a.terms()) {
        // monomial denotes xi^S x^E: multiply images in that order
        NormalOrderedElement word = NormalOrderedElement::constant(target, g, c);
        for (int b = 0; b < 32; ++b)
            if (m.odd & (1u << b)) word = nc_multiply(word, odd_images.at(b));
        for (std::size_t i = 0; i < m.even.size(); ++i)
            for (int k = 0; k < m.even[i]; ++k) word = nc_multiply(word, even_images.at(i));
        out = out + word;
    }
    return out;
}

// u_a - 1/2 f_abc xi_b xi_c as an NW element (identity/diagonal metric)
NormalOrderedElement hatted_nc_image(const QuadraticLieAlgebra& g, int a) {
    const int n = g.dim();
    NormalOrderedElement img = NormalOrderedElement::even_gen(NCtx::NW, &g, a);
    for (int b = 0; b < n; ++b)
        for (int c = b + 1; c < n; ++c) {
            Rat fv = g.f_lowered(a, b, c) - g.f_lowered(a, c, b); // both letter orders sorted
            if (fv == 0) continue;
            Monomial m;
            m.even.assign(n, 0);
            m.odd = (1u << b) | (1u << c);
            img.add_term(m, Rat(-1, 2) * fv);
        }
    return img;
}

} // namespace

NormalOrderedElement tau1(const NormalOrderedElement& a) {
    if (a.ctx() != NCtx::NWK) throw ContextMismatch("tau1 expects an NWK element");
    const QuadraticLieAlgebra& g = *a.algebra();
    const int n = g.dim();
    std::vector<NormalOrderedElement> ev, od;
    for (int i = 0; i < n; ++i) ev.push_back(hatted_nc_image(g, i));
    for (int i = 0; i < n; ++i) od.push_back(NormalOrderedElement::odd_gen(NCtx::NW, &g, i));
    return apply_nc_morphism(a, NCtx::NW, ev, od);
}

NormalOrderedElement tau1_inverse(const NormalOrderedElement& a) {
    if (a.ctx() != NCtx::NW) throw ContextMismatch("tau1_inverse expects an NW element");
    const QuadraticLieAlgebra& g = *a.algebra();
    const int n = g.dim();
    std::vector<NormalOrderedElement> ev, od;
    for (int i = 0; i < n; ++i) {
        // u_a = uh_a + 1/2 f_abc xi_b xi_c
        NormalOrderedElement img = NormalOrderedElement::even_gen(NCtx::NWK, &g, i);
        for (int b = 0; b < n; ++b)
            for (int c = b + 1; c < n; ++c) {
                Rat fv = g.f_lowered(i, b, c) - g.f_lowered(i, c, b);
                if (fv == 0) continue;
                Monomial m;
                m.even.assign(n, 0);
                m.odd = (1u << b) | (1u << c);
                img.add_term(m, fv / 2);
            }
        ev.push_back(img);
    }
    for (int i = 0; i < n; ++i) od.push_back(NormalOrderedElement::odd_gen(NCtx::NWK, &g, i));
    return apply_nc_morphism(a, NCtx::NWK, ev, od);
}

NormalOrderedElement sigma1(const NormalOrderedElement& a) {
    if (a.ctx() != NCtx::UTG) throw ContextMismatch("sigma1 expects a U(T~g[1]) element");
    const QuadraticLieAlgebra& g = *a.algebra();
    const int n = g.dim();
    std::vector<NormalOrderedElement> ev, od;
    for (int i = 0; i < n; ++i) ev.push_back(hatted_nc_image(g, i));
    for (int i = 0; i < n; ++i) od.push_back(NormalOrderedElement::odd_gen(NCtx::NW, &g, i));
    return apply_nc_morphism(a, NCtx::NW, ev, od);
}

std::string NormalOrderedElement::to_string() const {
    if (terms_.empty()) return "0";
    NShape sh = nshape(ctx_);
    bool odd_first = !sh.even_odd_commute;
    std::ostringstream os;
    bool first = true;
    for (const auto& [m, c] : terms_) {
        Rat ac = abs(c);
        if (first) {
            if (c < 0) os << "-";
            first = false;
        } else {
            os << (c < 0 ? " - " : " + ");
        }
        std::vector<std::string> factors;
        if (ac != 1 || (m.even_degree() == 0 && m.odd == 0)) factors.push_back(rat_to_string(ac));
        auto emit_odd = [&] {
            for (int i = 0; i < 32; ++i)
                if (m.odd & (1u << i))
                    factors.push_back(std::string(sh.odd_name) + std::to_string(i + 1));
        };
        auto emit_even = [&] {
            for (std::size_t i = 0; i < m.even.size(); ++i)
                if (m.even[i] > 0) {
                    std::string f = std::string(sh.even_name) + std::to_string(i + 1);
                    if (m.even[i] > 1) f += "^" + std::to_string(m.even[i]);
                    factors.push_back(f);
                }
        };
        if (odd_first) { emit_odd(); emit_even(); }
        else { emit_even(); emit_odd(); }
        for (std::size_t i = 0; i < factors.size(); ++i) {
            if (i) os << "*";
            os << factors[i];
        }
    }
    return os.str();
}

namespace {

struct NcBuilder {
    using Element = NormalOrderedElement;
    NCtx ctx;
    const QuadraticLieAlgebra* g;
    Element constant(const Rat& c) { return NormalOrderedElement::constant(ctx, g, c); }
    bool generator_is_odd(const std::string& name) { return name == "xi" || name == "eb"; }
    Element generator(const std::string& name, int index) {
        NShape sh = nshape(ctx);
        auto range_check = [&] {
            if (index < 1 || index > g->dim())
                throw IndexOutOfRange("generator " + name + std::to_string(index) +
                                      " out of range 1.." + std::to_string(g->dim()));
        };
        if (sh.has_even && name == sh.even_name) {
            range_check();
            return NormalOrderedElement::even_gen(ctx, g, index - 1);
        }
        if (sh.has_odd && name == sh.odd_name) {
            range_check();
            return NormalOrderedElement::odd_gen(ctx, g, index - 1);
        }
        throw UnknownGenerator("'" + name + "' is not a generator of context " +
                               std::string(nctx_name(ctx)));
    }
    Element add(const Element& a, const Element& b) { return a + b; }
    Element sub(const Element& a, const Element& b) { return a - b; }
    Element mul(const Element& a, const Element& b) { return nc_multiply(a, b); }
    Element power(const Element& a, int k) { return nc_power(a, k); }
};

} // namespace

NormalOrderedElement parse_nc_element(const std::string& src, NCtx ctx,
                                      const QuadraticLieAlgebra* g) {
    NcBuilder b{ctx, g};
    return parse_expression(src, b);
}

std::vector<Monomial> nc_monomials_up_to(NCtx ctx, int n, int d) {
    // same shapes as the commutative contexts
    Ctx shape_ctx;
    switch (ctx) {
        case NCtx::CL: shape_ctx = Ctx::EXT; break;
        case NCtx::U: shape_ctx = Ctx::SG; break;
        default: shape_ctx = Ctx::W; break;
    }
    return monomials_up_to(shape_ctx, n, d);
}

} // namespace weilforge
