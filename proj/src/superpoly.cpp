#include "weilforge/superpoly.hpp"

#include <algorithm>
#include <sstream>

#include "weilforge/parser.hpp"

namespace weilforge {

const char* ctx_name(Ctx c) {
    switch (c) {
        case Ctx::W: return "W";
        case Ctx::WK: return "WK";
        case Ctx::STG: return "STG";
        case Ctx::SG: return "SG";
        case Ctx::EXT: return "EXT";
    }
    return "?";
}

namespace {

struct CtxShape {
    int n_even;       // without central
    bool has_central;
    int n_odd;
    const char* even_name;
    const char* odd_name;
};

CtxShape shape(Ctx c, int n) {
    switch (c) {
        case Ctx::W: return {n, false, n, "v", "th"};
        case Ctx::WK: return {n, false, n, "vh", "th"};
        case Ctx::STG: return {n, true, n, "e", "eb"};
        case Ctx::SG: return {n, false, 0, "e", ""};
        case Ctx::EXT: return {0, false, n, "", "eb"};
    }
    return {0, false, 0, "", ""};
}

} // namespace

int koszul_sign(std::uint32_t a, std::uint32_t b) {
    int swaps = 0;
    std::uint32_t bb = b;
    while (bb) {
        int bit = __builtin_ctz(bb);
        bb &= bb - 1;
        swaps += __builtin_popcount(a >> (bit + 1));
    }
    return (swaps & 1) ? -1 : 1;
}

int SuperPolynomial::n_even_slots() const {
    CtxShape s = shape(ctx_, n_);
    return s.n_even + (s.has_central ? 1 : 0);
}

SuperPolynomial SuperPolynomial::constant(Ctx ctx, int n, const Rat& c) {
    SuperPolynomial p(ctx, n);
    Monomial m;
    m.even.assign(p.n_even_slots(), 0);
    p.add_term(m, c);
    return p;
}

SuperPolynomial SuperPolynomial::from_monomial(Ctx ctx, int n, Monomial m, const Rat& c) {
    SuperPolynomial p(ctx, n);
    p.add_term(m, c);
    return p;
}

SuperPolynomial SuperPolynomial::even_gen(Ctx ctx, int n, int idx) {
    SuperPolynomial p(ctx, n);
    CtxShape s = shape(ctx, n);
    if (idx < 0 || idx >= s.n_even) throw InputError("IndexOutOfRange", "even generator index");
    Monomial m;
    m.even.assign(p.n_even_slots(), 0);
    m.even[idx] = 1;
    p.add_term(m, Rat(1));
    return p;
}

SuperPolynomial SuperPolynomial::central_gen(Ctx ctx, int n) {
    CtxShape s = shape(ctx, n);
    if (!s.has_central) throw InputError("UnknownGenerator", "context has no central generator");
    SuperPolynomial p(ctx, n);
    Monomial m;
    m.even.assign(p.n_even_slots(), 0);
    m.even[s.n_even] = 1;
    p.add_term(m, Rat(1));
    return p;
}

SuperPolynomial SuperPolynomial::odd_gen(Ctx ctx, int n, int idx) {
    SuperPolynomial p(ctx, n);
    CtxShape s = shape(ctx, n);
    if (idx < 0 || idx >= s.n_odd) throw InputError("IndexOutOfRange", "odd generator index");
    Monomial m;
    m.even.assign(p.n_even_slots(), 0);
    m.odd = 1u << idx;
    p.add_term(m, Rat(1));
    return p;
}

Rat SuperPolynomial::coeff(const Monomial& m) const {
    auto it = terms_.find(m);
    return it == terms_.end() ? Rat(0) : it->second;
}

void SuperPolynomial::add_term(const Monomial& m, const Rat& c) {
    if (c == 0) return;
    auto [it, inserted] = terms_.emplace(m, c);
    if (!inserted) {
        it->second += c;
        if (it->second == 0) terms_.erase(it);
    }
}

int SuperPolynomial::max_weighted_degree() const {
    int d = 0;
    for (const auto& [m, c] : terms_) d = std::max(d, m.weighted_degree());
    return d;
}

int SuperPolynomial::max_even_degree() const {
    int d = 0;
    for (const auto& [m, c] : terms_) d = std::max(d, m.even_degree());
    return d;
}

void SuperPolynomial::check_compatible(const SuperPolynomial& o) const {
    if (ctx_ != o.ctx_ || n_ != o.n_)
        throw ContextMismatch(std::string("cannot combine ") + ctx_name(ctx_) + "(n=" +
                              std::to_string(n_) + ") with " + ctx_name(o.ctx_) + "(n=" +
                              std::to_string(o.n_) + ")");
}

SuperPolynomial SuperPolynomial::operator+(const SuperPolynomial& o) const {
    check_compatible(o);
    SuperPolynomial r = *this;
    for (const auto& [m, c] : o.terms_) r.add_term(m, c);
    return r;
}

SuperPolynomial SuperPolynomial::operator-(const SuperPolynomial& o) const {
    check_compatible(o);
    SuperPolynomial r = *this;
    for (const auto& [m, c] : o.terms_) r.add_term(m, -c);
    return r;
}

SuperPolynomial SuperPolynomial::operator-() const {
    SuperPolynomial r(ctx_, n_);
    for (const auto& [m, c] : terms_) r.terms_.emplace(m, -c);
    return r;
}

SuperPolynomial SuperPolynomial::operator*(const Rat& c) const {
    SuperPolynomial r(ctx_, n_);
    if (c == 0) return r;
    for (const auto& [m, v] : terms_) r.terms_.emplace(m, v * c);
    return r;
}

SuperPolynomial SuperPolynomial::operator*(const SuperPolynomial& o) const {
    check_compatible(o);
    SuperPolynomial r(ctx_, n_);
    for (const auto& [ma, ca] : terms_)
        for (const auto& [mb, cb] : o.terms_) {
            if (ma.odd & mb.odd) continue; // repeated odd generator
            Monomial m;
            m.even.resize(ma.even.size());
            for (std::size_t i = 0; i < ma.even.size(); ++i) m.even[i] = ma.even[i] + mb.even[i];
            m.odd = ma.odd | mb.odd;
            int sign = koszul_sign(ma.odd, mb.odd);
            r.add_term(m, ca * cb * sign);
        }
    return r;
}

SuperPolynomial SuperPolynomial::pow(int k) const {
    SuperPolynomial r = constant(ctx_, n_, Rat(1));
    for (int i = 0; i < k; ++i) r = r * (*this);
    return r;
}

bool SuperPolynomial::operator==(const SuperPolynomial& o) const {
    return ctx_ == o.ctx_ && n_ == o.n_ && terms_ == o.terms_;
}

SuperPolynomial SuperPolynomial::d_even(int idx) const {
    SuperPolynomial r(ctx_, n_);
    for (const auto& [m, c] : terms_) {
        if (m.even[idx] == 0) continue;
        Monomial m2 = m;
        m2.even[idx] -= 1;
        r.add_term(m2, c * m.even[idx]);
    }
    return r;
}

SuperPolynomial SuperPolynomial::d_odd(int idx) const {
    SuperPolynomial r(ctx_, n_);
    const std::uint32_t bit = 1u << idx;
    for (const auto& [m, c] : terms_) {
        if (!(m.odd & bit)) continue;
        Monomial m2 = m;
        m2.odd &= ~bit;
        // sign: theta_idx must move over the smaller-index letters in front of it
        int before = __builtin_popcount(m.odd & (bit - 1));
        r.add_term(m2, (before & 1) ? -c : c);
    }
    return r;
}

SuperPolynomial SuperPolynomial::apply_morphism(
    const std::vector<SuperPolynomial>& even_images,
    const std::vector<SuperPolynomial>& odd_images) const {
    if (terms_.empty()) {
        if (!even_images.empty()) return SuperPolynomial(even_images[0].ctx(), even_images[0].n());
        if (!odd_images.empty()) return SuperPolynomial(odd_images[0].ctx(), odd_images[0].n());
        throw InputError("MorphismError", "no images given");
    }
    Ctx tc = even_images.empty() ? odd_images[0].ctx() : even_images[0].ctx();
    int tn = even_images.empty() ? odd_images[0].n() : even_images[0].n();
    SuperPolynomial out(tc, tn);
    for (const auto& [m, c] : terms_) {
        SuperPolynomial term = SuperPolynomial::constant(tc, tn, c);
        for (std::size_t i = 0; i < m.even.size(); ++i)
            for (int k = 0; k < m.even[i]; ++k) term = term * even_images.at(i);
        std::uint32_t odd = m.odd;
        while (odd) {
            int bit = __builtin_ctz(odd);
            odd &= odd - 1;
            term = term * odd_images.at(bit);
        }
        out = out + term;
    }
    return out;
}

std::string SuperPolynomial::to_string() const {
    if (terms_.empty()) return "0";
    CtxShape s = shape(ctx_, n_);
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
        if (ac != 1 || (m.even_degree() == 0 && m.odd == 0))
            factors.push_back(rat_to_string(ac));
        for (int i = 0; i < s.n_even; ++i)
            if (m.even[i] > 0) {
                std::string f = std::string(s.even_name) + std::to_string(i + 1);
                if (m.even[i] > 1) f += "^" + std::to_string(m.even[i]);
                factors.push_back(f);
            }
        if (s.has_central && m.even[s.n_even] > 0) {
            std::string f = "c1";
            if (m.even[s.n_even] > 1) f += "^" + std::to_string(m.even[s.n_even]);
            factors.push_back(f);
        }
        for (int i = 0; i < s.n_odd; ++i)
            if (m.odd & (1u << i)) factors.push_back(std::string(s.odd_name) + std::to_string(i + 1));
        for (std::size_t i = 0; i < factors.size(); ++i) {
            if (i) os << "*";
            os << factors[i];
        }
    }
    return os.str();
}

namespace {

// image of the Koszul even generator: v^a - 1/2 f^a_{jk} theta^j theta^k
SuperPolynomial hatted_image(const QuadraticLieAlgebra& g, int a, bool lowered) {
    const int n = g.dim();
    SuperPolynomial img = SuperPolynomial::even_gen(Ctx::W, n, a);
    for (int j = 0; j < n; ++j)
        for (int k = 0; k < n; ++k) {
            if (j == k) continue;
            Rat fv = lowered ? g.f_lowered(j, k, a) : g.f(j, k, a);
            if (fv == 0) continue;
            Monomial m;
            m.even.assign(n, 0);
            int lo = std::min(j, k), hi = std::max(j, k);
            m.odd = (1u << lo) | (1u << hi);
            int sign = (j < k) ? 1 : -1; // theta^j theta^k sorted
            img.add_term(m, Rat(-1, 2) * fv * sign);
        }
    return img;
}

} // namespace

SuperPolynomial tau0(const QuadraticLieAlgebra& g, const SuperPolynomial& p) {
    if (p.ctx() != Ctx::WK) throw ContextMismatch("tau0 expects a WK element");
    const int n = g.dim();
    std::vector<SuperPolynomial> ev, od;
    for (int a = 0; a < n; ++a) ev.push_back(hatted_image(g, a, false));
    for (int a = 0; a < n; ++a) od.push_back(SuperPolynomial::odd_gen(Ctx::W, n, a));
    return p.apply_morphism(ev, od);
}

SuperPolynomial tau0_inverse(const QuadraticLieAlgebra& g, const SuperPolynomial& p) {
    if (p.ctx() != Ctx::W) throw ContextMismatch("tau0_inverse expects a W element");
    const int n = g.dim();
    std::vector<SuperPolynomial> ev, od;
    for (int a = 0; a < n; ++a) {
        SuperPolynomial img = SuperPolynomial::even_gen(Ctx::WK, n, a);
        for (int j = 0; j < n; ++j)
            for (int k = 0; k < n; ++k) {
                Rat fv = g.f(j, k, a);
                if (fv == 0 || j == k) continue;
                Monomial m;
                m.even.assign(n, 0);
                int lo = std::min(j, k), hi = std::max(j, k);
                m.odd = (1u << lo) | (1u << hi);
                int sign = (j < k) ? 1 : -1;
                img.add_term(m, Rat(1, 2) * fv * sign);
            }
        ev.push_back(img);
    }
    for (int a = 0; a < n; ++a) od.push_back(SuperPolynomial::odd_gen(Ctx::WK, n, a));
    return p.apply_morphism(ev, od);
}

SuperPolynomial sigma0(const QuadraticLieAlgebra& g, const SuperPolynomial& p) {
    if (p.ctx() != Ctx::STG) throw ContextMismatch("sigma0 expects an STG element");
    const int n = g.dim();
    std::vector<SuperPolynomial> ev, od;
    for (int a = 0; a < n; ++a) ev.push_back(hatted_image(g, a, true));
    ev.push_back(SuperPolynomial::constant(Ctx::W, n, Rat(1))); // c -> 1
    for (int a = 0; a < n; ++a) od.push_back(SuperPolynomial::odd_gen(Ctx::W, n, a));
    return p.apply_morphism(ev, od);
}

SuperPolynomial sigma0_inverse(const QuadraticLieAlgebra& g, const SuperPolynomial& p) {
    if (p.ctx() != Ctx::W) throw ContextMismatch("sigma0_inverse expects a W element");
    const int n = g.dim();
    std::vector<SuperPolynomial> ev, od;
    for (int a = 0; a < n; ++a) {
        SuperPolynomial img = SuperPolynomial::even_gen(Ctx::STG, n, a);
        for (int j = 0; j < n; ++j)
            for (int k = 0; k < n; ++k) {
                Rat fv = g.f_lowered(j, k, a);
                if (fv == 0 || j == k) continue;
                Monomial m;
                m.even.assign(n + 1, 0);
                int lo = std::min(j, k), hi = std::max(j, k);
                m.odd = (1u << lo) | (1u << hi);
                int sign = (j < k) ? 1 : -1;
                img.add_term(m, Rat(1, 2) * fv * sign);
            }
        ev.push_back(img);
    }
    for (int a = 0; a < n; ++a) od.push_back(SuperPolynomial::odd_gen(Ctx::STG, n, a));
    return p.apply_morphism(ev, od);
}

namespace {

void enumerate_even(std::vector<int>& cur, int slot, int budget,
                    std::vector<std::vector<int>>& out) {
    if (slot == static_cast<int>(cur.size())) {
        out.push_back(cur);
        return;
    }
    for (int e = 0; 2 * e <= budget; ++e) {
        cur[slot] = e;
        enumerate_even(cur, slot + 1, budget - 2 * e, out);
    }
    cur[slot] = 0;
}

} // namespace

std::vector<Monomial> monomials_up_to(Ctx ctx, int n, int d) {
    std::vector<Monomial> out;
    for (int k = 0; k <= d; ++k) {
        auto v = monomials_of_degree(ctx, n, k);
        out.insert(out.end(), v.begin(), v.end());
    }
    return out;
}

namespace {

struct SuperPolyBuilder {
    using Element = SuperPolynomial;
    Ctx ctx;
    int n;
    Element constant(const Rat& c) { return SuperPolynomial::constant(ctx, n, c); }
    bool generator_is_odd(const std::string& name) { return name == "th" || name == "eb"; }
    Element generator(const std::string& name, int index) {
        CtxShape s = shape(ctx, n);
        auto range_check = [&](int limit) {
            if (index < 1 || index > limit)
                throw IndexOutOfRange("generator " + name + std::to_string(index) +
                                      " out of range 1.." + std::to_string(limit));
        };
        if (name == "c") {
            if (!s.has_central)
                throw UnknownGenerator("'c' is not a generator of context " + std::string(ctx_name(ctx)));
            range_check(1);
            return SuperPolynomial::central_gen(ctx, n);
        }
        if (name == s.even_name && s.n_even > 0) {
            range_check(s.n_even);
            return SuperPolynomial::even_gen(ctx, n, index - 1);
        }
        if (name == s.odd_name && s.n_odd > 0) {
            range_check(s.n_odd);
            return SuperPolynomial::odd_gen(ctx, n, index - 1);
        }
        throw UnknownGenerator("'" + name + "' is not a generator of context " +
                               std::string(ctx_name(ctx)));
    }
    Element add(const Element& a, const Element& b) { return a + b; }
    Element sub(const Element& a, const Element& b) { return a - b; }
    Element mul(const Element& a, const Element& b) { return a * b; }
    Element power(const Element& a, int k) { return a.pow(k); }
};

} // namespace

SuperPolynomial parse_element(const std::string& src, Ctx ctx, int n) {
    SuperPolyBuilder b{ctx, n};
    return parse_expression(src, b);
}

std::vector<Monomial> monomials_of_degree(Ctx ctx, int n, int d) {
    SuperPolynomial probe(ctx, n);
    int slots = probe.n_even_slots();
    int n_odd = 0;
    switch (ctx) {
        case Ctx::W: case Ctx::WK: case Ctx::STG: n_odd = n; break;
        case Ctx::EXT: n_odd = n; break;
        case Ctx::SG: n_odd = 0; break;
    }
    std::vector<Monomial> out;
    for (std::uint32_t mask = 0; mask < (1u << n_odd); ++mask) {
        int oc = __builtin_popcount(mask);
        if (oc > d) continue;
        int rem = d - oc;
        if (rem % 2 != 0) continue;
        std::vector<std::vector<int>> evens;
        std::vector<int> cur(slots, 0);
        enumerate_even(cur, 0, rem, evens);
        for (auto& e : evens) {
            int tot = 0;
            for (int x : e) tot += 2 * x;
            if (tot != rem) continue;
            Monomial m;
            m.even = e;
            m.odd = mask;
            out.push_back(std::move(m));
        }
    }
    std::sort(out.begin(), out.end(), [](const Monomial& a, const Monomial& b) {
        return MonomialLess()(a, b);
    });
    return out;
}

} // namespace weilforge
