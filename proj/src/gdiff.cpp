#include "weilforge/gdiff.hpp"

#include <algorithm>
#include <cstdlib>

#include "weilforge/ratlinalg.hpp"

namespace weilforge {

const char* space_name(Space s) {
    switch (s) {
        case Space::W: return "W";
        case Space::WK: return "WK";
        case Space::NW: return "NW";
        case Space::NWK: return "NWK";
    }
    return "?";
}

bool space_is_nc(Space s) { return s == Space::NW || s == Space::NWK; }

Ctx space_ctx(Space s) {
    if (s == Space::W) return Ctx::W;
    if (s == Space::WK) return Ctx::WK;
    throw SpaceMismatch("not a commutative space");
}

NCtx space_nctx(Space s) {
    if (s == Space::NW) return NCtx::NW;
    if (s == Space::NWK) return NCtx::NWK;
    throw SpaceMismatch("not a noncommutative space");
}

std::string DerivationOperator::name() const {
    switch (kind_) {
        case Kind::Iota: return "iota_" + std::to_string(index_ + 1);
        case Kind::L: return "L_" + std::to_string(index_ + 1);
        case Kind::D: return "d";
    }
    return "?";
}

namespace {

SuperPolynomial zero_like(Ctx c, int n) { return SuperPolynomial::zero(c, n); }

} // namespace

namespace {

void require_orthonormal(const QuadraticLieAlgebra& g, Space s) {
    if (space_is_nc(s) && !g.metric_is_identity())
        throw ContextMismatch(std::string(space_name(s)) +
                              " operators are defined over an orthonormal basis");
}

} // namespace

DerivationOperator DerivationOperator::iota(const QuadraticLieAlgebra& g, Space s, int a) {
    require_orthonormal(g, s);
    DerivationOperator op;
    op.space_ = s;
    op.kind_ = Kind::Iota;
    op.index_ = a;
    op.parity_ = 1;
    op.g_ = &g;
    const int n = g.dim();
    if (!space_is_nc(s)) {
        Ctx c = space_ctx(s);
        for (int b = 0; b < n; ++b) {
            if (s == Space::W) {
                op.ev_.push_back(zero_like(c, n)); // iota_a v^b = 0
            } else {
                SuperPolynomial img(c, n); // iota_a vh^b = -f^b_{ak} theta^k
                for (int k = 0; k < n; ++k) {
                    Rat fv = -g.f(a, k, b);
                    if (fv != 0) img = img + SuperPolynomial::odd_gen(c, n, k) * fv;
                }
                op.ev_.push_back(img);
            }
            op.od_.push_back(SuperPolynomial::constant(c, n, b == a ? Rat(1) : Rat(0)));
        }
    } else {
        NCtx c = space_nctx(s);
        for (int b = 0; b < n; ++b) {
            if (s == Space::NW) {
                op.nev_.push_back(NormalOrderedElement::zero(c, &g));
            } else {
                NormalOrderedElement img = NormalOrderedElement::zero(c, &g); // f_abc xi_c
                for (int k = 0; k < n; ++k) {
                    Rat fv = g.f_lowered(a, b, k);
                    if (fv != 0) img = img + NormalOrderedElement::odd_gen(c, &g, k) * fv;
                }
                op.nev_.push_back(img);
            }
            op.nod_.push_back(
                NormalOrderedElement::constant(c, &g, b == a ? Rat(1) : Rat(0)));
        }
    }
    return op;
}

DerivationOperator DerivationOperator::L(const QuadraticLieAlgebra& g, Space s, int a) {
    require_orthonormal(g, s);
    DerivationOperator op;
    op.space_ = s;
    op.kind_ = Kind::L;
    op.index_ = a;
    op.parity_ = 0;
    op.g_ = &g;
    const int n = g.dim();
    if (!space_is_nc(s)) {
        Ctx c = space_ctx(s);
        for (int b = 0; b < n; ++b) {
            SuperPolynomial ev(c, n), od(c, n);
            for (int k = 0; k < n; ++k) {
                Rat fv = -g.f(a, k, b); // L_a gen^b = -f^b_{ak} gen^k
                if (fv == 0) continue;
                ev = ev + SuperPolynomial::even_gen(c, n, k) * fv;
                od = od + SuperPolynomial::odd_gen(c, n, k) * fv;
            }
            op.ev_.push_back(ev);
            op.od_.push_back(od);
        }
    } else {
        NCtx c = space_nctx(s);
        for (int b = 0; b < n; ++b) {
            NormalOrderedElement ev = NormalOrderedElement::zero(c, &g);
            NormalOrderedElement od = NormalOrderedElement::zero(c, &g);
            for (int k = 0; k < n; ++k) {
                Rat fv = g.f_lowered(a, b, k); // L_a x_b = f_abc x_c
                if (fv == 0) continue;
                ev = ev + NormalOrderedElement::even_gen(c, &g, k) * fv;
                od = od + NormalOrderedElement::odd_gen(c, &g, k) * fv;
            }
            op.nev_.push_back(ev);
            op.nod_.push_back(od);
        }
    }
    return op;
}

DerivationOperator DerivationOperator::d(const QuadraticLieAlgebra& g, Space s) {
    require_orthonormal(g, s);
    DerivationOperator op;
    op.space_ = s;
    op.kind_ = Kind::D;
    op.index_ = -1;
    op.parity_ = 1;
    op.g_ = &g;
    const int n = g.dim();
    if (!space_is_nc(s)) {
        Ctx c = space_ctx(s);
        for (int b = 0; b < n; ++b) {
            if (s == Space::W) {
                SuperPolynomial ev(c, n); // d v^b = -f^b_{jk} theta^j v^k
                for (int j = 0; j < n; ++j)
                    for (int k = 0; k < n; ++k) {
                        Rat fv = -g.f(j, k, b);
                        if (fv == 0) continue;
                        ev = ev + SuperPolynomial::odd_gen(c, n, j) *
                                      SuperPolynomial::even_gen(c, n, k) * fv;
                    }
                op.ev_.push_back(ev);
                // d theta^b = v^b - 1/2 f^b_{jk} theta^j theta^k
                SuperPolynomial od = SuperPolynomial::even_gen(c, n, b);
                for (int j = 0; j < n; ++j)
                    for (int k = 0; k < n; ++k) {
                        Rat fv = g.f(j, k, b);
                        if (fv == 0) continue;
                        od = od + SuperPolynomial::odd_gen(c, n, j) *
                                      SuperPolynomial::odd_gen(c, n, k) * (Rat(-1, 2) * fv);
                    }
                op.od_.push_back(od);
            } else {
                op.ev_.push_back(zero_like(c, n));                      // d vh^b = 0
                op.od_.push_back(SuperPolynomial::even_gen(c, n, b));   // d theta^b = vh^b
            }
        }
    } else {
        NCtx c = space_nctx(s);
        for (int b = 0; b < n; ++b) {
            if (s == Space::NW) {
                NormalOrderedElement ev = NormalOrderedElement::zero(c, &g);
                for (int j = 0; j < n; ++j)
                    for (int k = 0; k < n; ++k) {
                        Rat fv = -g.f_lowered(b, j, k); // d u_b = -f_bjk xi_j u_k
                        if (fv == 0) continue;
                        ev = ev + nc_multiply(NormalOrderedElement::odd_gen(c, &g, j),
                                              NormalOrderedElement::even_gen(c, &g, k)) *
                                      fv;
                    }
                op.nev_.push_back(ev);
                NormalOrderedElement od = NormalOrderedElement::even_gen(c, &g, b);
                for (int j = 0; j < n; ++j)
                    for (int k = j + 1; k < n; ++k) {
                        Rat fv = g.f_lowered(b, j, k) - g.f_lowered(b, k, j);
                        if (fv == 0) continue;
                        Monomial m;
                        m.even.assign(n, 0);
                        m.odd = (1u << j) | (1u << k);
                        od.add_term(m, Rat(-1, 2) * fv);
                    }
                op.nod_.push_back(od);
            } else {
                op.nev_.push_back(NormalOrderedElement::zero(c, &g)); // d uh_b = 0
                op.nod_.push_back(NormalOrderedElement::even_gen(c, &g, b)); // d xi_b = uh_b
            }
        }
    }
    return op;
}

SuperPolynomial DerivationOperator::apply(const SuperPolynomial& p) const {
    if (space_is_nc(space_) || p.ctx() != space_ctx(space_))
        throw SpaceMismatch("operator on " + std::string(space_name(space_)) +
                            " applied to wrong element type");
    const int n = p.n();
    Ctx c = p.ctx();
    SuperPolynomial out(c, n);
    for (const auto& [m, coeff] : p.terms()) {
        // word order: even letters first, then odd letters ascending
        for (int i = 0; i < static_cast<int>(m.even.size()); ++i) {
            if (m.even[i] == 0) continue;
            Monomial even_rest = m;
            even_rest.even[i] -= 1;
            even_rest.odd = 0;
            Monomial odd_part;
            odd_part.even.assign(m.even.size(), 0);
            odd_part.odd = m.odd;
            // evens are all even parity: no crossing sign; image sits left of the thetas
            out = out + SuperPolynomial::from_monomial(c, n, even_rest, coeff * m.even[i]) *
                            ev_.at(i) * SuperPolynomial::from_monomial(c, n, odd_part, Rat(1));
        }
        int odd_before = 0;
        for (int j = 0; j < 32; ++j) {
            if (!(m.odd & (1u << j))) continue;
            Monomial prefix = m;
            prefix.odd = m.odd & ((1u << j) - 1);
            Monomial suffix;
            suffix.even.assign(m.even.size(), 0);
            suffix.odd = m.odd & ~((1u << (j + 1)) - 1);
            int sign = (parity_ && (odd_before & 1)) ? -1 : 1;
            out = out + SuperPolynomial::from_monomial(c, n, prefix, coeff * sign) * od_.at(j) *
                            SuperPolynomial::from_monomial(c, n, suffix, Rat(1));
            ++odd_before;
        }
    }
    return out;
}

NormalOrderedElement DerivationOperator::apply(const NormalOrderedElement& p) const {
    if (!space_is_nc(space_) || p.ctx() != space_nctx(space_))
        throw SpaceMismatch("operator on " + std::string(space_name(space_)) +
                            " applied to wrong element type");
    const QuadraticLieAlgebra* g = p.algebra();
    NCtx c = p.ctx();
    const int n = p.n();
    NormalOrderedElement out(c, g);
    for (const auto& [m, coeff] : p.terms()) {
        // denotation: odd block first, then even block
        int odd_before = 0;
        for (int j = 0; j < 32; ++j) {
            if (!(m.odd & (1u << j))) continue;
            Monomial prefix;
            prefix.even.assign(n, 0);
            prefix.odd = m.odd & ((1u << j) - 1);
            Monomial suffix = m;
            suffix.odd = m.odd & ~((1u << (j + 1)) - 1);
            int sign = (parity_ && (odd_before & 1)) ? -1 : 1;
            NormalOrderedElement term = NormalOrderedElement::from_monomial(c, g, prefix, coeff * sign);
            term = nc_multiply(term, nod_.at(j));
            term = nc_multiply(term, NormalOrderedElement::from_monomial(c, g, suffix, Rat(1)));
            out = out + term;
            ++odd_before;
        }
        int total_odd = m.odd_count();
        int esign = (parity_ && (total_odd & 1)) ? -1 : 1;
        for (int i = 0; i < n; ++i) {
            if (m.even[i] == 0) continue;
            // one Leibniz term per occurrence: x_i^j op(x_i) x_i^{e_i-1-j}
            for (int j = 0; j < m.even[i]; ++j) {
                Monomial prefix = m;
                for (int k = i; k < n; ++k) prefix.even[k] = 0;
                prefix.even[i] = j;
                Monomial suffix;
                suffix.even.assign(n, 0);
                suffix.even[i] = m.even[i] - 1 - j;
                for (int k = i + 1; k < n; ++k) suffix.even[k] = m.even[k];
                NormalOrderedElement term =
                    NormalOrderedElement::from_monomial(c, g, prefix, coeff * esign);
                term = nc_multiply(term, nev_.at(i));
                term = nc_multiply(term, NormalOrderedElement::from_monomial(c, g, suffix, Rat(1)));
                out = out + term;
            }
        }
    }
    return out;
}

SuperPolynomial stg_ad_even(const QuadraticLieAlgebra& g, int a, const SuperPolynomial& p) {
    if (p.ctx() != Ctx::STG) throw ContextMismatch("stg_ad_even expects an STG element");
    const int n = g.dim();
    SuperPolynomial out(Ctx::STG, n);
    for (const auto& [m, coeff] : p.terms()) {
        for (int i = 0; i < n; ++i) { // [e_a, e_i] = f_ai^c e_c; c is central
            if (m.even[i] == 0) continue;
            Monomial rest = m;
            rest.even[i] -= 1;
            SuperPolynomial img(Ctx::STG, n);
            for (int cc = 0; cc < n; ++cc) {
                Rat fv = g.f(a, i, cc);
                if (fv != 0) img = img + SuperPolynomial::even_gen(Ctx::STG, n, cc) * fv;
            }
            out = out + SuperPolynomial::from_monomial(Ctx::STG, n, rest, coeff * m.even[i]) * img;
        }
        for (int j = 0; j < n; ++j) { // [e_a, eb_j] = f_aj^c eb_c
            if (!(m.odd & (1u << j))) continue;
            SuperPolynomial img(Ctx::STG, n);
            for (int cc = 0; cc < n; ++cc) {
                Rat fv = g.f(a, j, cc);
                if (fv != 0) img = img + SuperPolynomial::odd_gen(Ctx::STG, n, cc) * fv;
            }
            Monomial prefix = m;
            prefix.odd = m.odd & ((1u << j) - 1);
            Monomial suffix;
            suffix.even.assign(m.even.size(), 0);
            suffix.odd = m.odd & ~((1u << (j + 1)) - 1);
            out = out + SuperPolynomial::from_monomial(Ctx::STG, n, prefix, coeff) * img *
                            SuperPolynomial::from_monomial(Ctx::STG, n, suffix, Rat(1));
        }
    }
    return out;
}

SuperPolynomial stg_ad_odd(const QuadraticLieAlgebra& g, int a, const SuperPolynomial& p) {
    if (p.ctx() != Ctx::STG) throw ContextMismatch("stg_ad_odd expects an STG element");
    const int n = g.dim();
    SuperPolynomial out(Ctx::STG, n);
    for (const auto& [m, coeff] : p.terms()) {
        for (int i = 0; i < n; ++i) { // [eb_a, e_i] = f_ai^c eb_c
            if (m.even[i] == 0) continue;
            Monomial even_rest = m;
            even_rest.even[i] -= 1;
            even_rest.odd = 0;
            Monomial odd_part;
            odd_part.even.assign(m.even.size(), 0);
            odd_part.odd = m.odd;
            SuperPolynomial img(Ctx::STG, n);
            for (int cc = 0; cc < n; ++cc) {
                Rat fv = g.f(a, i, cc);
                if (fv != 0) img = img + SuperPolynomial::odd_gen(Ctx::STG, n, cc) * fv;
            }
            // odd image sits left of the odd block (no sign: only evens crossed)
            out = out +
                  SuperPolynomial::from_monomial(Ctx::STG, n, even_rest, coeff * m.even[i]) * img *
                      SuperPolynomial::from_monomial(Ctx::STG, n, odd_part, Rat(1));
        }
        int odd_before = 0;
        for (int j = 0; j < 32; ++j) { // [eb_a, eb_j] = t_aj c
            if (!(m.odd & (1u << j))) continue;
            Rat t = g.metric(a, j);
            if (t != 0) {
                Monomial rest = m;
                rest.odd &= ~(1u << j);
                rest.even[n] += 1; // central slot
                int sign = (odd_before & 1) ? -1 : 1;
                out.add_term(rest, coeff * t * sign);
            }
            ++odd_before;
        }
    }
    return out;
}

Report check_hat_g_relations(const QuadraticLieAlgebra& g, Space s, int max_degree) {
    Report rep;
    const int n = g.dim();
    std::vector<DerivationOperator> iota, L;
    for (int a = 0; a < n; ++a) {
        iota.push_back(DerivationOperator::iota(g, s, a));
        L.push_back(DerivationOperator::L(g, s, a));
    }
    DerivationOperator d = DerivationOperator::d(g, s);

    auto run_check = [&](const std::string& relation, auto&& lhs, auto&& rhs) {
        std::string counter;
        bool ok = true;
        auto check = [&](const auto& elem, const std::string& label) {
            if (!ok) return;
            if (!(lhs(elem) == rhs(elem))) {
                ok = false;
                counter = label;
            }
        };
        if (!space_is_nc(s)) {
            Ctx c = space_ctx(s);
            for (int b = 0; b < n && ok; ++b) {
                check(SuperPolynomial::even_gen(c, n, b), "even generator " + std::to_string(b + 1));
                check(SuperPolynomial::odd_gen(c, n, b), "odd generator " + std::to_string(b + 1));
            }
            for (const Monomial& m : monomials_up_to(c, n, max_degree)) {
                if (!ok) break;
                auto p = SuperPolynomial::from_monomial(c, n, m, Rat(1));
                check(p, "monomial " + p.to_string());
            }
        } else {
            NCtx c = space_nctx(s);
            for (int b = 0; b < n && ok; ++b) {
                check(NormalOrderedElement::even_gen(c, &g, b),
                      "even generator " + std::to_string(b + 1));
                check(NormalOrderedElement::odd_gen(c, &g, b),
                      "odd generator " + std::to_string(b + 1));
            }
            for (const Monomial& m : nc_monomials_up_to(c, n, max_degree)) {
                if (!ok) break;
                auto p = NormalOrderedElement::from_monomial(c, &g, m, Rat(1));
                check(p, "monomial " + p.to_string());
            }
        }
        rep.add(space_name(s), relation, ok, counter);
    };

    auto apply_sum = [&](const std::vector<DerivationOperator>& ops, const std::vector<Rat>& cs) {
        return [&ops, cs](const auto& x) {
            auto out = ops[0].apply(x) * cs[0];
            for (std::size_t i = 1; i < ops.size(); ++i)
                if (cs[i] != 0) out = out + ops[i].apply(x) * cs[i];
            return out;
        };
    };

    for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b) {
            // [iota_a, iota_b] = 0 (anticommutator: both odd)
            run_check("[iota_" + std::to_string(a + 1) + ",iota_" + std::to_string(b + 1) + "]=0",
                      [&](const auto& x) { return iota[a].apply(iota[b].apply(x)) +
                                                  iota[b].apply(iota[a].apply(x)); },
                      [&](const auto& x) { return (iota[a].apply(x)) * Rat(0); });
            // [L_a, iota_b] = f_ab^c iota_c
            std::vector<Rat> cs(n);
            for (int c = 0; c < n; ++c) cs[c] = space_is_nc(s) ? g.f_lowered(a, b, c) : g.f(a, b, c);
            run_check("[L_" + std::to_string(a + 1) + ",iota_" + std::to_string(b + 1) +
                          "]=f*iota",
                      [&](const auto& x) { return L[a].apply(iota[b].apply(x)) -
                                                  iota[b].apply(L[a].apply(x)); },
                      apply_sum(iota, cs));
            // [L_a, L_b] = f_ab^c L_c
            run_check("[L_" + std::to_string(a + 1) + ",L_" + std::to_string(b + 1) + "]=f*L",
                      [&](const auto& x) { return L[a].apply(L[b].apply(x)) -
                                                  L[b].apply(L[a].apply(x)); },
                      apply_sum(L, cs));
        }
    for (int a = 0; a < n; ++a) {
        // [d, iota_a] = d iota_a + iota_a d = L_a
        run_check("[d,iota_" + std::to_string(a + 1) + "]=L_" + std::to_string(a + 1),
                  [&](const auto& x) { return d.apply(iota[a].apply(x)) +
                                              iota[a].apply(d.apply(x)); },
                  [&](const auto& x) { return L[a].apply(x); });
        // [d, L_a] = 0
        run_check("[d,L_" + std::to_string(a + 1) + "]=0",
                  [&](const auto& x) { return d.apply(L[a].apply(x)) - L[a].apply(d.apply(x)); },
                  [&](const auto& x) { return d.apply(x) * Rat(0); });
    }
    run_check("d^2=0", [&](const auto& x) { return d.apply(d.apply(x)); },
              [&](const auto& x) { return d.apply(x) * Rat(0); });
    return rep;
}

Classification classify(const QuadraticLieAlgebra& g, const SuperPolynomial& p, Space s) {
    Classification c;
    c.horizontal = true;
    c.invariant = true;
    for (int a = 0; a < g.dim(); ++a) {
        if (!DerivationOperator::iota(g, s, a).apply(p).is_zero()) c.horizontal = false;
        if (!DerivationOperator::L(g, s, a).apply(p).is_zero()) c.invariant = false;
    }
    c.basic = c.horizontal && c.invariant;
    return c;
}

Classification classify(const QuadraticLieAlgebra& g, const NormalOrderedElement& p, Space s) {
    Classification c;
    c.horizontal = true;
    c.invariant = true;
    for (int a = 0; a < g.dim(); ++a) {
        if (!DerivationOperator::iota(g, s, a).apply(p).is_zero()) c.horizontal = false;
        if (!DerivationOperator::L(g, s, a).apply(p).is_zero()) c.invariant = false;
    }
    c.basic = c.horizontal && c.invariant;
    return c;
}

Report verify_koszul_acyclicity(const QuadraticLieAlgebra& g, Space s, int max_total_degree,
                                int slice_cap) {
    if (space_is_nc(s)) throw SpaceMismatch("acyclicity check runs on W or WK");
    const char* cap_env = std::getenv("WEILFORGE_MAX_SLICE");
    if (cap_env) slice_cap = std::atoi(cap_env);
    Report rep;
    const int n = g.dim();
    Ctx c = space_ctx(s);
    DerivationOperator d = DerivationOperator::d(g, s);

    std::vector<std::vector<Monomial>> slices(max_total_degree + 2);
    for (int k = 0; k <= max_total_degree + 1; ++k) {
        slices[k] = monomials_of_degree(c, n, k);
        if (static_cast<int>(slices[k].size()) > slice_cap)
            throw DegreeTooLarge("graded slice at degree " + std::to_string(k) + " has dimension " +
                                 std::to_string(slices[k].size()) + " > cap " +
                                 std::to_string(slice_cap));
    }
    auto index_of = [](const std::vector<Monomial>& basis, const Monomial& m) -> int {
        auto it = std::lower_bound(basis.begin(), basis.end(), m, MonomialLess());
        if (it == basis.end() || !(*it == m)) return -1;
        return static_cast<int>(it - basis.begin());
    };
    // matrix of d restricted to slice k (columns) into slice k+1 (rows)
    auto d_matrix = [&](int k) {
        const auto& dom = slices[k];
        const auto& cod = slices[k + 1];
        RatMat m(cod.size(), std::vector<Rat>(dom.size(), Rat(0)));
        for (std::size_t j = 0; j < dom.size(); ++j) {
            SuperPolynomial img = d.apply(SuperPolynomial::from_monomial(c, n, dom[j], Rat(1)));
            for (const auto& [mm, cc] : img.terms()) {
                int i = index_of(cod, mm);
                if (i < 0) throw SpaceMismatch("differential left the expected graded slice");
                m[i][j] = cc;
            }
        }
        return m;
    };

    std::vector<int> rank(max_total_degree + 1);
    for (int k = 0; k <= max_total_degree; ++k) rank[k] = rat_rank(d_matrix(k));
    // H^0
    {
        int dim0 = static_cast<int>(slices[0].size());
        int h0 = dim0 - rank[0];
        rep.add(space_name(s), "H^0=R", h0 == 1, "dim=" + std::to_string(h0));
    }
    for (int k = 1; k <= max_total_degree; ++k) {
        int dimk = static_cast<int>(slices[k].size());
        int ker = dimk - rank[k];
        int hk = ker - rank[k - 1];
        rep.add(space_name(s), "H^" + std::to_string(k) + "=0", hk == 0,
                "dim=" + std::to_string(hk));
    }
    return rep;
}

Report check_d_equals_thetaL_on_horizontal(const QuadraticLieAlgebra& g, int max_degree) {
    Report rep;
    const int n = g.dim();
    DerivationOperator d = DerivationOperator::d(g, Space::W);
    std::vector<DerivationOperator> L;
    for (int a = 0; a < n; ++a) L.push_back(DerivationOperator::L(g, Space::W, a));
    bool ok = true;
    std::string counter;
    for (const Monomial& m : monomials_up_to(Ctx::SG, n, 2 * max_degree)) {
        Monomial wm;
        wm.even = m.even;
        wm.odd = 0;
        if (wm.even_degree() > max_degree) continue;
        SuperPolynomial p = SuperPolynomial::from_monomial(Ctx::W, n, wm, Rat(1));
        SuperPolynomial lhs = d.apply(p);
        SuperPolynomial rhs(Ctx::W, n);
        for (int b = 0; b < n; ++b)
            rhs = rhs + SuperPolynomial::odd_gen(Ctx::W, n, b) * L[b].apply(p);
        if (!(lhs == rhs)) {
            ok = false;
            counter = p.to_string();
            break;
        }
    }
    rep.add("W", "d=theta^b.L_b on horizontal, degree<=" + std::to_string(max_degree), ok, counter);
    // corollary: d vanishes on the basic element sum_a (v^a)^2
    SuperPolynomial casimir(Ctx::W, n);
    for (int a = 0; a < n; ++a)
        casimir = casimir + SuperPolynomial::even_gen(Ctx::W, n, a).pow(2);
    rep.add("W", "d=0 on basic sum_a(v^a)^2", d.apply(casimir).is_zero(), "");
    return rep;
}

Report verify_tau_intertwine(const QuadraticLieAlgebra& g, int max_degree) {
    Report rep;
    const int n = g.dim();
    // commutative side: tau0 . op_WK = op_W . tau0
    {
        std::vector<std::pair<DerivationOperator, DerivationOperator>> pairs;
        pairs.emplace_back(DerivationOperator::d(g, Space::WK), DerivationOperator::d(g, Space::W));
        for (int a = 0; a < n; ++a) {
            pairs.emplace_back(DerivationOperator::iota(g, Space::WK, a),
                               DerivationOperator::iota(g, Space::W, a));
            pairs.emplace_back(DerivationOperator::L(g, Space::WK, a),
                               DerivationOperator::L(g, Space::W, a));
        }
        for (const auto& [opk, opw] : pairs) {
            bool ok = true;
            std::string counter;
            for (const Monomial& m : monomials_up_to(Ctx::WK, n, max_degree)) {
                SuperPolynomial p = SuperPolynomial::from_monomial(Ctx::WK, n, m, Rat(1));
                if (!(tau0(g, opk.apply(p)) == opw.apply(tau0(g, p)))) {
                    ok = false;
                    counter = p.to_string();
                    break;
                }
            }
            rep.add("tau0", opk.name() + " intertwined", ok, counter);
        }
    }
    // noncommutative side: tau1 . op_NWK = op_NW . tau1
    {
        std::vector<std::pair<DerivationOperator, DerivationOperator>> pairs;
        pairs.emplace_back(DerivationOperator::d(g, Space::NWK), DerivationOperator::d(g, Space::NW));
        for (int a = 0; a < n; ++a) {
            pairs.emplace_back(DerivationOperator::iota(g, Space::NWK, a),
                               DerivationOperator::iota(g, Space::NW, a));
            pairs.emplace_back(DerivationOperator::L(g, Space::NWK, a),
                               DerivationOperator::L(g, Space::NW, a));
        }
        for (const auto& [opk, opw] : pairs) {
            bool ok = true;
            std::string counter;
            for (const Monomial& m : nc_monomials_up_to(NCtx::NWK, n, max_degree)) {
                NormalOrderedElement p = NormalOrderedElement::from_monomial(NCtx::NWK, &g, m, Rat(1));
                if (!(tau1(opk.apply(p)) == opw.apply(tau1(p)))) {
                    ok = false;
                    counter = p.to_string();
                    break;
                }
            }
            rep.add("tau1", opk.name() + " intertwined", ok, counter);
        }
    }
    return rep;
}

Report verify_sigma0_correspondence(const QuadraticLieAlgebra& g, int max_degree) {
    Report rep;
    const int n = g.dim();
    for (int a = 0; a < n; ++a) {
        DerivationOperator La = DerivationOperator::L(g, Space::W, a);
        DerivationOperator Ia = DerivationOperator::iota(g, Space::W, a);
        bool ok_L = true, ok_I = true;
        std::string ce_L, ce_I;
        for (const Monomial& m : monomials_up_to(Ctx::STG, n, max_degree)) {
            if (m.even[n] > 0) continue; // c-free suffices; sigma0 sends c to 1 anyway
            SuperPolynomial p = SuperPolynomial::from_monomial(Ctx::STG, n, m, Rat(1));
            if (ok_L && !(sigma0(g, stg_ad_even(g, a, p)) == La.apply(sigma0(g, p)))) {
                ok_L = false;
                ce_L = p.to_string();
            }
            if (ok_I && !(sigma0(g, stg_ad_odd(g, a, p)) == Ia.apply(sigma0(g, p)))) {
                ok_I = false;
                ce_I = p.to_string();
            }
        }
        rep.add("sigma0", "L_" + std::to_string(a + 1) + " <-> [e_" + std::to_string(a + 1) + ",.]",
                ok_L, ce_L);
        rep.add("sigma0",
                "iota_" + std::to_string(a + 1) + " <-> [eb_" + std::to_string(a + 1) + ",.]", ok_I,
                ce_I);
    }
    return rep;
}

// evaluate the central generator at 1 (the adjoint action descends to the
// quotient since c is central)
SuperPolynomial stg_set_central_one(const SuperPolynomial& p) {
    const int n = p.n();
    SuperPolynomial out(Ctx::STG, n);
    for (const auto& [m, c] : p.terms()) {
        Monomial mm = m;
        mm.even[n] = 0;
        out.add_term(mm, c);
    }
    return out;
}

Report verify_sigma0_invariants_basic(const QuadraticLieAlgebra& g, int max_degree) {
    Report rep;
    const int n = g.dim();
    for (int deg = 0; deg <= max_degree; ++deg) {
        // c-free monomials of S(T~g[1]) of this degree
        std::vector<Monomial> basis;
        for (const Monomial& m : monomials_of_degree(Ctx::STG, n, deg))
            if (m.even[n] == 0) basis.push_back(m);
        std::vector<Monomial> w_basis = monomials_of_degree(Ctx::W, n, deg);

        // constraint matrix for {p : [e_a,p]=0, [eb_a,p]=0}
        std::map<Monomial, int, MonomialLess> img_index;
        std::vector<std::vector<std::pair<int, Rat>>> cols(basis.size());
        int rows = 0;
        for (std::size_t j = 0; j < basis.size(); ++j) {
            SuperPolynomial p = SuperPolynomial::from_monomial(Ctx::STG, n, basis[j], Rat(1));
            for (int a = 0; a < n; ++a) {
                SuperPolynomial qe = stg_set_central_one(stg_ad_even(g, a, p));
                SuperPolynomial qo = stg_set_central_one(stg_ad_odd(g, a, p));
                for (const auto& [mm, cc] : qe.terms()) {
                    Monomial key = mm;
                    key.even.push_back(2 * a); // tag with which constraint produced it
                    auto [it, ins] = img_index.emplace(key, rows);
                    if (ins) ++rows;
                    cols[j].emplace_back(it->second, cc);
                }
                for (const auto& [mm, cc] : qo.terms()) {
                    Monomial key = mm;
                    key.even.push_back(2 * a + 1);
                    auto [it, ins] = img_index.emplace(key, rows);
                    if (ins) ++rows;
                    cols[j].emplace_back(it->second, cc);
                }
            }
        }
        RatMat constraint(rows, std::vector<Rat>(basis.size(), Rat(0)));
        for (std::size_t j = 0; j < basis.size(); ++j)
            for (const auto& [r, v] : cols[j]) constraint[r][j] += v;
        auto inv_basis = rat_kernel(constraint, static_cast<int>(basis.size()));

        // basic subspace of the W slice
        std::map<Monomial, int, MonomialLess> w_img_index;
        std::vector<std::vector<std::pair<int, Rat>>> w_cols(w_basis.size());
        int w_rows = 0;
        for (std::size_t j = 0; j < w_basis.size(); ++j) {
            SuperPolynomial p = SuperPolynomial::from_monomial(Ctx::W, n, w_basis[j], Rat(1));
            for (int a = 0; a < n; ++a) {
                SuperPolynomial qi = DerivationOperator::iota(g, Space::W, a).apply(p);
                SuperPolynomial ql = DerivationOperator::L(g, Space::W, a).apply(p);
                for (const auto& [mm, cc] : qi.terms()) {
                    Monomial key = mm;
                    key.even.push_back(2 * a);
                    auto [it, ins] = w_img_index.emplace(key, w_rows);
                    if (ins) ++w_rows;
                    w_cols[j].emplace_back(it->second, cc);
                }
                for (const auto& [mm, cc] : ql.terms()) {
                    Monomial key = mm;
                    key.even.push_back(2 * a + 1);
                    auto [it, ins] = w_img_index.emplace(key, w_rows);
                    if (ins) ++w_rows;
                    w_cols[j].emplace_back(it->second, cc);
                }
            }
        }
        RatMat w_constraint(w_rows, std::vector<Rat>(w_basis.size(), Rat(0)));
        for (std::size_t j = 0; j < w_basis.size(); ++j)
            for (const auto& [r, v] : w_cols[j]) w_constraint[r][j] += v;
        int basic_dim = static_cast<int>(w_basis.size()) - rat_rank(w_constraint);

        // sigma0 of every invariant basis vector must be basic, and dimensions match
        bool images_basic = true;
        for (const auto& vec : inv_basis) {
            SuperPolynomial p(Ctx::STG, n);
            for (std::size_t j = 0; j < basis.size(); ++j)
                if (vec[j] != 0) p.add_term(basis[j], vec[j]);
            auto cls = classify(g, sigma0(g, p), Space::W);
            if (!cls.basic) {
                images_basic = false;
                break;
            }
        }
        bool ok = images_basic && static_cast<int>(inv_basis.size()) == basic_dim;
        rep.add("sigma0", "invariants<->basic degree " + std::to_string(deg), ok,
                "inv_dim=" + std::to_string(inv_basis.size()) +
                    " basic_dim=" + std::to_string(basic_dim));
    }
    return rep;
}

} // namespace weilforge
