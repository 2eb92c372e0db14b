#include "weilforge/duflo.hpp"

#include <algorithm>
#include <random>

#include "weilforge/gdiff.hpp"
#include "weilforge/ratlinalg.hpp"

namespace weilforge {

namespace {

// truncated power series with rational coefficients, coeffs[k] is the s^k term
using RatSeries = std::vector<Rat>;

RatSeries series_mul(const RatSeries& a, const RatSeries& b, int order) {
    RatSeries r(order + 1, Rat(0));
    for (int i = 0; i <= order && i < static_cast<int>(a.size()); ++i) {
        if (a[i] == 0) continue;
        for (int j = 0; i + j <= order && j < static_cast<int>(b.size()); ++j)
            r[i + j] += a[i] * b[j];
    }
    return r;
}

// log(1 + u) for a series u with u(0) = 0
RatSeries series_log1p(const RatSeries& u, int order) {
    RatSeries r(order + 1, Rat(0));
    RatSeries upow = u;
    Rat sign = 1;
    for (int k = 1; k <= order; ++k) {
        for (int i = 0; i <= order && i < static_cast<int>(upow.size()); ++i)
            r[i] += sign * upow[i] / k;
        upow = series_mul(upow, u, order);
        sign = -sign;
    }
    return r;
}

} // namespace

std::vector<Rat> bernoulli_b2k(int kmax) {
    const int order = 2 * kmax;
    // sinh(x/2)/(x/2) = sum_k x^{2k} / (4^k (2k+1)!)
    RatSeries s(order + 1, Rat(0));
    Rat fourk = 1, fact = 1;
    for (int k = 0; 2 * k <= order; ++k) {
        s[2 * k] = Rat(1) / (fourk * fact);
        fourk *= 4;
        fact *= (2 * k + 2) * (2 * k + 3);
    }
    RatSeries u = s;
    u[0] = 0;
    RatSeries logs = series_log1p(u, order);
    std::vector<Rat> out;
    for (int k = 1; k <= kmax; ++k) out.push_back(logs[2 * k] / 2);
    return out;
}

std::vector<Rat> f_series_coeffs(int kmax) {
    // f(s) = (ln j)'(s) and ln j(s) = 2 sum b_{2k} s^{2k}, so c_{2k-1} = 4k b_{2k}
    std::vector<Rat> b = bernoulli_b2k(kmax);
    std::vector<Rat> out;
    for (int k = 1; k <= kmax; ++k) out.push_back(Rat(4 * k) * b[k - 1]);
    return out;
}

namespace {

using PolyMatrix = std::vector<std::vector<SuperPolynomial>>;

// symbolic ad_x with (ad_x)_{ab} = sum_c x_c f(c,b,a): column convention
// [x, e_b] = sum_a (ad_x)_{ab} e_a
PolyMatrix symbolic_ad(const QuadraticLieAlgebra& g) {
    const int n = g.dim();
    PolyMatrix m(n, std::vector<SuperPolynomial>(n, SuperPolynomial::zero(Ctx::SG, n)));
    for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b)
            for (int c = 0; c < n; ++c) {
                Rat fv = g.f(c, b, a);
                if (fv != 0)
                    m[a][b] = m[a][b] + SuperPolynomial::even_gen(Ctx::SG, n, c) * fv;
            }
    return m;
}

SuperPolynomial truncate_even(const SuperPolynomial& p, int max_deg) {
    SuperPolynomial out(p.ctx(), p.n());
    for (const auto& [m, c] : p.terms())
        if (m.even_degree() <= max_deg) out.add_term(m, c);
    return out;
}

PolyMatrix poly_mat_mul(const PolyMatrix& a, const PolyMatrix& b, int max_deg) {
    const int n = static_cast<int>(a.size());
    PolyMatrix r(n, std::vector<SuperPolynomial>(n, SuperPolynomial::zero(a[0][0].ctx(), n)));
    for (int i = 0; i < n; ++i)
        for (int k = 0; k < n; ++k) {
            if (a[i][k].is_zero()) continue;
            for (int j = 0; j < n; ++j) {
                if (b[k][j].is_zero()) continue;
                r[i][j] = truncate_even(r[i][j] + a[i][k] * b[k][j], max_deg);
            }
        }
    return r;
}

SuperPolynomial poly_trace(const PolyMatrix& m) {
    SuperPolynomial t = SuperPolynomial::zero(m[0][0].ctx(), static_cast<int>(m.size()));
    for (std::size_t i = 0; i < m.size(); ++i) t = t + m[i][i];
    return t;
}

// apply the constant-coefficient operator sum_alpha c_alpha prod (d/dv_a)^alpha_a
SuperPolynomial apply_diff_poly(const SuperPolynomial& series, const SuperPolynomial& p) {
    SuperPolynomial out(p.ctx(), p.n());
    for (const auto& [m, c] : series.terms()) {
        SuperPolynomial q = p;
        for (int i = 0; i < p.n() && !q.is_zero(); ++i)
            for (int k = 0; k < m.even[i] && !q.is_zero(); ++k) q = q.d_even(i);
        out = out + q * c;
    }
    return out;
}

} // namespace

TruncatedSeriesOperator jhalf_operator(const QuadraticLieAlgebra& g, int trunc) {
    const int n = g.dim();
    TruncatedSeriesOperator op;
    op.kind = TruncatedSeriesOperator::Kind::JHalf;
    op.truncation = trunc;
    op.n = n;
    const int kmax = trunc / 2;
    std::vector<Rat> b = bernoulli_b2k(std::max(kmax, 1));
    // log part: sum_k b_{2k} Tr(ad_x^{2k}), truncated at degree trunc
    SuperPolynomial logpart = SuperPolynomial::zero(Ctx::SG, n);
    if (kmax >= 1) {
        PolyMatrix ad = symbolic_ad(g);
        PolyMatrix ad2 = poly_mat_mul(ad, ad, trunc);
        PolyMatrix pow = ad2;
        for (int k = 1; k <= kmax; ++k) {
            logpart = logpart + poly_trace(pow) * b[k - 1];
            if (k < kmax) pow = poly_mat_mul(pow, ad2, trunc);
        }
        logpart = truncate_even(logpart, trunc);
    }
    // exponentiate (series starts in degree 2, so this terminates)
    SuperPolynomial expo = SuperPolynomial::constant(Ctx::SG, n, Rat(1));
    SuperPolynomial term = SuperPolynomial::constant(Ctx::SG, n, Rat(1));
    for (int k = 1; 2 * k <= trunc; ++k) {
        term = truncate_even(term * logpart, trunc) * Rat(1, k);
        if (term.is_zero()) break;
        expo = expo + term;
    }
    op.jhalf_poly = expo;
    return op;
}

TruncatedSeriesOperator T_operator(const QuadraticLieAlgebra& g, int trunc) {
    if (!g.metric_is_identity())
        throw ContextMismatch("T_operator requires the identity metric");
    const int n = g.dim();
    TruncatedSeriesOperator op;
    op.kind = TruncatedSeriesOperator::Kind::TExp;
    op.truncation = trunc;
    op.n = n;
    op.T.assign(n, std::vector<SuperPolynomial>(n, SuperPolynomial::zero(Ctx::SG, n)));
    const int kmax = (trunc + 1) / 2;
    if (kmax < 1) return op;
    std::vector<Rat> c = f_series_coeffs(kmax);
    PolyMatrix ad = symbolic_ad(g);
    PolyMatrix ad2 = poly_mat_mul(ad, ad, trunc);
    PolyMatrix pow = ad; // ad^{2k-1}
    for (int k = 1; k <= kmax; ++k) {
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j)
                op.T[i][j] = truncate_even(op.T[i][j] + pow[i][j] * c[k - 1], trunc);
        if (k < kmax) pow = poly_mat_mul(pow, ad2, trunc);
    }
    return op;
}

SuperPolynomial apply_jhalf(const TruncatedSeriesOperator& op, const SuperPolynomial& p) {
    if (op.kind != TruncatedSeriesOperator::Kind::JHalf)
        throw ContextMismatch("apply_jhalf needs a JHalf operator");
    if (p.max_even_degree() > op.truncation)
        throw TruncationTooLow("series truncated at " + std::to_string(op.truncation) +
                               ", input has even degree " + std::to_string(p.max_even_degree()));
    return apply_diff_poly(op.jhalf_poly, p);
}

SuperPolynomial apply_T(const TruncatedSeriesOperator& op, const SuperPolynomial& p) {
    if (op.kind != TruncatedSeriesOperator::Kind::TExp)
        throw ContextMismatch("apply_T needs a TExp operator");
    if (p.max_even_degree() > op.truncation)
        throw TruncationTooLow("series truncated at " + std::to_string(op.truncation) +
                               ", input has even degree " + std::to_string(p.max_even_degree()));
    const int n = p.n();
    // O = (1/2) sum_{a,b} T_ab(d_v) iota_a iota_b, applied as iota_b first
    auto big_o = [&](const SuperPolynomial& q) {
        SuperPolynomial out(q.ctx(), n);
        for (int a = 0; a < n; ++a)
            for (int b = 0; b < n; ++b) {
                if (op.T[a][b].is_zero()) continue;
                SuperPolynomial contracted = q.d_odd(b).d_odd(a);
                if (contracted.is_zero()) continue;
                out = out + apply_diff_poly(op.T[a][b], contracted) * Rat(1, 2);
            }
        return out;
    };
    SuperPolynomial result = p;
    SuperPolynomial term = p;
    for (int k = 1; !term.is_zero(); ++k) {
        term = big_o(term) * Rat(1, k);
        result = result + term;
    }
    return result;
}

NormalOrderedElement duflo_map(const QuadraticLieAlgebra& g, const SuperPolynomial& p, int trunc) {
    if (p.ctx() != Ctx::SG) throw ContextMismatch("duflo_map expects an S(g) element");
    return pbw_chi(g, apply_jhalf(jhalf_operator(g, trunc), p));
}

NormalOrderedElement chi_tensor_q(const QuadraticLieAlgebra& g, const SuperPolynomial& p) {
    if (p.ctx() != Ctx::W) throw ContextMismatch("chi_tensor_q expects a W element");
    const int n = g.dim();
    NormalOrderedElement out(NCtx::NW, &g);
    std::map<std::uint32_t, SuperPolynomial> by_mask;
    for (const auto& [m, c] : p.terms()) {
        auto [it, ins] = by_mask.emplace(m.odd, SuperPolynomial(Ctx::SG, n));
        Monomial even_only;
        even_only.even = m.even;
        it->second.add_term(even_only, c);
    }
    for (const auto& [mask, evpoly] : by_mask) {
        NormalOrderedElement chi = pbw_chi(g, evpoly);
        for (const auto& [m, c] : chi.terms()) {
            Monomial nm = m;
            nm.odd = mask;
            out.add_term(nm, c);
        }
    }
    return out;
}

NormalOrderedElement quantization_Q(const QuadraticLieAlgebra& g, const SuperPolynomial& p,
                                    int trunc) {
    if (p.ctx() != Ctx::W) throw ContextMismatch("quantization_Q expects a W element");
    if (!g.metric_is_identity())
        throw ContextMismatch("quantization_Q requires the identity metric");
    SuperPolynomial stage = apply_T(T_operator(g, trunc), p);
    stage = apply_jhalf(jhalf_operator(g, trunc), stage);
    return chi_tensor_q(g, stage);
}

NormalOrderedElement super_duflo(const QuadraticLieAlgebra& g, const SuperLieAlgebra& salg,
                                 const SuperPolynomial& p, int trunc) {
    if (p.ctx() != Ctx::STG) throw ContextMismatch("super_duflo expects an S(T~g[1]) element");
    // str(ad_x^k) must vanish identically; spot-check on deterministic rational x
    std::mt19937 rng(20240517u);
    std::uniform_int_distribution<int> num(-6, 6);
    for (int trial = 0; trial < 4; ++trial) {
        std::vector<Rat> x(salg.total_dim());
        for (auto& xi : x) {
            xi = Rat(num(rng), 1 + trial);
            xi.canonicalize();
        }
        auto traces = salg.supertrace_powers(x, std::max(2, trunc));
        for (std::size_t k = 0; k < traces.size(); ++k)
            if (traces[k] != 0)
                throw SupertraceNonzero("str(ad_x^" + std::to_string(k + 1) +
                                        ") != 0, j^{1/2} would not be 1");
    }
    return pbw_chi(g, p);
}

Report verify_main_theorem(const QuadraticLieAlgebra& g, int max_degree) {
    Report rep;
    const int n = g.dim();
    for (int deg = 0; deg <= max_degree; ++deg) {
        bool ok = true;
        std::string counter;
        int checked = 0;
        for (const Monomial& m : monomials_of_degree(Ctx::STG, n, deg)) {
            if (m.even[n] > 0) continue; // c-free
            SuperPolynomial p = SuperPolynomial::from_monomial(Ctx::STG, n, m, Rat(1));
            NormalOrderedElement lhs = quantization_Q(g, sigma0(g, p), std::max(deg, 2));
            NormalOrderedElement rhs = sigma1(pbw_chi(g, p));
            ++checked;
            if (!(lhs == rhs)) {
                ok = false;
                counter = p.to_string() + " -> LHS " + lhs.to_string() + " vs RHS " +
                          rhs.to_string();
                break;
            }
        }
        rep.add("main_theorem[" + g.name() + "]", "degree " + std::to_string(deg), ok,
                ok ? std::to_string(checked) + " monomials" : counter);
    }
    return rep;
}

Report verify_invariant_homomorphism(const QuadraticLieAlgebra& g, const SuperPolynomial& p,
                                     const std::vector<int>& powers) {
    if (p.ctx() != Ctx::W) throw ContextMismatch("expected a W element");
    if (!classify(g, p, Space::W).basic)
        throw NotBasic("element " + p.to_string() + " is not basic");
    Report rep;
    int maxp = 1;
    for (int m : powers) maxp = std::max(maxp, m);
    int trunc = p.max_even_degree() * maxp + p.max_weighted_degree() * maxp;
    NormalOrderedElement qp = quantization_Q(g, p, trunc);
    for (int m : powers) {
        NormalOrderedElement lhs = quantization_Q(g, p.pow(m), trunc);
        NormalOrderedElement rhs = nc_power(qp, m);
        rep.add("corollary[" + g.name() + "]",
                "Q(p^" + std::to_string(m) + ")=Q(p)^" + std::to_string(m), lhs == rhs,
                lhs == rhs ? "" : "p=" + p.to_string());
    }
    return rep;
}

Report verify_chain_map(const QuadraticLieAlgebra& g, int max_degree) {
    Report rep;
    const int n = g.dim();
    const int trunc = max_degree + 2;
    std::vector<std::pair<DerivationOperator, DerivationOperator>> ops;
    ops.emplace_back(DerivationOperator::d(g, Space::W), DerivationOperator::d(g, Space::NW));
    for (int a = 0; a < n; ++a) {
        ops.emplace_back(DerivationOperator::iota(g, Space::W, a),
                         DerivationOperator::iota(g, Space::NW, a));
        ops.emplace_back(DerivationOperator::L(g, Space::W, a),
                         DerivationOperator::L(g, Space::NW, a));
    }
    for (const auto& [opw, opn] : ops) {
        bool ok = true;
        std::string counter;
        for (const Monomial& m : monomials_up_to(Ctx::W, n, max_degree)) {
            SuperPolynomial p = SuperPolynomial::from_monomial(Ctx::W, n, m, Rat(1));
            NormalOrderedElement lhs = quantization_Q(g, opw.apply(p), trunc);
            NormalOrderedElement rhs = opn.apply(quantization_Q(g, p, trunc));
            if (!(lhs == rhs)) {
                ok = false;
                counter = p.to_string();
                break;
            }
        }
        rep.add("chain_map[" + g.name() + "]", "Q." + opw.name() + "=" + opw.name() + ".Q", ok,
                counter);
    }
    return rep;
}

Report verify_q_restrictions(const QuadraticLieAlgebra& g, int max_degree) {
    Report rep;
    const int n = g.dim();
    // odd part: Q on Lambda (x) 1 equals chevalley_q on the full odd-subset basis
    {
        bool ok = true;
        std::string counter;
        for (std::uint32_t mask = 0; mask < (1u << n); ++mask) {
            Monomial m;
            m.even.assign(n, 0);
            m.odd = mask;
            SuperPolynomial p = SuperPolynomial::from_monomial(Ctx::W, n, m, Rat(1));
            NormalOrderedElement lhs = quantization_Q(g, p, 2);
            Monomial em;
            em.even.assign(0, 0);
            em.odd = mask;
            SuperPolynomial ext = SuperPolynomial::from_monomial(Ctx::EXT, n, em, Rat(1));
            NormalOrderedElement qcl = chevalley_q(g, ext);
            // compare inside NW
            NormalOrderedElement rhs(NCtx::NW, &g);
            for (const auto& [mm, cc] : qcl.terms()) rhs.add_term(mm, cc);
            if (!(lhs == rhs)) {
                ok = false;
                counter = p.to_string();
                break;
            }
        }
        rep.add("q_restrict[" + g.name() + "]", "Q|odd = chevalley_q", ok, counter);
    }
    // even part: Q on 1 (x) S equals duflo_map on even monomials of degree <= max_degree
    {
        bool ok = true;
        std::string counter;
        for (const Monomial& m : monomials_up_to(Ctx::SG, n, 2 * max_degree)) {
            if (m.even_degree() > max_degree) continue;
            Monomial wm;
            wm.even = m.even;
            SuperPolynomial wp = SuperPolynomial::from_monomial(Ctx::W, n, wm, Rat(1));
            SuperPolynomial sp = SuperPolynomial::from_monomial(Ctx::SG, n, m, Rat(1));
            NormalOrderedElement lhs = quantization_Q(g, wp, max_degree);
            NormalOrderedElement duf = duflo_map(g, sp, max_degree);
            NormalOrderedElement rhs(NCtx::NW, &g);
            for (const auto& [mm, cc] : duf.terms()) rhs.add_term(mm, cc);
            if (!(lhs == rhs)) {
                ok = false;
                counter = wp.to_string();
                break;
            }
        }
        rep.add("q_restrict[" + g.name() + "]", "Q|even = duflo_map", ok, counter);
    }
    return rep;
}

Report verify_q_bijective(const QuadraticLieAlgebra& g, int max_degree) {
    Report rep;
    const int n = g.dim();
    auto basis = monomials_up_to(Ctx::W, n, max_degree);
    auto nc_basis = nc_monomials_up_to(NCtx::NW, n, max_degree);
    auto index_of = [&](const Monomial& m) -> int {
        for (std::size_t i = 0; i < nc_basis.size(); ++i)
            if (nc_basis[i] == m) return static_cast<int>(i);
        return -1;
    };
    RatMat mat(nc_basis.size(), std::vector<Rat>(basis.size(), Rat(0)));
    bool in_range = true;
    for (std::size_t j = 0; j < basis.size(); ++j) {
        NormalOrderedElement q = quantization_Q(
            g, SuperPolynomial::from_monomial(Ctx::W, n, basis[j], Rat(1)), max_degree + 2);
        for (const auto& [m, c] : q.terms()) {
            int i = index_of(m);
            if (i < 0) { in_range = false; break; }
            mat[i][j] = c;
        }
    }
    int rank = rat_rank(mat);
    bool ok = in_range && rank == static_cast<int>(basis.size()) &&
              basis.size() == nc_basis.size();
    rep.add("q_linear[" + g.name() + "]", "bijective on degree<=" + std::to_string(max_degree), ok,
            "rank=" + std::to_string(rank) + "/" + std::to_string(basis.size()));
    return rep;
}

Report verify_jhalf_preserves_invariance(const QuadraticLieAlgebra& g, int max_degree) {
    Report rep;
    const int n = g.dim();
    TruncatedSeriesOperator jh = jhalf_operator(g, max_degree);
    std::vector<DerivationOperator> L;
    for (int a = 0; a < n; ++a) L.push_back(DerivationOperator::L(g, Space::W, a));
    bool ok = true;
    std::string detail;
    for (int deg = 0; deg <= max_degree; ++deg) {
        auto basis = monomials_of_degree(Ctx::W, n, deg);
        // invariant subspace: kernel of stacked L_a matrices
        std::map<Monomial, int, MonomialLess> img_index;
        std::vector<std::vector<std::pair<int, Rat>>> cols(basis.size());
        int rows = 0;
        for (std::size_t j = 0; j < basis.size(); ++j) {
            SuperPolynomial p = SuperPolynomial::from_monomial(Ctx::W, n, basis[j], Rat(1));
            for (int a = 0; a < n; ++a) {
                SuperPolynomial q = L[a].apply(p);
                for (const auto& [mm, cc] : q.terms()) {
                    Monomial key = mm;
                    key.even.push_back(a);
                    auto [it, ins] = img_index.emplace(key, rows);
                    if (ins) ++rows;
                    cols[j].emplace_back(it->second, cc);
                }
            }
        }
        RatMat constraint(rows, std::vector<Rat>(basis.size(), Rat(0)));
        for (std::size_t j = 0; j < basis.size(); ++j)
            for (const auto& [r, v] : cols[j]) constraint[r][j] += v;
        for (const auto& vec : rat_kernel(constraint)) {
            SuperPolynomial p(Ctx::W, n);
            for (std::size_t j = 0; j < basis.size(); ++j)
                if (vec[j] != 0) p.add_term(basis[j], vec[j]);
            SuperPolynomial q = apply_jhalf(jh, p);
            for (int a = 0; a < n; ++a)
                if (!L[a].apply(q).is_zero()) {
                    ok = false;
                    detail = p.to_string();
                }
        }
    }
    rep.add("jhalf[" + g.name() + "]", "preserves invariance degree<=" + std::to_string(max_degree),
            ok, detail);
    return rep;
}

} // namespace weilforge
