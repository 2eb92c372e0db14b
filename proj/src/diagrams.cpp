#include "weilforge/diagrams.hpp"

#include "weilforge/duflo.hpp"

#include <algorithm>
#include <array>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>

namespace weilforge {

const char* leg_label_name(LegLabel l) {
    switch (l) {
        case LegLabel::Plain: return "plain";
        case LegLabel::Even: return "even";
        case LegLabel::Odd: return "odd";
        case LegLabel::Super: return "super";
    }
    return "?";
}

bool Diagram::has_strut() const {
    for (std::size_t i = 0; i < legs.size(); ++i)
        if (slot_is_leg(mate[leg_slot(static_cast<int>(i))])) return true;
    return false;
}

void Diagram::validate() const {
    const int slots = total_slots();
    if (static_cast<int>(mate.size()) != slots)
        throw InconsistentLabels("mate table has wrong size");
    for (int s = 0; s < slots; ++s) {
        if (mate[s] < 0 || mate[s] >= slots || mate[s] == s || mate[mate[s]] != s)
            throw InconsistentLabels("mate table is not a perfect matching");
    }
    if ((n_internal + static_cast<int>(legs.size())) % 2 != 0)
        throw InconsistentLabels("total vertex count must be even");
    if (based) {
        if (base_order.size() != legs.size())
            throw InconsistentLabels("base order must list every leg once");
        std::vector<bool> seen(legs.size(), false);
        for (int i : base_order) {
            if (i < 0 || i >= static_cast<int>(legs.size()) || seen[i])
                throw InconsistentLabels("base order must list every leg once");
            seen[i] = true;
        }
    }
}

Diagram make_wheel(int spokes, LegLabel label, const std::string& color) {
    if (spokes < 2 || spokes % 2 != 0)
        throw OddWheel("wheels need an even spoke count >= 2, got " + std::to_string(spokes));
    Diagram d;
    d.n_internal = spokes;
    d.legs.assign(spokes, Diagram::Leg{color, label});
    d.mate.assign(d.total_slots(), -1);
    for (int v = 0; v < spokes; ++v) {
        int leg = d.leg_slot(v);
        d.mate[3 * v] = leg;
        d.mate[leg] = 3 * v;
        int next = (v + 1) % spokes;
        d.mate[3 * v + 1] = 3 * next + 2;
        d.mate[3 * next + 2] = 3 * v + 1;
    }
    d.validate();
    return d;
}

Diagram split_at_leg(const Diagram& wheel, int leg_index) {
    const Diagram& d = wheel;
    int lslot = d.leg_slot(leg_index);
    int vslot = d.mate[lslot];
    if (d.slot_is_leg(vslot)) throw InconsistentLabels("cannot split a strut");
    int v = vslot / 3;
    int k0 = vslot % 3;
    // the removed vertex's other two slots, in cyclic order after the leg
    int next_end = d.mate[3 * v + (k0 + 1) % 3];
    int prev_end = d.mate[3 * v + (k0 + 2) % 3];
    Diagram out;
    out.n_internal = d.n_internal - 1;
    auto new_vertex = [&](int ov) { return ov < v ? ov : ov - 1; };
    auto new_slot = [&](int os) -> int {
        int ov = os / 3;
        return 3 * new_vertex(ov) + os % 3;
    };
    for (std::size_t i = 0; i < d.legs.size(); ++i)
        if (static_cast<int>(i) != leg_index) out.legs.push_back(d.legs[i]);
    // two new odd legs, next-side end first (sign convention pinned by the
    // evaluate / apply_T cross-check)
    std::string col = d.legs[leg_index].color;
    out.legs.push_back(Diagram::Leg{col, LegLabel::Odd});
    out.legs.push_back(Diagram::Leg{col, LegLabel::Odd});
    int n_new_legs = static_cast<int>(out.legs.size());
    out.mate.assign(out.total_slots(), -1);
    auto remap = [&](int os) -> int {
        if (!d.slot_is_leg(os)) return new_slot(os);
        int li = d.slot_leg_index(os);
        int nli = li < leg_index ? li : li - 1;
        return out.leg_slot(nli);
    };
    for (int s = 0; s < d.total_slots(); ++s) {
        int m = d.mate[s];
        if (s / 3 == v && !d.slot_is_leg(s)) continue;
        if (m / 3 == v && !d.slot_is_leg(m)) continue;
        if (s == lslot || m == lslot) continue;
        out.mate[remap(s)] = remap(m);
        out.mate[remap(m)] = remap(s);
    }
    out.mate[remap(next_end)] = out.leg_slot(n_new_legs - 2);
    out.mate[out.leg_slot(n_new_legs - 2)] = remap(next_end);
    out.mate[remap(prev_end)] = out.leg_slot(n_new_legs - 1);
    out.mate[out.leg_slot(n_new_legs - 1)] = remap(prev_end);
    out.validate();
    return out;
}

namespace {

std::string leg_token(const Diagram& d, int leg_index) {
    const auto& leg = d.legs[leg_index];
    std::string t = "L(" + leg.color + "," + leg_label_name(leg.label);
    if (d.based) {
        int pos = -1;
        for (std::size_t i = 0; i < d.base_order.size(); ++i)
            if (d.base_order[i] == leg_index) pos = static_cast<int>(i);
        t += "," + std::to_string(pos);
    }
    t += ")";
    return t;
}

struct ComponentEncoding {
    std::string key;
    std::vector<int> vertex_order; // old ids in visit order
    std::vector<int> entry_rel;    // entry slot offset per visited vertex
    std::vector<int> leg_order;    // old leg indices in visit order
};

// deterministic walk of one component from (start vertex, rotation)
ComponentEncoding encode_from(const Diagram& d, int start, int rot) {
    ComponentEncoding enc;
    std::map<int, int> id;     // old vertex -> visit id
    std::map<int, int> entry;  // old vertex -> absolute entry slot
    id[start] = 0;
    entry[start] = 3 * start + rot;
    enc.vertex_order = {start};
    enc.entry_rel = {rot};
    std::ostringstream os;
    std::size_t head = 0;
    while (head < enc.vertex_order.size()) {
        int v = enc.vertex_order[head++];
        int e = entry[v];
        os << "[";
        for (int k = 0; k < 3; ++k) {
            int s = 3 * v + ((e - 3 * v) + k) % 3;
            int m = d.mate[s];
            if (d.slot_is_leg(m)) {
                enc.leg_order.push_back(d.slot_leg_index(m));
                os << leg_token(d, d.slot_leg_index(m));
            } else {
                int w = m / 3;
                auto it = id.find(w);
                if (it == id.end()) {
                    int nid = static_cast<int>(enc.vertex_order.size());
                    id[w] = nid;
                    entry[w] = m;
                    enc.vertex_order.push_back(w);
                    enc.entry_rel.push_back(m % 3);
                    os << "N" << nid;
                } else {
                    int rel = ((m - 3 * w) - (entry[w] - 3 * w) + 3) % 3;
                    os << "V" << it->second << "." << rel;
                }
            }
        }
        os << "]";
    }
    enc.key = os.str();
    return enc;
}

struct ComponentPieces {
    std::vector<std::vector<int>> vertices; // per component, internal vertices
    std::vector<std::vector<int>> legs;     // per component, leg indices
};

ComponentPieces find_components(const Diagram& d) {
    ComponentPieces out;
    std::vector<int> comp(d.total_slots(), -1);
    int nc = 0;
    for (int s0 = 0; s0 < d.total_slots(); ++s0) {
        if (comp[s0] >= 0) continue;
        std::vector<int> stack{s0};
        comp[s0] = nc;
        while (!stack.empty()) {
            int s = stack.back();
            stack.pop_back();
            std::vector<int> next;
            next.push_back(d.mate[s]);
            if (!d.slot_is_leg(s)) {
                int v = s / 3;
                next.push_back(3 * v + (s % 3 + 1) % 3);
                next.push_back(3 * v + (s % 3 + 2) % 3);
            }
            for (int t : next)
                if (comp[t] < 0) {
                    comp[t] = nc;
                    stack.push_back(t);
                }
        }
        ++nc;
    }
    out.vertices.resize(nc);
    out.legs.resize(nc);
    for (int v = 0; v < d.n_internal; ++v) out.vertices[comp[3 * v]].push_back(v);
    for (std::size_t i = 0; i < d.legs.size(); ++i)
        out.legs[comp[d.leg_slot(static_cast<int>(i))]].push_back(static_cast<int>(i));
    return out;
}

} // namespace

CanonicalForm canonicalize(const Diagram& d) {
    d.validate();
    ComponentPieces comps = find_components(d);
    struct CompCanon {
        std::string key;
        std::vector<int> vertex_order;
        std::vector<int> entry_rel;
        std::vector<int> leg_order;
    };
    std::vector<CompCanon> canons;
    for (std::size_t ci = 0; ci < comps.vertices.size(); ++ci) {
        CompCanon best;
        if (comps.vertices[ci].empty()) {
            // strut component: exactly two legs joined by an edge
            std::vector<int> ls = comps.legs[ci];
            std::sort(ls.begin(), ls.end(), [&](int a, int b) {
                return leg_token(d, a) < leg_token(d, b);
            });
            best.key = "S{" + leg_token(d, ls[0]) + leg_token(d, ls[1]) + "}";
            best.leg_order = ls;
        } else {
            bool first = true;
            for (int v : comps.vertices[ci])
                for (int rot = 0; rot < 3; ++rot) {
                    ComponentEncoding enc = encode_from(d, v, rot);
                    if (first || enc.key < best.key) {
                        best.key = enc.key;
                        best.vertex_order = enc.vertex_order;
                        best.entry_rel = enc.entry_rel;
                        best.leg_order = enc.leg_order;
                        first = false;
                    }
                }
        }
        canons.push_back(std::move(best));
    }
    std::vector<int> comp_order(canons.size());
    for (std::size_t i = 0; i < canons.size(); ++i) comp_order[i] = static_cast<int>(i);
    std::stable_sort(comp_order.begin(), comp_order.end(),
                     [&](int a, int b) { return canons[a].key < canons[b].key; });

    // rebuild the canonical representative
    CanonicalForm out;
    Diagram& nd = out.diagram;
    nd.n_internal = d.n_internal;
    nd.based = d.based;
    std::vector<int> vmap(d.n_internal, -1); // old vertex -> new vertex
    std::vector<int> vrot(d.n_internal, 0);
    std::vector<int> lmap(d.legs.size(), -1); // old leg -> new leg
    std::vector<int> canonical_leg_order;     // old leg indices
    int vnext = 0;
    std::string key;
    for (int ci : comp_order) {
        key += canons[ci].key;
        for (std::size_t i = 0; i < canons[ci].vertex_order.size(); ++i) {
            vmap[canons[ci].vertex_order[i]] = vnext++;
            vrot[canons[ci].vertex_order[i]] = canons[ci].entry_rel[i];
        }
        for (int l : canons[ci].leg_order) canonical_leg_order.push_back(l);
    }
    out.key = key;
    for (int old : canonical_leg_order) {
        lmap[old] = static_cast<int>(nd.legs.size());
        nd.legs.push_back(d.legs[old]);
    }
    auto new_slot = [&](int os) -> int {
        if (d.slot_is_leg(os)) return nd.leg_slot(lmap[d.slot_leg_index(os)]);
        int v = os / 3;
        return 3 * vmap[v] + ((os % 3) - vrot[v] + 3) % 3;
    };
    nd.mate.assign(d.total_slots(), -1);
    for (int s = 0; s < d.total_slots(); ++s) {
        int ns = new_slot(s), nm = new_slot(d.mate[s]);
        nd.mate[ns] = nm;
        nd.mate[nm] = ns;
    }
    if (d.based) {
        nd.base_order.resize(d.base_order.size());
        for (std::size_t i = 0; i < d.base_order.size(); ++i)
            nd.base_order[i] = lmap[d.base_order[i]];
        out.sign = 1; // based evaluation uses the base order only
    } else {
        // parity of the odd-labeled legs' permutation, stored -> canonical
        std::vector<int> odd_seq;
        for (int old : canonical_leg_order)
            if (d.legs[old].label == LegLabel::Odd) odd_seq.push_back(old);
        int inv = 0;
        for (std::size_t i = 0; i < odd_seq.size(); ++i)
            for (std::size_t j = i + 1; j < odd_seq.size(); ++j)
                if (odd_seq[i] > odd_seq[j]) ++inv;
        out.sign = (inv & 1) ? -1 : 1;
    }
    nd.validate();
    return out;
}

DiagramCombo DiagramCombo::empty_diagram() {
    Diagram d;
    DiagramCombo c;
    c.add(d, Rat(1));
    return c;
}

void DiagramCombo::add(const Diagram& d, const Rat& c) {
    if (c == 0) return;
    CanonicalForm cf = canonicalize(d);
    auto [it, inserted] = terms_.emplace(cf.key, std::make_pair(cf.diagram, c * cf.sign));
    if (!inserted) {
        it->second.second += c * cf.sign;
        if (it->second.second == 0) terms_.erase(it);
    }
}

DiagramCombo DiagramCombo::operator+(const DiagramCombo& o) const {
    DiagramCombo r = *this;
    for (const auto& [k, dv] : o.terms_) {
        auto [it, inserted] = r.terms_.emplace(k, dv);
        if (!inserted) {
            it->second.second += dv.second;
            if (it->second.second == 0) r.terms_.erase(it);
        }
    }
    return r;
}

DiagramCombo DiagramCombo::operator-(const DiagramCombo& o) const {
    return *this + o * Rat(-1);
}

DiagramCombo DiagramCombo::operator*(const Rat& c) const {
    DiagramCombo r;
    if (c == 0) return r;
    for (const auto& [k, dv] : terms_) r.terms_.emplace(k, std::make_pair(dv.first, dv.second * c));
    return r;
}

bool DiagramCombo::operator==(const DiagramCombo& o) const {
    if (terms_.size() != o.terms_.size()) return false;
    auto it = terms_.begin();
    auto jt = o.terms_.begin();
    for (; it != terms_.end(); ++it, ++jt)
        if (it->first != jt->first || it->second.second != jt->second.second) return false;
    return true;
}

std::string DiagramCombo::to_string() const {
    if (terms_.empty()) return "0";
    std::ostringstream os;
    bool first = true;
    for (const auto& [k, dv] : terms_) {
        if (!first) os << " + ";
        first = false;
        os << rat_to_string(dv.second) << "*" << (k.empty() ? "{}" : k);
    }
    return os.str();
}

Diagram disjoint_union(const Diagram& a, const Diagram& b) {
    Diagram d;
    d.n_internal = a.n_internal + b.n_internal;
    d.legs = a.legs;
    d.legs.insert(d.legs.end(), b.legs.begin(), b.legs.end());
    d.mate.assign(d.total_slots(), -1);
    auto map_a = [&](int s) {
        return a.slot_is_leg(s) ? d.leg_slot(a.slot_leg_index(s)) : 3 * (s / 3) + s % 3;
    };
    auto map_b = [&](int s) {
        return b.slot_is_leg(s)
                   ? d.leg_slot(static_cast<int>(a.legs.size()) + b.slot_leg_index(s))
                   : 3 * (a.n_internal + s / 3) + s % 3;
    };
    for (int s = 0; s < a.total_slots(); ++s) d.mate[map_a(s)] = map_a(a.mate[s]);
    for (int s = 0; s < b.total_slots(); ++s) d.mate[map_b(s)] = map_b(b.mate[s]);
    d.based = false;
    return d;
}

DiagramCombo disjoint_union(const DiagramCombo& a, const DiagramCombo& b) {
    DiagramCombo r;
    for (const auto& [ka, da] : a.terms())
        for (const auto& [kb, db] : b.terms())
            r.add(disjoint_union(da.first, db.first), da.second * db.second);
    return r;
}

Diagram connect_sum_based(const Diagram& a, const Diagram& b) {
    if (!a.based || !b.based) throw InconsistentLabels("connect sum needs based diagrams");
    Diagram d = disjoint_union(a, b);
    d.based = true;
    d.base_order = a.base_order;
    for (int i : b.base_order) d.base_order.push_back(static_cast<int>(a.legs.size()) + i);
    return d;
}

DiagramCombo connect_sum_based(const DiagramCombo& a, const DiagramCombo& b) {
    DiagramCombo r;
    for (const auto& [ka, da] : a.terms())
        for (const auto& [kb, db] : b.terms())
            r.add(connect_sum_based(da.first, db.first), da.second * db.second);
    return r;
}

DiagramCombo recolor_all(const DiagramCombo& c, const std::string& color) {
    DiagramCombo r;
    for (const auto& [k, dv] : c.terms()) {
        Diagram d = dv.first;
        for (auto& leg : d.legs) leg.color = color;
        r.add(d, dv.second);
    }
    return r;
}

DiagramCombo delta_coloring(const DiagramCombo& c, const std::string& x, const std::string& y) {
    DiagramCombo r;
    for (const auto& [k, dv] : c.terms()) {
        const Diagram& d = dv.first;
        const int nl = static_cast<int>(d.legs.size());
        for (std::uint32_t mask = 0; mask < (1u << nl); ++mask) {
            Diagram e = d;
            for (int i = 0; i < nl; ++i) e.legs[i].color = (mask & (1u << i)) ? y : x;
            r.add(e, dv.second);
        }
    }
    return r;
}

namespace {

bool labels_compatible(LegLabel c, LegLabel d) {
    switch (c) {
        case LegLabel::Plain: return d == LegLabel::Plain;
        case LegLabel::Even: return d == LegLabel::Even || d == LegLabel::Super;
        case LegLabel::Odd: return d == LegLabel::Odd || d == LegLabel::Super;
        case LegLabel::Super:
            return d == LegLabel::Even || d == LegLabel::Odd || d == LegLabel::Super;
    }
    return false;
}

// glue all legs of C onto D along `match` (C leg -> D leg) with the given sign
Diagram glue(const Diagram& C, const Diagram& D, const std::vector<int>& match) {
    Diagram out;
    out.n_internal = D.n_internal + C.n_internal;
    std::vector<int> dlmap(D.legs.size(), -1);
    std::vector<bool> dglued(D.legs.size(), false);
    for (int dl : match)
        if (dl >= 0) dglued[dl] = true;
    for (std::size_t i = 0; i < D.legs.size(); ++i) {
        if (dglued[i]) continue;
        dlmap[i] = static_cast<int>(out.legs.size());
        out.legs.push_back(D.legs[i]);
    }
    // merged pre-slot space: D slots, then C slots shifted
    const int doff = 0;
    const int coff = D.total_slots();
    auto pre_mate = [&](int ps) -> int {
        return ps < coff ? D.mate[ps] + doff : C.mate[ps - coff] + coff;
    };
    std::vector<int> partner(coff + C.total_slots(), -1);
    for (std::size_t cl = 0; cl < match.size(); ++cl) {
        int cs = coff + C.leg_slot(static_cast<int>(cl));
        int ds = doff + D.leg_slot(match[cl]);
        partner[cs] = ds;
        partner[ds] = cs;
    }
    auto to_new = [&](int ps) -> int {
        if (ps < coff) {
            if (D.slot_is_leg(ps)) return out.leg_slot(dlmap[D.slot_leg_index(ps)]);
            return ps; // D internal slots keep their position
        }
        int cs = ps - coff;
        return 3 * (D.n_internal + cs / 3) + cs % 3; // C legs are all glued
    };
    out.mate.assign(out.total_slots(), -1);
    for (int ps = 0; ps < coff + C.total_slots(); ++ps) {
        bool is_glued_leg = partner[ps] >= 0;
        if (is_glued_leg) continue;
        if (ps < coff && D.slot_is_leg(ps) && dglued[D.slot_leg_index(ps)]) continue;
        // resolve through glued-leg wormholes
        int q = pre_mate(ps);
        while (partner[q] >= 0) q = pre_mate(partner[q]);
        out.mate[to_new(ps)] = to_new(q);
    }
    out.validate();
    return out;
}

void enumerate_gluings(const Diagram& C, const Diagram& D, bool require_all,
                       const Rat& coeff, DiagramCombo& out) {
    const int ncl = static_cast<int>(C.legs.size());
    const int ndl = static_cast<int>(D.legs.size());
    if (require_all && ncl != ndl) return;
    if (ncl > ndl) return; // "0 if C has more legs than D"
    // D's odd-labeled legs in stored order, for the iota sign bookkeeping
    std::vector<int> match(ncl, -1);
    std::vector<bool> used(ndl, false);
    std::vector<int> odd_list;
    for (int i = 0; i < ndl; ++i)
        if (D.legs[i].label == LegLabel::Odd) odd_list.push_back(i);

    std::function<void(int, int)> rec = [&](int ci, int sign) {
        if (ci < 0) {
            if (require_all)
                for (bool u : used)
                    if (!u) return;
            out.add(glue(C, D, match), coeff * sign);
            return;
        }
        const auto& cleg = C.legs[ci];
        for (int di = 0; di < ndl; ++di) {
            if (used[di]) continue;
            if (D.legs[di].color != cleg.color) continue;
            if (!labels_compatible(cleg.label, D.legs[di].label)) continue;
            int s = sign;
            bool pair_is_odd = cleg.label == LegLabel::Odd && D.legs[di].label == LegLabel::Odd;
            if (pair_is_odd) {
                int pos = 0;
                for (int o : odd_list) {
                    if (o == di) break;
                    if (!used[o]) ++pos;
                }
                if (pos & 1) s = -s;
            }
            used[di] = true;
            match[ci] = di;
            rec(ci - 1, s);
            match[ci] = -1;
            used[di] = false;
        }
    };
    rec(ncl - 1, 1); // process C legs right to left: iota_{c_k} acts first
}

} // namespace

DiagramCombo apply_partial(const DiagramCombo& c, const DiagramCombo& d) {
    DiagramCombo out;
    for (const auto& [kc, cv] : c.terms()) {
        if (cv.first.has_strut())
            throw StrutInLeftArgument("the operator diagram may not contain struts");
        for (const auto& [kd, dv] : d.terms())
            enumerate_gluings(cv.first, dv.first, false, cv.second * dv.second, out);
    }
    return out;
}

DiagramCombo inner_product(const DiagramCombo& c, const DiagramCombo& d) {
    DiagramCombo out;
    for (const auto& [kc, cv] : c.terms()) {
        if (cv.first.has_strut())
            throw StrutInLeftArgument("the left argument may not contain struts");
        for (const auto& [kd, dv] : d.terms())
            enumerate_gluings(cv.first, dv.first, true, cv.second * dv.second, out);
    }
    return out;
}

DiagramCombo gamma_apply(const DiagramCombo& c) {
    DiagramCombo out;
    for (const auto& [k, dv] : c.terms()) {
        const Diagram& d = dv.first;
        const int nl = static_cast<int>(d.legs.size());
        std::vector<int> perm(nl);
        for (int i = 0; i < nl; ++i) perm[i] = i;
        Rat kfact = 1;
        for (int i = 2; i <= nl; ++i) kfact *= i;
        do {
            // Koszul sign: parity of the odd-labeled subsequence
            std::vector<int> odds;
            for (int i : perm)
                if (d.legs[i].label == LegLabel::Odd) odds.push_back(i);
            int inv = 0;
            for (std::size_t i = 0; i < odds.size(); ++i)
                for (std::size_t j = i + 1; j < odds.size(); ++j)
                    if (odds[i] > odds[j]) ++inv;
            Diagram e = d;
            e.based = true;
            e.base_order = perm;
            out.add(e, dv.second * ((inv & 1) ? -1 : 1) / kfact);
        } while (std::next_permutation(perm.begin(), perm.end()));
    }
    return out;
}

namespace {

// is this component a wheel: every internal vertex carries exactly one leg and
// the ring closes up
bool component_is_wheel(const Diagram& d, const std::vector<int>& vertices,
                        const std::vector<int>& legs) {
    if (vertices.empty()) return false;
    if (vertices.size() != legs.size()) return false;
    for (int v : vertices) {
        int leg_count = 0;
        for (int k = 0; k < 3; ++k)
            if (d.slot_is_leg(d.mate[3 * v + k])) ++leg_count;
        if (leg_count != 1) return false;
    }
    return true;
}

// extract a component as its own diagram (legs keep stored relative order)
Diagram extract_component(const Diagram& d, const std::vector<int>& vertices,
                          const std::vector<int>& legs) {
    Diagram out;
    out.n_internal = static_cast<int>(vertices.size());
    std::map<int, int> vmap;
    for (std::size_t i = 0; i < vertices.size(); ++i) vmap[vertices[i]] = static_cast<int>(i);
    std::map<int, int> lmap;
    for (std::size_t i = 0; i < legs.size(); ++i) {
        lmap[legs[i]] = static_cast<int>(i);
        out.legs.push_back(d.legs[legs[i]]);
    }
    out.mate.assign(out.total_slots(), -1);
    auto remap = [&](int s) {
        if (d.slot_is_leg(s)) return out.leg_slot(lmap.at(d.slot_leg_index(s)));
        return 3 * vmap.at(s / 3) + s % 3;
    };
    for (int v : vertices)
        for (int k = 0; k < 3; ++k) {
            int s = 3 * v + k;
            out.mate[remap(s)] = remap(d.mate[s]);
            out.mate[remap(d.mate[s])] = remap(s);
        }
    for (int l : legs) {
        int s = d.leg_slot(l);
        out.mate[remap(s)] = remap(d.mate[s]);
        out.mate[remap(d.mate[s])] = remap(s);
    }
    return out;
}

} // namespace

DiagramCombo split_P(const DiagramCombo& c) {
    DiagramCombo out;
    for (const auto& [k, dv] : c.terms()) {
        const Diagram& d = dv.first;
        ComponentPieces comps = find_components(d);
        // P is multiplicative over disjoint unions and kills connected non-wheels
        DiagramCombo acc = DiagramCombo::empty_diagram();
        bool killed = false;
        for (std::size_t ci = 0; ci < comps.vertices.size() && !killed; ++ci) {
            Diagram comp = extract_component(d, comps.vertices[ci], comps.legs[ci]);
            if (!component_is_wheel(d, comps.vertices[ci], comps.legs[ci])) {
                killed = true;
                break;
            }
            DiagramCombo pc;
            for (std::size_t l = 0; l < comp.legs.size(); ++l)
                pc.add(split_at_leg(comp, static_cast<int>(l)), Rat(1));
            acc = disjoint_union(acc, pc);
        }
        if (!killed) out = out + acc * dv.second;
    }
    return out;
}

namespace {

DiagramCombo combo_exp(const DiagramCombo& x, int max_degree2x) {
    DiagramCombo truncated;
    for (const auto& [k, dv] : x.terms())
        if (dv.first.degree2x() <= max_degree2x) truncated.add(dv.first, dv.second);
    DiagramCombo out = DiagramCombo::empty_diagram();
    DiagramCombo term = DiagramCombo::empty_diagram();
    for (int m = 1; !term.is_zero(); ++m) {
        DiagramCombo next = disjoint_union(term, truncated) * Rat(1, m);
        term = DiagramCombo();
        for (const auto& [k, dv] : next.terms())
            if (dv.first.degree2x() <= max_degree2x) term.add(dv.first, dv.second);
        out = out + term;
    }
    return out;
}

} // namespace

DiagramCombo omega(int trunc, LegLabel label, const std::string& color) {
    DiagramCombo series;
    std::vector<Rat> b = bernoulli_b2k(trunc / 2);
    for (int k = 1; 2 * k <= trunc; ++k)
        series.add(make_wheel(2 * k, label, color), b[k - 1]);
    return combo_exp(series, 2 * trunc);
}

DiagramCombo psi(int trunc, const std::string& color) {
    DiagramCombo series;
    std::vector<Rat> b = bernoulli_b2k(trunc / 2);
    for (int k = 1; 2 * k <= trunc; ++k) {
        Diagram w = make_wheel(2 * k, LegLabel::Even, color);
        for (int l = 0; l < 2 * k; ++l) series.add(split_at_leg(w, l), b[k - 1]);
    }
    return combo_exp(series, 2 * trunc);
}

namespace {

struct Evaluator {
    const Diagram& d;
    const QuadraticLieAlgebra& g;
    std::vector<std::pair<int, int>> edges;  // slot pairs
    std::vector<int> edge_of_slot;
    std::vector<int> assign;                 // edge -> index or -1
    std::vector<std::tuple<int, int, int, Rat>> f_entries;
    std::vector<int> vertex_order;
    std::vector<int> strut_edges;

    Evaluator(const Diagram& dd, const QuadraticLieAlgebra& gg) : d(dd), g(gg) {
        if (!g.metric_is_identity())
            throw ContextMismatch("diagram evaluation requires the identity metric");
        edge_of_slot.assign(d.total_slots(), -1);
        for (int s = 0; s < d.total_slots(); ++s) {
            if (edge_of_slot[s] >= 0) continue;
            int e = static_cast<int>(edges.size());
            edges.emplace_back(s, d.mate[s]);
            edge_of_slot[s] = e;
            edge_of_slot[d.mate[s]] = e;
        }
        assign.assign(edges.size(), -1);
        const int n = g.dim();
        for (int a = 0; a < n; ++a)
            for (int b = 0; b < n; ++b)
                for (int c = 0; c < n; ++c) {
                    Rat fv = g.f_lowered(a, b, c);
                    if (fv != 0) f_entries.emplace_back(a, b, c, fv);
                }
        // BFS order over internal vertices for early constraint propagation
        std::vector<bool> seen(d.n_internal, false);
        for (int v0 = 0; v0 < d.n_internal; ++v0) {
            if (seen[v0]) continue;
            std::vector<int> queue{v0};
            seen[v0] = true;
            while (!queue.empty()) {
                int v = queue.front();
                queue.erase(queue.begin());
                vertex_order.push_back(v);
                for (int k = 0; k < 3; ++k) {
                    int m = d.mate[3 * v + k];
                    if (!d.slot_is_leg(m) && !seen[m / 3]) {
                        seen[m / 3] = true;
                        queue.push_back(m / 3);
                    }
                }
            }
        }
        for (std::size_t e = 0; e < edges.size(); ++e)
            if (d.slot_is_leg(edges[e].first) && d.slot_is_leg(edges[e].second))
                strut_edges.push_back(static_cast<int>(e));
    }

    template <typename Emit>
    void run(const Emit& emit) {
        recurse_vertices(0, Rat(1), emit);
    }

    template <typename Emit>
    void recurse_vertices(std::size_t vi, Rat coeff, const Emit& emit) {
        if (vi == vertex_order.size()) {
            recurse_struts(0, coeff, emit);
            return;
        }
        int v = vertex_order[vi];
        const int ea[3] = {edge_of_slot[3 * v], edge_of_slot[3 * v + 1], edge_of_slot[3 * v + 2]};
        for (const auto& [a, b, c, fv] : f_entries) {
            const int idx[3] = {a, b, c};
            int rollback[3];
            int set_count = 0;
            bool ok = true;
            for (int k = 0; k < 3; ++k) {
                if (assign[ea[k]] < 0) {
                    rollback[set_count++] = ea[k];
                    assign[ea[k]] = idx[k];
                } else if (assign[ea[k]] != idx[k]) {
                    ok = false;
                    break;
                }
            }
            if (ok) recurse_vertices(vi + 1, coeff * fv, emit);
            for (int k = 0; k < set_count; ++k) assign[rollback[k]] = -1;
        }
    }

    template <typename Emit>
    void recurse_struts(std::size_t si, Rat coeff, const Emit& emit) {
        if (si == strut_edges.size()) {
            emit(coeff);
            return;
        }
        int e = strut_edges[si];
        for (int a = 0; a < g.dim(); ++a) {
            assign[e] = a;
            recurse_struts(si + 1, coeff, emit);
        }
        assign[e] = -1;
    }

    int leg_index_value(int leg) const { return assign[edge_of_slot[d.leg_slot(leg)]]; }
};

} // namespace

SuperPolynomial evaluate(const Diagram& d, const QuadraticLieAlgebra& g) {
    if (d.based) throw InconsistentLabels("based diagrams evaluate with evaluate_based");
    const int n = g.dim();
    SuperPolynomial out(Ctx::W, n);
    Evaluator ev(d, g);
    ev.run([&](const Rat& coeff) {
        Monomial m;
        m.even.assign(n, 0);
        int sign = 1;
        std::vector<int> odd_word;
        bool zero = false;
        for (std::size_t l = 0; l < d.legs.size() && !zero; ++l) {
            int idx = ev.leg_index_value(static_cast<int>(l));
            switch (d.legs[l].label) {
                case LegLabel::Plain:
                case LegLabel::Even:
                    m.even[idx] += 1;
                    break;
                case LegLabel::Odd: {
                    // insertion-sort parity for the stored-order theta word
                    int pos = 0;
                    for (int o : odd_word) {
                        if (o == idx) { zero = true; break; }
                        if (o > idx) break;
                        ++pos;
                    }
                    if (zero) break;
                    sign *= ((static_cast<int>(odd_word.size()) - pos) % 2) ? -1 : 1;
                    odd_word.insert(odd_word.begin() + pos, idx);
                    break;
                }
                case LegLabel::Super:
                    throw InconsistentLabels("super legs cannot be evaluated");
            }
        }
        if (zero) return;
        for (int o : odd_word) m.odd |= 1u << o;
        out.add_term(m, coeff * sign);
    });
    return out;
}

SuperPolynomial evaluate(const DiagramCombo& c, const QuadraticLieAlgebra& g) {
    SuperPolynomial out(Ctx::W, g.dim());
    for (const auto& [k, dv] : c.terms()) out = out + evaluate(dv.first, g) * dv.second;
    return out;
}

NormalOrderedElement evaluate_based(const Diagram& d, const QuadraticLieAlgebra& g) {
    if (!d.based) throw InconsistentLabels("evaluate_based needs a based diagram");
    NormalOrderedElement out(NCtx::NW, &g);
    Evaluator ev(d, g);
    ev.run([&](const Rat& coeff) {
        NormalOrderedElement word = NormalOrderedElement::constant(NCtx::NW, &g, coeff);
        for (int l : d.base_order) {
            int idx = ev.leg_index_value(l);
            switch (d.legs[l].label) {
                case LegLabel::Plain:
                case LegLabel::Even:
                    word = nc_multiply(word, NormalOrderedElement::even_gen(NCtx::NW, &g, idx));
                    break;
                case LegLabel::Odd:
                    word = nc_multiply(word, NormalOrderedElement::odd_gen(NCtx::NW, &g, idx));
                    break;
                case LegLabel::Super:
                    throw InconsistentLabels("super legs cannot be evaluated");
            }
        }
        out = out + word;
    });
    return out;
}

NormalOrderedElement evaluate_based(const DiagramCombo& c, const QuadraticLieAlgebra& g) {
    NormalOrderedElement out(NCtx::NW, &g);
    for (const auto& [k, dv] : c.terms()) out = out + evaluate_based(dv.first, g) * dv.second;
    return out;
}

DiagramCombo wheeling_phi(const DiagramCombo& d, int trunc) {
    return gamma_apply(apply_partial(omega(trunc), d));
}

DiagramCombo wheeling_phi_tilde(const DiagramCombo& d, int trunc) {
    return gamma_apply(
        apply_partial(omega(trunc, LegLabel::Even), apply_partial(psi(trunc), d)));
}

namespace {

int combo_degree2x(const DiagramCombo& c) {
    int d = 0;
    for (const auto& [k, dv] : c.terms()) d = std::max(d, dv.first.degree2x());
    return d;
}

} // namespace

Report wheeling_check(const QuadraticLieAlgebra& g, const DiagramCombo& d1,
                      const DiagramCombo& d2, int trunc) {
    Report rep;
    // exactness on the union needs the gluing series out to deg D1 + deg D2
    trunc = std::max(trunc, (combo_degree2x(d1) + combo_degree2x(d2)) / 2);
    NormalOrderedElement lhs = evaluate_based(wheeling_phi(disjoint_union(d1, d2), trunc), g);
    NormalOrderedElement rhs =
        nc_multiply(evaluate_based(wheeling_phi(d1, trunc), g),
                    evaluate_based(wheeling_phi(d2, trunc), g));
    rep.add("wheeling[" + g.name() + "]", "Phi(D1 u D2) = Phi(D1)#Phi(D2)", lhs == rhs,
            lhs == rhs ? "" : "lhs=" + lhs.to_string() + " rhs=" + rhs.to_string());
    return rep;
}

Report wheeling_tilde_check(const QuadraticLieAlgebra& g, const DiagramCombo& d1,
                            const DiagramCombo& d2, int trunc) {
    Report rep;
    trunc = std::max(trunc, (combo_degree2x(d1) + combo_degree2x(d2)) / 2);
    NormalOrderedElement lhs =
        evaluate_based(wheeling_phi_tilde(disjoint_union(d1, d2), trunc), g);
    NormalOrderedElement rhs =
        nc_multiply(evaluate_based(wheeling_phi_tilde(d1, trunc), g),
                    evaluate_based(wheeling_phi_tilde(d2, trunc), g));
    rep.add("wheeling_tilde[" + g.name() + "]", "Phi~(D1 u D2) = Phi~(D1)#Phi~(D2)", lhs == rhs,
            lhs == rhs ? "" : "lhs=" + lhs.to_string() + " rhs=" + rhs.to_string());
    return rep;
}

Diagram parse_diagram(std::istream& in) {
    std::map<std::string, std::vector<int>> edge_slots;
    std::vector<std::array<std::string, 3>> vertex_edges;
    std::vector<Diagram::Leg> legs;
    std::vector<std::string> leg_edges;
    std::vector<std::string> base_ids;
    std::map<std::string, int> leg_ids;
    std::map<std::string, int> vertex_ids;
    std::string line;
    while (std::getline(in, line)) {
        auto hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        std::istringstream ls(line);
        std::string tok;
        if (!(ls >> tok)) continue;
        if (tok == "vertex") {
            std::string id, e0, e1, e2;
            if (!(ls >> id >> e0 >> e1 >> e2)) throw InconsistentLabels("bad vertex line");
            if (!vertex_ids.emplace(id, static_cast<int>(vertex_edges.size())).second)
                throw InconsistentLabels("duplicate vertex id " + id);
            vertex_edges.push_back({e0, e1, e2});
        } else if (tok == "leg") {
            std::string id, e;
            if (!(ls >> id >> e)) throw InconsistentLabels("bad leg line");
            Diagram::Leg leg;
            std::string opt;
            while (ls >> opt) {
                if (opt.rfind("color=", 0) == 0) leg.color = opt.substr(6);
                else if (opt == "label=even") leg.label = LegLabel::Even;
                else if (opt == "label=odd") leg.label = LegLabel::Odd;
                else if (opt == "label=super") leg.label = LegLabel::Super;
                else throw InconsistentLabels("unknown leg option " + opt);
            }
            if (!leg_ids.emplace(id, static_cast<int>(legs.size())).second)
                throw InconsistentLabels("duplicate leg id " + id);
            legs.push_back(leg);
            leg_edges.push_back(e);
        } else if (tok == "base_order") {
            std::string id;
            while (ls >> id) base_ids.push_back(id);
        } else {
            throw InconsistentLabels("unknown directive '" + tok + "' in diagram file");
        }
    }
    Diagram d;
    d.n_internal = static_cast<int>(vertex_edges.size());
    d.legs = legs;
    d.mate.assign(d.total_slots(), -1);
    for (int v = 0; v < d.n_internal; ++v)
        for (int k = 0; k < 3; ++k) edge_slots[vertex_edges[v][k]].push_back(3 * v + k);
    for (std::size_t l = 0; l < legs.size(); ++l)
        edge_slots[leg_edges[l]].push_back(d.leg_slot(static_cast<int>(l)));
    for (const auto& [eid, slots] : edge_slots) {
        if (slots.size() != 2)
            throw InconsistentLabels("edge id " + eid + " must appear exactly twice");
        d.mate[slots[0]] = slots[1];
        d.mate[slots[1]] = slots[0];
    }
    if (!base_ids.empty()) {
        d.based = true;
        for (const auto& id : base_ids) {
            auto it = leg_ids.find(id);
            if (it == leg_ids.end()) throw InconsistentLabels("unknown leg id " + id);
            d.base_order.push_back(it->second);
        }
    }
    d.validate();
    return d;
}

Diagram parse_diagram_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw InputError("FileError", "cannot open diagram file '" + path + "'");
    return parse_diagram(in);
}

} // namespace weilforge
