#include "weilforge/liealg.hpp"

#include <fstream>
#include <map>
#include <sstream>

namespace weilforge {

Rat QuadraticLieAlgebra::f_lowered(int a, int b, int c) const {
    if (metric_identity_) return f(a, b, c);
    Rat s = 0;
    for (int k = 0; k < n_; ++k) s += f(a, b, k) * metric(k, c);
    return s;
}

RatMatrix QuadraticLieAlgebra::adjoint_matrix(const std::vector<Rat>& x) const {
    if (static_cast<int>(x.size()) != n_)
        throw LengthMismatch("coefficient vector has length " + std::to_string(x.size()) +
                             ", algebra dimension is " + std::to_string(n_));
    RatMatrix m(n_, std::vector<Rat>(n_, Rat(0)));
    for (int c = 0; c < n_; ++c) {
        if (x[c] == 0) continue;
        for (int b = 0; b < n_; ++b)
            for (int a = 0; a < n_; ++a)
                m[a][b] += x[c] * f(c, b, a);
    }
    return m;
}

namespace {

// exact rank by fraction Gaussian elimination; optionally returns nullity info
int rat_rank(RatMatrix m) {
    int rows = static_cast<int>(m.size());
    int cols = rows ? static_cast<int>(m[0].size()) : 0;
    int rank = 0;
    for (int col = 0; col < cols && rank < rows; ++col) {
        int pivot = -1;
        for (int r = rank; r < rows; ++r)
            if (m[r][col] != 0) { pivot = r; break; }
        if (pivot < 0) continue;
        std::swap(m[rank], m[pivot]);
        Rat inv = m[rank][col];
        for (int r = rank + 1; r < rows; ++r) {
            if (m[r][col] == 0) continue;
            Rat factor = m[r][col] / inv;
            for (int c2 = col; c2 < cols; ++c2) m[r][c2] -= factor * m[rank][c2];
        }
        ++rank;
    }
    return rank;
}

} // namespace

QuadraticLieAlgebra load_algebra(const AlgebraSpec& spec) {
    if (spec.dim <= 0) throw DimensionMismatch("dim must be positive");
    const int n = spec.dim;
    QuadraticLieAlgebra g;
    g.n_ = n;
    g.name_ = spec.name;
    g.f_.assign(static_cast<std::size_t>(n) * n * n, Rat(0));

    // antisymmetric completion of bracket input, conflicting duplicates rejected
    std::map<std::tuple<int, int, int>, Rat> entries;
    auto put = [&](int a, int b, int c, const Rat& v) {
        auto key = std::make_tuple(a, b, c);
        auto it = entries.find(key);
        if (it != entries.end()) {
            if (it->second != v)
                throw DimensionMismatch("conflicting duplicate bracket entry for ([e" +
                                        std::to_string(a + 1) + ",e" + std::to_string(b + 1) +
                                        "], e" + std::to_string(c + 1) + ")");
            return;
        }
        entries.emplace(key, v);
    };
    for (const auto& e : spec.brackets) {
        if (e.a < 1 || e.a > n || e.b < 1 || e.b > n || e.c < 1 || e.c > n)
            throw DimensionMismatch("bracket index out of range 1.." + std::to_string(n));
        if (e.a == e.b && e.coeff != 0)
            throw DimensionMismatch("[e_a,e_a] must vanish (entry for a=b=" +
                                    std::to_string(e.a) + ")");
        put(e.a - 1, e.b - 1, e.c - 1, e.coeff);
        put(e.b - 1, e.a - 1, e.c - 1, -e.coeff);
    }
    for (const auto& [key, v] : entries) {
        auto [a, b, c] = key;
        g.f_[(a * n + b) * n + c] = v;
    }

    // metric
    g.metric_identity_ = spec.metric_identity;
    g.t_.assign(static_cast<std::size_t>(n) * n, Rat(0));
    if (spec.metric_identity) {
        for (int i = 0; i < n; ++i) g.t_[i * n + i] = 1;
    } else {
        if (static_cast<int>(spec.metric.size()) != n)
            throw DimensionMismatch("metric has wrong number of rows");
        for (int i = 0; i < n; ++i) {
            if (static_cast<int>(spec.metric[i].size()) != n)
                throw DimensionMismatch("metric row has wrong length");
            for (int j = 0; j < n; ++j) g.t_[i * n + j] = spec.metric[i][j];
        }
        for (int i = 0; i < n; ++i)
            for (int j = i + 1; j < n; ++j)
                if (g.metric(i, j) != g.metric(j, i))
                    throw DimensionMismatch("metric is not symmetric");
        RatMatrix tm(n, std::vector<Rat>(n));
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) tm[i][j] = g.metric(i, j);
        if (rat_rank(tm) != n) throw MetricSingular("metric matrix is singular");
    }

    // Jacobi: sum_k f_ab^k f_kc^d + f_bc^k f_ka^d + f_ca^k f_kb^d = 0
    for (int a = 0; a < n; ++a)
        for (int b = a + 1; b < n; ++b)
            for (int c = b; c < n; ++c)
                for (int d = 0; d < n; ++d) {
                    Rat s = 0;
                    for (int k = 0; k < n; ++k)
                        s += g.f(a, b, k) * g.f(k, c, d) + g.f(b, c, k) * g.f(k, a, d) +
                             g.f(c, a, k) * g.f(k, b, d);
                    if (s != 0)
                        throw JacobiViolation(
                            "Jacobi identity fails at (a,b,c,d)=(" + std::to_string(a + 1) + "," +
                                std::to_string(b + 1) + "," + std::to_string(c + 1) + "," +
                                std::to_string(d + 1) + "), defect " + rat_to_string(s),
                            a + 1, b + 1, c + 1, d + 1);
                }

    // ad-invariance: sum_k f_ab^k t_kc + f_ac^k t_bk = 0
    for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b)
            for (int c = 0; c < n; ++c) {
                Rat s = 0;
                for (int k = 0; k < n; ++k)
                    s += g.f(a, b, k) * g.metric(k, c) + g.f(a, c, k) * g.metric(b, k);
                if (s != 0)
                    throw MetricNotInvariant("invariance defect at (a,b,c)=(" +
                                             std::to_string(a + 1) + "," + std::to_string(b + 1) +
                                             "," + std::to_string(c + 1) + "): " +
                                             rat_to_string(s));
            }

    // identity metric => f_abc totally antisymmetric (follows from invariance; checked anyway)
    if (g.metric_identity_) {
        for (int a = 0; a < n; ++a)
            for (int b = 0; b < n; ++b)
                for (int c = 0; c < n; ++c)
                    if (g.f(a, b, c) != -g.f(a, c, b))
                        throw MetricNotInvariant("f_abc not totally antisymmetric at (" +
                                                 std::to_string(a + 1) + "," +
                                                 std::to_string(b + 1) + "," +
                                                 std::to_string(c + 1) + ")");
    }
    return g;
}

AlgebraSpec parse_algebra_spec(std::istream& in) {
    AlgebraSpec spec;
    std::string line;
    bool reading_metric_rows = false;
    int metric_rows_left = 0;
    while (std::getline(in, line)) {
        auto hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        std::istringstream ls(line);
        std::string tok;
        if (!(ls >> tok)) continue;
        if (reading_metric_rows) {
            std::vector<Rat> row;
            row.push_back(parse_rational(tok));
            std::string w;
            while (ls >> w) row.push_back(parse_rational(w));
            spec.metric.push_back(std::move(row));
            if (--metric_rows_left == 0) reading_metric_rows = false;
            continue;
        }
        if (tok == "name") {
            ls >> spec.name;
        } else if (tok == "dim") {
            if (!(ls >> spec.dim)) throw ParseError("bad dim line");
        } else if (tok == "bracket") {
            AlgebraSpec::BracketEntry e;
            std::string coeff;
            if (!(ls >> e.a >> e.b >> e.c >> coeff)) throw ParseError("bad bracket line");
            e.coeff = parse_rational(coeff);
            spec.brackets.push_back(e);
        } else if (tok == "metric") {
            std::string kind;
            if (ls >> kind) {
                if (kind != "identity") throw ParseError("metric line must be 'identity' or bare 'metric' followed by rows");
                spec.metric_identity = true;
            } else {
                if (spec.dim <= 0) throw ParseError("metric rows require dim to be declared first");
                spec.metric_identity = false;
                reading_metric_rows = true;
                metric_rows_left = spec.dim;
            }
        } else {
            throw ParseError("unknown directive '" + tok + "' in algebra spec");
        }
    }
    if (reading_metric_rows) throw ParseError("metric rows truncated");
    return spec;
}

QuadraticLieAlgebra load_algebra_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw InputError("FileError", "cannot open algebra spec '" + path + "'");
    return load_algebra(parse_algebra_spec(in));
}

QuadraticLieAlgebra make_so3() {
    AlgebraSpec s;
    s.name = "so3";
    s.dim = 3;
    s.brackets = {{1, 2, 3, Rat(1)}, {2, 3, 1, Rat(1)}, {3, 1, 2, Rat(1)}};
    return load_algebra(s);
}

QuadraticLieAlgebra make_abelian(int n) {
    AlgebraSpec s;
    s.name = "abelian" + std::to_string(n);
    s.dim = n;
    return load_algebra(s);
}

QuadraticLieAlgebra make_so3_plus_so3() {
    AlgebraSpec s;
    s.name = "so4";
    s.dim = 6;
    s.brackets = {{1, 2, 3, Rat(1)}, {2, 3, 1, Rat(1)}, {3, 1, 2, Rat(1)},
                  {4, 5, 6, Rat(1)}, {5, 6, 4, Rat(1)}, {6, 4, 5, Rat(1)}};
    return load_algebra(s);
}

SuperLieAlgebra build_odd_double(const QuadraticLieAlgebra& g) {
    const int n = g.dim();
    SuperLieAlgebra s;
    s.n_even_ = n;
    s.n_odd_ = n;
    s.central_ = true;
    const int N = 2 * n + 1;
    s.parity_.assign(N, 0);
    for (int i = 0; i < n; ++i) s.parity_[n + i] = 1;
    s.br_.assign(static_cast<std::size_t>(N) * N * N, Rat(0));
    const int cidx = 2 * n;
    for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b)
            for (int c = 0; c < n; ++c) {
                const Rat& v = g.f(a, b, c);
                if (v == 0) continue;
                s.br(a, b, c) = v;                 // [e_a, e_b] = f e_c
                s.br(a, n + b, n + c) = v;         // [e_a, eb_b] = f eb_c
                s.br(n + b, a, n + c) = -v;        // [eb_b, e_a] = -f eb_c
            }
    for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b) {
            const Rat& t = g.metric(a, b);
            if (t == 0) continue;
            s.br(n + a, n + b, cidx) = t;          // [eb_a, eb_b] = t_ab c
        }
    s.verify_super_structure();
    return s;
}

void SuperLieAlgebra::verify_super_structure() const {
    const int N = total_dim();
    // super antisymmetry: [x,y] + (-1)^{|x||y|} [y,x] = 0
    for (int i = 0; i < N; ++i)
        for (int j = 0; j < N; ++j) {
            const int sign = (parity_[i] && parity_[j]) ? -1 : 1; // (-1)^{|x||y|}
            for (int k = 0; k < N; ++k) {
                Rat s = bracket(i, j, k) + Rat(sign) * bracket(j, i, k);
                if (s != 0)
                    throw JacobiViolation("super antisymmetry fails on generators (" +
                                              std::to_string(i + 1) + "," + std::to_string(j + 1) +
                                              ")",
                                          i + 1, j + 1, 0, 0);
            }
        }
    // super Jacobi: [x,[y,z]] = [[x,y],z] + (-1)^{|x||y|} [y,[x,z]]
    for (int x = 0; x < N; ++x)
        for (int y = 0; y < N; ++y)
            for (int z = 0; z < N; ++z) {
                int sign = (parity_[x] && parity_[y]) ? -1 : 1;
                for (int w = 0; w < N; ++w) {
                    Rat lhs = 0, rhs = 0;
                    for (int m = 0; m < N; ++m) {
                        lhs += bracket(y, z, m) * bracket(x, m, w);
                        rhs += bracket(x, y, m) * bracket(m, z, w);
                        rhs += Rat(sign) * bracket(x, z, m) * bracket(y, m, w);
                    }
                    if (lhs != rhs)
                        throw JacobiViolation("super Jacobi fails on generators (" +
                                                  std::to_string(x + 1) + "," +
                                                  std::to_string(y + 1) + "," +
                                                  std::to_string(z + 1) + ")",
                                              x + 1, y + 1, z + 1, 0);
                }
            }
}

RatMatrix SuperLieAlgebra::adjoint_matrix(const std::vector<Rat>& x) const {
    const int N = total_dim();
    if (static_cast<int>(x.size()) != N)
        throw LengthMismatch("coefficient vector has length " + std::to_string(x.size()) +
                             ", super algebra dimension is " + std::to_string(N));
    RatMatrix m(N, std::vector<Rat>(N, Rat(0)));
    for (int i = 0; i < N; ++i) {
        if (x[i] == 0) continue;
        for (int b = 0; b < N; ++b)
            for (int a = 0; a < N; ++a)
                m[a][b] += x[i] * bracket(i, b, a);
    }
    return m;
}

RatMatrix mat_mul(const RatMatrix& a, const RatMatrix& b) {
    const int n = static_cast<int>(a.size());
    const int m = static_cast<int>(b[0].size());
    const int k = static_cast<int>(b.size());
    RatMatrix r(n, std::vector<Rat>(m, Rat(0)));
    for (int i = 0; i < n; ++i)
        for (int p = 0; p < k; ++p) {
            if (a[i][p] == 0) continue;
            for (int j = 0; j < m; ++j) r[i][j] += a[i][p] * b[p][j];
        }
    return r;
}

Rat supertrace(const SuperLieAlgebra& s, const RatMatrix& m) {
    Rat tr = 0;
    for (int i = 0; i < s.total_dim(); ++i)
        tr += (s.parity(i) ? Rat(-1) : Rat(1)) * m[i][i];
    return tr;
}

std::vector<Rat> SuperLieAlgebra::supertrace_powers(const std::vector<Rat>& x, int kmax) const {
    RatMatrix ad = adjoint_matrix(x);
    RatMatrix p = ad;
    std::vector<Rat> out;
    out.reserve(kmax);
    for (int k = 1; k <= kmax; ++k) {
        out.push_back(supertrace(*this, p));
        if (k < kmax) p = mat_mul(p, ad);
    }
    return out;
}

} // namespace weilforge
