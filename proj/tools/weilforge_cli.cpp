// weilforge: exact verification toolkit for Weil-algebra quantization maps.
//
// Exit codes: 0 all checks OK, 1 at least one check FAILED, 2 input error.

#include <iostream>
#include <random>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "weilforge/diagrams.hpp"
#include "weilforge/duflo.hpp"
#include "weilforge/gdiff.hpp"
#include "weilforge/liealg.hpp"
#include "weilforge/ncweil.hpp"
#include "weilforge/spinfact.hpp"
#include "weilforge/superpoly.hpp"

using namespace weilforge;

namespace {

int emit(const Report& rep, bool structured) {
    Report sorted = rep;
    sorted.sort();
    if (structured)
        sorted.print_structured(std::cout);
    else
        sorted.print_text(std::cout);
    return sorted.all_ok() ? 0 : 1;
}

Space parse_space(const std::string& s) {
    if (s == "W") return Space::W;
    if (s == "WK") return Space::WK;
    if (s == "NW") return Space::NW;
    if (s == "NWK") return Space::NWK;
    throw InputError("UsageError", "unknown space '" + s + "' (expected W|WK|NW|NWK)");
}

std::vector<Rat> parse_rat_vector(const std::string& csv, int n) {
    std::vector<Rat> out;
    std::string cur;
    for (char c : csv) {
        if (c == ',') {
            out.push_back(parse_rational(cur));
            cur.clear();
        } else {
            cur += c;
        }
    }
    if (!cur.empty()) out.push_back(parse_rational(cur));
    if (static_cast<int>(out.size()) != n)
        throw LengthMismatch("expected " + std::to_string(n) + " components");
    return out;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"weilforge: quadratic Lie algebra Weil-algebra verification toolkit"};
    app.require_subcommand(1);
    bool structured = false;
    app.add_flag("--structured", structured, "emit line-delimited JSON records");

    std::string alg_path, space_str = "W", expr, powers_csv = "2,3", mu_csv, diagram_path;
    int max_degree = 4, trunc = 6, kmax = 6, dim = 4, count = 20;
    unsigned seed = 1;
    double tol = 1e-8, angle = 0.0;
    bool tilde = false, extend = false;

    auto* validate = app.add_subcommand("validate", "load an algebra spec and print a summary");
    validate->add_option("algebra", alg_path)->required();

    auto* gcheck = app.add_subcommand("gdiff-check", "verify the g^ operator relations");
    gcheck->add_option("algebra", alg_path)->required();
    gcheck->add_option("--space", space_str, "W|WK|NW|NWK");
    gcheck->add_option("--max-degree", max_degree);

    auto* quantize = app.add_subcommand("quantize", "apply the quantization map Q to a W element");
    quantize->add_option("algebra", alg_path)->required();
    quantize->add_option("--expr", expr)->required();
    quantize->add_option("--trunc", trunc);

    auto* duflo_cmd = app.add_subcommand("duflo", "apply the Duflo map to an S(g) element");
    duflo_cmd->add_option("algebra", alg_path)->required();
    duflo_cmd->add_option("--expr", expr)->required();
    duflo_cmd->add_option("--trunc", trunc);

    auto* vmain = app.add_subcommand("verify-main", "main theorem sweep");
    vmain->add_option("algebra", alg_path)->required();
    vmain->add_option("--max-degree", max_degree);

    auto* vchain = app.add_subcommand("verify-chainmap", "Q intertwines d, iota, L");
    vchain->add_option("algebra", alg_path)->required();
    vchain->add_option("--max-degree", max_degree);

    auto* vinv = app.add_subcommand("verify-invariants", "Q(p^m) = Q(p)^m for basic p");
    vinv->add_option("algebra", alg_path)->required();
    vinv->add_option("--expr", expr)->required();
    vinv->add_option("--powers", powers_csv);

    std::string acyc_space = "WK";
    auto* acyc = app.add_subcommand("acyclicity", "Koszul homology of W^K (or W)");
    acyc->add_option("algebra", alg_path)->required();
    acyc->add_option("--max-degree", max_degree);
    acyc->add_option("--space", acyc_space, "WK (default) or W");

    auto* spin = app.add_subcommand("spin-factorize", "numeric spin factorization check");
    spin->add_option("--dim", dim);
    spin->add_option("--seed", seed);
    spin->add_option("--tol", tol);
    spin->add_option("--angle", angle, "use block rotations with this base angle");
    spin->add_flag("--extend", extend, "extend odd dimensions by one (V + R)");

    auto* diagram = app.add_subcommand("diagram", "diagram operations");
    auto* deval = diagram->add_subcommand("eval", "evaluate a diagram file over an algebra");
    deval->add_option("file", diagram_path)->required();
    deval->add_option("algebra", alg_path)->required();

    auto* wheel = app.add_subcommand("wheeling", "wheeling / Phi~ multiplicativity checks");
    wheel->add_option("algebra", alg_path)->required();
    wheel->add_option("--max-degree", max_degree);
    wheel->add_flag("--tilde", tilde);

    auto* strace = app.add_subcommand("supertrace", "str(ad_x^k) sweep on T~g[1]");
    strace->add_option("algebra", alg_path)->required();
    strace->add_option("--kmax", kmax);
    strace->add_option("--count", count, "number of random rational x");
    strace->add_option("--seed", seed);

    auto* bridge = app.add_subcommand("duflo-bridge", "numeric vs series E1 and j^{1/2}");
    bridge->add_option("algebra", alg_path)->required();
    bridge->add_option("--mu", mu_csv, "comma separated rational coefficients")->required();
    bridge->add_option("--order", trunc);
    bridge->add_option("--tol", tol);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2; // usage errors exit 2
    }

    try {
        if (*validate) {
            QuadraticLieAlgebra g = load_algebra_file(alg_path);
            std::cout << "algebra " << g.name() << ": dim=" << g.dim() << " metric="
                      << (g.metric_is_identity() ? "identity" : "general")
                      << " valid (antisymmetry, Jacobi, invariance, nondegeneracy)\n";
            return 0;
        }
        if (*gcheck) {
            QuadraticLieAlgebra g = load_algebra_file(alg_path);
            return emit(check_hat_g_relations(g, parse_space(space_str), max_degree), structured);
        }
        if (*quantize) {
            QuadraticLieAlgebra g = load_algebra_file(alg_path);
            SuperPolynomial p = parse_element(expr, Ctx::W, g.dim());
            std::cout << quantization_Q(g, p, trunc).to_string() << "\n";
            return 0;
        }
        if (*duflo_cmd) {
            QuadraticLieAlgebra g = load_algebra_file(alg_path);
            SuperPolynomial p = parse_element(expr, Ctx::SG, g.dim());
            std::cout << duflo_map(g, p, std::max(trunc, p.max_even_degree())).to_string() << "\n";
            return 0;
        }
        if (*vmain) {
            QuadraticLieAlgebra g = load_algebra_file(alg_path);
            return emit(verify_main_theorem(g, max_degree), structured);
        }
        if (*vchain) {
            QuadraticLieAlgebra g = load_algebra_file(alg_path);
            return emit(verify_chain_map(g, max_degree), structured);
        }
        if (*vinv) {
            QuadraticLieAlgebra g = load_algebra_file(alg_path);
            SuperPolynomial p = parse_element(expr, Ctx::W, g.dim());
            std::vector<int> powers;
            std::string cur;
            for (char ch : powers_csv + ",") {
                if (ch == ',') {
                    if (!cur.empty()) powers.push_back(std::stoi(cur));
                    cur.clear();
                } else {
                    cur += ch;
                }
            }
            return emit(verify_invariant_homomorphism(g, p, powers), structured);
        }
        if (*acyc) {
            QuadraticLieAlgebra g = load_algebra_file(alg_path);
            if (acyc_space != "W" && acyc_space != "WK")
                throw InputError("UsageError", "acyclicity runs on W or WK");
            return emit(verify_koszul_acyclicity(g, parse_space(acyc_space), max_degree),
                        structured);
        }
        if (*spin) {
            int n = dim;
            MatrixXd A =
                angle != 0.0 ? block_rotation_antisym(n, angle) : seeded_antisymmetric(n, seed);
            if (n % 2 != 0) {
                if (!extend)
                    throw SingularD("odd dimension " + std::to_string(n) +
                                    ": D cannot be invertible (rerun with --extend)");
                // odd dimension: extend V by one direction coupled to ker A
                MatrixXd Ax = MatrixXd::Zero(n + 1, n + 1);
                Ax.topLeftCorner(n, n) = A;
                Eigen::FullPivLU<MatrixXd> lu(A);
                VectorXd k = lu.kernel().col(0).normalized();
                Ax.topRightCorner(n, 1) = k;
                Ax.bottomLeftCorner(1, n) = -k.transpose();
                A = Ax;
                n += 1;
            }
            return emit(verify_spin_factorization(n, A, tol), structured);
        }
        if (*deval) {
            QuadraticLieAlgebra g = load_algebra_file(alg_path);
            Diagram d = parse_diagram_file(diagram_path);
            if (d.based)
                std::cout << evaluate_based(d, g).to_string() << "\n";
            else
                std::cout << evaluate(d, g).to_string() << "\n";
            return 0;
        }
        if (*wheel) {
            QuadraticLieAlgebra g = load_algebra_file(alg_path);
            DiagramCombo w2(make_wheel(2));
            Report rep = tilde ? wheeling_tilde_check(g, DiagramCombo(make_wheel(2, LegLabel::Even)),
                                                      DiagramCombo(make_wheel(2, LegLabel::Even)),
                                                      max_degree)
                               : wheeling_check(g, w2, w2, max_degree);
            return emit(rep, structured);
        }
        if (*strace) {
            QuadraticLieAlgebra g = load_algebra_file(alg_path);
            SuperLieAlgebra s = build_odd_double(g);
            std::mt19937 rng(seed);
            std::uniform_int_distribution<int> numer(-9, 9);
            Report rep;
            bool all_zero = true;
            for (int t = 0; t < count; ++t) {
                std::vector<Rat> x(s.total_dim());
                for (auto& xi : x) {
                    xi = Rat(numer(rng), 1 + (t % 5));
                    xi.canonicalize();
                }
                for (const Rat& v : s.supertrace_powers(x, kmax))
                    if (v != 0) all_zero = false;
            }
            rep.add("supertrace[" + g.name() + "]",
                    "str(ad_x^k)=0 for k<=" + std::to_string(kmax) + ", " +
                        std::to_string(count) + " random x",
                    all_zero, "");
            return emit(rep, structured);
        }
        if (*bridge) {
            QuadraticLieAlgebra g = load_algebra_file(alg_path);
            std::vector<Rat> mu = parse_rat_vector(mu_csv, g.dim());
            return emit(verify_duflo_bridge(g, mu, trunc, tol), structured);
        }
    } catch (const InputError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 2;
}
