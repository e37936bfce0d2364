// Command-line surface for the Rumin complex toolkit: exact construction
// and certification of d_c, symbol extraction and inversion, closed-form
// decomposition, and grid-based Gagliardo-Nirenberg probes.

#include <CLI11.hpp>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>

#include "rumin/serialize.hpp"

using namespace rumin;
namespace fs = std::filesystem;

namespace {

struct CommonOpts {
    int n = 1;
    int degree = -1;
    std::string format = "json";
    std::uint64_t seed = 0;
    std::string out_dir;
};

fs::path resolve_out_dir(const std::string& flag_value) {
    if (!flag_value.empty()) return fs::path(flag_value);
    if (const char* env = std::getenv("RUMIN_OUT_DIR")) return fs::path(env);
    return fs::current_path();
}

void write_text(const fs::path& dir, const std::string& name, const std::string& body) {
    fs::create_directories(dir);
    fs::path p = dir / name;
    std::ofstream os(p, std::ios::binary);
    if (!os) throw std::runtime_error("cannot open " + p.string());
    os << body;
    std::cout << "wrote " << p.string() << "\n";
}

void write_json(const fs::path& dir, const std::string& name, const Json& j) {
    write_text(dir, name, j.dump(2) + "\n");
}

int run_checks(const std::vector<CheckResult>& checks, Json& report) {
    int failures = 0;
    for (const auto& c : checks) {
        Json item;
        item["name"] = c.name;
        item["pass"] = c.pass;
        item["detail"] = c.detail;
        report.push_back(item);
        if (!c.pass) {
            ++failures;
            std::cout << "FAIL " << c.name << " (" << c.detail << ")\n";
        }
    }
    return failures;
}

int cmd_dims(const CommonOpts& opt) {
    if (opt.n < 1 || opt.n > 4) throw CLI::ValidationError("--n", "supported range is 1..4");
    fs::path dir = resolve_out_dir(opt.out_dir);
    Json j;
    j["schema_version"] = kSchemaVersion;
    j["n"] = opt.n;
    Json table = Json::array();
    std::cout << "h  dim E0^h   (n=" << opt.n << ")\n";
    for (int h = 0; h <= 2 * opt.n + 1; ++h) {
        int d = e0_dim(opt.n, h);
        table.push_back(Json{{"h", h}, {"dim", d}});
        std::cout << h << "  " << d << "\n";
    }
    j["dims"] = table;
    if (opt.format == "csv") {
        std::string csv = "h,dim\n";
        for (int h = 0; h <= 2 * opt.n + 1; ++h)
            csv += std::to_string(h) + "," + std::to_string(e0_dim(opt.n, h)) + "\n";
        write_text(dir, "dims_n" + std::to_string(opt.n) + ".csv", csv);
    } else if (opt.format == "latex") {
        std::string tex = "\\begin{tabular}{cc}\nh & \\dim E_0^h \\\\\n\\hline\n";
        for (int h = 0; h <= 2 * opt.n + 1; ++h)
            tex += std::to_string(h) + " & " + std::to_string(e0_dim(opt.n, h)) + " \\\\\n";
        tex += "\\end{tabular}\n";
        write_text(dir, "dims_n" + std::to_string(opt.n) + ".tex", tex);
    } else {
        write_json(dir, "dims_n" + std::to_string(opt.n) + ".json", j);
    }
    return 0;
}

int cmd_basis(const CommonOpts& opt) {
    if (opt.n < 1 || opt.n > 4) throw CLI::ValidationError("--n", "supported range is 1..4");
    fs::path dir = resolve_out_dir(opt.out_dir);
    int lo = opt.degree >= 0 ? opt.degree : 0;
    int hi = opt.degree >= 0 ? opt.degree : 2 * opt.n + 1;
    for (int h = lo; h <= hi; ++h) {
        Json j = e0_basis_to_json(e0_basis(opt.n, h));
        write_json(dir, "basis_n" + std::to_string(opt.n) + "_h" + std::to_string(h) + ".json", j);
    }
    return 0;
}

int cmd_dc(const CommonOpts& opt, bool with_delta, bool with_laplacian) {
    if (opt.n < 1 || opt.n > 4) throw CLI::ValidationError("--n", "supported range is 1..4");
    if (opt.degree < 0 || opt.degree > 2 * opt.n)
        throw CLI::ValidationError("--degree", "need 0 <= h <= 2n");
    int n = opt.n, h = opt.degree;
    fs::path dir = resolve_out_dir(opt.out_dir);
    const OperatorMatrix& d = assemble_dc(n, h);

    Json cert = Json::array();
    int expected = (h == n) ? 2 : 1;
    bool homog = true;
    for (int i = 0; i < d.rows(); ++i)
        for (int k = 0; k < d.cols(); ++k)
            if (!d.at(i, k).is_homogeneous_of(expected)) homog = false;
    cert.push_back(Json{{"name", "dc_homogeneity"}, {"pass", homog},
                        {"detail", "degree " + std::to_string(expected)}});
    if (h + 1 <= 2 * n)
        cert.push_back(Json{{"name", "dc_squared_zero"},
                            {"pass", (assemble_dc(n, h + 1) * d).is_zero()},
                            {"detail", ""}});

    std::string stem = "dc_n" + std::to_string(n) + "_h" + std::to_string(h);
    if (opt.format == "latex") {
        write_text(dir, stem + ".tex", operator_matrix_to_latex(d));
    } else {
        Json j = operator_matrix_to_json(d);
        j["certification"] = cert;
        if (with_delta) j["delta_c"] = operator_matrix_to_json(assemble_delta_c(n, h + 1));
        if (with_laplacian) j["laplacian"] = operator_matrix_to_json(rumin_laplacian(n, h));
        write_json(dir, stem + ".json", j);
    }
    std::cout << "d_c(" << n << "," << h << "): " << d.rows() << "x" << d.cols()
              << ", entry degree " << expected << "\n";
    return 0;
}

int cmd_verify(const CommonOpts& opt, const std::string& check_file) {
    fs::path dir = resolve_out_dir(opt.out_dir);
    Json report = Json::array();
    int failures = 0;

    if (!check_file.empty()) {
        std::ifstream is(check_file);
        if (!is) {
            std::cout << "FAIL check_file_readable (" << check_file << ")\n";
            return 1;
        }
        try {
            Json j = Json::parse(is);
            OperatorMatrix m = operator_matrix_from_json(j);
            bool same = m == assemble_dc(m.n(), m.source_degree());
            Json item;
            item["name"] = "matrix_file_matches_assembly";
            item["pass"] = same;
            item["detail"] = check_file;
            report.push_back(item);
            if (!same) {
                ++failures;
                std::cout << "FAIL matrix_file_matches_assembly (" << check_file << ")\n";
            }
        } catch (const std::exception& e) {
            std::cout << "FAIL matrix_file_parses (" << e.what() << ")\n";
            return 1;
        }
    }

    std::vector<int> ns;
    if (opt.n > 0) ns.push_back(opt.n);
    else ns = {1, 2, 3};
    for (int n : ns) {
        failures += run_checks(certify_complex(n), report);
        failures += run_checks(certify_symbols(n), report);
    }

    Json j;
    j["schema_version"] = kSchemaVersion;
    j["checks"] = report;
    j["failures"] = failures;
    write_json(dir, "verify.json", j);
    std::cout << (failures == 0 ? "all checks passed" : "FAILURES: " + std::to_string(failures)) << "\n";
    return failures == 0 ? 0 : 1;
}

int cmd_symbol(const CommonOpts& opt) {
    if (opt.degree < 0 || opt.degree > 2 * opt.n)
        throw CLI::ValidationError("--degree", "need 0 <= h <= 2n");
    fs::path dir = resolve_out_dir(opt.out_dir);
    Symbol s = extract_symbol(assemble_dc(opt.n, opt.degree));
    InjectivityReport rep = check_injective(s);
    Json j = symbol_to_json(s);
    j["rank"] = rep.rank;
    j["injective"] = rep.injective;
    if (rep.injective) j["left_inverse"] = left_inverse_to_json(left_inverse(s));
    write_json(dir, "symbol_n" + std::to_string(opt.n) + "_h" + std::to_string(opt.degree) + ".json", j);
    std::cout << "rank " << rep.rank << "/" << rep.dim << (rep.injective ? " (injective)" : " (NOT injective)")
              << "\n";
    return 0;
}

int cmd_decompose(const CommonOpts& opt, const std::string& input, bool demo_symbolic, bool demo_grid,
                  int grid_nodes, int refinements, const std::string& save_field,
                  double closedness_tol) {
    fs::path dir = resolve_out_dir(opt.out_dir);
    std::string stem = "decompose_n" + std::to_string(opt.n);
    try {
        if (demo_symbolic || (!input.empty() && input.size() > 5 && input.substr(input.size() - 5) == ".json")) {
            PolyForm alpha;
            if (demo_symbolic) {
                // alpha = d_c(x_1), constant coefficients, closed by d_c^2 = 0
                PolyForm u;
                u.n = opt.n;
                u.h = 0;
                u.comps.push_back(CoordPolynomial::variable(opt.n, 1));
                alpha = apply_dc(u);
            } else {
                std::ifstream is(input);
                if (!is) throw std::runtime_error("cannot open " + input);
                alpha = polyform_from_json(Json::parse(is));
            }
            SymbolicDecomposition dec = divfree_decompose(alpha);
            Json j = symbolic_decomposition_to_json(dec);
            write_json(dir, stem + "_h" + std::to_string(alpha.h) + "_symbolic.json", j);
            std::cout << "symbolic decomposition: divergence_zero=" << dec.divergence_zero
                      << " reconstruction_exact=" << dec.reconstruction_exact << " C=" << dec.constant_c << "\n";
            return (dec.divergence_zero && dec.reconstruction_exact) ? 0 : 1;
        }
        FormField alpha;
        TestForm closed;
        bool have_analytic = false;
        if (demo_grid) {
            int n = opt.n;
            int h = opt.degree >= 1 ? opt.degree : 1;
            TestForm u = standard_test_form(n, h - 1, opt.seed, 8);
            closed = apply_analytic(assemble_dc(n, h - 1), u);
            have_analytic = true;
            Grid g = default_grid(n);
            if (grid_nodes > 0) {
                g.nodes_xy = grid_nodes;
                g.nodes_t = 2 * grid_nodes - 1;
            }
            alpha = sample(closed, g);
        } else {
            if (input.empty()) throw std::runtime_error("decompose needs --input, --demo-symbolic or --demo-grid");
            alpha = read_formfield_file(input);
        }
        if (!save_field.empty()) {
            write_formfield_file(save_field, alpha);
            std::cout << "wrote " << save_field << "\n";
        }
        Json j;
        j["schema_version"] = kSchemaVersion;
        Json levels = Json::array();
        std::vector<double> residuals;
        Grid cur = alpha.grid;
        for (int level = 0; level <= refinements; ++level) {
            if (level > 0) {
                if (!have_analytic) break; // refinement table needs the analytic source
                cur = cur.refined();
                alpha = sample(closed, cur);
            }
            GridDecomposition dec = divfree_decompose_grid(alpha, false, closedness_tol);
            levels.push_back(grid_decomposition_to_json(dec));
            residuals.push_back(dec.divergence_residual);
            std::cout << "level " << level << ": closedness_residual=" << dec.closedness_residual
                      << " divergence_residual=" << dec.divergence_residual
                      << " reconstruction_residual=" << dec.reconstruction_residual << "\n";
        }
        j["levels"] = levels;
        Json orders = Json::array();
        for (std::size_t i = 1; i < residuals.size(); ++i)
            orders.push_back(measured_order(residuals[i - 1], residuals[i]));
        j["divergence_order_between_levels"] = orders;
        write_json(dir, stem + "_h" + std::to_string(alpha.h) + "_grid.json", j);
        return 0;
    } catch (const std::invalid_argument& e) {
        std::cout << "rejected: " << e.what() << "\n";
        return 1;
    }
}

int cmd_gn(const CommonOpts& opt, int grid_nodes, int refinements, std::vector<double> lambdas) {
    int n = opt.n;
    int h = std::max(opt.degree, 0);
    if (n < 1 || n > 2) throw CLI::ValidationError("--n", "grid probes support n = 1, 2");
    if (h > 2 * n + 1) throw CLI::ValidationError("--degree", "need 0 <= h <= 2n+1");
    fs::path dir = resolve_out_dir(opt.out_dir);
    TestForm u = standard_test_form(n, h, opt.seed);
    Grid g = default_grid(n);
    if (grid_nodes > 0) {
        g.nodes_xy = grid_nodes;
        g.nodes_t = 2 * grid_nodes - 1;
    }

    Json j;
    j["schema_version"] = kSchemaVersion;
    j["n"] = n;
    j["degree"] = h;
    j["seed"] = opt.seed;
    Json levels = Json::array();
    std::string csv;
    Grid cur = g;
    std::vector<double> ratios;
    for (int level = 0; level <= refinements; ++level) {
        GnReport rep = gn_ratio(u, cur);
        Json lj = gn_report_to_json(rep);
        lj["grid"] = Json{{"nodes_xy", cur.nodes_xy}, {"nodes_t", cur.nodes_t},
                          {"r_xy", cur.r_xy}, {"r_t", cur.r_t},
                          {"h_xy", cur.spacing(0)}, {"h_t", cur.spacing(2 * n)}};
        levels.push_back(lj);
        ratios.push_back(rep.ratio);
        csv += gn_report_to_csv(rep, level == 0);
        if (rep.hardy_proxy) std::cout << "warning: H1 proxy case\n";
        std::cout << "level " << level << " (" << cur.nodes_xy << "^" << 2 * n << " x " << cur.nodes_t
                  << "): ratio = " << rep.ratio << "\n";
        cur = cur.refined();
    }
    j["levels"] = levels;
    Json drifts = Json::array();
    for (std::size_t i = 1; i < ratios.size(); ++i)
        drifts.push_back(std::fabs(ratios[i] - ratios[i - 1]) / std::fabs(ratios[i]));
    j["ratio_drift_between_levels"] = drifts;
    Json sweep = Json::array();
    for (double lambda : lambdas) {
        DilationReport rep = dilation_invariance(u, lambda, g);
        sweep.push_back(dilation_report_to_json(rep));
        std::cout << "lambda " << lambda << ": rel_diff = " << rep.rel_diff << "\n";
    }
    j["dilation_sweep"] = sweep;
    std::string stem = "gn_n" + std::to_string(n) + "_h" + std::to_string(h);
    if (opt.format == "csv") write_text(dir, stem + ".csv", csv);
    else write_json(dir, stem + ".json", j);
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Exact Rumin complex toolkit for Heisenberg groups"};
    app.require_subcommand(1);

    CommonOpts opt;
    auto add_common = [&opt](CLI::App* sub, bool with_degree = true) {
        sub->add_option("--n", opt.n, "Heisenberg rank n");
        if (with_degree) sub->add_option("--degree", opt.degree, "form degree h");
        sub->add_option("--format", opt.format, "output format: json, csv, latex")
            ->check(CLI::IsMember({"json", "csv", "latex"}));
        sub->add_option("--seed", opt.seed, "seed for randomized inputs");
        sub->add_option("--out-dir", opt.out_dir, "output directory (default $RUMIN_OUT_DIR or cwd)");
    };

    auto* dims = app.add_subcommand("dims", "dimension table of E0^h");
    add_common(dims, false);

    auto* basis = app.add_subcommand("basis", "emit E0 bases");
    add_common(basis);

    auto* dc = app.add_subcommand("dc", "assemble and emit the d_c matrix");
    add_common(dc);
    bool with_delta = false, with_laplacian = false;
    dc->add_flag("--with-delta", with_delta, "also emit delta_c out of degree h+1");
    dc->add_flag("--with-laplacian", with_laplacian, "also emit the Laplacian at degree h");

    auto* verify = app.add_subcommand("verify", "run the full certification suite");
    std::string check_file;
    verify->add_option("--n", opt.n, "restrict to one rank (default: 1..3)")->default_val(-1);
    verify->add_option("--out-dir", opt.out_dir, "output directory");
    verify->add_option("--check-file", check_file, "validate a serialized d_c matrix file");

    auto* symbol = app.add_subcommand("symbol", "extract the symbol and its left inverse");
    add_common(symbol);

    auto* decompose = app.add_subcommand("decompose", "divergence-free decomposition of a closed form");
    add_common(decompose);
    std::string input;
    bool demo_symbolic = false, demo_grid = false;
    int grid_nodes = 0;
    decompose->add_option("--input", input, "polyform .json or form-field .rff file");
    decompose->add_flag("--demo-symbolic", demo_symbolic, "decompose d_c(x_1)");
    decompose->add_flag("--demo-grid", demo_grid, "decompose a sampled exact form");
    decompose->add_option("--grid-nodes", grid_nodes, "horizontal nodes per axis for --demo-grid");
    int dec_refinements = 0;
    decompose->add_option("--refinements", dec_refinements,
                          "residual-vs-refinement table levels (--demo-grid)");
    std::string save_field;
    decompose->add_option("--save-field", save_field, "also write the sampled form as .rff");
    double closedness_tol = 0.0;
    decompose->add_option("--closedness-tol", closedness_tol,
                          "reject grid inputs whose fd closedness residual exceeds this");

    auto* gn = app.add_subcommand("gn", "Gagliardo-Nirenberg ratio probe");
    add_common(gn);
    int gn_nodes = 0, refinements = 0;
    std::vector<double> lambdas;
    gn->add_option("--grid-nodes", gn_nodes, "horizontal nodes per axis");
    gn->add_option("--refinements", refinements, "number of grid refinements");
    gn->add_option("--lambda", lambdas, "dilation factors for the invariance sweep");

    CLI11_PARSE(app, argc, argv);

    try {
        if (dims->parsed()) return cmd_dims(opt);
        if (basis->parsed()) return cmd_basis(opt);
        if (dc->parsed()) return cmd_dc(opt, with_delta, with_laplacian);
        if (verify->parsed()) {
            CommonOpts vopt = opt;
            if (vopt.n == -1) vopt.n = 0;
            return cmd_verify(vopt, check_file);
        }
        if (symbol->parsed()) return cmd_symbol(opt);
        if (decompose->parsed())
            return cmd_decompose(opt, input, demo_symbolic, demo_grid, grid_nodes, dec_refinements,
                                 save_field, closedness_tol);
        if (gn->parsed()) return cmd_gn(opt, gn_nodes, refinements, lambdas);
    } catch (const CLI::ValidationError& e) {
        std::cerr << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
