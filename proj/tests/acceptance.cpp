// Acceptance suite: one line per criterion, nonzero exit on any failure.
//
//   1  chain complex           d_c o d_c = 0 exactly, n = 1..3, all h
//   2  dimensions              dim E0^h formula + both constructions, n <= 4
//   3  operator contract       homogeneity, star invariance, duality
//   4  symbol program          trivial kernels, exact left inverses
//   5  equivariance            d_c commutes with lifted symplectic maps
//   6  closed-form splitting   exact reconstruction + divergence-free fields
//   7  grid harness            fd consistency, decay orders, gn ratios
//   8  reproducibility         cli verify exit 0, byte-identical artifacts

#include <cinttypes>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "rumin/numerics.hpp"
#include "rumin/serialize.hpp"

using namespace rumin;
namespace fs = std::filesystem;

namespace {

int g_failures = 0;

void report(int criterion, const std::string& name, bool pass, const std::string& detail = "") {
    std::printf("[%s] criterion %d: %s%s%s\n", pass ? "PASS" : "FAIL", criterion, name.c_str(),
                detail.empty() ? "" : " -- ", detail.c_str());
    std::fflush(stdout);
    if (!pass) ++g_failures;
}

long binom(int m, int k) {
    if (k < 0 || k > m) return 0;
    long r = 1;
    for (int i = 0; i < k; ++i) r = r * (m - i) / (i + 1);
    return r;
}

// ------------------------------------------------------------------ 1
void criterion_chain_complex() {
    bool pass = true;
    std::string where;
    for (int n = 1; n <= 3; ++n)
        for (int h = 0; h + 1 <= 2 * n; ++h)
            if (!(assemble_dc(n, h + 1) * assemble_dc(n, h)).is_zero()) {
                pass = false;
                where = "n=" + std::to_string(n) + " h=" + std::to_string(h);
            }
    report(1, "d_c o d_c = 0 in the PBW algebra for n=1..3, every h", pass, where);
}

// ------------------------------------------------------------------ 2
void criterion_dimensions() {
    bool formula = true, both = true;
    for (int n = 1; n <= 4; ++n)
        for (int h = 0; h <= 2 * n + 1; ++h) {
            int hm = std::min(h, 2 * n + 1 - h);
            if (e0_dim(n, h) != binom(2 * n, hm) - binom(2 * n, hm - 2)) formula = false;
            if (e0_dim(n, h) != e0_dim(n, 2 * n + 1 - h)) formula = false;
            RatMatrix kernel = e0_weight_kernel(n, h);
            if (!same_column_span(kernel, e0_basis(n, h).coord_matrix())) both = false;
        }
    report(2, "dim E0^h = C(2n,h) - C(2n,h-2), mirror-symmetric, n<=4", formula);
    report(2, "subbundle and weight-kernel constructions span identically, n<=4", both);
}

// ------------------------------------------------------------------ 3
void criterion_contract() {
    bool homog = true, star = true, dual = true;
    for (int n = 1; n <= 3; ++n) {
        for (int h = 0; h <= 2 * n; ++h) {
            const OperatorMatrix& d = assemble_dc(n, h);
            int expected = (h == n) ? 2 : 1;
            for (int i = 0; i < d.rows(); ++i)
                for (int j = 0; j < d.cols(); ++j)
                    if (!d.at(i, j).is_homogeneous_of(expected)) homog = false;
        }
        for (int h = 0; h <= 2 * n + 1; ++h) {
            try {
                if (star_matrix(n, h).rank() != e0_dim(n, h)) star = false;
            } catch (const std::exception&) {
                star = false;
            }
        }
        for (int h = 1; h <= 2 * n + 1; ++h)
            if (!(assemble_delta_c(n, h) == delta_c_adjoint_route(n, h))) dual = false;
    }
    report(3, "entry homogeneity degrees are (1,..,1,2,1,..,1) with 2 at h=n", homog);
    report(3, "star maps E0^h onto E0^{2n+1-h} exactly", star);
    report(3, "delta_c = (-1)^{h(2n+1)} star d_c star equals the formal adjoint", dual);
}

// ------------------------------------------------------------------ 4
void criterion_symbols() {
    bool kernels = true, inverses = true, gradient = true;
    for (int n = 1; n <= 3; ++n) {
        for (int h = 0; h <= 2 * n; ++h) {
            Symbol s = extract_symbol(assemble_dc(n, h));
            InjectivityReport rep = check_injective(s);
            if (!rep.injective || rep.rank != e0_dim(n, h)) kernels = false;
            LeftInverse li = left_inverse(s);
            RatMatrix m = std::holds_alternative<Symbol1>(s) ? std::get<Symbol1>(s).flatten()
                                                             : std::get<Symbol2>(s).flatten();
            if (!(li.b * m == RatMatrix::identity(e0_dim(n, h)))) inverses = false;
        }
        LeftInverse li0 = left_inverse(extract_symbol(assemble_dc(n, 0)));
        for (int col = 0; col < li0.b.cols(); ++col) {
            int I = col / (2 * n), i = col % (2 * n);
            if (li0.b.at(0, col) != (I == i ? Rational(1, 2 * n) : Rational())) gradient = false;
        }
    }
    report(4, "ker sigma(d_c) and ker Sigma(d_c) trivial, n<=3, every h", kernels);
    report(4, "B_h sigma = identity exactly", inverses);
    report(4, "B_0 equals the closed form delta_{iI}/(2n)", gradient);
}

// ------------------------------------------------------------------ 5
void criterion_equivariance() {
    bool pass = true;
    std::string where;
    for (int n = 1; n <= 3 && pass; ++n) {
        for (std::uint64_t seed = 1; seed <= 20 && pass; ++seed) {
            SymplecticMap A = random_symplectic(n, seed);
            int h = static_cast<int>(seed % (2 * n + 1)); // cycles through 0..2n
            EquivarianceReport rep = equivariance_check(A, n, h, 1, seed * 101 + h);
            if (!rep.exact()) {
                pass = false;
                where = "n=" + std::to_string(n) + " seed=" + std::to_string(seed) +
                        " h=" + std::to_string(h);
            }
        }
    }
    report(5, "d_c(f_A^* a) = f_A^*(d_c a) exactly, 20 seeded maps per n=1..3", pass, where);
}

// ------------------------------------------------------------------ 6
void criterion_decomposition() {
    bool symbolic = true;
    std::string where;
    for (int n = 1; n <= 2 && symbolic; ++n) {
        for (int h = 1; h <= 2 * n && symbolic; ++h) {
            PolyForm u;
            u.n = n;
            u.h = h - 1;
            for (int k = 0; k < e0_dim(n, h - 1); ++k) {
                CoordPolynomial f = CoordPolynomial::variable(n, 1 + (k % (2 * n)))
                                        .scaled(Rational(2 * k + 1, 3));
                f += CoordPolynomial::variable(n, 2 * n + 1).scaled(Rational(k + 1, 2));
                CoordPolynomial quad = CoordPolynomial::variable(n, 1) *
                                       CoordPolynomial::variable(n, std::min(2 * n, 2));
                f += quad.scaled(Rational(1, 4));
                u.comps.push_back(f);
            }
            SymbolicDecomposition dec = divfree_decompose(apply_dc(u));
            if (!dec.divergence_zero || !dec.reconstruction_exact) {
                symbolic = false;
                where = "n=" + std::to_string(n) + " h=" + std::to_string(h);
            }
        }
    }
    report(6, "symbolic closed forms: exact reconstruction, vanishing divergence", symbolic, where);

    // grid side: f = d_c u for smooth bumps; divergence residual decays.
    // Order gates run where 3 levels reach the asymptotic regime (n=1, both
    // operator orders); the 4+1 dimensional grids demonstrate strict decay.
    {
        bool pass = true;
        std::string detail;
        for (int h : {1, 2}) {
            TestForm u = standard_test_form(1, h - 1, 4, 8);
            TestForm alpha = apply_analytic(assemble_dc(1, h - 1), u);
            Grid g;
            g.n = 1;
            g.nodes_xy = 33;
            g.nodes_t = 65;
            std::vector<double> res;
            for (int level = 0; level < 3; ++level) {
                res.push_back(divfree_decompose_grid(sample(alpha, g)).divergence_residual);
                g = g.refined();
            }
            double order = measured_order(res[1], res[2]);
            char buf[96];
            std::snprintf(buf, sizeof buf, "n=1 h=%d order %.2f; ", h, order);
            detail += buf;
            if (order < 1.8) pass = false;
        }
        report(6, "grid divergence residual decays at order >= 1.8 (n=1, both orders)", pass, detail);
    }
    {
        TestForm u;
        u.n = 2;
        u.h = 0;
        u.comps.push_back(BumpExpr::ball_bump(2, 1.0, 8));
        TestForm alpha = apply_analytic(assemble_dc(2, 0), u);
        Grid g;
        g.n = 2;
        g.nodes_xy = 7;
        g.nodes_t = 13;
        std::vector<double> res;
        for (int level = 0; level < 3; ++level) {
            res.push_back(divfree_decompose_grid(sample(alpha, g)).divergence_residual);
            g = g.refined();
        }
        double order = measured_order(res[1], res[2]);
        char buf[128];
        std::snprintf(buf, sizeof buf, "residuals %.2e -> %.2e, order %.2f (pre-asymptotic)",
                      res[1], res[2], order);
        report(6, "n=2 grid divergence residual strictly decays under refinement",
               res[2] < res[1], buf);
    }
}

// ------------------------------------------------------------------ 7
// compactly supported form with parity-breaking polynomial factors, so the
// discrete commutator defects do not cancel by grid symmetry
TestForm skewed_test_form(int n, int h, double a, double b, double c) {
    TestForm tf;
    tf.n = n;
    tf.h = h;
    for (int k = 0; k < e0_dim(n, h); ++k) {
        BumpExpr base = BumpExpr::ball_bump(n, 1.0, 8);
        BumpExpr f = base.scaled(a + 0.3 * k);
        f += base.times_coord(1).scaled(b);
        f += base.times_coord(2 * n + 1).scaled(c);
        f += base.times_coord(1).times_coord(std::min(2, 2 * n)).scaled(0.7);
        f += base.times_coord(std::min(2, 2 * n)).times_coord(2 * n + 1).scaled(-0.4);
        tf.comps.push_back(f);
    }
    return tf;
}

void criterion_numerics() {
    // discrete chain property decay: the order gate runs at n=1 where three
    // halvings reach the asymptotic regime; the 4+1 dimensional studies
    // demonstrate strict decay with the measured (pre-asymptotic) order
    {
        bool pass = true;
        std::string detail;
        for (int h : {0, 1}) {
            TestForm u = standard_test_form(1, h, 7 + h, 8);
            Grid g;
            g.n = 1;
            g.nodes_xy = 33;
            g.nodes_t = 65;
            std::vector<double> res;
            for (int level = 0; level < 3; ++level) {
                FormField uf = sample(u, g);
                FormField once = fd_apply(assemble_dc(1, h), uf);
                uf.comps.clear();
                FormField twice = fd_apply(assemble_dc(1, h + 1), once);
                once.comps.clear();
                res.push_back(max_abs(twice));
                g = g.refined();
            }
            double order = measured_order(res[1], res[2]);
            char buf[96];
            std::snprintf(buf, sizeof buf, "n=1 h=%d order %.2f; ", h, order);
            detail += buf;
            if (order < 1.8) pass = false;
        }
        report(7, "discrete d_c^2 residual decays at order >= 1.8 (n=1)", pass, detail);
    }
    {
        bool pass = true;
        std::string detail;
        for (int h : {0, 1, 2, 3}) {
            TestForm u = standard_test_form(2, h, 7 + h, 8);
            Grid g;
            g.n = 2;
            g.nodes_xy = 7;
            g.nodes_t = 13;
            std::vector<double> res;
            for (int level = 0; level < 3; ++level) {
                FormField uf = sample(u, g);
                FormField once = fd_apply(assemble_dc(2, h), uf);
                uf.comps.clear();
                FormField twice = fd_apply(assemble_dc(2, h + 1), once);
                once.comps.clear();
                res.push_back(max_abs(twice));
                g = g.refined();
            }
            char buf[96];
            std::snprintf(buf, sizeof buf, "h=%d %.2e -> %.2e (order %.2f); ", h, res[1], res[2],
                          measured_order(res[1], res[2]));
            detail += buf;
            if (!(res[2] < res[1])) pass = false;
        }
        report(7, "n=2 discrete d_c^2 residual strictly decays, every h", pass, detail);
    }
    // fd consistency of the horizontal gradient
    {
        bool pass = true;
        std::string detail;
        for (int n : {1, 2}) {
            TestForm u;
            u.n = n;
            u.h = 0;
            if (n == 1) {
                u = standard_test_form(n, 0, 11, 8);
            } else {
                u.comps.push_back(BumpExpr::ball_bump(n, 1.0, 8));
            }
            TestForm du = apply_analytic(assemble_dc(n, 0), u);
            Grid g;
            g.n = n;
            g.nodes_xy = (n == 1) ? 17 : 7;
            g.nodes_t = 2 * g.nodes_xy - 1;
            std::vector<double> err;
            for (int level = 0; level < 3; ++level) {
                FormField fd = fd_apply(assemble_dc(n, 0), sample(u, g));
                FormField exact = sample(du, g);
                double m = 0.0;
                for (std::size_t k = 0; k < fd.comps.size(); ++k)
                    for (std::size_t i = 0; i < fd.comps[k].size(); ++i)
                        m = std::max(m, std::fabs(fd.comps[k][i] - exact.comps[k][i]));
                err.push_back(m);
                g = g.refined();
            }
            double order = measured_order(err[1], err[2]);
            char buf[64];
            std::snprintf(buf, sizeof buf, "n=%d order %.2f; ", n, order);
            detail += buf;
            if (order < 1.8) pass = false;
        }
        report(7, "fd gradient converges to the analytic one at order >= 1.8", pass, detail);
    }
    // adjointness pairing gap decays
    {
        bool pass = true;
        std::string detail;
        for (int n : {1, 2}) {
            int h = n; // across the order-2 step, where the gap is genuine
            TestForm u = skewed_test_form(n, h, 1.0, 0.8, 0.6);
            TestForm v = skewed_test_form(n, h + 1, 0.9, -0.5, 1.1);
            Grid g;
            g.n = n;
            g.nodes_xy = (n == 1) ? 17 : 7;
            g.nodes_t = 2 * g.nodes_xy - 1;
            std::vector<double> gaps;
            for (int level = 0; level < 3; ++level) {
                FormField uf = sample(u, g);
                FormField vf = sample(v, g);
                double lhs = l2_pairing(fd_apply(assemble_dc(n, h), uf), vf);
                double rhs = l2_pairing(uf, fd_apply(assemble_delta_c(n, h + 1), vf));
                gaps.push_back(std::fabs(lhs - rhs));
                g = g.refined();
            }
            char buf[96];
            std::snprintf(buf, sizeof buf, "n=%d gaps %.2e -> %.2e -> %.2e; ", n, gaps[0], gaps[1],
                          gaps[2]);
            detail += buf;
            if (!(gaps[2] < gaps[1] && gaps[1] < gaps[0])) pass = false;
        }
        report(7, "discrete adjointness pairing gap decays under refinement", pass, detail);
    }
    // gn ratios: finite, stable within 2 percent, regression-pinned
    {
        struct Probe { int n, h, base_xy, base_t; double pinned; };
        // pinned on the finest grid of this exact configuration (seed 1)
        std::vector<Probe> probes = {
            {1, 0, 33, 65, 0.21672826524126},    // case i
            {1, 1, 33, 65, 0.029881373234225},   // case iv (h = n)
            {2, 2, 7, 13, 0.016058557325784},    // case iv (h = n); no case-iii
                                                 // instance exists for n <= 2
        };
        bool finite = true, stable = true, pinned_ok = true;
        std::string detail;
        for (const auto& p : probes) {
            TestForm u = standard_test_form(p.n, p.h, 1);
            Grid g;
            g.n = p.n;
            g.nodes_xy = p.base_xy;
            g.nodes_t = p.base_t;
            std::vector<double> ratios;
            for (int level = 0; level < 3; ++level) {
                GnReport rep = gn_ratio(u, g);
                if (!std::isfinite(rep.ratio) || rep.ratio <= 0.0) finite = false;
                ratios.push_back(rep.ratio);
                g = g.refined();
            }
            double drift = std::fabs(ratios[2] - ratios[1]) / ratios[2];
            if (drift > 0.02) stable = false;
            double pin_err = std::fabs(ratios[2] - p.pinned) / p.pinned;
            if (pin_err > 1e-6) pinned_ok = false;
            char buf[160];
            std::snprintf(buf, sizeof buf, "n=%d h=%d ratio %.14g drift %.3f%%; ", p.n, p.h, ratios[2],
                          100 * drift);
            detail += buf;
        }
        report(7, "gn ratios finite for cases i and iv (iii has no instance for n<=2)", finite);
        report(7, "gn ratios stable within 2% across two refinements", stable, detail);
        report(7, "gn ratios match the regression pins to 1e-6", pinned_ok);
    }
    // dilation invariance with matched scaled grids
    {
        bool pass = true;
        std::string detail;
        struct Sweep { int n, h; double lambda; };
        std::vector<Sweep> sweeps = {{1, 0, 1.0}, {1, 0, 2.0}, {1, 0, 0.5},
                                     {2, 2, 1.0 / 3.0}, {2, 2, 2.0}};
        for (const auto& sw : sweeps) {
            TestForm u = standard_test_form(sw.n, sw.h, 1);
            Grid g;
            g.n = sw.n;
            g.nodes_xy = (sw.n == 1) ? 33 : 9;
            g.nodes_t = 2 * g.nodes_xy - 1;
            DilationReport rep = dilation_invariance(u, sw.lambda, g);
            char buf[96];
            std::snprintf(buf, sizeof buf, "n=%d h=%d lambda=%.3f rel=%.1e; ", sw.n, sw.h, sw.lambda,
                          rep.rel_diff);
            detail += buf;
            if (!(rep.rel_diff <= 1e-10)) pass = false;
            if (sw.lambda == 1.0 && rep.scaled.ratio != rep.base.ratio) pass = false;
        }
        report(7, "gn ratio dilation-invariant to 1e-10 on matched grids", pass, detail);
    }
}

// ------------------------------------------------------------------ 8
int run_cli(const std::string& args, const fs::path& out_dir) {
    std::string cmd = std::string(RUMIN_CLI_PATH) + " " + args + " --out-dir " + out_dir.string() +
                      " > " + (out_dir / "stdout.txt").string() + " 2>&1";
    return std::system(cmd.c_str());
}

std::string slurp(const fs::path& p) {
    std::ifstream is(p, std::ios::binary);
    std::ostringstream os;
    os << is.rdbuf();
    return os.str();
}

void criterion_reproducibility() {
    fs::path base = fs::temp_directory_path() / "rumin_acceptance";
    fs::remove_all(base);
    fs::create_directories(base / "a");
    fs::create_directories(base / "b");

    int rc = run_cli("verify --n 1", base / "a");
    report(8, "cli verify exits 0 on the full n=1 suite", rc == 0);

    // identical config twice, byte-identical artifacts
    int rc1 = run_cli("gn --n 1 --degree 0 --grid-nodes 17 --refinements 1 --lambda 2 --seed 9",
                      base / "a");
    int rc2 = run_cli("gn --n 1 --degree 0 --grid-nodes 17 --refinements 1 --lambda 2 --seed 9",
                      base / "b");
    bool bytes = rc1 == 0 && rc2 == 0 &&
                 slurp(base / "a" / "gn_n1_h0.json") == slurp(base / "b" / "gn_n1_h0.json") &&
                 !slurp(base / "a" / "gn_n1_h0.json").empty();
    int rc3 = run_cli("dc --n 1 --degree 1", base / "a");
    int rc4 = run_cli("dc --n 1 --degree 1", base / "b");
    bytes = bytes && rc3 == 0 && rc4 == 0 &&
            slurp(base / "a" / "dc_n1_h1.json") == slurp(base / "b" / "dc_n1_h1.json");
    report(8, "identical configs produce byte-identical json artifacts", bytes);

    // emitted artifacts re-parse into the same in-memory values
    {
        std::ifstream is(base / "a" / "dc_n1_h1.json");
        bool ok = is.good();
        if (ok) {
            Json j = Json::parse(is);
            ok = operator_matrix_from_json(j) == assemble_dc(1, 1);
        }
        report(8, "emitted matrix artifact re-parses to the assembled operator", ok);
    }

    // form-field snapshots round trip through the cli
    {
        fs::path rff = base / "a" / "demo.rff";
        int rc5 = run_cli("decompose --n 1 --degree 1 --demo-grid --grid-nodes 9 --save-field " +
                              rff.string(),
                          base / "a");
        int rc6 = run_cli("decompose --n 1 --input " + rff.string(), base / "b");
        report(8, "grid decomposition accepts its own binary snapshot", rc5 == 0 && rc6 == 0);
    }

    // negative control: a corrupted matrix file must fail with a named check
    {
        Json j = operator_matrix_to_json(assemble_dc(1, 1));
        j["entries"][0][0][0][1] = 7; // tamper with one coefficient
        fs::path bad = base / "a" / "corrupted_dc.json";
        std::ofstream os(bad);
        os << j.dump(2);
        os.close();
        int rcbad = run_cli("verify --n 1 --check-file " + bad.string(), base / "a");
        std::string log = slurp(base / "a" / "stdout.txt");
        bool named = log.find("matrix_file_matches_assembly") != std::string::npos;
        report(8, "corrupted matrix file is rejected with the failing check named",
               rcbad != 0 && named);
    }
}

} // namespace

int main() {
    std::printf("acceptance suite\n================\n");
    criterion_chain_complex();
    criterion_dimensions();
    criterion_contract();
    criterion_symbols();
    criterion_equivariance();
    criterion_decomposition();
    criterion_numerics();
    criterion_reproducibility();
    std::printf("================\n%s (%d failure%s)\n", g_failures == 0 ? "ALL CRITERIA PASSED" : "FAILURES",
                g_failures, g_failures == 1 ? "" : "s");
    return g_failures == 0 ? 0 : 1;
}
