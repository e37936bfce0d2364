#include "rumin/numerics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace rumin {

std::size_t Grid::total_nodes() const {
    std::size_t t = 1;
    for (int a = 0; a < axes(); ++a) t *= static_cast<std::size_t>(axis_nodes(a));
    return t;
}

std::size_t Grid::stride(int axis) const {
    std::size_t s = 1;
    for (int a = axis + 1; a < axes(); ++a) s *= static_cast<std::size_t>(axis_nodes(a));
    return s;
}

double Grid::cell_volume() const {
    double v = 1.0;
    for (int a = 0; a < axes(); ++a) v *= spacing(a);
    return v;
}

Grid Grid::refined() const {
    Grid g = *this;
    g.nodes_xy = 2 * nodes_xy - 1;
    g.nodes_t = 2 * nodes_t - 1;
    return g;
}

Grid Grid::dilated(double lambda) const {
    Grid g = *this;
    g.r_xy = r_xy / lambda;
    g.r_t = r_t / (lambda * lambda);
    return g;
}

Grid default_grid(int n) {
    Grid g;
    g.n = n;
    if (n == 1) {
        g.nodes_xy = 65;
        g.nodes_t = 129;
    } else {
        // two refinement levels below the n=1 default keeps the 4+1
        // dimensional fields at desk scale
        g.nodes_xy = 17;
        g.nodes_t = 33;
    }
    return g;
}

BumpExpr::BumpExpr(int n) : n_(n), quad_(2 * n + 1, 1.0) {}

BumpExpr BumpExpr::ball_bump(int n, double radius, int power) {
    BumpExpr b(n);
    for (auto& q : b.quad_) q = 1.0 / (radius * radius);
    b.add_term(std::vector<int>(2 * n + 1, 0), power, 1.0);
    return b;
}

void BumpExpr::add_term(const std::vector<int>& exp, int power, double c) {
    if (c == 0.0) return;
    Key k{exp, power};
    auto it = terms_.find(k);
    if (it == terms_.end()) {
        terms_.emplace(std::move(k), c);
    } else {
        it->second += c;
        if (it->second == 0.0) terms_.erase(it);
    }
}

BumpExpr& BumpExpr::operator+=(const BumpExpr& o) {
    if (o.is_zero()) return *this;
    if (is_zero()) { *this = o; return *this; }
    if (o.n_ != n_ || o.quad_ != quad_)
        throw std::invalid_argument("BumpExpr: incompatible bump profiles in sum");
    for (const auto& [k, c] : o.terms_) add_term(k.exp, k.power, c);
    return *this;
}

BumpExpr BumpExpr::scaled(double c) const {
    BumpExpr r(n_);
    r.quad_ = quad_;
    if (c == 0.0) return r;
    for (const auto& [k, v] : terms_) r.terms_.emplace(k, v * c);
    return r;
}

BumpExpr BumpExpr::derivative(int axis) const {
    BumpExpr r(n_);
    r.quad_ = quad_;
    int a = axis - 1;
    for (const auto& [k, c] : terms_) {
        if (k.exp[a] > 0) {
            std::vector<int> e = k.exp;
            e[a] -= 1;
            r.add_term(e, k.power, c * k.exp[a]);
        }
        if (k.power > 0) {
            std::vector<int> e = k.exp;
            e[a] += 1;
            r.add_term(e, k.power - 1, -2.0 * quad_[a] * k.power * c);
        }
    }
    return r;
}

BumpExpr BumpExpr::times_coord(int axis) const {
    BumpExpr r(n_);
    r.quad_ = quad_;
    for (const auto& [k, c] : terms_) {
        std::vector<int> e = k.exp;
        e[axis - 1] += 1;
        r.add_term(e, k.power, c);
    }
    return r;
}

BumpExpr BumpExpr::compose_dilation(double lambda) const {
    BumpExpr r(n_);
    for (int a = 0; a <= 2 * n_; ++a) {
        double w = (a == 2 * n_) ? 2.0 : 1.0;
        r.quad_[a] = quad_[a] * std::pow(lambda, 2.0 * w);
    }
    for (const auto& [k, c] : terms_) {
        int wdeg = 0;
        for (int a = 0; a <= 2 * n_; ++a) wdeg += k.exp[a] * (a == 2 * n_ ? 2 : 1);
        r.add_term(k.exp, k.power, c * std::pow(lambda, wdeg));
    }
    return r;
}

double BumpExpr::support_extent(int axis) const {
    return 1.0 / std::sqrt(quad_[axis - 1]);
}

double BumpExpr::evaluate(const std::vector<double>& z) const {
    double s = 1.0;
    for (int a = 0; a <= 2 * n_; ++a) s -= quad_[a] * z[a] * z[a];
    if (s <= 0.0) return 0.0;
    double total = 0.0;
    for (const auto& [k, c] : terms_) {
        double v = c;
        for (int a = 0; a <= 2 * n_; ++a)
            for (int e = 0; e < k.exp[a]; ++e) v *= z[a];
        for (int p = 0; p < k.power; ++p) v *= s;
        total += v;
    }
    return total;
}

BumpExpr apply_generator_analytic(int index, const BumpExpr& f) {
    int n = f.n();
    int ti = 2 * n + 1;
    if (index == ti) return f.derivative(ti);
    if (index >= 1 && index <= n) {
        BumpExpr r = f.derivative(index);
        r += f.derivative(ti).times_coord(n + index).scaled(-0.5);
        return r;
    }
    if (index > n && index <= 2 * n) {
        BumpExpr r = f.derivative(index);
        r += f.derivative(ti).times_coord(index - n).scaled(0.5);
        return r;
    }
    throw std::invalid_argument("apply_generator_analytic: index out of range");
}

BumpExpr apply_operator_analytic(const OperatorPolynomial& p, const BumpExpr& f) {
    BumpExpr r(f.n());
    for (const auto& [m, c] : p.terms()) {
        std::vector<int> w = m.word();
        BumpExpr g = f;
        for (auto it = w.rbegin(); it != w.rend(); ++it) g = apply_generator_analytic(*it, g);
        r += g.scaled(c.to_double());
    }
    return r;
}

TestForm TestForm::dilated(double lambda) const {
    TestForm r;
    r.n = n;
    r.h = h;
    r.comps.reserve(comps.size());
    for (const auto& c : comps) r.comps.push_back(c.compose_dilation(lambda));
    return r;
}

TestForm standard_test_form(int n, int h, std::uint64_t seed, int power) {
    TestForm tf;
    tf.n = n;
    tf.h = h;
    int dim = e0_dim(n, h);
    std::uint64_t s = seed * 0x9e3779b97f4a7c15ull + 0x2545f4914f6cdd1dull;
    for (int k = 0; k < dim; ++k) {
        BumpExpr b = BumpExpr::ball_bump(n, 1.0, power);
        s ^= s << 13; s ^= s >> 7; s ^= s << 17;
        int axis = 1 + static_cast<int>(s % (2 * n + 1));
        double c0 = 0.5 + static_cast<double>((s >> 8) % 5) * 0.25;
        BumpExpr f = b.scaled(c0);
        f += b.times_coord(axis).scaled(0.25 * (1 + static_cast<int>((s >> 16) % 3)));
        tf.comps.push_back(f);
    }
    return tf;
}

TestForm apply_analytic(const OperatorMatrix& m, const TestForm& u) {
    if (m.cols() != static_cast<int>(u.comps.size()))
        throw std::invalid_argument("apply_analytic: size mismatch");
    TestForm r;
    r.n = u.n;
    r.h = m.target_degree();
    r.comps.assign(m.rows(), BumpExpr(u.n));
    for (int i = 0; i < m.rows(); ++i)
        for (int j = 0; j < m.cols(); ++j) {
            if (m.at(i, j).is_zero() || u.comps[j].is_zero()) continue;
            r.comps[i] += apply_operator_analytic(m.at(i, j), u.comps[j]);
        }
    return r;
}

FormField sample(const TestForm& tf, const Grid& g) {
    if (tf.n != g.n) throw std::invalid_argument("sample: rank mismatch");
    for (const auto& c : tf.comps) {
        if (c.is_zero()) continue;
        for (int a = 0; a < g.axes(); ++a) {
            double pad = g.axis_halfwidth(a) - g.spacing(a);
            if (c.support_extent(a + 1) > pad + 1e-12)
                throw std::invalid_argument("sample: support leaves no stencil padding inside the box");
        }
    }
    FormField out;
    out.grid = g;
    out.h = tf.h;
    std::size_t total = g.total_nodes();
    out.comps.assign(tf.comps.size(), ScalarArray(total, 0.0));
    std::vector<double> z(g.axes());
    std::vector<int> idx(g.axes(), 0);
    for (std::size_t flat = 0; flat < total; ++flat) {
        for (int a = 0; a < g.axes(); ++a) z[a] = g.coord(a, idx[a]);
        for (std::size_t k = 0; k < tf.comps.size(); ++k) out.comps[k][flat] = tf.comps[k].evaluate(z);
        for (int a = g.axes() - 1; a >= 0; --a) {
            if (++idx[a] < g.axis_nodes(a)) break;
            idx[a] = 0;
        }
    }
    return out;
}

ScalarArray central_difference(const Grid& g, const ScalarArray& f, int axis) {
    std::size_t inner = g.stride(axis);
    std::size_t len = static_cast<std::size_t>(g.axis_nodes(axis));
    std::size_t outer = g.total_nodes() / (inner * len);
    ScalarArray out(f.size(), 0.0);
    double inv = 1.0 / (2.0 * g.spacing(axis));
    for (std::size_t o = 0; o < outer; ++o) {
        std::size_t base = o * len * inner;
        for (std::size_t c = 0; c < len; ++c) {
            const double* up = (c + 1 < len) ? f.data() + base + (c + 1) * inner : nullptr;
            const double* dn = (c > 0) ? f.data() + base + (c - 1) * inner : nullptr;
            double* dst = out.data() + base + c * inner;
            for (std::size_t i = 0; i < inner; ++i) {
                double hi = up ? up[i] : 0.0;
                double lo = dn ? dn[i] : 0.0;
                dst[i] = (hi - lo) * inv;
            }
        }
    }
    return out;
}

namespace {

// multiply in place by (sign/2) * coordinate along the given axis
void scale_by_half_coord(const Grid& g, ScalarArray& f, int axis, double sign) {
    std::size_t inner = g.stride(axis);
    std::size_t len = static_cast<std::size_t>(g.axis_nodes(axis));
    std::size_t outer = g.total_nodes() / (inner * len);
    for (std::size_t o = 0; o < outer; ++o) {
        std::size_t base = o * len * inner;
        for (std::size_t c = 0; c < len; ++c) {
            double factor = sign * 0.5 * g.coord(axis, static_cast<int>(c));
            double* dst = f.data() + base + c * inner;
            for (std::size_t i = 0; i < inner; ++i) dst[i] *= factor;
        }
    }
}

} // namespace

ScalarArray apply_generator_fd(const Grid& g, const ScalarArray& f, int index) {
    int n = g.n;
    int taxis = 2 * n; // 0-based
    if (index == 2 * n + 1) return central_difference(g, f, taxis);
    ScalarArray dt = central_difference(g, f, taxis);
    if (index >= 1 && index <= n) {
        // X_i = d/dx_i - (y_i/2) d/dt
        ScalarArray d = central_difference(g, f, index - 1);
        scale_by_half_coord(g, dt, n + index - 1, -1.0);
        for (std::size_t i = 0; i < d.size(); ++i) d[i] += dt[i];
        return d;
    }
    if (index > n && index <= 2 * n) {
        // Y_i = d/dy_i + (x_i/2) d/dt
        ScalarArray d = central_difference(g, f, index - 1);
        scale_by_half_coord(g, dt, index - n - 1, 1.0);
        for (std::size_t i = 0; i < d.size(); ++i) d[i] += dt[i];
        return d;
    }
    throw std::invalid_argument("apply_generator_fd: index out of range");
}

ScalarArray apply_operator_fd(const Grid& g, const OperatorPolynomial& p, const ScalarArray& f) {
    ScalarArray acc(f.size(), 0.0);
    for (const auto& [m, c] : p.terms()) {
        std::vector<int> w = m.word();
        ScalarArray cur = f;
        for (auto it = w.rbegin(); it != w.rend(); ++it) cur = apply_generator_fd(g, cur, *it);
        double cd = c.to_double();
        for (std::size_t i = 0; i < acc.size(); ++i) acc[i] += cd * cur[i];
    }
    return acc;
}

FormField fd_apply(const OperatorMatrix& m, const FormField& u) {
    if (m.cols() != static_cast<int>(u.comps.size()))
        throw std::invalid_argument("fd_apply: component mismatch");
    FormField out;
    out.grid = u.grid;
    out.h = m.target_degree();
    out.comps.assign(m.rows(), ScalarArray(u.grid.total_nodes(), 0.0));
    for (int i = 0; i < m.rows(); ++i)
        for (int j = 0; j < m.cols(); ++j) {
            if (m.at(i, j).is_zero()) continue;
            ScalarArray part = apply_operator_fd(u.grid, m.at(i, j), u.comps[j]);
            for (std::size_t k = 0; k < part.size(); ++k) out.comps[i][k] += part[k];
        }
    return out;
}

namespace {

std::vector<double> gram_weights(int n, int h, std::size_t comp_count) {
    const E0Basis& b = e0_basis(n, h);
    if (comp_count != static_cast<std::size_t>(b.dim()))
        throw std::invalid_argument("gram_weights: component mismatch");
    std::vector<double> w(b.dim());
    for (int i = 0; i < b.dim(); ++i) w[i] = b.gram_diag[i].to_double();
    return w;
}

} // namespace

double max_abs(const FormField& u) {
    double m = 0.0;
    for (const auto& c : u.comps)
        for (double v : c) m = std::max(m, std::fabs(v));
    return m;
}

double lp_norm(const FormField& u, double p) {
    std::vector<double> w = gram_weights(u.grid.n, u.h, u.comps.size());
    std::size_t total = u.grid.total_nodes();
    if (std::isinf(p)) {
        double m = 0.0;
        for (std::size_t i = 0; i < total; ++i) {
            double sq = 0.0;
            for (std::size_t k = 0; k < u.comps.size(); ++k) sq += w[k] * u.comps[k][i] * u.comps[k][i];
            m = std::max(m, sq);
        }
        return std::sqrt(m);
    }
    if (p < 1.0) throw std::invalid_argument("lp_norm: p must be >= 1");
    double sum = 0.0, comp = 0.0; // Kahan
    for (std::size_t i = 0; i < total; ++i) {
        double sq = 0.0;
        for (std::size_t k = 0; k < u.comps.size(); ++k) sq += w[k] * u.comps[k][i] * u.comps[k][i];
        double term = std::pow(std::sqrt(sq), p);
        double y = term - comp;
        double t = sum + y;
        comp = (t - sum) - y;
        sum = t;
    }
    return std::pow(sum * u.grid.cell_volume(), 1.0 / p);
}

double lpq_norm(const FormField& u, double p, double q) {
    double a = lp_norm(u, p), b = lp_norm(u, q);
    return std::sqrt(a * a + b * b);
}

double l2_pairing(const FormField& u, const FormField& v) {
    if (!(u.grid == v.grid) || u.h != v.h || u.comps.size() != v.comps.size())
        throw std::invalid_argument("l2_pairing: mismatched fields");
    std::vector<double> w = gram_weights(u.grid.n, u.h, u.comps.size());
    double sum = 0.0, comp = 0.0;
    std::size_t total = u.grid.total_nodes();
    for (std::size_t i = 0; i < total; ++i) {
        double term = 0.0;
        for (std::size_t k = 0; k < u.comps.size(); ++k) term += w[k] * u.comps[k][i] * v.comps[k][i];
        double y = term - comp;
        double t = sum + y;
        comp = (t - sum) - y;
        sum = t;
    }
    return sum * u.grid.cell_volume();
}

GnReport gn_ratio(const TestForm& u, const Grid& g) {
    int n = u.n, h = u.h;
    GnReport rep;
    rep.n = n;
    rep.h = h;
    rep.q = 2 * n + 2;
    double Q = rep.q;

    FormField uf = sample(u, g);
    // the operator fields are exact symbolic derivatives of the test form;
    // the grid enters only through the norm quadrature
    auto l1 = [&](const TestForm& f) { return lp_norm(sample(f, g), 1.0); };

    if (h == 0 || h == 2 * n + 1) {
        rep.case_id = 1;
        rep.left_exponent = Q / (Q - 1.0);
        if (h == 0) {
            rep.right_norms.emplace_back("dc_u_L1", l1(apply_analytic(assemble_dc(n, 0), u)));
        } else {
            rep.right_norms.emplace_back("delta_c_u_L1", l1(apply_analytic(assemble_delta_c(n, h), u)));
        }
    } else if (h == n || h == n + 1) {
        rep.case_id = 4;
        rep.left_exponent = Q / (Q - 2.0);
        if (h == n) {
            TestForm f = apply_analytic(assemble_dc(n, n), u);
            TestForm gf = apply_analytic(assemble_delta_c(n, n), u);
            TestForm dcg = apply_analytic(assemble_dc(n, n - 1), gf);
            rep.right_norms.emplace_back("dc_u_L1", l1(f));
            rep.right_norms.emplace_back("dc_delta_c_u_L1", l1(dcg));
        } else {
            TestForm f = apply_analytic(assemble_dc(n, n + 1), u);
            TestForm deltaf = apply_analytic(assemble_delta_c(n, n + 2), f);
            TestForm gf = apply_analytic(assemble_delta_c(n, n + 1), u);
            rep.right_norms.emplace_back("delta_c_dc_u_L1", l1(deltaf));
            rep.right_norms.emplace_back("delta_c_u_L1", l1(gf));
        }
    } else if (h == 1 || h == 2 * n) {
        rep.case_id = 2;
        rep.hardy_proxy = true;
        rep.left_exponent = Q / (Q - 1.0);
        TestForm f = apply_analytic(assemble_dc(n, h), u);
        TestForm gf = apply_analytic(assemble_delta_c(n, h), u);
        if (h == 1) {
            rep.right_norms.emplace_back("dc_u_L1", l1(f));
            rep.right_norms.emplace_back("delta_c_u_L1_H1proxy", l1(gf));
        } else {
            rep.right_norms.emplace_back("dc_u_L1_H1proxy", l1(f));
            rep.right_norms.emplace_back("delta_c_u_L1", l1(gf));
        }
        rep.note = "H1 proxy: the Hardy norm is replaced by its L1 lower bound; "
                   "the reported ratio is a one-sided sanity check only";
    } else {
        rep.case_id = 3;
        rep.left_exponent = Q / (Q - 1.0);
        TestForm f = apply_analytic(assemble_dc(n, h), u);
        TestForm gf = apply_analytic(assemble_delta_c(n, h), u);
        rep.right_norms.emplace_back("dc_u_L1", l1(f));
        rep.right_norms.emplace_back("delta_c_u_L1", l1(gf));
    }

    rep.left_norm = lp_norm(uf, rep.left_exponent);
    rep.right_total = 0.0;
    for (const auto& [name, v] : rep.right_norms) rep.right_total += v;
    if (rep.right_total <= 0.0) {
        rep.degenerate = true;
        rep.ratio = std::numeric_limits<double>::quiet_NaN();
        if (rep.left_norm > 0.0) {
            if (!rep.note.empty()) rep.note += "; ";
            rep.note += "zero right-hand side with nonzero left side: sample outside the estimate's hypotheses";
        } else if (rep.note.empty()) {
            rep.note = "zero form: ratio undefined";
        }
    } else {
        rep.ratio = rep.left_norm / rep.right_total;
    }
    return rep;
}

DilationReport dilation_invariance(const TestForm& u, double lambda, const Grid& g) {
    DilationReport rep;
    rep.lambda = lambda;
    rep.base = gn_ratio(u, g);
    rep.scaled = gn_ratio(u.dilated(lambda), g.dilated(lambda));
    if (std::isnan(rep.base.ratio) || std::isnan(rep.scaled.ratio)) {
        rep.rel_diff = std::numeric_limits<double>::quiet_NaN();
    } else {
        rep.rel_diff = std::fabs(rep.scaled.ratio - rep.base.ratio) / std::fabs(rep.base.ratio);
    }
    return rep;
}

GridDecomposition divfree_decompose_grid(const FormField& alpha, bool keep_fields,
                                         double closedness_tol) {
    int n = alpha.grid.n;
    int h = alpha.h;
    GridDecomposition out;
    out.n = n;
    out.h = h;
    const Grid& g = alpha.grid;
    std::size_t total = g.total_nodes();

    out.closedness_residual = max_abs(fd_apply(assemble_dc(n, h), alpha));
    if (closedness_tol > 0.0 && out.closedness_residual > closedness_tol) {
        std::ostringstream os;
        os << "divfree_decompose_grid: input is not closed within tolerance (residual "
           << out.closedness_residual << " > " << closedness_tol << ")";
        throw std::invalid_argument(os.str());
    }

    Symbol sym = extract_symbol(assemble_dc(n, h));
    LeftInverse li = left_inverse(sym);
    int two_n = 2 * n;

    double recon_res = 0.0, div_res = 0.0;
    if (std::holds_alternative<Symbol1>(sym)) {
        const Symbol1& s = std::get<Symbol1>(sym);
        out.order = 1;
        std::vector<ScalarArray> recon(s.n_in, ScalarArray(total, 0.0));
        const E0Basis& basis = e0_basis(n, h);
        double worst = 0.0;
        for (int I = 0; I < s.n_out; ++I) {
            std::vector<ScalarArray> gi(two_n, ScalarArray(total, 0.0));
            double sq = 0.0;
            for (int i = 0; i < two_n; ++i)
                for (int k = 0; k < s.n_in; ++k) {
                    double c = s.at(I, k, i).to_double();
                    sq += c * c / basis.gram_diag[k].to_double();
                    if (c == 0.0) continue;
                    const ScalarArray& a = alpha.comps[k];
                    for (std::size_t p = 0; p < total; ++p) gi[i][p] += c * a[p];
                }
            worst = std::max(worst, sq);
            ScalarArray div(total, 0.0);
            for (int i = 0; i < two_n; ++i) {
                ScalarArray part = apply_generator_fd(g, gi[i], i + 1);
                for (std::size_t p = 0; p < total; ++p) div[p] += part[p];
            }
            double this_res = 0.0;
            for (double v : div) this_res = std::max(this_res, std::fabs(v));
            out.divergence_per_field.push_back(this_res);
            div_res = std::max(div_res, this_res);
            for (int J = 0; J < s.n_in; ++J)
                for (int i = 0; i < two_n; ++i) {
                    double b = li.b.at(J, I * two_n + i).to_double();
                    if (b == 0.0) continue;
                    for (std::size_t p = 0; p < total; ++p) recon[J][p] += b * gi[i][p];
                }
            if (keep_fields) out.fields.push_back(std::move(gi));
        }
        for (int J = 0; J < s.n_in; ++J)
            for (std::size_t p = 0; p < total; ++p)
                recon_res = std::max(recon_res, std::fabs(recon[J][p] - alpha.comps[J][p]));
        out.constant_c = std::sqrt(worst);
    } else {
        const Symbol2& s = std::get<Symbol2>(sym);
        out.order = 2;
        int np = s.pair_count();
        std::vector<ScalarArray> recon(s.n_in, ScalarArray(total, 0.0));
        const E0Basis& basis = e0_basis(n, h);
        double worst = 0.0;
        for (int I = 0; I < s.n_out; ++I) {
            // one tensor component at a time to keep the footprint flat
            std::vector<ScalarArray> kept;
            double sq = 0.0;
            ScalarArray div(total, 0.0);
            for (int i = 0; i < two_n; ++i)
                for (int j = 0; j < two_n; ++j) {
                    ScalarArray gij(total, 0.0);
                    bool nonzero = false;
                    for (int k = 0; k < s.n_in; ++k) {
                        Rational fr = s.sym_at(I, k, i, j);
                        if (j == i + n) fr += s.t_at(I, k) * Rational(1, n);
                        if (i == j + n) fr -= s.t_at(I, k) * Rational(1, n);
                        double c = fr.to_double();
                        sq += c * c / basis.gram_diag[k].to_double();
                        if (c == 0.0) continue;
                        nonzero = true;
                        const ScalarArray& a = alpha.comps[k];
                        for (std::size_t p = 0; p < total; ++p) gij[p] += c * a[p];
                    }
                    if (nonzero) {
                        ScalarArray mid = apply_generator_fd(g, gij, j + 1);
                        ScalarArray part = apply_generator_fd(g, mid, i + 1);
                        for (std::size_t p = 0; p < total; ++p) div[p] += part[p];
                    }
                    if (keep_fields) kept.push_back(std::move(gij));
                }
            worst = std::max(worst, sq);
            double this_res = 0.0;
            for (double v : div) this_res = std::max(this_res, std::fabs(v));
            out.divergence_per_field.push_back(this_res);
            div_res = std::max(div_res, this_res);
            for (int J = 0; J < s.n_in; ++J)
                for (int i = 0; i < two_n; ++i)
                    for (int j = i; j < two_n; ++j) {
                        double b = li.b.at(J, I * np + Symbol2::pair_index(i, j, two_n)).to_double();
                        if (b == 0.0) continue;
                        ScalarArray sympart(total, 0.0);
                        for (int k = 0; k < s.n_in; ++k) {
                            double c = s.sym_at(I, k, i, j).to_double();
                            if (c == 0.0) continue;
                            for (std::size_t p = 0; p < total; ++p) sympart[p] += c * alpha.comps[k][p];
                        }
                        for (std::size_t p = 0; p < total; ++p) recon[J][p] += b * sympart[p];
                    }
            if (keep_fields) out.fields.push_back(std::move(kept));
        }
        for (int J = 0; J < s.n_in; ++J)
            for (std::size_t p = 0; p < total; ++p)
                recon_res = std::max(recon_res, std::fabs(recon[J][p] - alpha.comps[J][p]));
        out.constant_c = std::sqrt(worst);
    }
    out.divergence_residual = div_res;
    out.reconstruction_residual = recon_res;
    return out;
}

double measured_order(double err_coarse, double err_fine) {
    if (err_fine <= 0.0 || err_coarse <= 0.0) return std::numeric_limits<double>::infinity();
    return std::log2(err_coarse / err_fine);
}

} // namespace rumin
