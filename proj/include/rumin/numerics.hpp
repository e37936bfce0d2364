#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "rumin/symbol.hpp"

namespace rumin {

// Uniform tensor grid over the box [-r_xy, r_xy]^{2n} x [-r_t, r_t].
// Axes are ordered x_1..x_n, y_1..y_n, t; the t index varies fastest.
struct Grid {
    int n = 1;
    double r_xy = 1.5;
    double r_t = 1.5;
    int nodes_xy = 65;
    int nodes_t = 129;

    int axes() const { return 2 * n + 1; }
    int axis_nodes(int axis) const { return axis == 2 * n ? nodes_t : nodes_xy; }
    double axis_halfwidth(int axis) const { return axis == 2 * n ? r_t : r_xy; }
    double spacing(int axis) const { return 2.0 * axis_halfwidth(axis) / (axis_nodes(axis) - 1); }
    double coord(int axis, int idx) const { return -axis_halfwidth(axis) + spacing(axis) * idx; }
    std::size_t total_nodes() const;
    std::size_t stride(int axis) const; // t innermost
    double cell_volume() const;

    Grid refined() const;                    // halves every spacing
    Grid dilated(double lambda) const;       // box of u o delta_lambda, same node counts

    friend bool operator==(const Grid& a, const Grid& b) {
        return a.n == b.n && a.r_xy == b.r_xy && a.r_t == b.r_t && a.nodes_xy == b.nodes_xy &&
               a.nodes_t == b.nodes_t;
    }
};

Grid default_grid(int n);

using ScalarArray = std::vector<double>;

// Compactly supported expression: sum of monomial * s^k terms where
// s = 1 - sum_i quad_i z_i^2, clipped to s > 0. Closed under the frame
// derivatives, which keeps analytic derivatives available as oracles.
class BumpExpr {
public:
    struct Key {
        std::vector<int> exp;
        int power = 0;
        friend bool operator<(const Key& a, const Key& b) {
            if (a.exp != b.exp) return a.exp < b.exp;
            return a.power < b.power;
        }
    };

    explicit BumpExpr(int n);
    // (1 - |z|^2 / radius^2)^power supported in the euclidean ball; the
    // standard test profile uses power 4, refinement studies of composed
    // operators need the extra smoothness of higher powers
    static BumpExpr ball_bump(int n, double radius, int power = 4);

    int n() const { return n_; }
    const std::vector<double>& quad() const { return quad_; }
    bool is_zero() const { return terms_.empty(); }
    const std::map<Key, double>& terms() const { return terms_; }

    void add_term(const std::vector<int>& exp, int power, double c);

    BumpExpr& operator+=(const BumpExpr& o);
    BumpExpr scaled(double c) const;
    BumpExpr derivative(int axis) const;    // axis 1..2n+1
    BumpExpr times_coord(int axis) const;
    BumpExpr compose_dilation(double lambda) const;

    double support_extent(int axis) const;  // 1/sqrt(quad)
    double evaluate(const std::vector<double>& z) const;

private:
    int n_;
    std::vector<double> quad_;
    std::map<Key, double> terms_;
};

BumpExpr apply_generator_analytic(int index, const BumpExpr& f);
BumpExpr apply_operator_analytic(const OperatorPolynomial& p, const BumpExpr& f);

// Section of E0^h with BumpExpr coefficients in the basis e0_basis(n,h).
struct TestForm {
    int n = 1;
    int h = 0;
    std::vector<BumpExpr> comps;

    TestForm dilated(double lambda) const; // u o delta_lambda
};

// Deterministic compactly supported test form: low-degree polynomial
// factors times the standard bump, one per component.
TestForm standard_test_form(int n, int h, std::uint64_t seed = 0, int power = 4);

TestForm apply_analytic(const OperatorMatrix& m, const TestForm& u);

struct FormField {
    Grid grid;
    int h = 0;
    std::vector<ScalarArray> comps;
};

// Pointwise evaluation at the nodes; rejects forms whose support does not
// leave one stencil width of zero padding inside the box.
FormField sample(const TestForm& tf, const Grid& g);

ScalarArray central_difference(const Grid& g, const ScalarArray& f, int axis);
ScalarArray apply_generator_fd(const Grid& g, const ScalarArray& f, int index);
ScalarArray apply_operator_fd(const Grid& g, const OperatorPolynomial& p, const ScalarArray& f);

// Second-order finite-difference action of an operator matrix, PBW factors
// applied rightmost first, zero extension outside the box.
FormField fd_apply(const OperatorMatrix& m, const FormField& u);

double max_abs(const FormField& u);
double lp_norm(const FormField& u, double p);           // p >= 1 or infinity
double lpq_norm(const FormField& u, double p, double q);
double l2_pairing(const FormField& u, const FormField& v);

// Gagliardo-Nirenberg probe. The case split follows the main theorem:
//   1: h = 0 or 2n+1          |u|_{Q/(Q-1)} vs |d_c u|_1 (resp. |delta_c u|_1)
//   2: h = 1 or 2n (n >= 2)   Hardy-norm case, probed with an L1 stand-in
//   3: other h                |u|_{Q/(Q-1)} vs |f|_1 + |g|_1
//   4: h = n or n+1           |u|_{Q/(Q-2)} vs the second-order right sides
struct GnReport {
    int n = 0, h = 0, q = 0;
    int case_id = 0;
    bool hardy_proxy = false;
    double left_exponent = 0.0;
    double left_norm = 0.0;
    std::vector<std::pair<std::string, double>> right_norms;
    double right_total = 0.0;
    double ratio = 0.0;
    bool degenerate = false;
    std::string note;
};

GnReport gn_ratio(const TestForm& u, const Grid& g);

struct DilationReport {
    double lambda = 1.0;
    GnReport base;
    GnReport scaled;
    double rel_diff = 0.0;
};

DilationReport dilation_invariance(const TestForm& u, double lambda, const Grid& g);

// Grid-side divergence-free decomposition of a (numerically) closed form.
struct GridDecomposition {
    int n = 0, h = 0, order = 1;
    double closedness_residual = 0.0;     // max-norm of the FD d_c applied to alpha
    double divergence_residual = 0.0;     // max over I of the FD divergence of G_I
    std::vector<double> divergence_per_field; // one residual per I
    double reconstruction_residual = 0.0; // max-norm of alpha - B G
    double constant_c = 0.0;
    // [I][component][node]; component layout as in SymbolicDecomposition
    std::vector<std::vector<ScalarArray>> fields;
};

// Rejects the input when the finite-difference closedness residual exceeds
// closedness_tol (default: report only).
GridDecomposition divfree_decompose_grid(const FormField& alpha, bool keep_fields = false,
                                         double closedness_tol = 0.0);

double measured_order(double err_coarse, double err_fine); // log2 ratio

} // namespace rumin
