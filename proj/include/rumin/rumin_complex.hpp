#pragma once

#include <string>
#include <vector>

#include "rumin/exterior.hpp"
#include "rumin/lie_algebra.hpp"
#include "rumin/linalg.hpp"

namespace rumin {

// Basis of the Rumin space E_0^h: primitive horizontal covectors for
// h <= n, and beta ^ theta with L(beta) = 0 for h > n. Vectors are pairwise
// orthogonal rational covectors, scaled so the first nonzero coordinate is
// +1; squared norms are carried in gram_diag.
struct E0Basis {
    int n = 0;
    int h = 0;
    std::vector<Covector> xi;
    std::vector<Rational> gram_diag;

    int dim() const { return static_cast<int>(xi.size()); }
    RatMatrix coord_matrix() const; // columns over the full degree-h monomial basis
};

const E0Basis& e0_basis(int n, int h);

int e0_dim(int n, int h);

// Matrix of left-invariant differential operators acting on coefficient
// vectors: (M a)_I = sum_k M[I][k] a_k.
class OperatorMatrix {
public:
    OperatorMatrix(int n, int rows, int cols, int source_degree, int target_degree);

    int n() const { return n_; }
    int rows() const { return rows_; }
    int cols() const { return cols_; }
    int source_degree() const { return source_degree_; }
    int target_degree() const { return target_degree_; }

    OperatorPolynomial& at(int i, int j) { return e_[static_cast<size_t>(i) * cols_ + j]; }
    const OperatorPolynomial& at(int i, int j) const { return e_[static_cast<size_t>(i) * cols_ + j]; }

    bool is_zero() const;
    OperatorMatrix operator*(const OperatorMatrix& o) const; // composition
    OperatorMatrix operator+(const OperatorMatrix& o) const;
    OperatorMatrix scaled(const Rational& c) const;
    std::vector<OperatorPolynomial> apply(const std::vector<OperatorPolynomial>& a) const;
    std::vector<CoordPolynomial> apply_to_polynomials(const std::vector<CoordPolynomial>& a) const;

    friend bool operator==(const OperatorMatrix& a, const OperatorMatrix& b);

private:
    int n_, rows_, cols_, source_degree_, target_degree_;
    std::vector<OperatorPolynomial> e_;
};

OperatorMatrix scalar_times_op(const RatMatrix& s, const OperatorMatrix& m);
OperatorMatrix op_times_scalar(const OperatorMatrix& m, const RatMatrix& s);

// De Rham differential on the full covector bundle in the left-invariant
// frame, as an operator matrix between the degree-h and degree-(h+1)
// monomial bases. Satisfies d(h+1) * d(h) = 0 in the enveloping algebra.
const OperatorMatrix& full_d(int n, int h);

// Weight-0 (algebraic) part of d: a1 + theta^a2 -> dtheta ^ a2, as a
// constant matrix between full monomial bases.
RatMatrix d0_matrix(int n, int h);

// Nullspace basis of ker d0 intersect ker d0* at degree h (columns over the
// full monomial basis). Independent characterization of E_0^h.
RatMatrix e0_weight_kernel(int n, int h);

// Matrix of the Rumin differential in the bases e0_basis(n,h),
// e0_basis(n,h+1). Entries are homogeneous of dilation degree 1 when
// h != n and degree 2 when h = n.
const OperatorMatrix& assemble_dc(int n, int h);

// Coefficients of star(xi_k^h) in the basis of E_0^{2n+1-h}; throws when the
// star image leaves the Rumin bundle.
RatMatrix star_matrix(int n, int h);

// delta_c on E_0^h via (-1)^{h(2n+1)} star d_c star.
const OperatorMatrix& assemble_delta_c(int n, int h);

// Independent route to delta_c: entrywise formal adjoint corrected by the
// Gram weights of the two bases. Used to certify adjointness.
OperatorMatrix delta_c_adjoint_route(int n, int h);

// d_c delta_c + delta_c d_c away from the middle degrees,
// (d_c delta_c)^2 + delta_c d_c at h = n, and the mirror at h = n+1.
OperatorMatrix rumin_laplacian(int n, int h);

// Named contract checks (chain property, homogeneity, star-invariance,
// duality, dimensions, basis cross-construction) for a given n.
struct CheckResult {
    std::string name;
    bool pass = false;
    std::string detail;
};

std::vector<CheckResult> certify_complex(int n);

} // namespace rumin
