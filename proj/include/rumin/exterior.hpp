#pragma once

#include <map>
#include <string>
#include <utility>
#include <vector>

#include "rumin/linalg.hpp"
#include "rumin/rational.hpp"

namespace rumin {

// Exact exterior algebra over the (2n+1)-dimensional covector space with
// orthonormal basis omega_1..omega_2n, theta (theta = index 2n+1). Wedge
// monomials are strictly increasing index lists.

struct WedgeMonomial {
    std::vector<int> idx;

    int degree() const { return static_cast<int>(idx.size()); }
    bool contains(int i) const;
    bool is_horizontal(int n) const { return !contains(2 * n + 1); }

    friend bool operator==(const WedgeMonomial& a, const WedgeMonomial& b) { return a.idx == b.idx; }
    friend bool operator<(const WedgeMonomial& a, const WedgeMonomial& b) { return a.idx < b.idx; }
};

// All degree-h wedge monomials over 1..2n+1 (or 1..2n), lexicographic.
std::vector<WedgeMonomial> wedge_monomials(int n, int h, bool horizontal_only = false);

class Covector {
public:
    using TermMap = std::map<WedgeMonomial, Rational>;

    Covector(int n, int degree);

    static Covector unit(int n, const WedgeMonomial& m); // basis monomial
    static Covector scalar(int n, const Rational& c);    // degree 0

    int n() const { return n_; }
    int degree() const { return degree_; }
    const TermMap& terms() const { return terms_; }
    bool is_zero() const { return terms_.empty(); }
    bool is_horizontal() const;

    void add_term(const WedgeMonomial& m, const Rational& c);

    Covector operator-() const;
    Covector& operator+=(const Covector& o);
    Covector& operator-=(const Covector& o);
    friend Covector operator+(Covector a, const Covector& b) { a += b; return a; }
    friend Covector operator-(Covector a, const Covector& b) { a -= b; return a; }
    Covector scaled(const Rational& c) const;

    friend bool operator==(const Covector& a, const Covector& b) {
        return a.n_ == b.n_ && a.degree_ == b.degree_ && a.terms_ == b.terms_;
    }

    // Coordinates with respect to a monomial enumeration.
    RatVec coords(const std::vector<WedgeMonomial>& basis) const;
    static Covector from_coords(int n, int degree, const std::vector<WedgeMonomial>& basis, const RatVec& v);

    std::string str() const;

private:
    int n_, degree_;
    TermMap terms_;
};

// Graded-anticommutative exterior product. When the degrees overflow the
// ambient dimension the result is the zero covector of degree
// min(deg a + deg b, 2n+1).
Covector wedge(const Covector& a, const Covector& b);

// Inner product making the wedge-monomial basis orthonormal.
Rational inner(const Covector& a, const Covector& b);

// Hodge star for the volume form omega_1^...^omega_2n^theta:
// b ^ star(a) = <b,a> dV for every b of matching degree.
Covector hodge_star(const Covector& a);

// d theta = -sum_i omega_i ^ omega_{i+n}.
Covector dtheta(int n);

// Lefschetz operator L(a) = dtheta ^ a and its inner-product adjoint;
// both require horizontal input.
Covector lefschetz_L(const Covector& a);
Covector lefschetz_Lambda(const Covector& a);

struct SubspaceBasis {
    int n = 0;
    int degree = 0;
    std::vector<Covector> vectors;

    int dim() const { return static_cast<int>(vectors.size()); }
    RatMatrix as_matrix(const std::vector<WedgeMonomial>& basis) const;
};

// Primitive horizontal h-covectors: full space for h <= 1, ker Lambda for
// 2 <= h <= 2n. Cross-validated against ker L^{n-h+1} for h <= n, and
// against emptiness for h > n.
SubspaceBasis primitive_basis(int n, int h);

// a = sum_i L^i(p_i) with p_i primitive of degree h-2i; zero components are
// dropped. Input must be horizontal.
std::vector<std::pair<int, Covector>> lefschetz_decompose(const Covector& a);

// Unique split a = a1 + theta ^ a2 with both parts horizontal.
std::pair<Covector, Covector> theta_split(const Covector& a);

} // namespace rumin
