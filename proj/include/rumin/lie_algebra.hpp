#pragma once

#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "rumin/linalg.hpp"
#include "rumin/rational.hpp"

namespace rumin {

// The Heisenberg group H^n in exponential coordinates, its left-invariant
// frame W_1..W_{2n+1} (W_i = X_i, W_{i+n} = Y_i, W_{2n+1} = T with
// [X_j, Y_j] = T the only nonzero brackets), and the algebra of
// left-invariant differential operators in Poincare-Birkhoff-Witt normal
// form over exact rationals.

struct Point {
    std::vector<Rational> x, y;
    Rational t;

    int n() const { return static_cast<int>(x.size()); }
};

Point identity_point(int n);
Point group_mul(const Point& p, const Point& q);
Point group_inverse(const Point& p);
Point dilate(const Rational& lambda, const Point& p);

// Generator indices run 1..2n+1; index 2n+1 is T.
inline int t_index(int n) { return 2 * n + 1; }
inline int generator_weight(int index, int n) { return index == t_index(n) ? 2 : 1; }

// Exponent vector (i_1,...,i_{2n+1}) of the normally ordered word
// W_1^{i_1} ... W_{2n}^{i_2n} T^{i_{2n+1}}.
struct PBWMonomial {
    std::vector<int> exp;

    int order() const; // |I|
    int homogeneity() const; // d(I): T counts twice
    std::vector<int> word() const; // expanded generator index sequence

    friend bool operator==(const PBWMonomial& a, const PBWMonomial& b) { return a.exp == b.exp; }
    friend bool operator<(const PBWMonomial& a, const PBWMonomial& b) { return a.exp < b.exp; }
};

class OperatorPolynomial {
public:
    using TermMap = std::map<PBWMonomial, Rational>;

    explicit OperatorPolynomial(int n) : n_(n) {}

    static OperatorPolynomial constant(int n, const Rational& c);
    static OperatorPolynomial generator(int n, int index);

    int n() const { return n_; }
    const TermMap& terms() const { return terms_; }
    bool is_zero() const { return terms_.empty(); }

    void add_term(const PBWMonomial& m, const Rational& c);

    OperatorPolynomial operator-() const;
    OperatorPolynomial& operator+=(const OperatorPolynomial& o);
    OperatorPolynomial& operator-=(const OperatorPolynomial& o);
    friend OperatorPolynomial operator+(OperatorPolynomial a, const OperatorPolynomial& b) { a += b; return a; }
    friend OperatorPolynomial operator-(OperatorPolynomial a, const OperatorPolynomial& b) { a -= b; return a; }
    OperatorPolynomial scaled(const Rational& c) const;

    // Composition in the enveloping algebra, renormalized to PBW order.
    friend OperatorPolynomial operator*(const OperatorPolynomial& a, const OperatorPolynomial& b);

    friend bool operator==(const OperatorPolynomial& a, const OperatorPolynomial& b) {
        return a.n_ == b.n_ && a.terms_ == b.terms_;
    }

    // Common homogeneity degree d(I) of all monomials, or nullopt when the
    // polynomial mixes degrees. Zero polynomial reports degree 0.
    std::optional<int> homogeneity() const;
    bool is_homogeneous_of(int d) const;

    // Formal L^2 adjoint: every word reversed, scaled by (-1)^order.
    OperatorPolynomial formal_adjoint() const;

    std::string str() const;

private:
    int n_;
    TermMap terms_;
};

// Normal ordering of an arbitrary word of generator indices using
// Y_j X_j -> X_j Y_j - T; T commutes with everything.
OperatorPolynomial pbw_normalize(int n, const Rational& coeff, std::span<const int> word);

// Polynomial with rational coefficients in the exponential coordinates
// (x_1..x_n, y_1..y_n, t); axes are indexed 1..2n+1 matching the frame.
struct CoordMonomial {
    std::vector<int> exp;

    int degree() const;
    friend bool operator==(const CoordMonomial& a, const CoordMonomial& b) { return a.exp == b.exp; }
    friend bool operator<(const CoordMonomial& a, const CoordMonomial& b) { return a.exp < b.exp; }
};

class CoordPolynomial {
public:
    using TermMap = std::map<CoordMonomial, Rational>;

    explicit CoordPolynomial(int n) : n_(n) {}

    static CoordPolynomial constant(int n, const Rational& c);
    static CoordPolynomial variable(int n, int axis); // 1..2n+1

    int n() const { return n_; }
    const TermMap& terms() const { return terms_; }
    bool is_zero() const { return terms_.empty(); }

    void add_term(const CoordMonomial& m, const Rational& c);

    CoordPolynomial operator-() const;
    CoordPolynomial& operator+=(const CoordPolynomial& o);
    CoordPolynomial& operator-=(const CoordPolynomial& o);
    friend CoordPolynomial operator+(CoordPolynomial a, const CoordPolynomial& b) { a += b; return a; }
    friend CoordPolynomial operator-(CoordPolynomial a, const CoordPolynomial& b) { a -= b; return a; }
    friend CoordPolynomial operator*(const CoordPolynomial& a, const CoordPolynomial& b);
    CoordPolynomial scaled(const Rational& c) const;

    friend bool operator==(const CoordPolynomial& a, const CoordPolynomial& b) {
        return a.n_ == b.n_ && a.terms_ == b.terms_;
    }

    CoordPolynomial derivative(int axis) const;
    CoordPolynomial times_variable(int axis) const;
    Rational evaluate(const Point& p) const;

    // Substitution z -> M z with M a (2n+1)x(2n+1) rational matrix acting on
    // the coordinate column (x_1..x_n, y_1..y_n, t).
    CoordPolynomial compose_linear(const RatMatrix& m) const;

    // f o delta_lambda: each monomial scales by lambda^(weighted degree).
    CoordPolynomial compose_dilation(const Rational& lambda) const;

    std::string str() const;

private:
    int n_;
    TermMap terms_;
};

// Concrete coordinate realization X_i = d/dx_i - (y_i/2) d/dt,
// Y_i = d/dy_i + (x_i/2) d/dt, T = d/dt.
CoordPolynomial apply_generator(int index, const CoordPolynomial& f);

// Apply a PBW operator polynomial, rightmost generator first.
CoordPolynomial apply_operator(const OperatorPolynomial& p, const CoordPolynomial& f);

} // namespace rumin
