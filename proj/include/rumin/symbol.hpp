#pragma once

#include <cstdint>
#include <variant>
#include <vector>

#include "rumin/rumin_complex.hpp"

namespace rumin {

// First-order symbol of d_c away from the middle degree: the constant
// tensor F with P_{I,k} = sum_i F[I,k,i] W_i.
struct Symbol1 {
    int n = 0;
    int h = 0;
    int n_out = 0; // dim E0^{h+1}
    int n_in = 0;  // dim E0^h

    std::vector<Rational> f; // index (I,k,i)

    const Rational& at(int I, int k, int i) const { return f[(static_cast<size_t>(I) * n_in + k) * (2 * n) + i]; }
    Rational& at(int I, int k, int i) { return f[(static_cast<size_t>(I) * n_in + k) * (2 * n) + i]; }

    // rows indexed by (I,i) as I*(2n)+i, columns by k
    RatMatrix flatten() const;
};

// Symmetric symbol at the middle degree: symmetric tensor plus the
// T-coefficient that records the skew defect of each entry.
struct Symbol2 {
    int n = 0;
    int n_out = 0; // dim E0^{n+1}
    int n_in = 0;  // dim E0^n

    std::vector<Rational> fsym;   // index (I,k,i,j), symmetric in (i,j)
    std::vector<Rational> tcoeff; // index (I,k)

    const Rational& sym_at(int I, int k, int i, int j) const {
        return fsym[((static_cast<size_t>(I) * n_in + k) * (2 * n) + i) * (2 * n) + j];
    }
    Rational& sym_at(int I, int k, int i, int j) {
        return fsym[((static_cast<size_t>(I) * n_in + k) * (2 * n) + i) * (2 * n) + j];
    }
    const Rational& t_at(int I, int k) const { return tcoeff[static_cast<size_t>(I) * n_in + k]; }
    Rational& t_at(int I, int k) { return tcoeff[static_cast<size_t>(I) * n_in + k]; }

    int pair_count() const { return n * (2 * n + 1); } // unordered pairs over 2n indices
    static int pair_index(int i, int j, int two_n);    // i <= j

    // rows indexed by (I, pair i<=j), columns by k
    RatMatrix flatten() const;

    // Operator with the given symmetric part and T-coefficient; inverse of
    // the extraction split.
    OperatorPolynomial recombine(int I, int k) const;
};

using Symbol = std::variant<Symbol1, Symbol2>;

// Split the entries of a certified d_c matrix into their constant symbol.
// First-order entries yield Symbol1; second-order entries are split into
// (symmetric tensor, T-coefficient) pairs and yield Symbol2.
Symbol extract_symbol(const OperatorMatrix& m);

struct InjectivityReport {
    int rank = 0;
    int dim = 0;
    bool injective = false;
};
InjectivityReport check_injective(const Symbol& s);

// Exact left inverse B with B * flatten(symbol) = identity, computed through
// the normal equations; requires an injective symbol.
struct LeftInverse {
    int order = 1;
    int n = 0;
    int h = 0;
    RatMatrix b; // N_h x flattened row count
};
LeftInverse left_inverse(const Symbol& s);

// Element of Sp(2n, Q) together with its lift fixing the contact direction.
struct SymplecticMap {
    int n = 0;
    RatMatrix a; // 2n x 2n

    RatMatrix lifted() const; // (2n+1) x (2n+1), bottom-right block 1
};

RatMatrix standard_symplectic_form(int n);
bool is_symplectic(const RatMatrix& a, int n);

// Product of 5..20 elementary generators (symplectic shears, block
// diagonals, the J swap) with small rational entries; deterministic in the
// seed, membership verified exactly.
SymplecticMap random_symplectic(int n, std::uint64_t seed);

// Pullback of a constant covector along the lifted matrix, acting row-wise
// on the frame indices.
Covector covector_pullback(const RatMatrix& lifted, const Covector& v);

// Smooth section of E0^h with polynomial coefficients in the basis
// e0_basis(n,h).
struct PolyForm {
    int n = 0;
    int h = 0;
    std::vector<CoordPolynomial> comps;

    bool is_zero() const;
};

PolyForm apply_dc(const PolyForm& u);

// f_A^* u: coefficients composed with the group automorphism, covector part
// transformed and re-expanded in the Rumin basis. Throws when the
// transformed basis leaves E0 (which would signal a sign error).
PolyForm pullback_form(const SymplecticMap& A, const PolyForm& u);

struct EquivarianceReport {
    int trials = 0;
    int mismatches = 0;
    bool exact() const { return mismatches == 0; }
};

// Compares d_c(f_A^* alpha) with f_A^*(d_c alpha) on seeded random
// polynomial-coefficient forms; both sides expanded exactly.
EquivarianceReport equivariance_check(const SymplecticMap& A, int n, int h, int trials, std::uint64_t seed);

// Decomposition of a closed form into constant combinations of
// divergence-free horizontal fields, with the exact reconstruction and the
// explicit comparability constant.
struct SymbolicDecomposition {
    int n = 0;
    int h = 0;
    int order = 1;
    // order 1: fields[I] has 2n components G_{I,i}
    // order 2: fields[I] has (2n)^2 components G_{I,i,j} flattened i*(2n)+j
    std::vector<std::vector<CoordPolynomial>> fields;
    // order 2 only: symmetric parts (G_I^Sym)_{i,j}, same flattening
    std::vector<std::vector<CoordPolynomial>> sym_parts;
    std::vector<CoordPolynomial> reconstructed;
    bool divergence_zero = false;
    bool reconstruction_exact = false;
    double constant_c = 0.0;
};

// Requires d_c alpha = 0 (verified symbolically; throws otherwise).
SymbolicDecomposition divfree_decompose(const PolyForm& alpha);

std::vector<CheckResult> certify_symbols(int n);

} // namespace rumin
