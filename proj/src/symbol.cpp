#include "rumin/symbol.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

namespace rumin {

RatMatrix Symbol1::flatten() const {
    RatMatrix m(n_out * 2 * n, n_in);
    for (int I = 0; I < n_out; ++I)
        for (int k = 0; k < n_in; ++k)
            for (int i = 0; i < 2 * n; ++i) m.at(I * 2 * n + i, k) = at(I, k, i);
    return m;
}

int Symbol2::pair_index(int i, int j, int two_n) {
    // i <= j, row-major over the upper triangle
    return i * two_n - i * (i - 1) / 2 + (j - i);
}

RatMatrix Symbol2::flatten() const {
    int np = pair_count();
    RatMatrix m(n_out * np, n_in);
    for (int I = 0; I < n_out; ++I)
        for (int k = 0; k < n_in; ++k)
            for (int i = 0; i < 2 * n; ++i)
                for (int j = i; j < 2 * n; ++j)
                    m.at(I * np + pair_index(i, j, 2 * n), k) = sym_at(I, k, i, j);
    return m;
}

OperatorPolynomial Symbol2::recombine(int I, int k) const {
    OperatorPolynomial p(n);
    Rational tpart = t_at(I, k);
    for (int i = 0; i < 2 * n; ++i)
        for (int j = i; j < 2 * n; ++j) {
            const Rational& s = sym_at(I, k, i, j);
            if (s.is_zero()) continue;
            PBWMonomial m{std::vector<int>(2 * n + 1, 0)};
            m.exp[i] += 1;
            m.exp[j] += 1;
            p.add_term(m, i == j ? s : Rational(2) * s);
        }
    for (int i = 0; i < n; ++i) tpart -= sym_at(I, k, i, i + n);
    if (!tpart.is_zero()) {
        PBWMonomial m{std::vector<int>(2 * n + 1, 0)};
        m.exp[2 * n] = 1;
        p.add_term(m, tpart);
    }
    return p;
}

Symbol extract_symbol(const OperatorMatrix& m) {
    int n = m.n();
    int order = 0;
    for (int i = 0; i < m.rows(); ++i)
        for (int j = 0; j < m.cols(); ++j) {
            if (m.at(i, j).is_zero()) continue;
            auto d = m.at(i, j).homogeneity();
            if (!d.has_value()) throw std::invalid_argument("extract_symbol: inhomogeneous entry");
            if (order == 0) order = *d;
            else if (order != *d) throw std::invalid_argument("extract_symbol: mixed entry degrees");
        }
    if (order == 0) order = 1; // zero matrix treated as first order

    if (order == 1) {
        Symbol1 s;
        s.n = n;
        s.h = m.source_degree();
        s.n_out = m.rows();
        s.n_in = m.cols();
        s.f.assign(static_cast<size_t>(s.n_out) * s.n_in * 2 * n, Rational());
        for (int I = 0; I < s.n_out; ++I)
            for (int k = 0; k < s.n_in; ++k)
                for (const auto& [mono, c] : m.at(I, k).terms()) {
                    int found = -1;
                    for (int i = 0; i < 2 * n; ++i)
                        if (mono.exp[i] == 1) found = i;
                    if (found < 0 || mono.order() != 1)
                        throw std::invalid_argument("extract_symbol: unexpected first-order monomial");
                    s.at(I, k, found) = c;
                }
        return s;
    }
    if (order != 2) throw std::invalid_argument("extract_symbol: unsupported order");

    Symbol2 s;
    s.n = n;
    s.n_out = m.rows();
    s.n_in = m.cols();
    s.fsym.assign(static_cast<size_t>(s.n_out) * s.n_in * 4 * n * n, Rational());
    s.tcoeff.assign(static_cast<size_t>(s.n_out) * s.n_in, Rational());
    for (int I = 0; I < s.n_out; ++I)
        for (int k = 0; k < s.n_in; ++k) {
            for (const auto& [mono, c] : m.at(I, k).terms()) {
                if (mono.exp[2 * n] == 1 && mono.order() == 1) {
                    s.t_at(I, k) += c;
                    continue;
                }
                if (mono.order() != 2 || mono.exp[2 * n] != 0)
                    throw std::invalid_argument("extract_symbol: unexpected second-order monomial");
                int a = -1, b = -1;
                for (int i = 0; i < 2 * n; ++i) {
                    if (mono.exp[i] == 2) { a = b = i; break; }
                    if (mono.exp[i] == 1) { (a < 0 ? a : b) = i; }
                }
                if (a == b) {
                    s.sym_at(I, k, a, a) = c;
                } else {
                    Rational half = c * Rational(1, 2);
                    s.sym_at(I, k, a, b) = half;
                    s.sym_at(I, k, b, a) = half;
                }
            }
            // the skew defect of the PBW split lands on the conjugate pairs
            for (int i = 0; i < n; ++i) s.t_at(I, k) += s.sym_at(I, k, i, i + n);
        }
    return s;
}

InjectivityReport check_injective(const Symbol& s) {
    InjectivityReport r;
    RatMatrix m = std::holds_alternative<Symbol1>(s) ? std::get<Symbol1>(s).flatten()
                                                     : std::get<Symbol2>(s).flatten();
    r.dim = m.cols();
    r.rank = m.rank();
    r.injective = (r.rank == r.dim);
    return r;
}

LeftInverse left_inverse(const Symbol& s) {
    InjectivityReport rep = check_injective(s);
    if (!rep.injective) {
        std::ostringstream os;
        os << "left_inverse: symbol is not injective (rank " << rep.rank << " of " << rep.dim << ")";
        throw std::domain_error(os.str());
    }
    LeftInverse li;
    RatMatrix m(0, 0);
    if (std::holds_alternative<Symbol1>(s)) {
        const Symbol1& s1 = std::get<Symbol1>(s);
        li.order = 1;
        li.n = s1.n;
        li.h = s1.h;
        m = s1.flatten();
    } else {
        const Symbol2& s2 = std::get<Symbol2>(s);
        li.order = 2;
        li.n = s2.n;
        li.h = s2.n;
        m = s2.flatten();
    }
    RatMatrix mt = m.transpose();
    li.b = (mt * m).inverse() * mt;
    return li;
}

RatMatrix SymplecticMap::lifted() const {
    RatMatrix m(2 * n + 1, 2 * n + 1);
    for (int i = 0; i < 2 * n; ++i)
        for (int j = 0; j < 2 * n; ++j) m.at(i, j) = a.at(i, j);
    m.at(2 * n, 2 * n) = Rational(1);
    return m;
}

RatMatrix standard_symplectic_form(int n) {
    RatMatrix j(2 * n, 2 * n);
    for (int i = 0; i < n; ++i) {
        j.at(i, n + i) = Rational(1);
        j.at(n + i, i) = Rational(-1);
    }
    return j;
}

bool is_symplectic(const RatMatrix& a, int n) {
    if (a.rows() != 2 * n || a.cols() != 2 * n) return false;
    RatMatrix j = standard_symplectic_form(n);
    return a.transpose() * j * a == j;
}

namespace {

struct SplitMix {
    std::uint64_t s;
    std::uint64_t next() {
        s += 0x9e3779b97f4a7c15ull;
        std::uint64_t z = s;
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
        return z ^ (z >> 31);
    }
    long range(long lo, long hi) { return lo + static_cast<long>(next() % static_cast<std::uint64_t>(hi - lo + 1)); }
};

} // namespace

SymplecticMap random_symplectic(int n, std::uint64_t seed) {
    SplitMix rng{seed * 0x6a09e667f3bcc909ull + 0xb7e151628aed2a6bull};
    RatMatrix acc = RatMatrix::identity(2 * n);
    RatMatrix jmat = standard_symplectic_form(n);
    int count = 5 + static_cast<int>(rng.next() % 16);
    for (int g = 0; g < count; ++g) {
        int kind = static_cast<int>(rng.next() % 4);
        RatMatrix gen = RatMatrix::identity(2 * n);
        if (kind == 0 || kind == 1) {
            // symplectic shear with a small symmetric block
            RatMatrix b(n, n);
            for (int i = 0; i < n; ++i)
                for (int j = i; j < n; ++j) {
                    Rational v(rng.range(-2, 2), rng.range(1, 2));
                    b.at(i, j) = v;
                    b.at(j, i) = v;
                }
            for (int i = 0; i < n; ++i)
                for (int j = 0; j < n; ++j) {
                    if (kind == 0) gen.at(i, n + j) = b.at(i, j); // [[I,B],[0,I]]
                    else gen.at(n + i, j) = b.at(i, j);           // [[I,0],[C,I]]
                }
        } else if (kind == 2) {
            // block diagonal [[K,0],[0,K^{-T}]] with diagonal K
            for (int i = 0; i < n; ++i) {
                static const long nums[] = {1, -1, 2, 1};
                static const long dens[] = {1, 1, 1, 2};
                int pick = static_cast<int>(rng.next() % 4);
                Rational k(nums[pick], dens[pick]);
                gen.at(i, i) = k;
                gen.at(n + i, n + i) = k.inverse();
            }
        } else {
            gen = jmat;
        }
        acc = acc * gen;
    }
    if (!is_symplectic(acc, n)) throw std::logic_error("random_symplectic: generator product left the group");
    SymplecticMap m;
    m.n = n;
    m.a = acc;
    return m;
}

Covector covector_pullback(const RatMatrix& lifted, const Covector& v) {
    int n = v.n();
    int dim = 2 * n + 1;
    if (lifted.rows() != dim || lifted.cols() != dim)
        throw std::invalid_argument("covector_pullback: bad matrix size");
    Covector out(n, v.degree());
    for (const auto& [mono, c] : v.terms()) {
        Covector acc = Covector::scalar(n, c);
        for (int idx : mono.idx) {
            Covector row(n, 1);
            for (int j = 0; j < dim; ++j) row.add_term(WedgeMonomial{{j + 1}}, lifted.at(idx - 1, j));
            acc = wedge(acc, row);
        }
        out += acc;
    }
    return out;
}

bool PolyForm::is_zero() const {
    for (const auto& c : comps)
        if (!c.is_zero()) return false;
    return true;
}

PolyForm apply_dc(const PolyForm& u) {
    const OperatorMatrix& d = assemble_dc(u.n, u.h);
    PolyForm r;
    r.n = u.n;
    r.h = d.target_degree();
    r.comps = d.apply_to_polynomials(u.comps);
    return r;
}

PolyForm pullback_form(const SymplecticMap& A, const PolyForm& u) {
    int n = u.n;
    if (A.n != n) throw std::invalid_argument("pullback_form: rank mismatch");
    const E0Basis& basis = e0_basis(n, u.h);
    if (static_cast<int>(u.comps.size()) != basis.dim())
        throw std::invalid_argument("pullback_form: component count mismatch");
    RatMatrix lifted = A.lifted();
    auto monos = wedge_monomials(n, u.h);
    RatMatrix B = basis.coord_matrix();
    RatMatrix extract = B.column_coefficient_extractor();

    // transformed basis, re-expanded over E0
    RatMatrix R(basis.dim(), basis.dim());
    for (int k = 0; k < basis.dim(); ++k) {
        RatVec s = covector_pullback(lifted, basis.xi[k]).coords(monos);
        RatVec c = extract.apply(s);
        if (B.apply(c) != s) throw std::logic_error("pullback_form: transformed basis leaves E0");
        for (int j = 0; j < basis.dim(); ++j) R.at(j, k) = c[j];
    }

    PolyForm out;
    out.n = n;
    out.h = u.h;
    out.comps.assign(basis.dim(), CoordPolynomial(n));
    for (int k = 0; k < basis.dim(); ++k) {
        if (u.comps[k].is_zero()) continue;
        CoordPolynomial composed = u.comps[k].compose_linear(lifted);
        for (int j = 0; j < basis.dim(); ++j) {
            if (R.at(j, k).is_zero()) continue;
            out.comps[j] += composed.scaled(R.at(j, k));
        }
    }
    return out;
}

namespace {

CoordPolynomial random_coeff(SplitMix& rng, int n) {
    CoordPolynomial f(n);
    for (int terms = 0; terms < 4; ++terms) {
        CoordMonomial m{std::vector<int>(2 * n + 1, 0)};
        int deg = static_cast<int>(rng.next() % 3);
        for (int d = 0; d < deg; ++d) m.exp[rng.next() % (2 * n + 1)] += 1;
        f.add_term(m, Rational(rng.range(-3, 3), rng.range(1, 3)));
    }
    return f;
}

// Skew realization of a T-coefficient as a 2-tensor, spread evenly over the
// conjugate index pairs: entry (i, i+n) gets +tau/n and (i+n, i) gets -tau/n.
Rational full_representative(const Symbol2& s, int I, int k, int i, int j) {
    Rational fij = s.sym_at(I, k, i, j);
    int n = s.n;
    if (j == i + n) fij += s.t_at(I, k) * Rational(1, n);
    if (i == j + n) fij -= s.t_at(I, k) * Rational(1, n);
    return fij;
}

} // namespace

EquivarianceReport equivariance_check(const SymplecticMap& A, int n, int h, int trials, std::uint64_t seed) {
    SplitMix rng{seed ^ 0x243f6a8885a308d3ull};
    EquivarianceReport rep;
    for (int t = 0; t < trials; ++t) {
        PolyForm alpha;
        alpha.n = n;
        alpha.h = h;
        int dim = e0_dim(n, h);
        alpha.comps.reserve(dim);
        for (int k = 0; k < dim; ++k) alpha.comps.push_back(random_coeff(rng, n));
        PolyForm lhs = apply_dc(pullback_form(A, alpha));
        PolyForm rhs = pullback_form(A, apply_dc(alpha));
        ++rep.trials;
        if (!(lhs.comps == rhs.comps)) ++rep.mismatches;
    }
    return rep;
}

SymbolicDecomposition divfree_decompose(const PolyForm& alpha) {
    int n = alpha.n;
    int h = alpha.h;
    if (h < 0 || h > 2 * n) throw std::invalid_argument("divfree_decompose: degree out of range");
    PolyForm closed = apply_dc(alpha);
    if (!closed.is_zero()) {
        std::ostringstream os;
        os << "divfree_decompose: input is not closed; first nonzero residual component: ";
        for (size_t i = 0; i < closed.comps.size(); ++i)
            if (!closed.comps[i].is_zero()) { os << "I=" << i << " -> " << closed.comps[i].str(); break; }
        throw std::invalid_argument(os.str());
    }

    Symbol sym = extract_symbol(assemble_dc(n, h));
    LeftInverse li = left_inverse(sym);
    const E0Basis& basis = e0_basis(n, h);

    SymbolicDecomposition out;
    out.n = n;
    out.h = h;
    int two_n = 2 * n;

    if (std::holds_alternative<Symbol1>(sym)) {
        const Symbol1& s = std::get<Symbol1>(sym);
        out.order = 1;
        out.fields.assign(s.n_out, std::vector<CoordPolynomial>(two_n, CoordPolynomial(n)));
        for (int I = 0; I < s.n_out; ++I)
            for (int i = 0; i < two_n; ++i)
                for (int k = 0; k < s.n_in; ++k) {
                    if (s.at(I, k, i).is_zero() || alpha.comps[k].is_zero()) continue;
                    out.fields[I][i] += alpha.comps[k].scaled(s.at(I, k, i));
                }
        out.divergence_zero = true;
        for (int I = 0; I < s.n_out; ++I) {
            CoordPolynomial div(n);
            for (int i = 0; i < two_n; ++i)
                div += apply_operator(OperatorPolynomial::generator(n, i + 1), out.fields[I][i]);
            if (!div.is_zero()) out.divergence_zero = false;
        }
        out.reconstructed.assign(s.n_in, CoordPolynomial(n));
        for (int J = 0; J < s.n_in; ++J)
            for (int I = 0; I < s.n_out; ++I)
                for (int i = 0; i < two_n; ++i) {
                    const Rational& b = li.b.at(J, I * two_n + i);
                    if (b.is_zero() || out.fields[I][i].is_zero()) continue;
                    out.reconstructed[J] += out.fields[I][i].scaled(b);
                }
        double worst = 0.0;
        for (int I = 0; I < s.n_out; ++I) {
            double sq = 0.0;
            for (int k = 0; k < s.n_in; ++k)
                for (int i = 0; i < two_n; ++i) {
                    double v = s.at(I, k, i).to_double();
                    sq += v * v / basis.gram_diag[k].to_double();
                }
            worst = std::max(worst, sq);
        }
        out.constant_c = std::sqrt(worst);
    } else {
        const Symbol2& s = std::get<Symbol2>(sym);
        out.order = 2;
        out.fields.assign(s.n_out, std::vector<CoordPolynomial>(two_n * two_n, CoordPolynomial(n)));
        out.sym_parts.assign(s.n_out, std::vector<CoordPolynomial>(two_n * two_n, CoordPolynomial(n)));
        for (int I = 0; I < s.n_out; ++I)
            for (int k = 0; k < s.n_in; ++k) {
                if (alpha.comps[k].is_zero()) continue;
                for (int i = 0; i < two_n; ++i)
                    for (int j = 0; j < two_n; ++j) {
                        Rational fij = full_representative(s, I, k, i, j);
                        if (!fij.is_zero()) out.fields[I][i * two_n + j] += alpha.comps[k].scaled(fij);
                        const Rational& fs = s.sym_at(I, k, i, j);
                        if (!fs.is_zero()) out.sym_parts[I][i * two_n + j] += alpha.comps[k].scaled(fs);
                    }
            }
        out.divergence_zero = true;
        for (int I = 0; I < s.n_out; ++I) {
            CoordPolynomial div(n);
            for (int i = 0; i < two_n; ++i)
                for (int j = 0; j < two_n; ++j) {
                    const CoordPolynomial& g = out.fields[I][i * two_n + j];
                    if (g.is_zero()) continue;
                    div += apply_operator(
                        OperatorPolynomial::generator(n, i + 1) * OperatorPolynomial::generator(n, j + 1), g);
                }
            if (!div.is_zero()) out.divergence_zero = false;
        }
        int np = s.pair_count();
        out.reconstructed.assign(s.n_in, CoordPolynomial(n));
        for (int J = 0; J < s.n_in; ++J)
            for (int I = 0; I < s.n_out; ++I)
                for (int i = 0; i < two_n; ++i)
                    for (int j = i; j < two_n; ++j) {
                        const Rational& b = li.b.at(J, I * np + Symbol2::pair_index(i, j, two_n));
                        if (b.is_zero()) continue;
                        const CoordPolynomial& g = out.sym_parts[I][i * two_n + j];
                        if (g.is_zero()) continue;
                        out.reconstructed[J] += g.scaled(b);
                    }
        double worst = 0.0;
        for (int I = 0; I < s.n_out; ++I) {
            double sq = 0.0;
            for (int k = 0; k < s.n_in; ++k)
                for (int i = 0; i < two_n; ++i)
                    for (int j = 0; j < two_n; ++j) {
                        double v = full_representative(s, I, k, i, j).to_double();
                        sq += v * v / basis.gram_diag[k].to_double();
                    }
            worst = std::max(worst, sq);
        }
        out.constant_c = std::sqrt(worst);
    }

    out.reconstruction_exact = true;
    for (size_t j = 0; j < out.reconstructed.size(); ++j)
        if (!(out.reconstructed[j] == alpha.comps[j])) out.reconstruction_exact = false;
    return out;
}

std::vector<CheckResult> certify_symbols(int n) {
    std::vector<CheckResult> out;
    auto check = [&out](const std::string& name, bool pass, const std::string& detail = "") {
        out.push_back(CheckResult{name, pass, detail});
    };
    for (int h = 0; h <= 2 * n; ++h) {
        Symbol s = extract_symbol(assemble_dc(n, h));
        InjectivityReport rep = check_injective(s);
        check("symbol_kernel_trivial", rep.injective,
              "n=" + std::to_string(n) + " h=" + std::to_string(h) + " rank=" + std::to_string(rep.rank));
        if (!rep.injective) continue;
        LeftInverse li = left_inverse(s);
        RatMatrix m = std::holds_alternative<Symbol1>(s) ? std::get<Symbol1>(s).flatten()
                                                         : std::get<Symbol2>(s).flatten();
        check("left_inverse_identity", li.b * m == RatMatrix::identity(m.cols()),
              "n=" + std::to_string(n) + " h=" + std::to_string(h));
    }
    // B_0 against the closed-form value delta_{iI} / (2n)
    {
        LeftInverse li = left_inverse(extract_symbol(assemble_dc(n, 0)));
        bool ok = li.b.rows() == 1;
        for (int col = 0; ok && col < li.b.cols(); ++col) {
            int I = col / (2 * n), i = col % (2 * n);
            if (li.b.at(0, col) != (I == i ? Rational(1, 2 * n) : Rational())) ok = false;
        }
        check("left_inverse_gradient_value", ok, "n=" + std::to_string(n));
    }
    // equivariance on a few seeded maps
    for (std::uint64_t seed : {1ull, 2ull}) {
        SymplecticMap A = random_symplectic(n, seed);
        for (int h = 0; h <= std::min(2, 2 * n); ++h) {
            EquivarianceReport rep = equivariance_check(A, n, h, 2, seed + h);
            check("dc_equivariance", rep.exact(),
                  "n=" + std::to_string(n) + " h=" + std::to_string(h) + " seed=" + std::to_string(seed));
        }
    }
    return out;
}

} // namespace rumin
