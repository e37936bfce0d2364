#include "rumin/exterior.hpp"

#include <algorithm>
#include <sstream>
#include <stdexcept>

namespace rumin {

bool WedgeMonomial::contains(int i) const {
    return std::binary_search(idx.begin(), idx.end(), i);
}

std::vector<WedgeMonomial> wedge_monomials(int n, int h, bool horizontal_only) {
    int top = horizontal_only ? 2 * n : 2 * n + 1;
    std::vector<WedgeMonomial> out;
    if (h < 0 || h > top) return out;
    std::vector<int> pick(h);
    // lexicographic combinations
    for (int i = 0; i < h; ++i) pick[i] = i + 1;
    while (true) {
        out.push_back(WedgeMonomial{pick});
        int i = h - 1;
        while (i >= 0 && pick[i] == top - (h - 1 - i)) --i;
        if (i < 0) break;
        ++pick[i];
        for (int j = i + 1; j < h; ++j) pick[j] = pick[j - 1] + 1;
    }
    if (h == 0) { out.clear(); out.push_back(WedgeMonomial{}); }
    return out;
}

Covector::Covector(int n, int degree) : n_(n), degree_(degree) {
    if (degree < 0 || degree > 2 * n + 1) throw std::invalid_argument("Covector: degree out of range");
}

Covector Covector::unit(int n, const WedgeMonomial& m) {
    Covector c(n, m.degree());
    c.add_term(m, Rational(1));
    return c;
}

Covector Covector::scalar(int n, const Rational& c) {
    Covector v(n, 0);
    v.add_term(WedgeMonomial{}, c);
    return v;
}

bool Covector::is_horizontal() const {
    for (const auto& [m, c] : terms_)
        if (!m.is_horizontal(n_)) return false;
    return true;
}

void Covector::add_term(const WedgeMonomial& m, const Rational& c) {
    if (c.is_zero()) return;
    if (m.degree() != degree_) throw std::invalid_argument("Covector: monomial degree mismatch");
    auto it = terms_.find(m);
    if (it == terms_.end()) {
        terms_.emplace(m, c);
    } else {
        it->second += c;
        if (it->second.is_zero()) terms_.erase(it);
    }
}

Covector Covector::operator-() const {
    Covector r(n_, degree_);
    for (const auto& [m, c] : terms_) r.terms_.emplace(m, -c);
    return r;
}

Covector& Covector::operator+=(const Covector& o) {
    if (o.n_ != n_ || o.degree_ != degree_) throw std::invalid_argument("Covector: degree mismatch in sum");
    for (const auto& [m, c] : o.terms_) add_term(m, c);
    return *this;
}

Covector& Covector::operator-=(const Covector& o) {
    if (o.n_ != n_ || o.degree_ != degree_) throw std::invalid_argument("Covector: degree mismatch in difference");
    for (const auto& [m, c] : o.terms_) add_term(m, -c);
    return *this;
}

Covector Covector::scaled(const Rational& c) const {
    Covector r(n_, degree_);
    if (c.is_zero()) return r;
    for (const auto& [m, k] : terms_) r.terms_.emplace(m, k * c);
    return r;
}

RatVec Covector::coords(const std::vector<WedgeMonomial>& basis) const {
    RatVec v(basis.size());
    TermMap rest = terms_;
    for (size_t i = 0; i < basis.size(); ++i) {
        auto it = rest.find(basis[i]);
        if (it != rest.end()) { v[i] = it->second; rest.erase(it); }
    }
    if (!rest.empty()) throw std::invalid_argument("coords: monomial outside enumeration");
    return v;
}

Covector Covector::from_coords(int n, int degree, const std::vector<WedgeMonomial>& basis, const RatVec& v) {
    if (basis.size() != v.size()) throw std::invalid_argument("from_coords: size mismatch");
    Covector c(n, degree);
    for (size_t i = 0; i < basis.size(); ++i) c.add_term(basis[i], v[i]);
    return c;
}

std::string Covector::str() const {
    if (terms_.empty()) return "0";
    std::ostringstream os;
    bool first = true;
    for (const auto& [m, c] : terms_) {
        Rational v = c;
        if (first) {
            if (v.sign() < 0) { os << "-"; v = -v; }
        } else {
            os << (v.sign() < 0 ? " - " : " + ");
            if (v.sign() < 0) v = -v;
        }
        first = false;
        bool unit = (v == Rational(1));
        if (!unit || m.degree() == 0) os << v.str();
        bool first_factor = true;
        for (int i : m.idx) {
            if (!first_factor) os << "^";
            else if (!unit) os << " ";
            first_factor = false;
            if (i <= n_) os << "dx" << i;
            else if (i <= 2 * n_) os << "dy" << (i - n_);
            else os << "th";
        }
    }
    return os.str();
}

namespace {

// Merge two increasing index lists; returns 0 on a repeated index, else the
// sign of the interleaving permutation, writing the merged list to out.
int merge_sign(const std::vector<int>& a, const std::vector<int>& b, std::vector<int>& out) {
    out.clear();
    size_t i = 0, j = 0;
    int inversions = 0;
    while (i < a.size() && j < b.size()) {
        if (a[i] == b[j]) return 0;
        if (a[i] < b[j]) {
            out.push_back(a[i++]);
        } else {
            inversions += static_cast<int>(a.size() - i);
            out.push_back(b[j++]);
        }
    }
    while (i < a.size()) out.push_back(a[i++]);
    while (j < b.size()) out.push_back(b[j++]);
    return (inversions % 2 == 0) ? 1 : -1;
}

} // namespace

Covector wedge(const Covector& a, const Covector& b) {
    if (a.n() != b.n()) throw std::invalid_argument("wedge: rank mismatch");
    int n = a.n();
    int deg = a.degree() + b.degree();
    if (deg > 2 * n + 1) return Covector(n, 2 * n + 1); // overflow clamps to zero
    Covector r(n, deg);
    std::vector<int> merged;
    for (const auto& [ma, ca] : a.terms())
        for (const auto& [mb, cb] : b.terms()) {
            int s = merge_sign(ma.idx, mb.idx, merged);
            if (s == 0) continue;
            r.add_term(WedgeMonomial{merged}, ca * cb * Rational(s));
        }
    return r;
}

Rational inner(const Covector& a, const Covector& b) {
    if (a.n() != b.n() || a.degree() != b.degree())
        throw std::invalid_argument("inner: degree mismatch");
    Rational s;
    const auto& ta = a.terms();
    const auto& tb = b.terms();
    for (const auto& [m, c] : ta) {
        auto it = tb.find(m);
        if (it != tb.end()) s += c * it->second;
    }
    return s;
}

Covector hodge_star(const Covector& a) {
    int n = a.n();
    int dim = 2 * n + 1;
    Covector r(n, dim - a.degree());
    for (const auto& [m, c] : a.terms()) {
        std::vector<int> comp;
        comp.reserve(dim - m.degree());
        for (int i = 1; i <= dim; ++i)
            if (!m.contains(i)) comp.push_back(i);
        // sign of the permutation (m, comp) of (1..dim)
        int inversions = 0;
        for (int j : m.idx)
            for (int k : comp)
                if (j > k) ++inversions;
        Rational s = (inversions % 2 == 0) ? c : -c;
        r.add_term(WedgeMonomial{comp}, s);
    }
    return r;
}

Covector dtheta(int n) {
    Covector d(n, 2);
    for (int i = 1; i <= n; ++i) d.add_term(WedgeMonomial{{i, i + n}}, Rational(-1));
    return d;
}

Covector lefschetz_L(const Covector& a) {
    if (!a.is_horizontal()) throw std::invalid_argument("lefschetz_L: input must be horizontal");
    if (a.degree() + 2 > 2 * a.n()) return Covector(a.n(), std::min(a.degree() + 2, 2 * a.n() + 1));
    return wedge(dtheta(a.n()), a);
}

Covector lefschetz_Lambda(const Covector& a) {
    if (!a.is_horizontal()) throw std::invalid_argument("lefschetz_Lambda: input must be horizontal");
    int n = a.n();
    int h = a.degree();
    Covector r(n, std::max(h - 2, 0));
    if (h < 2) return r;
    for (const auto& m : wedge_monomials(n, h - 2, true)) {
        Rational c = inner(a, lefschetz_L(Covector::unit(n, m)));
        r.add_term(m, c);
    }
    return r;
}

RatMatrix SubspaceBasis::as_matrix(const std::vector<WedgeMonomial>& basis) const {
    std::vector<RatVec> cols;
    cols.reserve(vectors.size());
    for (const auto& v : vectors) cols.push_back(v.coords(basis));
    if (cols.empty()) return RatMatrix(static_cast<int>(basis.size()), 0);
    return RatMatrix::from_columns(cols);
}

namespace {

// Matrix of L^k from horizontal degree h, in the monomial bases.
RatMatrix lefschetz_power_matrix(int n, int h, int k) {
    auto src = wedge_monomials(n, h, true);
    int target_deg = h + 2 * k;
    if (target_deg > 2 * n) return RatMatrix(0, static_cast<int>(src.size()));
    auto dst = wedge_monomials(n, target_deg, true);
    std::vector<RatVec> cols;
    for (const auto& m : src) {
        Covector v = Covector::unit(n, m);
        for (int i = 0; i < k; ++i) v = lefschetz_L(v);
        cols.push_back(v.coords(dst));
    }
    return RatMatrix::from_columns(cols);
}

} // namespace

SubspaceBasis primitive_basis(int n, int h) {
    if (h < 0 || h > 2 * n) throw std::invalid_argument("primitive_basis: degree out of range");
    auto monos = wedge_monomials(n, h, true);
    SubspaceBasis out;
    out.n = n;
    out.degree = h;

    RatMatrix null_basis(static_cast<int>(monos.size()), 0);
    if (h <= 1) {
        null_basis = RatMatrix::identity(static_cast<int>(monos.size()));
    } else {
        auto low = wedge_monomials(n, h - 2, true);
        std::vector<RatVec> cols;
        for (const auto& m : monos) cols.push_back(lefschetz_Lambda(Covector::unit(n, m)).coords(low));
        RatMatrix lambda_mat = RatMatrix::from_columns(cols);
        null_basis = lambda_mat.nullspace();
    }

    if (h > n) {
        if (null_basis.cols() != 0)
            throw std::logic_error("primitive_basis: nonzero primitive space above middle degree");
        return out;
    }
    // cross-validation: ker Lambda = ker L^{n-h+1}
    RatMatrix lk = lefschetz_power_matrix(n, h, n - h + 1);
    RatMatrix other = lk.nullspace();
    if (!same_column_span(null_basis, other))
        throw std::logic_error("primitive_basis: ker Lambda and ker L^{n-h+1} disagree");

    for (int j = 0; j < null_basis.cols(); ++j)
        out.vectors.push_back(Covector::from_coords(n, h, monos, null_basis.col(j)));
    return out;
}

std::vector<std::pair<int, Covector>> lefschetz_decompose(const Covector& a) {
    if (!a.is_horizontal()) throw std::invalid_argument("lefschetz_decompose: input must be horizontal");
    int n = a.n();
    int h = a.degree();
    auto monos = wedge_monomials(n, h, true);
    std::vector<std::pair<int, Covector>> out;
    if (a.is_zero()) return out;

    // columns L^i b_j over all primitive basis vectors b_j of degree h-2i
    struct Block { int i; SubspaceBasis prim; };
    std::vector<Block> blocks;
    std::vector<RatVec> cols;
    for (int i = 0; 2 * i <= h; ++i) {
        SubspaceBasis p = primitive_basis(n, h - 2 * i);
        if (p.dim() == 0) continue;
        for (const auto& b : p.vectors) {
            Covector v = b;
            for (int k = 0; k < i; ++k) v = lefschetz_L(v);
            cols.push_back(v.coords(monos));
        }
        blocks.push_back(Block{i, std::move(p)});
    }
    RatMatrix M = RatMatrix::from_columns(cols);
    auto sol = M.solve(a.coords(monos));
    if (!sol) throw std::logic_error("lefschetz_decompose: decomposition system inconsistent");
    size_t off = 0;
    for (const auto& blk : blocks) {
        Covector p(n, h - 2 * blk.i);
        for (const auto& b : blk.prim.vectors) p += b.scaled((*sol)[off++]);
        if (!p.is_zero()) out.emplace_back(blk.i, std::move(p));
    }
    return out;
}

std::pair<Covector, Covector> theta_split(const Covector& a) {
    int n = a.n();
    int h = a.degree();
    int ti = 2 * n + 1;
    Covector a1(n, h);
    Covector a2(n, std::max(h - 1, 0));
    for (const auto& [m, c] : a.terms()) {
        if (!m.contains(ti)) {
            a1.add_term(m, c);
            continue;
        }
        std::vector<int> rest;
        rest.reserve(m.idx.size() - 1);
        for (int i : m.idx)
            if (i != ti) rest.push_back(i);
        // omega_J ^ theta = (-1)^{h-1} theta ^ omega_J
        Rational s = ((h - 1) % 2 == 0) ? c : -c;
        a2.add_term(WedgeMonomial{rest}, s);
    }
    return {a1, a2};
}

} // namespace rumin
