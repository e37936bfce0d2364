#include "rumin/rumin_complex.hpp"

#include <map>
#include <mutex>
#include <sstream>
#include <stdexcept>

namespace rumin {

namespace {

std::mutex cache_mutex;

RatVec normalize_leading(RatVec v) {
    for (size_t i = 0; i < v.size(); ++i) {
        if (!v[i].is_zero()) {
            Rational inv = v[i].inverse();
            for (size_t j = i; j < v.size(); ++j) v[j] *= inv;
            break;
        }
    }
    return v;
}

E0Basis finish_e0_basis(E0Basis out) {
    // the subbundle definition and the weight-kernel characterization must
    // span the same subspace; a mismatch means a sign-convention bug
    if (!same_column_span(out.coord_matrix(), e0_weight_kernel(out.n, out.h)))
        throw std::logic_error("e0_basis: weight-kernel cross-check failed at n=" +
                               std::to_string(out.n) + " h=" + std::to_string(out.h));
    return out;
}

E0Basis build_e0_basis(int n, int h) {
    if (h < 0 || h > 2 * n + 1) throw std::invalid_argument("e0_basis: degree out of range");
    E0Basis out;
    out.n = n;
    out.h = h;
    if (h == 0) {
        out.xi.push_back(Covector::scalar(n, Rational(1)));
        out.gram_diag.push_back(Rational(1));
        return out;
    }
    if (h <= n) {
        SubspaceBasis prim = primitive_basis(n, h);
        auto monos = wedge_monomials(n, h, true);
        RatMatrix ortho = gram_schmidt_columns(prim.as_matrix(monos));
        for (int j = 0; j < ortho.cols(); ++j) {
            RatVec v = normalize_leading(ortho.col(j));
            Covector c = Covector::from_coords(n, h, monos, v);
            out.gram_diag.push_back(dot(v, v));
            out.xi.push_back(std::move(c));
        }
        return finish_e0_basis(std::move(out));
    }
    // h > n: beta ^ theta with beta horizontal of degree h-1 and L(beta) = 0
    auto betas = wedge_monomials(n, h - 1, true);
    auto highs = wedge_monomials(n, h + 1, true);
    std::vector<RatVec> cols;
    for (const auto& m : betas) cols.push_back(lefschetz_L(Covector::unit(n, m)).coords(highs));
    RatMatrix lmat = highs.empty() ? RatMatrix(0, static_cast<int>(betas.size()))
                                   : RatMatrix::from_columns(cols);
    RatMatrix kernel = lmat.nullspace();
    if (kernel.cols() == 0) throw std::logic_error("e0_basis: empty kernel above middle degree");
    RatMatrix ortho = gram_schmidt_columns(kernel);
    Covector theta = Covector::unit(n, WedgeMonomial{{2 * n + 1}});
    for (int j = 0; j < ortho.cols(); ++j) {
        RatVec v = normalize_leading(ortho.col(j));
        Covector beta = Covector::from_coords(n, h - 1, betas, v);
        out.gram_diag.push_back(dot(v, v));
        out.xi.push_back(wedge(beta, theta));
    }
    return finish_e0_basis(std::move(out));
}

OperatorMatrix build_full_d(int n, int h) {
    auto src = wedge_monomials(n, h);
    auto dst = wedge_monomials(n, h + 1);
    std::map<WedgeMonomial, int> dst_index;
    for (size_t i = 0; i < dst.size(); ++i) dst_index.emplace(dst[i], static_cast<int>(i));

    OperatorMatrix M(n, static_cast<int>(dst.size()), static_cast<int>(src.size()), h, h + 1);
    for (size_t j = 0; j < src.size(); ++j) {
        Covector unit = Covector::unit(n, src[j]);
        // derivative terms W_i f omega_i ^ omega_m
        for (int i = 1; i <= 2 * n + 1; ++i) {
            Covector w = wedge(Covector::unit(n, WedgeMonomial{{i}}), unit);
            for (const auto& [m, c] : w.terms())
                M.at(dst_index.at(m), static_cast<int>(j)) += OperatorPolynomial::generator(n, i).scaled(c);
        }
        // algebraic term f d(omega_m), nonzero only when theta divides
        auto [a1, a2] = theta_split(unit);
        if (!a2.is_zero()) {
            Covector alg = wedge(dtheta(n), a2);
            for (const auto& [m, c] : alg.terms())
                M.at(dst_index.at(m), static_cast<int>(j)) += OperatorPolynomial::constant(n, c);
        }
    }
    return M;
}

} // namespace

RatMatrix E0Basis::coord_matrix() const {
    auto monos = wedge_monomials(n, h);
    std::vector<RatVec> cols;
    cols.reserve(xi.size());
    for (const auto& v : xi) cols.push_back(v.coords(monos));
    return RatMatrix::from_columns(cols);
}

const E0Basis& e0_basis(int n, int h) {
    static std::map<std::pair<int, int>, E0Basis> cache;
    std::lock_guard<std::mutex> lock(cache_mutex);
    auto key = std::make_pair(n, h);
    auto it = cache.find(key);
    if (it == cache.end()) it = cache.emplace(key, build_e0_basis(n, h)).first;
    return it->second;
}

int e0_dim(int n, int h) { return e0_basis(n, h).dim(); }

OperatorMatrix::OperatorMatrix(int n, int rows, int cols, int source_degree, int target_degree)
    : n_(n), rows_(rows), cols_(cols), source_degree_(source_degree), target_degree_(target_degree),
      e_(static_cast<size_t>(rows) * cols, OperatorPolynomial(n)) {}

bool OperatorMatrix::is_zero() const {
    for (const auto& p : e_)
        if (!p.is_zero()) return false;
    return true;
}

OperatorMatrix OperatorMatrix::operator*(const OperatorMatrix& o) const {
    if (cols_ != o.rows_ || n_ != o.n_) throw std::invalid_argument("OperatorMatrix: composition mismatch");
    OperatorMatrix r(n_, rows_, o.cols_, o.source_degree_, target_degree_);
    for (int i = 0; i < rows_; ++i)
        for (int k = 0; k < cols_; ++k) {
            if (at(i, k).is_zero()) continue;
            for (int j = 0; j < o.cols_; ++j) {
                if (o.at(k, j).is_zero()) continue;
                r.at(i, j) += at(i, k) * o.at(k, j);
            }
        }
    return r;
}

OperatorMatrix OperatorMatrix::operator+(const OperatorMatrix& o) const {
    if (rows_ != o.rows_ || cols_ != o.cols_) throw std::invalid_argument("OperatorMatrix: sum mismatch");
    OperatorMatrix r = *this;
    for (size_t i = 0; i < e_.size(); ++i) r.e_[i] += o.e_[i];
    return r;
}

OperatorMatrix OperatorMatrix::scaled(const Rational& c) const {
    OperatorMatrix r = *this;
    for (auto& p : r.e_) p = p.scaled(c);
    return r;
}

std::vector<OperatorPolynomial> OperatorMatrix::apply(const std::vector<OperatorPolynomial>& a) const {
    if (static_cast<int>(a.size()) != cols_) throw std::invalid_argument("OperatorMatrix::apply: size mismatch");
    std::vector<OperatorPolynomial> r(rows_, OperatorPolynomial(n_));
    for (int i = 0; i < rows_; ++i)
        for (int j = 0; j < cols_; ++j) {
            if (at(i, j).is_zero() || a[j].is_zero()) continue;
            r[i] += at(i, j) * a[j];
        }
    return r;
}

std::vector<CoordPolynomial> OperatorMatrix::apply_to_polynomials(const std::vector<CoordPolynomial>& a) const {
    if (static_cast<int>(a.size()) != cols_) throw std::invalid_argument("apply_to_polynomials: size mismatch");
    std::vector<CoordPolynomial> r(rows_, CoordPolynomial(n_));
    for (int i = 0; i < rows_; ++i)
        for (int j = 0; j < cols_; ++j) {
            if (at(i, j).is_zero() || a[j].is_zero()) continue;
            r[i] += apply_operator(at(i, j), a[j]);
        }
    return r;
}

bool operator==(const OperatorMatrix& a, const OperatorMatrix& b) {
    return a.n_ == b.n_ && a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.e_ == b.e_;
}

OperatorMatrix scalar_times_op(const RatMatrix& s, const OperatorMatrix& m) {
    if (s.cols() != m.rows()) throw std::invalid_argument("scalar_times_op: mismatch");
    OperatorMatrix r(m.n(), s.rows(), m.cols(), m.source_degree(), m.target_degree());
    for (int i = 0; i < s.rows(); ++i)
        for (int k = 0; k < s.cols(); ++k) {
            if (s.at(i, k).is_zero()) continue;
            for (int j = 0; j < m.cols(); ++j)
                if (!m.at(k, j).is_zero()) r.at(i, j) += m.at(k, j).scaled(s.at(i, k));
        }
    return r;
}

OperatorMatrix op_times_scalar(const OperatorMatrix& m, const RatMatrix& s) {
    if (m.cols() != s.rows()) throw std::invalid_argument("op_times_scalar: mismatch");
    OperatorMatrix r(m.n(), m.rows(), s.cols(), m.source_degree(), m.target_degree());
    for (int i = 0; i < m.rows(); ++i)
        for (int k = 0; k < m.cols(); ++k) {
            if (m.at(i, k).is_zero()) continue;
            for (int j = 0; j < s.cols(); ++j)
                if (!s.at(k, j).is_zero()) r.at(i, j) += m.at(i, k).scaled(s.at(k, j));
        }
    return r;
}

const OperatorMatrix& full_d(int n, int h) {
    static std::map<std::pair<int, int>, OperatorMatrix> cache;
    std::lock_guard<std::mutex> lock(cache_mutex);
    auto key = std::make_pair(n, h);
    auto it = cache.find(key);
    if (it == cache.end()) it = cache.emplace(key, build_full_d(n, h)).first;
    return it->second;
}

RatMatrix d0_matrix(int n, int h) {
    auto src = wedge_monomials(n, h);
    auto dst = wedge_monomials(n, h + 1);
    RatMatrix M(static_cast<int>(dst.size()), static_cast<int>(src.size()));
    if (dst.empty()) return M;
    std::map<WedgeMonomial, int> dst_index;
    for (size_t i = 0; i < dst.size(); ++i) dst_index.emplace(dst[i], static_cast<int>(i));
    for (size_t j = 0; j < src.size(); ++j) {
        auto [a1, a2] = theta_split(Covector::unit(n, src[j]));
        if (a2.is_zero()) continue;
        Covector alg = wedge(dtheta(n), a2);
        for (const auto& [m, c] : alg.terms()) M.at(dst_index.at(m), static_cast<int>(j)) += c;
    }
    return M;
}

RatMatrix e0_weight_kernel(int n, int h) {
    auto monos = wedge_monomials(n, h);
    int N = static_cast<int>(monos.size());
    RatMatrix down = d0_matrix(n, h);                       // Lambda^h -> Lambda^{h+1}
    RatMatrix upT = (h > 0) ? d0_matrix(n, h - 1).transpose() // adjoint: Lambda^h -> Lambda^{h-1}
                            : RatMatrix(0, N);
    RatMatrix stacked(down.rows() + upT.rows(), N);
    for (int i = 0; i < down.rows(); ++i)
        for (int j = 0; j < N; ++j) stacked.at(i, j) = down.at(i, j);
    for (int i = 0; i < upT.rows(); ++i)
        for (int j = 0; j < N; ++j) stacked.at(down.rows() + i, j) = upT.at(i, j);
    return stacked.nullspace();
}

namespace {

OperatorMatrix build_dc(int n, int h) {
    if (h < 0 || h > 2 * n) throw std::invalid_argument("assemble_dc: degree out of range");
    const E0Basis& src = e0_basis(n, h);
    const E0Basis& dst = e0_basis(n, h + 1);
    auto monos_h = wedge_monomials(n, h);
    const OperatorMatrix& d_full = full_d(n, h);
    RatMatrix d0p = d0_matrix(n, h).pseudo_inverse();
    RatMatrix extract = dst.coord_matrix().column_coefficient_extractor();

    OperatorMatrix out(n, dst.dim(), src.dim(), h, h + 1);
    for (int k = 0; k < src.dim(); ++k) {
        RatVec xi = src.xi[k].coords(monos_h);
        std::vector<OperatorPolynomial> a;
        a.reserve(xi.size());
        for (const auto& c : xi) a.push_back(OperatorPolynomial::constant(n, c));

        std::vector<OperatorPolynomial> da;
        bool settled = false;
        // only two weights occur per degree, so a single correction suffices
        for (int pass = 0; pass < 2 && !settled; ++pass) {
            da = d_full.apply(a);
            settled = true;
            std::vector<OperatorPolynomial> y(a.size(), OperatorPolynomial(n));
            for (size_t i = 0; i < a.size(); ++i) {
                for (int m = 0; m < d0p.cols(); ++m) {
                    if (d0p.at(static_cast<int>(i), m).is_zero() || da[m].is_zero()) continue;
                    y[i] += da[m].scaled(d0p.at(static_cast<int>(i), m));
                }
                if (!y[i].is_zero()) settled = false;
            }
            if (!settled) {
                if (pass == 1) {
                    std::ostringstream os;
                    os << "assemble_dc(" << n << "," << h << "): retraction did not land in E0 "
                       << "after the weight bound; sign conventions are inconsistent";
                    throw std::logic_error(os.str());
                }
                for (size_t i = 0; i < a.size(); ++i) a[i] -= y[i];
            }
        }

        for (int I = 0; I < dst.dim(); ++I) {
            OperatorPolynomial entry(n);
            for (int m = 0; m < extract.cols(); ++m) {
                if (extract.at(I, m).is_zero() || da[m].is_zero()) continue;
                entry += da[m].scaled(extract.at(I, m));
            }
            int expected = (h == n) ? 2 : 1;
            if (!entry.is_homogeneous_of(expected)) {
                std::ostringstream os;
                os << "assemble_dc(" << n << "," << h << "): entry (" << I << "," << k
                   << ") is not homogeneous of degree " << expected << ": " << entry.str();
                throw std::logic_error(os.str());
            }
            out.at(I, k) = std::move(entry);
        }
    }
    return out;
}

} // namespace

const OperatorMatrix& assemble_dc(int n, int h) {
    static std::map<std::pair<int, int>, OperatorMatrix> cache;
    {
        std::lock_guard<std::mutex> lock(cache_mutex);
        auto it = cache.find({n, h});
        if (it != cache.end()) return it->second;
    }
    OperatorMatrix m = build_dc(n, h);
    std::lock_guard<std::mutex> lock(cache_mutex);
    return cache.emplace(std::make_pair(n, h), std::move(m)).first->second;
}

RatMatrix star_matrix(int n, int h) {
    const E0Basis& src = e0_basis(n, h);
    const E0Basis& dst = e0_basis(n, 2 * n + 1 - h);
    auto monos = wedge_monomials(n, 2 * n + 1 - h);
    RatMatrix B = dst.coord_matrix();
    RatMatrix extract = B.column_coefficient_extractor();
    RatMatrix out(dst.dim(), src.dim());
    for (int k = 0; k < src.dim(); ++k) {
        RatVec s = hodge_star(src.xi[k]).coords(monos);
        RatVec c = extract.apply(s);
        RatVec back = B.apply(c);
        if (back != s) throw std::logic_error("star_matrix: star image leaves the Rumin bundle");
        for (int i = 0; i < dst.dim(); ++i) out.at(i, k) = c[i];
    }
    return out;
}

namespace {

OperatorMatrix build_delta_c(int n, int h) {
    if (h < 1 || h > 2 * n + 1) throw std::invalid_argument("assemble_delta_c: degree out of range");
    RatMatrix s_in = star_matrix(n, h);                  // E0^h -> E0^{2n+1-h}
    const OperatorMatrix& d = assemble_dc(n, 2 * n + 1 - h);
    RatMatrix s_out = star_matrix(n, 2 * n + 2 - h);     // E0^{2n+2-h} -> E0^{h-1}
    OperatorMatrix conj = scalar_times_op(s_out, op_times_scalar(d, s_in));
    if ((h * (2 * n + 1)) % 2 != 0) conj = conj.scaled(Rational(-1));
    OperatorMatrix m(n, conj.rows(), conj.cols(), h, h - 1);
    for (int i = 0; i < m.rows(); ++i)
        for (int j = 0; j < m.cols(); ++j) m.at(i, j) = conj.at(i, j);
    return m;
}

} // namespace

const OperatorMatrix& assemble_delta_c(int n, int h) {
    static std::map<std::pair<int, int>, OperatorMatrix> cache;
    {
        std::lock_guard<std::mutex> lock(cache_mutex);
        auto it = cache.find({n, h});
        if (it != cache.end()) return it->second;
    }
    OperatorMatrix m = build_delta_c(n, h);
    std::lock_guard<std::mutex> lock(cache_mutex);
    return cache.emplace(std::make_pair(n, h), std::move(m)).first->second;
}

OperatorMatrix delta_c_adjoint_route(int n, int h) {
    if (h < 1 || h > 2 * n + 1) throw std::invalid_argument("delta_c_adjoint_route: degree out of range");
    const OperatorMatrix& d = assemble_dc(n, h - 1);
    const E0Basis& low = e0_basis(n, h - 1);
    const E0Basis& high = e0_basis(n, h);
    OperatorMatrix r(n, low.dim(), high.dim(), h, h - 1);
    for (int k = 0; k < low.dim(); ++k)
        for (int I = 0; I < high.dim(); ++I)
            r.at(k, I) = d.at(I, k).formal_adjoint().scaled(high.gram_diag[I] / low.gram_diag[k]);
    return r;
}

OperatorMatrix rumin_laplacian(int n, int h) {
    if (h < 0 || h > 2 * n + 1) throw std::invalid_argument("rumin_laplacian: degree out of range");
    if (h == 0) return assemble_delta_c(n, 1) * assemble_dc(n, 0);
    if (h == 2 * n + 1) return assemble_dc(n, 2 * n) * assemble_delta_c(n, 2 * n + 1);
    if (h == n) {
        OperatorMatrix a = assemble_dc(n, n - 1) * assemble_delta_c(n, n);
        return a * a + assemble_delta_c(n, n + 1) * assemble_dc(n, n);
    }
    if (h == n + 1) {
        OperatorMatrix b = assemble_delta_c(n, n + 2) * assemble_dc(n, n + 1);
        return assemble_dc(n, n) * assemble_delta_c(n, n + 1) + b * b;
    }
    return assemble_dc(n, h - 1) * assemble_delta_c(n, h) + assemble_delta_c(n, h + 1) * assemble_dc(n, h);
}

namespace {

long binom(int m, int k) {
    if (k < 0 || k > m) return 0;
    long r = 1;
    for (int i = 0; i < k; ++i) r = r * (m - i) / (i + 1);
    return r;
}

} // namespace

std::vector<CheckResult> certify_complex(int n) {
    std::vector<CheckResult> out;
    auto check = [&out](const std::string& name, bool pass, const std::string& detail = "") {
        out.push_back(CheckResult{name, pass, detail});
    };

    // dimensions and both constructions of E0
    for (int h = 0; h <= 2 * n + 1; ++h) {
        int d = e0_dim(n, h);
        int hm = std::min(h, 2 * n + 1 - h);
        long expected = binom(2 * n, hm) - binom(2 * n, hm - 2);
        std::ostringstream os;
        os << "n=" << n << " h=" << h << " dim=" << d;
        check("e0_dimension", d == expected, os.str());
        RatMatrix kernel = e0_weight_kernel(n, h);
        check("e0_two_constructions", same_column_span(kernel, e0_basis(n, h).coord_matrix()),
              "n=" + std::to_string(n) + " h=" + std::to_string(h));
    }

    // full de Rham differential squares to zero
    for (int h = 0; h + 1 <= 2 * n; ++h)
        check("full_d_squared_zero", (full_d(n, h + 1) * full_d(n, h)).is_zero(),
              "n=" + std::to_string(n) + " h=" + std::to_string(h));

    // chain property and homogeneity of d_c
    for (int h = 0; h <= 2 * n; ++h) {
        const OperatorMatrix& d = assemble_dc(n, h);
        bool homog = true;
        int expected = (h == n) ? 2 : 1;
        for (int i = 0; i < d.rows(); ++i)
            for (int j = 0; j < d.cols(); ++j)
                if (!d.at(i, j).is_homogeneous_of(expected)) homog = false;
        check("dc_homogeneity", homog,
              "n=" + std::to_string(n) + " h=" + std::to_string(h) + " degree=" + std::to_string(expected));
        if (h + 1 <= 2 * n)
            check("dc_squared_zero", (assemble_dc(n, h + 1) * d).is_zero(),
                  "n=" + std::to_string(n) + " h=" + std::to_string(h));
    }

    // star invariance of the bundle and duality of delta_c
    for (int h = 0; h <= 2 * n + 1; ++h) {
        bool star_ok = true;
        std::string detail = "n=" + std::to_string(n) + " h=" + std::to_string(h);
        try {
            RatMatrix s = star_matrix(n, h);
            star_ok = s.rank() == e0_dim(n, h);
        } catch (const std::logic_error&) {
            star_ok = false;
        }
        check("star_maps_e0_to_e0", star_ok, detail);
    }
    for (int h = 1; h <= 2 * n + 1; ++h)
        check("delta_c_is_formal_adjoint", assemble_delta_c(n, h) == delta_c_adjoint_route(n, h),
              "n=" + std::to_string(n) + " h=" + std::to_string(h));
    for (int h = 2; h <= 2 * n + 1; ++h)
        check("delta_c_squared_zero", (assemble_delta_c(n, h - 1) * assemble_delta_c(n, h)).is_zero(),
              "n=" + std::to_string(n) + " h=" + std::to_string(h));

    // laplacian homogeneity
    for (int h = 0; h <= 2 * n + 1; ++h) {
        OperatorMatrix lap = rumin_laplacian(n, h);
        int expected = (h == n || h == n + 1) ? 4 : 2;
        bool homog = lap.rows() == e0_dim(n, h) && lap.cols() == e0_dim(n, h);
        for (int i = 0; i < lap.rows(); ++i)
            for (int j = 0; j < lap.cols(); ++j)
                if (!lap.at(i, j).is_homogeneous_of(expected)) homog = false;
        check("laplacian_homogeneity", homog,
              "n=" + std::to_string(n) + " h=" + std::to_string(h) + " degree=" + std::to_string(expected));
    }

    return out;
}

} // namespace rumin
