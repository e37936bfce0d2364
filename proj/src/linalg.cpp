#include "rumin/linalg.hpp"

#include <algorithm>
#include <stdexcept>

namespace rumin {

RatMatrix RatMatrix::identity(int m) {
    RatMatrix r(m, m);
    for (int i = 0; i < m; ++i) r.at(i, i) = Rational(1);
    return r;
}

RatMatrix RatMatrix::from_columns(const std::vector<RatVec>& cols) {
    if (cols.empty()) return RatMatrix(0, 0);
    RatMatrix r(static_cast<int>(cols[0].size()), static_cast<int>(cols.size()));
    for (int j = 0; j < r.cols_; ++j) {
        if (cols[j].size() != static_cast<size_t>(r.rows_))
            throw std::invalid_argument("from_columns: ragged input");
        for (int i = 0; i < r.rows_; ++i) r.at(i, j) = cols[j][i];
    }
    return r;
}

RatVec RatMatrix::row(int i) const {
    RatVec v(cols_);
    for (int j = 0; j < cols_; ++j) v[j] = at(i, j);
    return v;
}

RatVec RatMatrix::col(int j) const {
    RatVec v(rows_);
    for (int i = 0; i < rows_; ++i) v[i] = at(i, j);
    return v;
}

bool RatMatrix::is_zero() const {
    for (const auto& x : e_)
        if (!x.is_zero()) return false;
    return true;
}

RatMatrix RatMatrix::transpose() const {
    RatMatrix r(cols_, rows_);
    for (int i = 0; i < rows_; ++i)
        for (int j = 0; j < cols_; ++j) r.at(j, i) = at(i, j);
    return r;
}

RatMatrix RatMatrix::operator*(const RatMatrix& o) const {
    if (cols_ != o.rows_) throw std::invalid_argument("RatMatrix: dimension mismatch in product");
    RatMatrix r(rows_, o.cols_);
    for (int i = 0; i < rows_; ++i)
        for (int k = 0; k < cols_; ++k) {
            const Rational& a = at(i, k);
            if (a.is_zero()) continue;
            for (int j = 0; j < o.cols_; ++j) {
                if (o.at(k, j).is_zero()) continue;
                r.at(i, j) += a * o.at(k, j);
            }
        }
    return r;
}

RatMatrix RatMatrix::operator+(const RatMatrix& o) const {
    if (rows_ != o.rows_ || cols_ != o.cols_) throw std::invalid_argument("RatMatrix: dimension mismatch in sum");
    RatMatrix r = *this;
    for (size_t i = 0; i < e_.size(); ++i) r.e_[i] += o.e_[i];
    return r;
}

RatMatrix RatMatrix::operator-(const RatMatrix& o) const {
    if (rows_ != o.rows_ || cols_ != o.cols_) throw std::invalid_argument("RatMatrix: dimension mismatch in difference");
    RatMatrix r = *this;
    for (size_t i = 0; i < e_.size(); ++i) r.e_[i] -= o.e_[i];
    return r;
}

RatMatrix RatMatrix::scaled(const Rational& c) const {
    RatMatrix r = *this;
    for (auto& x : r.e_) x *= c;
    return r;
}

RatVec RatMatrix::apply(const RatVec& v) const {
    if (static_cast<int>(v.size()) != cols_) throw std::invalid_argument("RatMatrix: dimension mismatch in apply");
    RatVec r(rows_);
    for (int i = 0; i < rows_; ++i)
        for (int j = 0; j < cols_; ++j)
            if (!at(i, j).is_zero() && !v[j].is_zero()) r[i] += at(i, j) * v[j];
    return r;
}

std::vector<int> RatMatrix::rref() {
    std::vector<int> pivots;
    int r = 0;
    for (int c = 0; c < cols_ && r < rows_; ++c) {
        int p = -1;
        for (int i = r; i < rows_; ++i)
            if (!at(i, c).is_zero()) { p = i; break; }
        if (p < 0) continue;
        if (p != r)
            for (int j = 0; j < cols_; ++j) std::swap(at(p, j), at(r, j));
        Rational inv = at(r, c).inverse();
        for (int j = c; j < cols_; ++j) at(r, j) *= inv;
        for (int i = 0; i < rows_; ++i) {
            if (i == r || at(i, c).is_zero()) continue;
            Rational f = at(i, c);
            for (int j = c; j < cols_; ++j) at(i, j) -= f * at(r, j);
        }
        pivots.push_back(c);
        ++r;
    }
    return pivots;
}

int RatMatrix::rank() const {
    RatMatrix m = *this;
    return static_cast<int>(m.rref().size());
}

RatMatrix RatMatrix::nullspace() const {
    RatMatrix m = *this;
    std::vector<int> pivots = m.rref();
    std::vector<bool> is_pivot(cols_, false);
    for (int c : pivots) is_pivot[c] = true;

    std::vector<RatVec> basis;
    for (int f = 0; f < cols_; ++f) {
        if (is_pivot[f]) continue;
        RatVec v(cols_);
        v[f] = Rational(1);
        for (size_t k = 0; k < pivots.size(); ++k) v[pivots[k]] = -m.at(static_cast<int>(k), f);
        // scale so that the first nonzero coordinate is +1
        for (int i = 0; i < cols_; ++i) {
            if (!v[i].is_zero()) {
                Rational inv = v[i].inverse();
                for (int j = i; j < cols_; ++j) v[j] *= inv;
                break;
            }
        }
        basis.push_back(std::move(v));
    }
    // order by leading coordinate
    std::stable_sort(basis.begin(), basis.end(), [this](const RatVec& a, const RatVec& b) {
        int la = cols_, lb = cols_;
        for (int i = 0; i < cols_; ++i)
            if (!a[i].is_zero()) { la = i; break; }
        for (int i = 0; i < cols_; ++i)
            if (!b[i].is_zero()) { lb = i; break; }
        return la < lb;
    });
    if (basis.empty()) return RatMatrix(cols_, 0);
    return from_columns(basis);
}

std::optional<RatVec> RatMatrix::solve(const RatVec& b) const {
    if (static_cast<int>(b.size()) != rows_) throw std::invalid_argument("solve: dimension mismatch");
    RatMatrix aug(rows_, cols_ + 1);
    for (int i = 0; i < rows_; ++i) {
        for (int j = 0; j < cols_; ++j) aug.at(i, j) = at(i, j);
        aug.at(i, cols_) = b[i];
    }
    std::vector<int> pivots = aug.rref();
    if (!pivots.empty() && pivots.back() == cols_) return std::nullopt; // inconsistent
    RatVec x(cols_);
    for (size_t k = 0; k < pivots.size(); ++k) x[pivots[k]] = aug.at(static_cast<int>(k), cols_);
    return x;
}

RatMatrix RatMatrix::inverse() const {
    if (rows_ != cols_) throw std::domain_error("inverse: not square");
    RatMatrix aug(rows_, 2 * cols_);
    for (int i = 0; i < rows_; ++i) {
        for (int j = 0; j < cols_; ++j) aug.at(i, j) = at(i, j);
        aug.at(i, cols_ + i) = Rational(1);
    }
    std::vector<int> pivots = aug.rref();
    if (static_cast<int>(pivots.size()) != rows_ || pivots.back() != rows_ - 1)
        throw std::domain_error("inverse: singular matrix");
    RatMatrix r(rows_, cols_);
    for (int i = 0; i < rows_; ++i)
        for (int j = 0; j < cols_; ++j) r.at(i, j) = aug.at(i, cols_ + j);
    return r;
}

RatMatrix RatMatrix::pseudo_inverse() const {
    // Rank factorization A = C F with C the pivot columns of A and F the
    // nonzero rows of rref(A); then A+ = F^T (F F^T)^{-1} (C^T C)^{-1} C^T.
    RatMatrix R = *this;
    std::vector<int> pivots = R.rref();
    int r = static_cast<int>(pivots.size());
    if (r == 0) return RatMatrix(cols_, rows_); // zero map
    RatMatrix C(rows_, r), F(r, cols_);
    for (int j = 0; j < r; ++j)
        for (int i = 0; i < rows_; ++i) C.at(i, j) = at(i, pivots[j]);
    for (int i = 0; i < r; ++i)
        for (int j = 0; j < cols_; ++j) F.at(i, j) = R.at(i, j);
    RatMatrix Ct = C.transpose(), Ft = F.transpose();
    return Ft * (F * Ft).inverse() * (Ct * C).inverse() * Ct;
}

RatMatrix RatMatrix::column_coefficient_extractor() const {
    RatMatrix Bt = transpose();
    RatMatrix G = Bt * (*this);
    return G.inverse() * Bt;
}

RatMatrix gram_schmidt_columns(const RatMatrix& m) {
    std::vector<RatVec> cols;
    cols.reserve(m.cols());
    for (int j = 0; j < m.cols(); ++j) cols.push_back(m.col(j));
    std::vector<RatVec> ortho;
    std::vector<Rational> norms;
    for (auto& v : cols) {
        RatVec u = v;
        for (size_t k = 0; k < ortho.size(); ++k) {
            Rational c = dot(v, ortho[k]) / norms[k];
            if (c.is_zero()) continue;
            for (size_t i = 0; i < u.size(); ++i) u[i] -= c * ortho[k][i];
        }
        Rational nn = dot(u, u);
        if (nn.is_zero()) throw std::invalid_argument("gram_schmidt_columns: dependent columns");
        ortho.push_back(std::move(u));
        norms.push_back(nn);
    }
    return RatMatrix::from_columns(ortho);
}

bool same_column_span(const RatMatrix& a, const RatMatrix& b) {
    if (a.rows() != b.rows()) return false;
    int ra = a.rank(), rb = b.rank();
    if (ra != rb) return false;
    RatMatrix joint(a.rows(), a.cols() + b.cols());
    for (int i = 0; i < a.rows(); ++i) {
        for (int j = 0; j < a.cols(); ++j) joint.at(i, j) = a.at(i, j);
        for (int j = 0; j < b.cols(); ++j) joint.at(i, a.cols() + j) = b.at(i, j);
    }
    return joint.rank() == ra;
}

Rational dot(const RatVec& a, const RatVec& b) {
    if (a.size() != b.size()) throw std::invalid_argument("dot: dimension mismatch");
    Rational s;
    for (size_t i = 0; i < a.size(); ++i)
        if (!a[i].is_zero() && !b[i].is_zero()) s += a[i] * b[i];
    return s;
}

} // namespace rumin
