#pragma once

#include <optional>
#include <vector>

#include "rumin/rational.hpp"

namespace rumin {

using RatVec = std::vector<Rational>;

// Dense matrix over the exact rationals. All reductions use Gaussian
// elimination with first-nonzero pivoting so results are deterministic
// across runs and platforms.
class RatMatrix {
public:
    RatMatrix() : rows_(0), cols_(0) {}
    RatMatrix(int rows, int cols) : rows_(rows), cols_(cols), e_(static_cast<size_t>(rows) * cols) {}

    static RatMatrix identity(int m);
    static RatMatrix from_columns(const std::vector<RatVec>& cols);

    int rows() const { return rows_; }
    int cols() const { return cols_; }

    Rational& at(int i, int j) { return e_[static_cast<size_t>(i) * cols_ + j]; }
    const Rational& at(int i, int j) const { return e_[static_cast<size_t>(i) * cols_ + j]; }

    RatVec row(int i) const;
    RatVec col(int j) const;

    bool is_zero() const;
    RatMatrix transpose() const;
    RatMatrix operator*(const RatMatrix& o) const;
    RatMatrix operator+(const RatMatrix& o) const;
    RatMatrix operator-(const RatMatrix& o) const;
    RatMatrix scaled(const Rational& c) const;
    RatVec apply(const RatVec& v) const;

    friend bool operator==(const RatMatrix& a, const RatMatrix& b) {
        return a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.e_ == b.e_;
    }

    // Reduced row echelon form; returns pivot column indices.
    std::vector<int> rref();

    int rank() const;

    // Columns form a basis of the right nullspace, each scaled so its first
    // nonzero coordinate is +1, ordered by leading coordinate.
    RatMatrix nullspace() const;

    // One exact solution of A x = b with free variables set to zero, or
    // nullopt when the system is inconsistent.
    std::optional<RatVec> solve(const RatVec& b) const;

    RatMatrix inverse() const; // throws std::domain_error when singular

    // Exact Moore-Penrose pseudo-inverse via rank factorization.
    RatMatrix pseudo_inverse() const;

    // Coefficient extractor of the column span: E such that E*v recovers the
    // coordinates of v in the columns of this matrix (columns must be
    // independent); E = (B^T B)^{-1} B^T.
    RatMatrix column_coefficient_extractor() const;

private:
    int rows_, cols_;
    std::vector<Rational> e_;
};

// Sequential Gram-Schmidt on the columns, without normalization; output
// columns are pairwise orthogonal and span the same space.
RatMatrix gram_schmidt_columns(const RatMatrix& m);

// True when the column spans coincide (exact rank tests).
bool same_column_span(const RatMatrix& a, const RatMatrix& b);

Rational dot(const RatVec& a, const RatVec& b);

} // namespace rumin
