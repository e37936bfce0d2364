#include "rumin/lie_algebra.hpp"

#include <sstream>
#include <stdexcept>

namespace rumin {

Point identity_point(int n) {
    Point p;
    p.x.assign(n, Rational());
    p.y.assign(n, Rational());
    return p;
}

Point group_mul(const Point& p, const Point& q) {
    if (p.n() != q.n() || p.x.size() != p.y.size() || q.x.size() != q.y.size())
        throw std::invalid_argument("group_mul: dimension mismatch");
    int n = p.n();
    Point r = identity_point(n);
    Rational cross;
    for (int j = 0; j < n; ++j) {
        r.x[j] = p.x[j] + q.x[j];
        r.y[j] = p.y[j] + q.y[j];
        cross += p.x[j] * q.y[j] - p.y[j] * q.x[j];
    }
    r.t = p.t + q.t + Rational(1, 2) * cross;
    return r;
}

Point group_inverse(const Point& p) {
    Point r = p;
    for (auto& v : r.x) v = -v;
    for (auto& v : r.y) v = -v;
    r.t = -r.t;
    return r;
}

Point dilate(const Rational& lambda, const Point& p) {
    if (lambda.sign() <= 0) throw std::invalid_argument("dilate: lambda must be positive");
    Point r = p;
    for (auto& v : r.x) v *= lambda;
    for (auto& v : r.y) v *= lambda;
    r.t *= lambda * lambda;
    return r;
}

int PBWMonomial::order() const {
    int s = 0;
    for (int e : exp) s += e;
    return s;
}

int PBWMonomial::homogeneity() const {
    int s = 0;
    for (size_t i = 0; i < exp.size(); ++i) s += exp[i];
    if (!exp.empty()) s += exp.back(); // T exponent counts twice
    return s;
}

std::vector<int> PBWMonomial::word() const {
    std::vector<int> w;
    for (size_t i = 0; i < exp.size(); ++i)
        for (int k = 0; k < exp[i]; ++k) w.push_back(static_cast<int>(i) + 1);
    return w;
}

OperatorPolynomial OperatorPolynomial::constant(int n, const Rational& c) {
    OperatorPolynomial p(n);
    PBWMonomial m{std::vector<int>(2 * n + 1, 0)};
    p.add_term(m, c);
    return p;
}

OperatorPolynomial OperatorPolynomial::generator(int n, int index) {
    if (index < 1 || index > 2 * n + 1) throw std::invalid_argument("generator index out of range");
    OperatorPolynomial p(n);
    PBWMonomial m{std::vector<int>(2 * n + 1, 0)};
    m.exp[index - 1] = 1;
    p.add_term(m, Rational(1));
    return p;
}

void OperatorPolynomial::add_term(const PBWMonomial& m, const Rational& c) {
    if (c.is_zero()) return;
    auto it = terms_.find(m);
    if (it == terms_.end()) {
        terms_.emplace(m, c);
    } else {
        it->second += c;
        if (it->second.is_zero()) terms_.erase(it);
    }
}

OperatorPolynomial OperatorPolynomial::operator-() const {
    OperatorPolynomial r(n_);
    for (const auto& [m, c] : terms_) r.terms_.emplace(m, -c);
    return r;
}

OperatorPolynomial& OperatorPolynomial::operator+=(const OperatorPolynomial& o) {
    for (const auto& [m, c] : o.terms_) add_term(m, c);
    return *this;
}

OperatorPolynomial& OperatorPolynomial::operator-=(const OperatorPolynomial& o) {
    for (const auto& [m, c] : o.terms_) add_term(m, -c);
    return *this;
}

OperatorPolynomial OperatorPolynomial::scaled(const Rational& c) const {
    OperatorPolynomial r(n_);
    if (c.is_zero()) return r;
    for (const auto& [m, k] : terms_) r.terms_.emplace(m, k * c);
    return r;
}

OperatorPolynomial operator*(const OperatorPolynomial& a, const OperatorPolynomial& b) {
    if (a.n_ != b.n_) throw std::invalid_argument("operator*: rank mismatch");
    OperatorPolynomial r(a.n_);
    for (const auto& [ma, ca] : a.terms_) {
        std::vector<int> wa = ma.word();
        for (const auto& [mb, cb] : b.terms_) {
            std::vector<int> w = wa;
            std::vector<int> wb = mb.word();
            w.insert(w.end(), wb.begin(), wb.end());
            r += pbw_normalize(a.n_, ca * cb, w);
        }
    }
    return r;
}

std::optional<int> OperatorPolynomial::homogeneity() const {
    if (terms_.empty()) return 0;
    int d = terms_.begin()->first.homogeneity();
    for (const auto& [m, c] : terms_)
        if (m.homogeneity() != d) return std::nullopt;
    return d;
}

bool OperatorPolynomial::is_homogeneous_of(int d) const {
    for (const auto& [m, c] : terms_)
        if (m.homogeneity() != d) return false;
    return true;
}

OperatorPolynomial OperatorPolynomial::formal_adjoint() const {
    OperatorPolynomial r(n_);
    for (const auto& [m, c] : terms_) {
        std::vector<int> w = m.word();
        std::reverse(w.begin(), w.end());
        Rational s = (w.size() % 2 == 0) ? c : -c;
        r += pbw_normalize(n_, s, w);
    }
    return r;
}

std::string OperatorPolynomial::str() const {
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
        bool is_const = m.order() == 0;
        bool unit = (v == Rational(1));
        if (!unit || is_const) os << v.str();
        int n = n_;
        bool wrote = false;
        for (size_t i = 0; i < m.exp.size(); ++i) {
            if (m.exp[i] == 0) continue;
            if (wrote || !unit) os << " ";
            wrote = true;
            int idx = static_cast<int>(i) + 1;
            if (idx <= n) os << "X" << idx;
            else if (idx <= 2 * n) os << "Y" << (idx - n);
            else os << "T";
            if (m.exp[i] > 1) os << "^" << m.exp[i];
        }
    }
    return os.str();
}

OperatorPolynomial pbw_normalize(int n, const Rational& coeff, std::span<const int> word) {
    OperatorPolynomial result(n);
    if (coeff.is_zero()) return result;
    std::vector<std::pair<Rational, std::vector<int>>> work;
    work.emplace_back(coeff, std::vector<int>(word.begin(), word.end()));
    while (!work.empty()) {
        auto [c, w] = std::move(work.back());
        work.pop_back();
        int swap_at = -1;
        for (size_t i = 0; i + 1 < w.size(); ++i) {
            if (w[i] > w[i + 1]) { swap_at = static_cast<int>(i); break; }
        }
        if (swap_at < 0) {
            PBWMonomial m{std::vector<int>(2 * n + 1, 0)};
            for (int g : w) {
                if (g < 1 || g > 2 * n + 1) throw std::invalid_argument("pbw_normalize: generator index out of range");
                m.exp[g - 1] += 1;
            }
            result.add_term(m, c);
            continue;
        }
        int a = w[swap_at], b = w[swap_at + 1];
        std::vector<int> swapped = w;
        std::swap(swapped[swap_at], swapped[swap_at + 1]);
        work.emplace_back(c, std::move(swapped));
        if (b <= n && a == b + n) {
            // Y_j X_j = X_j Y_j - T
            std::vector<int> shorter;
            shorter.reserve(w.size() - 1);
            for (size_t i = 0; i < w.size(); ++i) {
                if (static_cast<int>(i) == swap_at) { shorter.push_back(2 * n + 1); ++i; continue; }
                shorter.push_back(w[i]);
            }
            work.emplace_back(-c, std::move(shorter));
        }
    }
    return result;
}

int CoordMonomial::degree() const {
    int s = 0;
    for (int e : exp) s += e;
    return s;
}

CoordPolynomial CoordPolynomial::constant(int n, const Rational& c) {
    CoordPolynomial p(n);
    p.add_term(CoordMonomial{std::vector<int>(2 * n + 1, 0)}, c);
    return p;
}

CoordPolynomial CoordPolynomial::variable(int n, int axis) {
    if (axis < 1 || axis > 2 * n + 1) throw std::invalid_argument("variable axis out of range");
    CoordPolynomial p(n);
    CoordMonomial m{std::vector<int>(2 * n + 1, 0)};
    m.exp[axis - 1] = 1;
    p.add_term(m, Rational(1));
    return p;
}

void CoordPolynomial::add_term(const CoordMonomial& m, const Rational& c) {
    if (c.is_zero()) return;
    auto it = terms_.find(m);
    if (it == terms_.end()) {
        terms_.emplace(m, c);
    } else {
        it->second += c;
        if (it->second.is_zero()) terms_.erase(it);
    }
}

CoordPolynomial CoordPolynomial::operator-() const {
    CoordPolynomial r(n_);
    for (const auto& [m, c] : terms_) r.terms_.emplace(m, -c);
    return r;
}

CoordPolynomial& CoordPolynomial::operator+=(const CoordPolynomial& o) {
    for (const auto& [m, c] : o.terms_) add_term(m, c);
    return *this;
}

CoordPolynomial& CoordPolynomial::operator-=(const CoordPolynomial& o) {
    for (const auto& [m, c] : o.terms_) add_term(m, -c);
    return *this;
}

CoordPolynomial operator*(const CoordPolynomial& a, const CoordPolynomial& b) {
    if (a.n_ != b.n_) throw std::invalid_argument("CoordPolynomial product: rank mismatch");
    CoordPolynomial r(a.n_);
    for (const auto& [ma, ca] : a.terms_)
        for (const auto& [mb, cb] : b.terms_) {
            CoordMonomial m = ma;
            for (size_t i = 0; i < m.exp.size(); ++i) m.exp[i] += mb.exp[i];
            r.add_term(m, ca * cb);
        }
    return r;
}

CoordPolynomial CoordPolynomial::scaled(const Rational& c) const {
    CoordPolynomial r(n_);
    if (c.is_zero()) return r;
    for (const auto& [m, k] : terms_) r.terms_.emplace(m, k * c);
    return r;
}

CoordPolynomial CoordPolynomial::derivative(int axis) const {
    CoordPolynomial r(n_);
    for (const auto& [m, c] : terms_) {
        int e = m.exp[axis - 1];
        if (e == 0) continue;
        CoordMonomial d = m;
        d.exp[axis - 1] -= 1;
        r.add_term(d, c * Rational(e));
    }
    return r;
}

CoordPolynomial CoordPolynomial::times_variable(int axis) const {
    CoordPolynomial r(n_);
    for (const auto& [m, c] : terms_) {
        CoordMonomial d = m;
        d.exp[axis - 1] += 1;
        r.add_term(d, c);
    }
    return r;
}

Rational CoordPolynomial::evaluate(const Point& p) const {
    if (p.n() != n_) throw std::invalid_argument("evaluate: rank mismatch");
    Rational s;
    for (const auto& [m, c] : terms_) {
        Rational v = c;
        for (int i = 0; i < n_; ++i) {
            for (int k = 0; k < m.exp[i]; ++k) v *= p.x[i];
            for (int k = 0; k < m.exp[n_ + i]; ++k) v *= p.y[i];
        }
        for (int k = 0; k < m.exp[2 * n_]; ++k) v *= p.t;
        s += v;
    }
    return s;
}

CoordPolynomial CoordPolynomial::compose_linear(const RatMatrix& m) const {
    int dim = 2 * n_ + 1;
    if (m.rows() != dim || m.cols() != dim) throw std::invalid_argument("compose_linear: bad matrix size");
    // image of each variable under the substitution
    std::vector<CoordPolynomial> img;
    img.reserve(dim);
    for (int i = 0; i < dim; ++i) {
        CoordPolynomial v(n_);
        for (int j = 0; j < dim; ++j) {
            if (m.at(i, j).is_zero()) continue;
            v += variable(n_, j + 1).scaled(m.at(i, j));
        }
        img.push_back(std::move(v));
    }
    CoordPolynomial r(n_);
    for (const auto& [mono, c] : terms_) {
        CoordPolynomial term = constant(n_, c);
        for (int i = 0; i < dim; ++i)
            for (int k = 0; k < mono.exp[i]; ++k) term = term * img[i];
        r += term;
    }
    return r;
}

CoordPolynomial CoordPolynomial::compose_dilation(const Rational& lambda) const {
    if (lambda.sign() <= 0) throw std::invalid_argument("compose_dilation: lambda must be positive");
    CoordPolynomial r(n_);
    for (const auto& [m, c] : terms_) {
        int w = m.degree() + m.exp[2 * n_]; // t carries weight 2
        Rational f(1);
        for (int k = 0; k < w; ++k) f *= lambda;
        r.add_term(m, c * f);
    }
    return r;
}

std::string CoordPolynomial::str() const {
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
        bool is_const = m.degree() == 0;
        bool unit = (v == Rational(1));
        if (!unit || is_const) os << v.str();
        for (size_t i = 0; i < m.exp.size(); ++i) {
            if (m.exp[i] == 0) continue;
            os << " ";
            int axis = static_cast<int>(i) + 1;
            if (axis <= n_) os << "x" << axis;
            else if (axis <= 2 * n_) os << "y" << (axis - n_);
            else os << "t";
            if (m.exp[i] > 1) os << "^" << m.exp[i];
        }
    }
    return os.str();
}

CoordPolynomial apply_generator(int index, const CoordPolynomial& f) {
    int n = f.n();
    int ti = 2 * n + 1;
    if (index == ti) return f.derivative(ti);
    if (index >= 1 && index <= n) {
        // X_i
        CoordPolynomial r = f.derivative(index);
        r -= f.derivative(ti).times_variable(n + index).scaled(Rational(1, 2));
        return r;
    }
    if (index > n && index <= 2 * n) {
        // Y_i
        int i = index - n;
        CoordPolynomial r = f.derivative(index);
        r += f.derivative(ti).times_variable(i).scaled(Rational(1, 2));
        return r;
    }
    throw std::invalid_argument("apply_generator: index out of range");
}

CoordPolynomial apply_operator(const OperatorPolynomial& p, const CoordPolynomial& f) {
    if (p.n() != f.n()) throw std::invalid_argument("apply_operator: rank mismatch");
    CoordPolynomial r(f.n());
    for (const auto& [m, c] : p.terms()) {
        std::vector<int> w = m.word();
        CoordPolynomial g = f;
        for (auto it = w.rbegin(); it != w.rend(); ++it) g = apply_generator(*it, g);
        r += g.scaled(c);
    }
    return r;
}

} // namespace rumin
