#include <doctest.h>

#include "rumin/lie_algebra.hpp"

#include <cstdint>

using namespace rumin;

namespace {

struct Rng {
    std::uint64_t s;
    explicit Rng(std::uint64_t seed) : s(seed) {}
    std::uint64_t next() {
        s += 0x9e3779b97f4a7c15ull;
        std::uint64_t z = s;
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
        return z ^ (z >> 31);
    }
    long range(long lo, long hi) { return lo + static_cast<long>(next() % static_cast<std::uint64_t>(hi - lo + 1)); }
    Rational rat() { return Rational(range(-3, 3), range(1, 4)); }
};

Point random_point(Rng& rng, int n) {
    Point p = identity_point(n);
    for (int i = 0; i < n; ++i) { p.x[i] = rng.rat(); p.y[i] = rng.rat(); }
    p.t = rng.rat();
    return p;
}

std::vector<int> random_word(Rng& rng, int n, int maxlen) {
    std::vector<int> w(rng.range(0, maxlen));
    for (auto& g : w) g = static_cast<int>(rng.range(1, 2 * n + 1));
    return w;
}

CoordPolynomial random_poly(Rng& rng, int n, int maxdeg) {
    CoordPolynomial f(n);
    for (int k = 0; k < 5; ++k) {
        CoordMonomial m{std::vector<int>(2 * n + 1, 0)};
        int d = static_cast<int>(rng.range(0, maxdeg));
        for (int j = 0; j < d; ++j) m.exp[rng.range(0, 2 * n)] += 1;
        f.add_term(m, rng.rat());
    }
    return f;
}

// application of an unnormalized word, rightmost factor first
CoordPolynomial apply_word(std::span<const int> w, const CoordPolynomial& f) {
    CoordPolynomial g = f;
    for (auto it = w.rbegin(); it != w.rend(); ++it) g = apply_generator(*it, g);
    return g;
}

} // namespace

TEST_CASE("group law on H^1") {
    Point p = identity_point(1), q = identity_point(1);
    p.x[0] = 1;
    q.y[0] = 1;
    Point r = group_mul(p, q);
    CHECK(r.x[0] == Rational(1));
    CHECK(r.y[0] == Rational(1));
    CHECK(r.t == Rational(1, 2));
}

TEST_CASE("group axioms hold exactly") {
    Rng rng(21);
    for (int n : {1, 2, 3}) {
        Point e = identity_point(n);
        for (int trial = 0; trial < 10; ++trial) {
            Point p = random_point(rng, n), q = random_point(rng, n), r = random_point(rng, n);
            CHECK(group_mul(p, e).t == p.t);
            CHECK(group_mul(group_mul(p, q), r).t == group_mul(p, group_mul(q, r)).t);
            Point inv = group_mul(p, group_inverse(p));
            CHECK(inv.t.is_zero());
            for (int i = 0; i < n; ++i) {
                CHECK(inv.x[i].is_zero());
                CHECK(inv.y[i].is_zero());
            }
        }
    }
}

TEST_CASE("dilations are group homomorphisms") {
    Rng rng(22);
    CHECK_THROWS(dilate(Rational(0), identity_point(1)));
    CHECK_THROWS(dilate(Rational(-2), identity_point(1)));
    Point p = identity_point(1);
    p.x[0] = 1; p.t = 1;
    Point d = dilate(Rational(2), p);
    CHECK(d.x[0] == Rational(2));
    CHECK(d.t == Rational(4));
    for (int n : {1, 2}) {
        for (int trial = 0; trial < 10; ++trial) {
            Rational lambda(rng.range(1, 5), rng.range(1, 5));
            Point a = random_point(rng, n), b = random_point(rng, n);
            Point lhs = dilate(lambda, group_mul(a, b));
            Point rhs = group_mul(dilate(lambda, a), dilate(lambda, b));
            CHECK(lhs.t == rhs.t);
            for (int i = 0; i < n; ++i) {
                CHECK(lhs.x[i] == rhs.x[i]);
                CHECK(lhs.y[i] == rhs.y[i]);
            }
        }
    }
}

TEST_CASE("pbw normal ordering") {
    int n = 1;
    // Y1 X1 = X1 Y1 - T
    OperatorPolynomial p = pbw_normalize(n, Rational(1), std::vector<int>{2, 1});
    OperatorPolynomial expected(n);
    expected.add_term(PBWMonomial{{1, 1, 0}}, Rational(1));
    expected.add_term(PBWMonomial{{0, 0, 1}}, Rational(-1));
    CHECK(p == expected);

    // already ordered word is untouched
    OperatorPolynomial q = pbw_normalize(n, Rational(1), std::vector<int>{1, 1});
    OperatorPolynomial x2(n);
    x2.add_term(PBWMonomial{{2, 0, 0}}, Rational(1));
    CHECK(q == x2);

    // Y1 Y1 X1 = X1 Y1^2 - 2 Y1 T  (by repeated single swaps)
    OperatorPolynomial r = pbw_normalize(n, Rational(1), std::vector<int>{2, 2, 1});
    OperatorPolynomial expected2(n);
    expected2.add_term(PBWMonomial{{1, 2, 0}}, Rational(1));
    expected2.add_term(PBWMonomial{{0, 1, 1}}, Rational(-2));
    CHECK(r == expected2);
}

TEST_CASE("pbw normalization is idempotent and multiplicative") {
    Rng rng(31);
    for (int n : {1, 2}) {
        for (int trial = 0; trial < 25; ++trial) {
            std::vector<int> w1 = random_word(rng, n, 4), w2 = random_word(rng, n, 4);
            OperatorPolynomial p1 = pbw_normalize(n, Rational(1), w1);
            OperatorPolynomial p2 = pbw_normalize(n, Rational(1), w2);
            // renormalizing every normal-form word returns it unchanged
            OperatorPolynomial again(n);
            for (const auto& [m, c] : p1.terms()) again += pbw_normalize(n, c, m.word());
            CHECK(again == p1);
            // concat = product
            std::vector<int> w = w1;
            w.insert(w.end(), w2.begin(), w2.end());
            CHECK(pbw_normalize(n, Rational(1), w) == p1 * p2);
        }
    }
}

TEST_CASE("operator product is associative") {
    Rng rng(32);
    for (int trial = 0; trial < 15; ++trial) {
        int n = 1 + static_cast<int>(trial % 2);
        OperatorPolynomial a = pbw_normalize(n, rng.rat(), random_word(rng, n, 3));
        OperatorPolynomial b = pbw_normalize(n, rng.rat(), random_word(rng, n, 3));
        OperatorPolynomial c = pbw_normalize(n, rng.rat(), random_word(rng, n, 3));
        CHECK((a * b) * c == a * (b * c));
    }
}

TEST_CASE("homogeneity degrees") {
    int n = 1;
    CHECK(OperatorPolynomial::generator(n, 1).homogeneity() == 1);
    CHECK(OperatorPolynomial::generator(n, 3).homogeneity() == 2); // T counts twice
    OperatorPolynomial mixed = OperatorPolynomial::generator(n, 1) + OperatorPolynomial::generator(n, 3);
    CHECK_FALSE(mixed.homogeneity().has_value());
}

TEST_CASE("coordinate realization of the frame") {
    int n = 1;
    CoordPolynomial x1 = CoordPolynomial::variable(n, 1);
    CoordPolynomial t = CoordPolynomial::variable(n, 3);
    CHECK(apply_generator(1, x1) == CoordPolynomial::constant(n, Rational(1)));
    // X1 t = -y1/2
    CHECK(apply_generator(1, t) == CoordPolynomial::variable(n, 2).scaled(Rational(-1, 2)));
    // [X1, Y1] t = 1 = T t
    CoordPolynomial lhs = apply_generator(1, apply_generator(2, t)) - apply_generator(2, apply_generator(1, t));
    CHECK(lhs == CoordPolynomial::constant(n, Rational(1)));
}

TEST_CASE("normalized and unnormalized words act identically") {
    Rng rng(33);
    for (int n : {1, 2}) {
        for (int trial = 0; trial < 20; ++trial) {
            std::vector<int> w = random_word(rng, n, 3);
            CoordPolynomial f = random_poly(rng, n, 3);
            CoordPolynomial direct = apply_word(w, f);
            CoordPolynomial via_pbw = apply_operator(pbw_normalize(n, Rational(1), w), f);
            CHECK(direct == via_pbw);
        }
    }
}

TEST_CASE("dilation covariance of the frame") {
    Rng rng(34);
    for (int n : {1, 2}) {
        for (int trial = 0; trial < 10; ++trial) {
            CoordPolynomial f = random_poly(rng, n, 3);
            Rational lambda(rng.range(1, 4), rng.range(1, 4));
            for (int i = 1; i <= 2 * n + 1; ++i) {
                CoordPolynomial lhs = apply_generator(i, f.compose_dilation(lambda));
                CoordPolynomial rhs = apply_generator(i, f).compose_dilation(lambda);
                rhs = rhs.scaled(i == 2 * n + 1 ? lambda * lambda : lambda);
                CHECK(lhs == rhs);
            }
        }
    }
}

TEST_CASE("formal adjoint reverses words with parity sign") {
    int n = 1;
    OperatorPolynomial xy = OperatorPolynomial::generator(n, 1) * OperatorPolynomial::generator(n, 2);
    // (X1 Y1)* = Y1 X1 = X1 Y1 - T
    OperatorPolynomial adj = xy.formal_adjoint();
    OperatorPolynomial expected(n);
    expected.add_term(PBWMonomial{{1, 1, 0}}, Rational(1));
    expected.add_term(PBWMonomial{{0, 0, 1}}, Rational(-1));
    CHECK(adj == expected);
    CHECK(OperatorPolynomial::generator(n, 1).formal_adjoint() ==
          OperatorPolynomial::generator(n, 1).scaled(Rational(-1)));
    // involution
    Rng rng(35);
    for (int trial = 0; trial < 10; ++trial) {
        OperatorPolynomial p = pbw_normalize(n, rng.rat(), random_word(rng, n, 4));
        CHECK(p.formal_adjoint().formal_adjoint() == p);
    }
}
