#include <doctest.h>

#include "rumin/linalg.hpp"

#include <cstdint>

using namespace rumin;

namespace {

// deterministic generator for property-style checks
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
    Rational rat() { return Rational(range(-4, 4), range(1, 3)); }
};

RatMatrix random_matrix(Rng& rng, int r, int c) {
    RatMatrix m(r, c);
    for (int i = 0; i < r; ++i)
        for (int j = 0; j < c; ++j) m.at(i, j) = rng.rat();
    return m;
}

} // namespace

TEST_CASE("rational basics") {
    CHECK(Rational(1, 2) + Rational(1, 3) == Rational(5, 6));
    CHECK(Rational(2, 4) == Rational(1, 2));
    CHECK((Rational(3) / Rational(-6)) == Rational(-1, 2));
    CHECK(Rational::parse("-7/3") == Rational(-7, 3));
    CHECK(Rational(5, 3).str() == "5/3");
    CHECK_THROWS(Rational(1, 0));
    CHECK_THROWS(Rational(1) / Rational(0));
}

TEST_CASE("rref, rank and nullspace") {
    RatMatrix m(2, 3);
    m.at(0, 0) = 1; m.at(0, 1) = 2; m.at(0, 2) = 3;
    m.at(1, 0) = 2; m.at(1, 1) = 4; m.at(1, 2) = 6;
    CHECK(m.rank() == 1);
    RatMatrix ns = m.nullspace();
    CHECK(ns.cols() == 2);
    CHECK((m * ns).is_zero());
    // leading coordinate of every basis vector is +1
    for (int j = 0; j < ns.cols(); ++j) {
        RatVec v = ns.col(j);
        for (const auto& x : v) {
            if (!x.is_zero()) { CHECK(x == Rational(1)); break; }
        }
    }
}

TEST_CASE("solve and inverse") {
    Rng rng(7);
    for (int trial = 0; trial < 20; ++trial) {
        RatMatrix a = random_matrix(rng, 4, 4);
        if (a.rank() < 4) continue;
        RatMatrix inv = a.inverse();
        CHECK(a * inv == RatMatrix::identity(4));
        RatVec b;
        for (int i = 0; i < 4; ++i) b.push_back(rng.rat());
        auto x = a.solve(b);
        REQUIRE(x.has_value());
        CHECK(a.apply(*x) == b);
    }
    // inconsistent system
    RatMatrix m(2, 1);
    m.at(0, 0) = 1; m.at(1, 0) = 1;
    CHECK_FALSE(m.solve({Rational(1), Rational(2)}).has_value());
}

TEST_CASE("pseudo-inverse satisfies the Moore-Penrose identities") {
    Rng rng(11);
    for (int trial = 0; trial < 15; ++trial) {
        int r = static_cast<int>(rng.range(1, 5));
        int c = static_cast<int>(rng.range(1, 5));
        RatMatrix a = random_matrix(rng, r, c);
        RatMatrix p = a.pseudo_inverse();
        CHECK(a * p * a == a);
        CHECK(p * a * p == p);
        CHECK((a * p).transpose() == a * p);
        CHECK((p * a).transpose() == p * a);
    }
}

TEST_CASE("gram-schmidt gives orthogonal columns with the same span") {
    Rng rng(3);
    for (int trial = 0; trial < 10; ++trial) {
        RatMatrix a = random_matrix(rng, 5, 3);
        if (a.rank() < 3) continue;
        RatMatrix q = gram_schmidt_columns(a);
        for (int i = 0; i < q.cols(); ++i)
            for (int j = i + 1; j < q.cols(); ++j) CHECK(dot(q.col(i), q.col(j)).is_zero());
        CHECK(same_column_span(a, q));
    }
}

TEST_CASE("column coefficient extractor recovers coordinates") {
    RatMatrix b(3, 2);
    b.at(0, 0) = 1; b.at(1, 0) = 2;
    b.at(1, 1) = 1; b.at(2, 1) = -3;
    RatMatrix e = b.column_coefficient_extractor();
    RatVec v = b.apply({Rational(5, 2), Rational(-7, 3)});
    RatVec c = e.apply(v);
    CHECK(c[0] == Rational(5, 2));
    CHECK(c[1] == Rational(-7, 3));
}
