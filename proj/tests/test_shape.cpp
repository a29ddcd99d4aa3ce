#include <catch2/catch_amalgamated.hpp>

#include "offsetshape/place.hpp"
#include "offsetshape/puiseux.hpp"

#include <random>

using namespace offsetshape;

namespace {

Place<Rat> standard_place(int p, std::vector<std::pair<int, Rat>> yterms, int T = 16) {
    Place<Rat> pl;
    pl.x = TruncSeries<Rat>::monomial(Rat(1), p, T);
    TruncSeries<Rat> y(T);
    for (auto& [e, c] : yterms) y.coeff(e) = c;
    pl.y = y;
    pl.standard = true;
    pl.exact = true;
    return pl;
}

} // namespace

TEST_CASE("signature of canonical places") {
    auto s1 = signature(standard_place(2, {{3, Rat(1)}}));
    CHECK(s1.p == 2);
    CHECK(s1.q == 3);
    CHECK_FALSE(s1.has_r());

    auto s2 = signature(standard_place(2, {{4, Rat(1)}, {9, Rat(1)}}));
    CHECK(s2.p == 2);
    CHECK(s2.q == 4);
    REQUIRE(s2.r == 9);
    CHECK(s2.xi_r == 1);

    auto s3 = signature(standard_place(1, {{2, Rat(1)}}));
    CHECK(s3.p == 1);
    CHECK(s3.q == 2);
    CHECK_FALSE(s3.has_r());
}

TEST_CASE("local shape table and cuspidality") {
    CHECK(local_shape_of(2, 3) == LocalShape::Beak);
    CHECK(local_shape_of(1, 2) == LocalShape::Elbow);
    CHECK(local_shape_of(3, 5) == LocalShape::Flex);
    CHECK(local_shape_of(2, 4) == LocalShape::Thorn);

    Signature<Rat> s;
    s.p = 2;
    s.q = 3;
    CHECK(is_cuspidal(s));
    s.p = 1;
    CHECK_FALSE(is_cuspidal(s));
    s.p = 4;
    s.q = 6;
    CHECK(is_cuspidal(s));
}

TEST_CASE("signature errors") {
    // line within trunc
    Place<Rat> line;
    line.x = TruncSeries<Rat>::monomial(Rat(1), 1, 8);
    line.y = TruncSeries<Rat>::zero(8);
    line.standard = true;
    line.exact = true;
    CHECK_THROWS_AS(signature(line), geometry_error);
    line.exact = false;
    CHECK_THROWS_AS(signature(line), truncation_error);
}

TEST_CASE("shape invariant under positive parameter scaling") {
    std::mt19937_64 eng(42);
    for (int it = 0; it < 50; ++it) {
        int p = 1 + static_cast<int>(eng() % 4);
        int q = p + 1 + static_cast<int>(eng() % 5);
        Rat beta(1 + static_cast<long long>(eng() % 7), 1 + static_cast<long long>(eng() % 3));
        Rat lam(1 + static_cast<long long>(eng() % 5), 1 + static_cast<long long>(eng() % 4));
        auto pl = standard_place(p, {{q, beta}});
        auto s0 = signature(pl);
        // h -> lam h scales coefficients but not orders
        Place<Rat> scaled_pl = pl;
        TruncSeries<Rat> y2(pl.y.trunc());
        Rat lp = rat_pow(lam, q);
        y2.coeff(q) = beta * lp;
        scaled_pl.y = y2;
        scaled_pl.x = TruncSeries<Rat>::monomial(rat_pow(lam, p), p, pl.x.trunc());
        scaled_pl.standard = false; // x no longer unit-leading: use the general test
        auto s1 = signature(scaled_pl);
        CHECK(s0.p == s1.p);
        CHECK(s0.q == s1.q);
        CHECK(local_shape(s0) == local_shape(s1));
    }
}

TEST_CASE("general derivative test agrees with the standard shortcut") {
    std::mt19937_64 eng(7);
    for (int it = 0; it < 100; ++it) {
        int p = 1 + static_cast<int>(eng() % 4);
        int q = p + 1 + static_cast<int>(eng() % 6);
        int r = q + 1 + static_cast<int>(eng() % 4);
        Rat beta(1 + static_cast<long long>(eng() % 9), 1 + static_cast<long long>(eng() % 4));
        Rat xi(static_cast<long long>(eng() % 19) - 9, 1 + static_cast<long long>(eng() % 3));
        auto pl = standard_place(p, {{q, beta}, {r, xi}});
        auto quick = signature(pl);
        auto general = derivative_signature(pl.x, pl.y);
        REQUIRE(general);
        CHECK(general->first == quick.p);
        CHECK(general->second == quick.q);
    }
}

TEST_CASE("regular places are elbows or flexes only") {
    std::mt19937_64 eng(99);
    for (int it = 0; it < 50; ++it) {
        int q = 2 + static_cast<int>(eng() % 7);
        auto pl = standard_place(1, {{q, Rat(1 + static_cast<long long>(eng() % 5))}});
        auto s = signature(pl);
        auto shp = local_shape(s);
        CHECK((shp == LocalShape::Elbow || shp == LocalShape::Flex));
        CHECK_FALSE(is_cuspidal(s));
    }
}

TEST_CASE("signatures flow from curve ingestion") {
    auto res = places_at(parse_poly("x^3 - y^2"), {Rat(0), Rat(0)}, 16);
    auto s = signature(res.places[0]);
    CHECK(s.p == 2);
    CHECK(s.q == 3);
    CHECK(local_shape(s) == LocalShape::Beak);
    CHECK(is_cuspidal(s));

    auto res2 = places_at(parse_poly("x^9-y^2+2*y*x^2-x^4"), {Rat(0), Rat(0)}, 16);
    auto s2 = signature(res2.places[0]);
    CHECK(s2.p == 2);
    CHECK(s2.q == 4);
    CHECK(s2.r == 9);
    CHECK(local_shape(s2) == LocalShape::Thorn);
}
