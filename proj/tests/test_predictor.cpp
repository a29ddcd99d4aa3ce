#include <catch2/catch_amalgamated.hpp>

#include "offsetshape/predictor.hpp"

#include <cmath>
#include <random>

using namespace offsetshape;

namespace {

Place<Rat> standard_place(int p, std::vector<std::pair<int, Rat>> yterms, int T = 48) {
    Place<Rat> pl;
    pl.x = TruncSeries<Rat>::monomial(Rat(1), p, T);
    TruncSeries<Rat> y(T);
    for (auto& [e, c] : yterms) y.coeff(e) = c;
    pl.y = y;
    pl.standard = true;
    pl.exact = true;
    return pl;
}

const std::vector<std::pair<Rat, Rat>> kAngles = {
    {Rat(3, 5), Rat(4, 5)},    {Rat(4, 5), Rat(-3, 5)},  {Rat(5, 13), Rat(12, 13)},
    {Rat(-12, 13), Rat(5, 13)}, {Rat(8, 17), Rat(15, 17)}, {Rat(7, 25), Rat(24, 25)},
};

struct Oracle {
    std::pair<int, int> sig0;
    LocalShape shape0;
};

Oracle series_oracle(const Place<Rat>& pl, const OffsetParams<Rat>& op) {
    auto o = offset_series(pl, op);
    auto s = offset_signature(o);
    REQUIRE(s.has_value());
    return {*s, local_shape_of(s->first, s->second)};
}

void check_against_oracle(const Place<Rat>& pl, const OffsetParams<Rat>& op, int s,
                          bool xi_commit = false) {
    auto sig = signature(pl);
    auto cd = curvature_data(pl, sig);
    auto pr = predict(sig, cd, op, s, xi_commit);
    REQUIRE_FALSE(pr.needs_r);
    auto oracle = series_oracle(pl, op.with_branch(s));
    const LocalShape source = local_shape(sig);
    if (pr.preserved == Preserved::yes) CHECK(oracle.shape0 == source);
    if (pr.preserved == Preserved::no) CHECK(oracle.shape0 != source);
    if (pr.p0) CHECK(*pr.p0 == oracle.sig0.first);
    if (pr.q0) CHECK(*pr.q0 == oracle.sig0.second);
    if (pr.shape0) CHECK(*pr.shape0 == oracle.shape0);
}

} // namespace

TEST_CASE("smoothing clause") {
    auto pl = standard_place(2, {{3, Rat(1)}});
    auto sig = signature(pl);
    auto cd = curvature_data(pl, sig);
    for (auto [a, b] : kAngles) {
        OffsetParams<Rat> op{Rat(1), a, b, +1};
        for (int s : {+1, -1}) {
            auto pr = predict(sig, cd, op, s);
            CHECK(pr.case_id == "SMOOTHED_QP1");
            CHECK(pr.preserved == Preserved::no);
            CHECK(pr.p0 == 1);
            check_against_oracle(pl, op, s);
        }
    }
}

TEST_CASE("thorn place at pi/4 in float mode: generic clause preserves it") {
    // (h^2, h^4 + h^9), d = 1, a = b = sqrt(2)/2
    Place<double> pl;
    pl.x = TruncSeries<double>::monomial(1.0, 2, 48);
    TruncSeries<double> y(48);
    y.coeff(4) = 1.0;
    y.coeff(9) = 1.0;
    pl.y = y;
    pl.standard = true;
    auto sig = signature(pl);
    auto cd = curvature_data(pl, sig);
    const double c = std::sqrt(0.5);
    OffsetParams<double> op{1.0, c, c, +1};
    for (int s : {+1, -1}) {
        auto pr = predict(sig, cd, op, s);
        CHECK(pr.case_id == "Q2P_ZERO_T12_1");
        CHECK(pr.preserved == Preserved::yes);
        REQUIRE(pr.p0);
        REQUIRE(pr.q0);
        CHECK(*pr.p0 == 2);
        CHECK(*pr.q0 == 4);
        auto o = offset_series(pl, op.with_branch(s));
        auto s0 = offset_signature(o);
        REQUIRE(s0);
        CHECK(s0->first == 2);
        CHECK(s0->second == 4);
    }
}

TEST_CASE("degenerate route fires when d*a*ktilde = 1 on one branch") {
    // (h^2, h^4 + h^9): ktilde = 2; d = 5/6, (a,b) = (3/5, 4/5): d*a = 1/2
    auto pl = standard_place(2, {{4, Rat(1)}, {9, Rat(1)}});
    auto sig = signature(pl);
    auto cd = curvature_data(pl, sig);
    OffsetParams<Rat> op{Rat(5, 6), Rat(3, 5), Rat(4, 5), +1};
    auto prp = predict(sig, cd, op, +1);
    CHECK(prp.case_id == "Q2P_ZERO_T11_1"); // r = 9 > 3p = 6
    CHECK(prp.preserved == Preserved::yes);
    CHECK(*prp.p0 == 2);
    CHECK(*prp.q0 == 4);
    auto prm = predict(sig, cd, op, -1);
    CHECK(prm.case_id == "Q2P_ZERO_T12_1");
    CHECK(prm.preserved == Preserved::yes);
    for (int s : {+1, -1}) check_against_oracle(pl, op, s);
}

TEST_CASE("degenerate route: r below and at 3p") {
    // r < 3p: preserved iff r, p share parity
    auto pl = standard_place(2, {{4, Rat(1)}, {5, Rat(3)}});
    auto sig = signature(pl);
    auto cd = curvature_data(pl, sig);
    OffsetParams<Rat> op{Rat(5, 6), Rat(3, 5), Rat(4, 5), +1};
    auto pr = predict(sig, cd, op, +1);
    CHECK(pr.case_id == "Q2P_ZERO_T11_2");
    CHECK(pr.preserved == Preserved::no); // r=5 odd, p=2 even
    CHECK(*pr.q0 == 3);
    check_against_oracle(pl, op, +1);

    // r = 3p with nonvanishing second coefficient
    auto pl2 = standard_place(2, {{4, Rat(1)}, {6, Rat(1, 7)}});
    auto sig2 = signature(pl2);
    auto cd2 = curvature_data(pl2, sig2);
    auto pr2 = predict(sig2, cd2, op, +1);
    CHECK(pr2.case_id == "Q2P_ZERO_T11_3");
    CHECK(pr2.preserved == Preserved::yes);
    check_against_oracle(pl2, op, +1);

    // r = 3p with the second coefficient tuned to vanish:
    // (b/2) kt^2 = a r xi / p -> xi = b kt^2 p / (2 a r)
    Rat xi = Rat(4, 5) * 4 * 2 / (Rat(2) * Rat(3, 5) * 6);
    auto pl3 = standard_place(2, {{4, Rat(1)}, {6, xi}});
    auto sig3 = signature(pl3);
    auto cd3 = curvature_data(pl3, sig3);
    auto pr3 = predict(sig3, cd3, op, +1);
    CHECK(pr3.case_id == "Q2P_ZERO_T11_3");
    CHECK(pr3.preserved == Preserved::undetermined);
}

TEST_CASE("generic-route determinant is the verdict at r = 3p") {
    // engineer det = 0 with the printed form nonzero: solve for xi
    // det = kt/2 ((1-s d a kt)^2 + (d b kt)^2) - s d b r xi / p = 0
    const Rat d(1, 2);
    const Rat a(3, 5), b(4, 5);
    const int p = 2, q = 4, r = 6, s = +1;
    const Rat kt = 2; // beta = 1
    Rat u1 = 1 - Rat(s) * d * a * kt;
    Rat det_head = kt / 2 * (u1 * u1 + d * b * kt * d * b * kt);
    Rat xi = det_head * Rat(p) / (Rat(s) * d * b * Rat(r));
    auto pl = standard_place(p, {{q, Rat(1)}, {r, xi}});
    auto sig = signature(pl);
    auto cd = curvature_data(pl, sig);
    OffsetParams<Rat> op{d, a, b, +1};
    auto pr = predict(sig, cd, op, s);
    CHECK(pr.case_id == "Q2P_ZERO_T12_2");
    CHECK(pr.preserved == Preserved::undetermined);
    // the series oracle must indeed see q0 != 2p on this slice
    auto oracle = series_oracle(pl, op);
    CHECK(oracle.sig0.first == 2);
    CHECK(oracle.sig0.second != 4);
    // and a generic xi keeps the verdict decisive and correct
    auto pl2 = standard_place(p, {{q, Rat(1)}, {r, xi + 1}});
    auto sig2 = signature(pl2);
    check_against_oracle(pl2, op, s);
    auto pr2 = predict(sig2, curvature_data(pl2, sig2), op, s);
    CHECK(pr2.case_id == "Q2P_ZERO_T12_2");
    CHECK(pr2.preserved == Preserved::yes);
}

TEST_CASE("regular flex goes through the first-order table") {
    auto pl = standard_place(1, {{3, Rat(1)}});
    auto sig = signature(pl);
    auto cd = curvature_data(pl, sig);
    OffsetParams<Rat> op{Rat(1), Rat(3, 5), Rat(4, 5), +1};
    auto pr = predict(sig, cd, op, +1);
    CHECK(pr.case_id == "Q2P_POS_TABLE");
    CHECK(pr.preserved == Preserved::no);
    CHECK(*pr.shape0 == LocalShape::Elbow);
    check_against_oracle(pl, op, +1);
}

TEST_CASE("parabola-like exact place preserves through the quadratic clause") {
    auto pl = standard_place(3, {{6, Rat(2, 3)}});
    auto sig = signature(pl);
    auto cd = curvature_data(pl, sig);
    OffsetParams<Rat> op{Rat(1, 2), Rat(5, 13), Rat(12, 13), +1};
    auto pr = predict(sig, cd, op, +1, /*xi_commit=*/true);
    CHECK(pr.case_id == "Q2P_ZERO_XI0_PARABOLA");
    CHECK(pr.preserved == Preserved::yes);
    check_against_oracle(pl, op, +1, true);
    // without the commitment the clause demands deeper truncation
    auto pr2 = predict(sig, cd, op, +1, false);
    CHECK(pr2.needs_r);
}

TEST_CASE("negative regime: stated-vs-derived conflicts resolve to the oracle") {
    OffsetParams<Rat> op{Rat(1, 3), Rat(3, 5), Rat(4, 5), +1};
    // odd p below 2(q-p), xi = 0: the stated claim would preserve; truth is a flex
    auto pl = standard_place(5, {{8, Rat(1)}});
    auto sig = signature(pl);
    auto cd = curvature_data(pl, sig);
    auto pr = predict(sig, cd, op, +1, true);
    CHECK(pr.case_id == "Q2P_NEG_T13_PNEQ");
    CHECK(pr.preserved == Preserved::no);
    CHECK(*pr.q0 == 5);
    check_against_oracle(pl, op, +1, true);

    // p > r-p with r-p < 2(q-p): stated parity clause is wrong; derived verdict preserved
    auto pl2 = standard_place(6, {{10, Rat(1)}, {11, Rat(1)}});
    auto sig2 = signature(pl2);
    auto cd2 = curvature_data(pl2, sig2);
    auto pr2 = predict(sig2, cd2, op, +1);
    CHECK(pr2.case_id == "Q2P_NEG_T14_3b");
    CHECK(pr2.preserved == Preserved::yes);
    CHECK(*pr2.q0 == 6);
    check_against_oracle(pl2, op, +1);

    // boundary p = 2(q-p)
    auto pl3 = standard_place(4, {{6, Rat(1)}, {8, Rat(2)}});
    auto sig3 = signature(pl3);
    auto cd3 = curvature_data(pl3, sig3);
    auto pr3 = predict(sig3, cd3, op, +1);
    CHECK(pr3.case_id.substr(0, 15) == "Q2P_NEG_T14_2c1");
    CHECK(pr3.preserved == Preserved::yes);
    check_against_oracle(pl3, op, +1);

    // engineered boundary zero: b + s d ut^2 / 2 = 0 -> undetermined
    // ut = q beta / p = 3 beta / 2; pick beta, solve d
    Rat beta(1);
    Rat ut = Rat(6) * beta / 4;
    Rat dz = -Rat(+1) * Rat(4, 5) * 2 / (ut * ut); // s=+1
    OffsetParams<Rat> opz{dz, Rat(3, 5), Rat(4, 5), +1};
    auto pl4 = standard_place(4, {{6, beta}});
    auto sig4 = signature(pl4);
    auto pr4 = predict(sig4, curvature_data(pl4, sig4), opz, +1, true);
    CHECK(pr4.case_id == "Q2P_NEG_T13_PEQ");
    CHECK(pr4.preserved == Preserved::undetermined);
}

TEST_CASE("classical column") {
    auto pl = standard_place(2, {{3, Rat(1)}});
    auto sig = signature(pl);
    auto cd = curvature_data(pl, sig);
    auto pr = classical_reference(sig, cd, Rat(1));
    CHECK(pr.case_id == "CLASSICAL_SMOOTHED");
    CHECK(pr.preserved == Preserved::no);

    auto pl2 = standard_place(2, {{7, Rat(1)}});
    auto sig2 = signature(pl2);
    auto pr2 = classical_reference(sig2, curvature_data(pl2, sig2), Rat(1));
    CHECK(pr2.case_id == "CLASSICAL_QGT2P");
    CHECK(pr2.preserved == Preserved::yes);

    auto pl3 = standard_place(2, {{4, Rat(1)}, {9, Rat(1)}});
    auto sig3 = signature(pl3);
    auto pr3 = classical_reference(sig3, curvature_data(pl3, sig3), Rat(1));
    CHECK(pr3.case_id == "CLASSICAL_Q2P");
    CHECK(pr3.preserved == Preserved::yes); // |d ktilde| = 2 != 1
    auto pr3b = classical_reference(sig3, curvature_data(pl3, sig3), Rat(1, 2));
    CHECK(pr3b.preserved == Preserved::undetermined); // |d ktilde| = 1

    auto pl4 = standard_place(5, {{8, Rat(1)}});
    auto sig4 = signature(pl4);
    auto pr4 = classical_reference(sig4, curvature_data(pl4, sig4), Rat(1));
    CHECK(pr4.case_id == "CLASSICAL_QLT2P");
    CHECK(pr4.preserved == Preserved::yes);
    auto pl5 = standard_place(4, {{7, Rat(1)}});
    auto sig5 = signature(pl5);
    auto pr5 = classical_reference(sig5, curvature_data(pl5, sig5), Rat(1));
    CHECK(pr5.preserved == Preserved::no);
}

TEST_CASE("comparison table shape") {
    auto pl = standard_place(2, {{4, Rat(1)}, {9, Rat(1)}});
    auto sig = signature(pl);
    auto cd = curvature_data(pl, sig);
    auto rows = comparison_table(sig, cd, Rat(1), {{Rat(3, 5), Rat(4, 5)}, {Rat(5, 13), Rat(12, 13)}});
    REQUIRE(rows.size() == 3);
    CHECK(rows[0].label == "classical");
    CHECK(rows[0].branches.size() == 1);
    CHECK(rows[1].branches.size() == 2);
}

TEST_CASE("oracle agreement over a stratified random suite") {
    std::mt19937_64 eng(20250810);
    auto rnd_coeff = [&](bool nonzero) {
        long long n = static_cast<long long>(eng() % 13) - 6;
        if (nonzero && n == 0) n = 1 + static_cast<long long>(eng() % 5);
        return Rat(n, 1 + static_cast<long long>(eng() % 4));
    };
    int decisive = 0, open = 0;
    for (int it = 0; it < 260; ++it) {
        int mode = it % 7;
        int p, q;
        std::optional<int> r;
        switch (mode) {
            case 0: // smoothing
                p = 1 + static_cast<int>(eng() % 4);
                q = p + 1;
                break;
            case 1: // q - 2p > 0
                p = 1 + static_cast<int>(eng() % 3);
                q = 2 * p + 1 + static_cast<int>(eng() % 3);
                break;
            case 2: // q = 2p with far r
                p = 1 + static_cast<int>(eng() % 3);
                q = 2 * p;
                r = 3 * p + 1 + static_cast<int>(eng() % 3);
                break;
            case 3: // q = 2p with r at/below 3p
                p = 2 + static_cast<int>(eng() % 2);
                q = 2 * p;
                r = q + 1 + static_cast<int>(eng() % (p - 1 + 1));
                break;
            case 4: // q < 2p, with xi
                p = 3 + static_cast<int>(eng() % 4);
                q = p + 2 + static_cast<int>(eng() % (p - 2));
                r = q + 1 + static_cast<int>(eng() % 4);
                break;
            case 5: // q < 2p, pure
                p = 3 + static_cast<int>(eng() % 4);
                q = p + 2 + static_cast<int>(eng() % (p - 2));
                break;
            default: // flexes
                p = 1 + 2 * static_cast<int>(eng() % 2);
                q = p + 2 + 2 * static_cast<int>(eng() % 3);
                break;
        }
        if (q - p == 1 && q == 2 * p) continue;
        std::vector<std::pair<int, Rat>> terms{{q, rnd_coeff(true)}};
        if (r && *r > q) terms.push_back({*r, rnd_coeff(true)});
        // occasionally add an honest tail beyond r
        if (r && eng() % 3 == 0) terms.push_back({*r + 1 + static_cast<int>(eng() % 3), rnd_coeff(false)});
        auto pl = standard_place(p, terms);
        auto sig = signature(pl);
        auto cd = curvature_data(pl, sig);
        auto [a, b] = kAngles[eng() % kAngles.size()];
        Rat d(1 + static_cast<long long>(eng() % 5), 1 + static_cast<long long>(eng() % 3));
        if (eng() % 2) d = -d;
        OffsetParams<Rat> op{d, a, b, +1};
        for (int s : {+1, -1}) {
            auto pr = predict(sig, cd, op, s, /*xi_commit=*/true);
            if (pr.preserved == Preserved::yes || pr.preserved == Preserved::no)
                ++decisive;
            else
                ++open;
            check_against_oracle(pl, op, s, true);
        }
    }
    CHECK(decisive > 300);
    CHECK(open < 80);
}

TEST_CASE("flex sources never preserved; smoothing is exactly q-p=1") {
    std::mt19937_64 eng(4242);
    for (int it = 0; it < 100; ++it) {
        int p = 1 + 2 * static_cast<int>(eng() % 2);
        int q = p + 2 + 2 * static_cast<int>(eng() % 3);
        auto pl = standard_place(p, {{q, Rat(1 + static_cast<long long>(eng() % 5))}});
        auto sig = signature(pl);
        auto cd = curvature_data(pl, sig);
        auto [a, b] = kAngles[eng() % kAngles.size()];
        OffsetParams<Rat> op{Rat(1 + static_cast<long long>(eng() % 3)), a, b, +1};
        for (int s : {+1, -1}) {
            auto pr = predict(sig, cd, op, s, true);
            CHECK(pr.preserved != Preserved::yes);
            auto oracle = series_oracle(pl, op.with_branch(s));
            CHECK(oracle.shape0 != LocalShape::Flex); // offsets of flexes are never flexes
        }
    }
    // smoothing biconditional over singular sources
    for (int it = 0; it < 100; ++it) {
        int p = 2 + static_cast<int>(eng() % 3);
        bool smooth = eng() % 2;
        int q = smooth ? p + 1 : p + 2 + static_cast<int>(eng() % 3);
        auto pl = standard_place(p, {{q, Rat(1 + static_cast<long long>(eng() % 5))}});
        auto [a, b] = kAngles[eng() % kAngles.size()];
        OffsetParams<Rat> op{Rat(1), a, b, +1};
        for (int s : {+1, -1}) {
            auto oracle = series_oracle(pl, op.with_branch(s));
            CHECK((oracle.sig0.first == 1) == (q - p == 1));
        }
    }
}

TEST_CASE("first-order table gives exactly (p, q-p)") {
    std::mt19937_64 eng(5151);
    for (int it = 0; it < 50; ++it) {
        int p = 1 + static_cast<int>(eng() % 3);
        int q = 2 * p + 1 + static_cast<int>(eng() % 4);
        Rat beta(1 + static_cast<long long>(eng() % 6), 1 + static_cast<long long>(eng() % 3));
        if (eng() % 2) beta = -beta;
        auto pl = standard_place(p, {{q, beta}});
        auto [a, b] = kAngles[eng() % kAngles.size()];
        OffsetParams<Rat> op{Rat(2, 3), a, b, +1};
        for (int s : {+1, -1}) {
            auto oracle = series_oracle(pl, op.with_branch(s));
            CHECK(oracle.sig0.first == p);
            CHECK(oracle.sig0.second == q - p);
        }
    }
}
