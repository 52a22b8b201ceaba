#include "lab/json_io.hpp"
#include "lab/qr_covering.hpp"
#include "support.hpp"

#include <gtest/gtest.h>

using namespace lab;

namespace {

bool in_some_v(const QRConstruction& c, const Rational& x) {
    for (const auto& p : c.plateaus)
        if (p.V.contains(x)) return true;
    return false;
}

void expect_construction(const PwaMap& f, long q, int r, const Rational& eps, const QRConstruction& c) {
    EXPECT_LT(sup_distance(c.g, f), eps);
    EXPECT_EQ(c.sup_distance, sup_distance(c.g, f));
    EXPECT_GE(c.steps, 1);
    EXPECT_LE(c.steps, 2 * c.q_prime - 1);
    EXPECT_EQ(c.cover.q, q);
    EXPECT_EQ(c.cover.r, r);
    auto chk = verify_qr_covering(c.g, c.cover);
    EXPECT_TRUE(chk.ok) << chk.condition << " " << chk.detail;
    for (const auto& U : c.cover.intervals) EXPECT_LT(U.length(), Rational(1, static_cast<unsigned long>(q)));
    for (const auto& p : c.plateaus) {
        EXPECT_EQ(r % p.period, 0);
        EXPECT_TRUE(p.V.contains(p.representative));
        EXPECT_TRUE(p.plateau.contains(p.representative));
        // the representative keeps its f-orbit
        Rational xf = p.representative, xg = p.representative;
        for (int k = 0; k < r; ++k) {
            xf = f.eval(xf);
            xg = c.g.eval(xg);
            EXPECT_EQ(xf, xg);
        }
        EXPECT_EQ(xg, p.representative);
        EXPECT_EQ(c.g.eval(p.plateau.lo), c.g.eval(p.plateau.hi));
        EXPECT_EQ(c.g.eval(p.plateau.lo), f.eval(p.representative));
        auto v = verify_periodic_shrinking(c.g, p.plateau, p.period);
        EXPECT_TRUE(v.ok());
    }
    for (int k = 0; k <= 400; ++k) {
        Rational x = rat(k, 400);
        if (!in_some_v(c, x)) EXPECT_EQ(c.g.eval(x), f.eval(x)) << to_string(x);
    }
    for (const auto& b : f.breakpoints())
        if (!in_some_v(c, b)) EXPECT_EQ(c.g.eval(b), f.eval(b));
}

}  // namespace

TEST(QRGrid, MembersAndEnds) {
    EXPECT_EQ(qr_grid_interval(4, 0), (Interval{0, rat(1, 4), true, false}));
    EXPECT_EQ(qr_grid_interval(4, 3), Interval::open(rat(3, 8), rat(5, 8)));
    EXPECT_EQ(qr_grid_interval(4, 6), (Interval{rat(3, 4), 1, false, true}));
    EXPECT_THROW(qr_grid_interval(4, 7), DomainError);
    // the family covers [0,1]
    for (int k = 0; k <= 64; ++k) {
        bool hit = false;
        for (long i = 0; i <= 6; ++i) hit = hit || qr_grid_interval(4, i).contains(rat(k, 64));
        EXPECT_TRUE(hit);
    }
}

TEST(QRConstruct, TentExample) {
    PwaMap T = PwaMap::tent();
    auto c = construct_qr_covered(T, 4, 1, rat(1, 10));
    expect_construction(T, 4, 1, rat(1, 10), c);
    ASSERT_EQ(c.plateaus.size(), 2u);
    EXPECT_EQ(c.plateaus[0].representative, 0);
    EXPECT_EQ(c.plateaus[1].representative, rat(2, 3));
}

TEST(QRConstruct, TentPeriodTwo) {
    PwaMap T = PwaMap::tent();
    auto c = construct_qr_covered(T, 4, 2, rat(1, 10));
    expect_construction(T, 4, 2, rat(1, 10), c);
    bool saw_cycle = false;
    for (const auto& p : c.plateaus) saw_cycle = saw_cycle || p.period == 2;
    EXPECT_TRUE(saw_cycle);
}

TEST(QRConstruct, IdentityAndDoubleTent) {
    auto id = construct_qr_covered(PwaMap::identity(), 3, 1, rat(1, 8));
    expect_construction(PwaMap::identity(), 3, 1, rat(1, 8), id);
    auto d = construct_qr_covered(PwaMap::double_tent(), 2, 2, rat(1, 16));
    expect_construction(PwaMap::double_tent(), 2, 2, rat(1, 16), d);
}

TEST(QRConstruct, IdempotentOnItsOwnOutput) {
    auto first = construct_qr_covered(PwaMap::tent(), 4, 1, rat(1, 10));
    auto second = construct_qr_covered(first.g, 4, 1, rat(1, 10));
    EXPECT_EQ(second.steps, 1);
    expect_construction(first.g, 4, 1, rat(1, 10), second);
    for (const auto& p : first.plateaus) {
        Rational x = p.representative;
        EXPECT_EQ(second.g.eval(x), first.g.eval(x));
    }
}

TEST(QRConstruct, RandomMaps) {
    labtest::Rng rng(91);
    for (int t = 0; t < 15; ++t) {
        PwaMap f = labtest::random_map(rng, 4);
        long q = 1 + rng.below(5);
        int r = 1 + static_cast<int>(rng.below(2));
        Rational eps = rat(1, 4 + rng.below(16));
        auto c = construct_qr_covered(f, q, r, eps);
        expect_construction(f, q, r, eps, c);
    }
}

TEST(QRConstruct, ComposesWithFixedCluster) {
    auto fc = perturb_to_fixed_cluster(PwaMap::tent(), 3, rat(1, 10));
    auto c = construct_qr_covered(fc.map, 2, 1, rat(1, 10));
    expect_construction(fc.map, 2, 1, rat(1, 10), c);
}

TEST(QRVerify, DroppedIntervalReportsUncoveredPoint) {
    auto c = construct_qr_covered(PwaMap::tent(), 4, 1, rat(1, 10));
    QRCovering cov = c.cover;
    cov.intervals.erase(cov.intervals.begin());
    cov.certificates.erase(cov.certificates.begin());
    auto chk = verify_qr_covering(c.g, cov);
    EXPECT_FALSE(chk.ok);
    EXPECT_EQ(chk.condition, 1);
    ASSERT_TRUE(chk.uncovered_point.has_value());
    EXPECT_EQ(c.g.eval(*chk.uncovered_point), *chk.uncovered_point);
    EXPECT_TRUE(c.cover.intervals.front().contains(*chk.uncovered_point));
}

TEST(QRVerify, LengthAndShrinkingClauses) {
    auto c = construct_qr_covered(PwaMap::tent(), 4, 1, rat(1, 10));
    QRCovering wide = c.cover;
    wide.q = 1000;
    auto l = verify_qr_covering(c.g, wide);
    EXPECT_FALSE(l.ok);
    EXPECT_EQ(l.condition, 2);
    QRCovering bad = c.cover;
    bad.certificates[0].interval = bad.intervals[0];
    auto s = verify_qr_covering(c.g, bad);
    EXPECT_FALSE(s.ok);
    EXPECT_EQ(s.condition, 3);
    ASSERT_TRUE(s.index.has_value());
    EXPECT_EQ(*s.index, 0u);
}

TEST(QRConstruct, RejectsBadArguments) {
    EXPECT_THROW(construct_qr_covered(PwaMap::tent(), 0, 1, rat(1, 10)), DomainError);
    EXPECT_THROW(construct_qr_covered(PwaMap::tent(), 2, 0, rat(1, 10)), DomainError);
    EXPECT_THROW(construct_qr_covered(PwaMap::tent(), 2, 1, 0), DomainError);
}

TEST(Json, CoveringSerializes) {
    auto c = construct_qr_covered(PwaMap::tent(), 4, 1, rat(1, 10));
    Json j = to_json(c.cover);
    EXPECT_EQ(j.at("q"), 4);
    EXPECT_EQ(j.at("intervals").size(), c.cover.intervals.size());
    EXPECT_EQ(certificate_from_json(j.at("certificates").at(0)).period, c.cover.certificates[0].period);
}
