#include "lab/cascade.hpp"
#include "lab/json_io.hpp"
#include "support.hpp"

#include <gtest/gtest.h>

using namespace lab;

namespace {

CascadeAtoms default_cascade(int N) {
    return build_cascade_map(Interval::open(rat(1, 8), rat(7, 8)), Interval::open(rat(1, 16), rat(15, 16)),
                             Interval::open(rat(1, 32), rat(31, 32)), N);
}

const CascadeAtoms& depth3() {
    static const CascadeAtoms ca = default_cascade(3);
    return ca;
}

}  // namespace

TEST(TriMatrix, ProjectAndShiftSmallCases) {
    TriMatrix t = TriMatrix::parse("10/1");
    EXPECT_EQ(t.rows(), 2);
    EXPECT_EQ(tri_project(t).key(), "1");
    EXPECT_EQ(tri_shift(t).key(), "1");
    EXPECT_EQ(tri_shift(TriMatrix(4)), TriMatrix(3));
    TriMatrix u = TriMatrix::parse("101/01/1");
    EXPECT_EQ(tri_shift(tri_shift(u)).key(), "1");
    EXPECT_EQ(tri_shift(u).key(), "01/1");
    EXPECT_EQ(tri_project(u).key(), "10/0");
    EXPECT_THROW(tri_shift(TriMatrix(1)), DomainError);
    EXPECT_THROW(TriMatrix::parse("10/11"), ParseError);
    EXPECT_THROW(TriMatrix::parse("1x"), ParseError);
}

TEST(TriMatrix, EmbedIsASectionOfProject) {
    labtest::Rng rng(71);
    for (int n = 1; n <= 6; ++n) {
        EXPECT_EQ(TriMatrix::entries(n + 1) - TriMatrix::entries(n), static_cast<std::size_t>(n + 1));
        for (int t = 0; t < 20; ++t) {
            TriMatrix m = TriMatrix::from_code(n, rng.below(1L << TriMatrix::entries(n)));
            std::vector<int> diag;
            for (int i = 0; i <= n; ++i) diag.push_back(static_cast<int>(rng.below(2)));
            TriMatrix e = tri_embed(m, diag);
            EXPECT_EQ(tri_project(e), m);
            for (int i = 1; i <= n + 1; ++i) EXPECT_EQ(e.at(i, n + 2 - i), diag[static_cast<std::size_t>(i - 1)]);
            EXPECT_EQ(TriMatrix::parse(e.key()), e);
            EXPECT_EQ(TriMatrix::from_code(n + 1, e.code()), e);
            // shift then project equals project then shift
            if (n >= 2) EXPECT_EQ(tri_project(tri_shift(e)), tri_shift(tri_project(e)));
        }
    }
}

TEST(Cascade, AtomCounts) {
    const auto& ca = depth3();
    std::size_t want[] = {2, 8, 64};
    for (int n = 1; n <= 3; ++n) EXPECT_EQ(ca.atoms[static_cast<std::size_t>(n - 1)].size(), want[n - 1]);
    EXPECT_EQ(ca.maps.size(), 3u);
    EXPECT_EQ(ca.stage_bounds.size(), 2u);
}

TEST(Cascade, DepthOneIsATwoHorseshoe) {
    CascadeAtoms ca = default_cascade(1);
    EXPECT_TRUE(verify_cascade(ca).ok);
    for (const auto& A : ca.atoms[0]) {
        Interval img = image_of_interval(ca.map(), A).interior();
        EXPECT_TRUE(subset(ca.atoms[0][0], img));
        EXPECT_TRUE(subset(ca.atoms[0][1], img));
    }
}

TEST(Cascade, StageBoundsAndSlopes) {
    const auto& ca = depth3();
    EXPECT_LT(sup_distance(ca.maps[2], ca.maps[1]), rat(1, 2));
    for (int n = 1; n < 3; ++n) {
        EXPECT_EQ(ca.stage_bounds[static_cast<std::size_t>(n - 1)],
                  sup_distance(ca.maps[static_cast<std::size_t>(n)], ca.maps[static_cast<std::size_t>(n - 1)]));
        EXPECT_LT(sup_distance(ca.map(), ca.maps[static_cast<std::size_t>(n - 1)]), pow2(2 - n));
    }
    for (int n = 1; n <= 3; ++n)
        for (const auto& A : ca.atoms[static_cast<std::size_t>(n - 1)]) {
            EXPECT_LT(A.length(), pow2(-n));
            Rational s = abs(ca.map().eval(A.hi) - ca.map().eval(A.lo)) / A.length();
            EXPECT_GT(s, pow2(n));
        }
}

TEST(Cascade, AtomsSatisfyTheNestingAndShiftConditions) {
    // rechecked here directly from the atom semantics, independent of verify_cascade
    const auto& ca = depth3();
    const PwaMap& f = ca.map();
    for (int n = 2; n <= 3; ++n)
        for (std::uint64_t c = 0; c < ca.atoms[static_cast<std::size_t>(n - 1)].size(); ++c) {
            TriMatrix t = TriMatrix::from_code(n, c);
            const Interval& A = ca.atom(t);
            EXPECT_TRUE(subset(A, ca.atom(tri_project(t)).interior()));
            Interval img = image_of_interval(f, A);
            EXPECT_TRUE(subset(ca.atom(tri_shift(t)), img.interior())) << t.key();
            if (n >= 3) EXPECT_TRUE(subset(img, ca.atom(tri_project(tri_shift(t))).interior())) << t.key();
        }
}

TEST(Cascade, VerifierAcceptsBuilderOutput) {
    for (int N = 1; N <= 3; ++N) {
        auto chk = verify_cascade(default_cascade(N));
        EXPECT_TRUE(chk.ok) << chk.condition << " " << chk.detail;
    }
}

TEST(Cascade, WidenedAtomIsReported) {
    CascadeAtoms ca = depth3();
    TriMatrix t = TriMatrix::parse("01/1");
    const Interval& parent = ca.atom(tri_project(t));
    Interval& A = ca.atoms[1][t.code()];
    A.hi = parent.hi + rat(1, 1000);
    auto chk = verify_cascade(ca);
    EXPECT_FALSE(chk.ok);
    EXPECT_EQ(chk.generation, 2);
    EXPECT_EQ(chk.matrix, "01/1");
}

TEST(Cascade, TamperedMapIsReported) {
    CascadeAtoms ca = depth3();
    ca.maps.back() = ca.maps[1];
    EXPECT_FALSE(verify_cascade(ca).ok);
}

TEST(Cascade, MatchesFixtures) {
    for (int N = 1; N <= 3; ++N) {
        Json fx = read_json_file(std::string(LAB_FIXTURE_DIR) + "/cascade_depth" + std::to_string(N) + ".json");
        const Json& stored = fx.contains("result") ? fx.at("result") : fx;
        EXPECT_EQ(to_json(default_cascade(N)), stored) << "depth " << N;
        CascadeAtoms back = cascade_from_json(stored);
        EXPECT_TRUE(verify_cascade(back).ok);
    }
}

TEST(Itinerary, EndpointsAndEscape) {
    const auto& ca = depth3();
    for (std::uint64_t c = 0; c < 64; c += 7) {
        TriMatrix t = TriMatrix::from_code(3, c);
        auto it = itinerary(ca, ca.atom(t).lo, 3);
        ASSERT_TRUE(it.ok());
        EXPECT_EQ(it.value(), t);
    }
    auto out = itinerary(ca, rat(1, 100), 1);
    ASSERT_FALSE(out.ok());
    EXPECT_EQ(out.refusal().condition, "escape");
    EXPECT_THROW(itinerary(ca, rat(1, 2), 4), DomainError);
}

TEST(Itinerary, ProjectionAndShiftCompatibility) {
    const auto& ca = depth3();
    labtest::Rng rng(72);
    int shifted = 0;
    for (int k = 0; k < 100; ++k) {
        TriMatrix t = TriMatrix::from_code(3, rng.below(64));
        const Interval& A = ca.atom(t);
        Rational x = A.lo + A.length() * rng.unit(97);
        auto it3 = itinerary(ca, x, 3);
        ASSERT_TRUE(it3.ok());
        EXPECT_EQ(it3.value(), t);
        auto it2 = itinerary(ca, x, 2);
        ASSERT_TRUE(it2.ok());
        EXPECT_EQ(tri_project(it3.value()), it2.value());
        auto fx = itinerary(ca, ca.map().eval(x), 2);
        if (fx.ok()) {
            EXPECT_EQ(fx.value(), tri_shift(t));
            ++shifted;
        }
    }
    EXPECT_GT(shifted, 0);
}

TEST(Embed, PlantsTheCascadeNearAFixedPoint) {
    auto e = embed_cascade(PwaMap::tent(), rat(2, 3), rat(1, 4), 2);
    EXPECT_LT(e.sup_distance, rat(1, 4));
    EXPECT_EQ(e.sup_distance, sup_distance(e.g, PwaMap::tent()));
    EXPECT_TRUE(verify_cascade(e.cascade).ok);
    for (int k = 0; k <= 100; ++k) {
        Rational x = rat(k, 100);
        if (abs(x - rat(2, 3)) >= e.delta) EXPECT_EQ(e.g.eval(x), PwaMap::tent().eval(x));
    }
    EXPECT_THROW(embed_cascade(PwaMap::tent(), rat(1, 2), rat(1, 4), 2), DomainError);
}
