#include "lab/json_io.hpp"
#include "lab/measures.hpp"
#include "support.hpp"

#include <gtest/gtest.h>

using namespace lab;

namespace {

AtomicMeasure random_measure(labtest::Rng& rng, int max_atoms = 5) {
    int n = 1 + static_cast<int>(rng.below(max_atoms));
    std::vector<Rational> pts;
    for (int k = 0; k < n; ++k) pts.push_back(rng.unit(64));
    return AtomicMeasure::empirical(pts);
}

}  // namespace

TEST(AtomicMeasure, Invariants) {
    EXPECT_THROW(AtomicMeasure({{rat(1, 2), rat(1, 2)}}), DomainError);
    EXPECT_THROW(AtomicMeasure({{rat(1, 2), rat(1, 2)}, {rat(1, 2), rat(1, 2)}}), DomainError);
    EXPECT_THROW(AtomicMeasure({{rat(3, 2), 1}}), DomainError);
    auto mu = AtomicMeasure::empirical({rat(1, 3), rat(1, 3), rat(1, 5)});
    ASSERT_EQ(mu.atoms().size(), 2u);
    EXPECT_EQ(mu.atoms()[0].point, rat(1, 5));
    EXPECT_EQ(mu.atoms()[1].weight, rat(2, 3));
}

TEST(Birkhoff, Examples) {
    EXPECT_EQ(birkhoff_empirical(PwaMap::identity(), rat(1, 3), 7), AtomicMeasure::dirac(rat(1, 3)));
    EXPECT_EQ(birkhoff_empirical(PwaMap::tent(), rat(2, 5), 4),
              AtomicMeasure({{rat(2, 5), rat(1, 2)}, {rat(4, 5), rat(1, 2)}}));
    EXPECT_EQ(birkhoff_empirical(PwaMap::tent(), rat(2, 3), 9), AtomicMeasure::dirac(rat(2, 3)));
}

TEST(Birkhoff, InvarianceDefectIsTelescoping) {
    labtest::Rng rng(21);
    for (int t = 0; t < 20; ++t) {
        PwaMap f = labtest::random_map(rng);
        Rational x = rng.unit(97);
        int n = 1 + static_cast<int>(rng.below(40));
        AtomicMeasure mu = birkhoff_empirical(f, x, n);
        Rational total = 0;
        for (const auto& a : mu.atoms()) total += a.weight;
        EXPECT_EQ(total, 1);
        for (int i = 1; i <= 9; ++i) {
            const PwaMap& psi = test_function(i);
            PwaMap psif = compose(psi, f);
            EXPECT_LE(abs(integrate(psif, mu) - integrate(psi, mu)), Rational(2) / n);
        }
    }
}

TEST(TestFunctions, MatchGoldenFile) {
    Json golden = read_json_file(std::string(LAB_FIXTURE_DIR) + "/test_functions.json");
    const auto& fs = golden.at("functions");
    ASSERT_EQ(fs.size(), 20u);
    for (const auto& g : fs) {
        int i = g.at("index").get<int>();
        EXPECT_EQ(test_function(i), pwa_from_json(g)) << "function " << i;
    }
}

TEST(TestFunctions, BoundedAndLipschitz) {
    for (int i = 1; i <= 40; ++i) {
        const PwaMap& psi = test_function(i);
        for (const auto& v : psi.values()) {
            EXPECT_GE(v, 0);
            EXPECT_LE(v, 1);
        }
        EXPECT_LE(psi.max_abs_slope(), test_function_lipschitz(i));
    }
    EXPECT_EQ(test_function_id(2).level, 1);
    EXPECT_EQ(test_function_id(4).j, 2);
    EXPECT_EQ(test_function_id(5).level, 2);
}

TEST(Integrate, Examples) {
    auto mu = AtomicMeasure({{rat(1, 4), rat(1, 2)}, {rat(3, 4), rat(1, 2)}});
    EXPECT_EQ(integrate(PwaMap::constant(1), mu), 1);
    EXPECT_EQ(integrate(PwaMap::identity(), mu), rat(1, 2));
    PwaMap hat = PwaMap::from_nodes({{0, 0}, {rat(1, 4), 0}, {rat(1, 2), 1}, {rat(3, 4), 0}, {1, 0}});
    EXPECT_EQ(integrate(hat, AtomicMeasure::dirac(rat(3, 8))), rat(1, 2));
}

TEST(WeakStar, Examples) {
    auto mu = AtomicMeasure::dirac(rat(1, 3));
    EXPECT_EQ(weakstar_distance(mu, mu, 12).truncated_value, 0);
    auto d = weakstar_distance(AtomicMeasure::dirac(0), AtomicMeasure::dirac(1), 1);
    EXPECT_EQ(d.truncated_value, rat(1, 2));
    EXPECT_EQ(d.tail_bound, rat(1, 2));
}

TEST(WeakStar, DiracDistanceShrinksWithSeparation) {
    Rational x = rat(1, 3);
    for (int N : {3, 8, 12}) {
        Rational prev = 10;
        for (int k = 1; k <= 12; ++k) {
            Rational d = weakstar_distance(AtomicMeasure::dirac(x), AtomicMeasure::dirac(x + pow2(-k)), N).truncated_value;
            EXPECT_LE(d, prev);
            EXPECT_LE(d, dirac_lipschitz_bound(N) * pow2(-k));
            prev = d;
        }
    }
}

TEST(WeakStar, MetricPropertiesAndTruncationMonotone) {
    labtest::Rng rng(22);
    for (int t = 0; t < 30; ++t) {
        auto a = random_measure(rng), b = random_measure(rng), c = random_measure(rng);
        const int N = 10;
        Rational ab = weakstar_distance(a, b, N).truncated_value;
        EXPECT_EQ(ab, weakstar_distance(b, a, N).truncated_value);
        EXPECT_LE(ab, weakstar_distance(a, c, N).truncated_value + weakstar_distance(c, b, N).truncated_value);
        Rational prev = 0, prev_upper = 10;
        for (int n = 1; n <= N; ++n) {
            auto d = weakstar_distance(a, b, n);
            EXPECT_GE(d.truncated_value, prev);
            EXPECT_LE(d.truncated_value + d.tail_bound, prev_upper);
            prev = d.truncated_value;
            prev_upper = d.truncated_value + d.tail_bound;
        }
    }
}

TEST(Lemma1, ParameterExamples) {
    EXPECT_EQ(lemma1_parameters(2).n, 1);
    EXPECT_EQ(lemma1_parameters(rat(1, 8)).n, 5);
    for (auto eps : {rat(1, 2), rat(1, 8), rat(1, 64)}) {
        auto p = lemma1_parameters(eps);
        EXPECT_LT(Rational(1, static_cast<unsigned long>(p.q)), eps / 4);
        EXPECT_LT(pow2(-p.n), eps / 2);
        EXPECT_GE(pow2(-(p.n - 1)), eps / 2);
    }
    EXPECT_THROW(lemma1_parameters(0), DomainError);
}

TEST(Json, MeasureRoundTrip) {
    auto mu = AtomicMeasure({{rat(1, 3), rat(1, 2)}, {rat(2, 3), rat(1, 2)}});
    Json j = to_json(mu);
    EXPECT_EQ(j.dump(), R"({"atoms":[["1/3","1/2"],["2/3","1/2"]]})");
    EXPECT_EQ(measure_from_json(j), mu);
}
