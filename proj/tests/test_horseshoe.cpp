#include "lab/horseshoe.hpp"
#include "lab/json_io.hpp"
#include "support.hpp"

#include <gtest/gtest.h>

using namespace lab;

namespace {

Horseshoe d_horseshoe() {
    return verify_horseshoe(PwaMap::double_tent(),
                            {Interval::closed(rat(5, 16), rat(7, 16)), Interval::closed(rat(9, 16), rat(11, 16))})
        .value();
}

// D is injective on each I_i, so the atom of a word is the image of the tail atom
// under the inverse branch: y -> (2 - y)/4 on I_1, y -> (y + 2)/4 on I_2
Interval oracle_atom(const Word& w) {
    const Interval base[2] = {Interval::closed(rat(5, 16), rat(7, 16)), Interval::closed(rat(9, 16), rat(11, 16))};
    Interval A = base[w.back() - 1];
    for (std::size_t k = w.size() - 1; k-- > 0;) {
        Rational u = A.lo, v = A.hi;
        if (w[k] == 1)
            A = Interval::closed((2 - v) / 4, (2 - u) / 4);
        else
            A = Interval::closed((u + 2) / 4, (v + 2) / 4);
    }
    return A;
}

}  // namespace

TEST(VerifyHorseshoe, DoubleTent) {
    Horseshoe hs = d_horseshoe();
    EXPECT_EQ(hs.m, 2);
    for (const auto& I : hs.intervals)
        EXPECT_EQ(image_of_interval(PwaMap::double_tent(), I), Interval::closed(rat(1, 4), rat(3, 4)));
}

TEST(VerifyHorseshoe, Refusals) {
    auto id = verify_horseshoe(PwaMap::identity(),
                               {Interval::closed(rat(1, 8), rat(1, 4)), Interval::closed(rat(1, 2), rat(3, 4))});
    ASSERT_FALSE(id.ok());
    EXPECT_EQ(id.refusal().condition, "covering");
    auto ov = verify_horseshoe(PwaMap::double_tent(),
                               {Interval::closed(rat(5, 16), rat(9, 16)), Interval::closed(rat(1, 2), rat(11, 16))});
    ASSERT_FALSE(ov.ok());
    EXPECT_EQ(ov.refusal().condition, "disjointness");
    auto deg = verify_horseshoe(PwaMap::double_tent(),
                                {Interval::point(rat(5, 16)), Interval::closed(rat(9, 16), rat(11, 16))});
    ASSERT_FALSE(deg.ok());
    EXPECT_EQ(deg.refusal().condition, "interior");
    EXPECT_THROW(verify_horseshoe(PwaMap::double_tent(), {Interval::closed(0, 1)}), DomainError);
}

TEST(Atoms, DoubleTentExample) {
    AtomTree tree = build_atoms(PwaMap::double_tent(), d_horseshoe(), 3);
    EXPECT_EQ(tree.atom({1, 1}), Interval::closed(rat(25, 64), rat(27, 64)));
    EXPECT_EQ(tree.generations[1].size(), 4u);
    EXPECT_EQ(tree.generations[2].size(), 8u);
    EXPECT_TRUE(verify_atom_tree(PwaMap::double_tent(), tree).ok());
}

TEST(Atoms, MatchInverseBranchOracle) {
    const int depth = 5;
    AtomTree tree = build_atoms(PwaMap::double_tent(), d_horseshoe(), depth);
    for (int n = 1; n <= depth; ++n) {
        const auto& gen = tree.generations[static_cast<std::size_t>(n - 1)];
        ASSERT_EQ(gen.size(), std::size_t{1} << n);
        for (std::size_t k = 0; k < gen.size(); ++k) {
            Word w = index_word(k, n, 2);
            EXPECT_EQ(gen[k], oracle_atom(w)) << word_key(w);
            EXPECT_EQ(gen[k].length(), rat(1, 8) * pow2(-2 * (n - 1)));
            if (n > 1) {
                Word parent(w.begin(), w.end() - 1);
                EXPECT_TRUE(subset(gen[k], tree.atom(parent)));
            }
        }
    }
}

TEST(Atoms, WordIndexRoundTrip) {
    for (int m : {2, 3})
        for (int n = 1; n <= 4; ++n) {
            std::size_t total = 1;
            for (int k = 0; k < n; ++k) total *= static_cast<std::size_t>(m);
            for (std::size_t k = 0; k < total; ++k) EXPECT_EQ(word_index(index_word(k, n, m), m), k);
        }
    EXPECT_EQ(word_key({1, 2, 1}), "1,2,1");
    EXPECT_THROW(word_index({0, 1}, 2), DomainError);
}

TEST(Atoms, TamperedTreeIsRefused) {
    AtomTree tree = build_atoms(PwaMap::double_tent(), d_horseshoe(), 3);
    AtomTree moved = tree;
    moved.generations[2][3] = moved.generations[1][0];
    EXPECT_FALSE(verify_atom_tree(PwaMap::double_tent(), moved).ok());
    AtomTree short_gen = tree;
    short_gen.generations[1].pop_back();
    EXPECT_EQ(verify_atom_tree(PwaMap::double_tent(), short_gen).refusal().condition, "count");
}

TEST(Hyperbolic, DoubleTent) {
    AtomTree tree = build_atoms(PwaMap::double_tent(), d_horseshoe(), 6);
    auto c = verify_c0_hyperbolic(tree, rat(1, 2), 6);
    ASSERT_TRUE(c.ok());
    for (int k = 1; k <= 6; ++k)
        EXPECT_EQ(c.value().max_lengths[static_cast<std::size_t>(k - 1)], rat(1, 8) * pow2(-2 * (k - 1)));
    auto tight = verify_c0_hyperbolic(tree, rat(1, 8), 6);
    ASSERT_FALSE(tight.ok());
    EXPECT_EQ(tight.refusal().condition, "generation 1");
    EXPECT_THROW(verify_c0_hyperbolic(tree, 1, 3), DomainError);
    EXPECT_THROW(verify_c0_hyperbolic(tree, rat(1, 2), 7), DomainError);
}

TEST(Bernoulli, WeightsAndEntropy) {
    AtomTree tree = build_atoms(PwaMap::double_tent(), d_horseshoe(), 4);
    EXPECT_EQ(bernoulli_weight(tree, {1, 2, 1}), rat(1, 8));
    EXPECT_EQ(bernoulli_weight(tree, {}), 1);
    for (int n = 0; n <= 4; ++n) EXPECT_EQ(bernoulli_entropy_coefficient(tree, n), n);
}

TEST(Perturbation, IdentityExampleM2AndM3) {
    for (int m : {2, 3}) {
        auto hp = build_horseshoe_perturbation(PwaMap::identity(), rat(1, 2), rat(1, 4), m, 1, 4);
        EXPECT_LT(sup_distance(hp.g, PwaMap::identity()), rat(1, 4));
        ASSERT_EQ(hp.hs.m, m);
        for (const auto& I : hp.hs.intervals) EXPECT_TRUE(subset(I, Interval::open(rat(1, 4), rat(3, 4))));
        EXPECT_TRUE(verify_horseshoe(hp.g, hp.hs.intervals).ok());
        EXPECT_TRUE(verify_atom_tree(hp.g, hp.tree).ok());
        for (int n = 1; n <= 4; ++n) {
            std::size_t want = 1;
            for (int k = 0; k < n; ++k) want *= static_cast<std::size_t>(m);
            EXPECT_EQ(hp.tree.generations[static_cast<std::size_t>(n - 1)].size(), want);
            EXPECT_EQ(bernoulli_entropy_coefficient(hp.tree, n), n);
        }
        for (std::size_t l = 0; l < hp.nodes.size(); ++l)
            EXPECT_EQ(hp.g.eval(hp.nodes[l]), l % 2 == 0 ? hp.J.lo : hp.J.hi);
    }
}

TEST(Perturbation, LocalityOnRandomMaps) {
    labtest::Rng rng(61);
    int done = 0;
    for (int t = 0; t < 40 && done < 10; ++t) {
        PwaMap f = labtest::random_map(rng, 4);
        auto fp = fixed_points_of_iterate(f, 1);
        Rational x0 = fp[rng.below(static_cast<long>(fp.size()))].set.lo;
        Rational eps = rat(1, 2 + rng.below(20));
        int m = 2 + static_cast<int>(rng.below(2));
        long q = 1 + rng.below(8);
        auto hp = build_horseshoe_perturbation(f, x0, eps, m, q, 3);
        ++done;
        EXPECT_LT(sup_distance(hp.g, f), eps);
        EXPECT_TRUE(hp.J.contains(x0));
        EXPECT_LT(hp.J.length(), Rational(1, static_cast<unsigned long>(q)));
        for (int k = 0; k <= 200; ++k) {
            Rational x = rat(k, 200);
            if (!Interval::open(hp.J.lo, hp.J.hi).contains(x)) EXPECT_EQ(hp.g.eval(x), f.eval(x));
        }
        for (const auto& b : f.breakpoints())
            if (!Interval::open(hp.J.lo, hp.J.hi).contains(b)) EXPECT_EQ(hp.g.eval(b), f.eval(b));
        EXPECT_TRUE(verify_c0_hyperbolic(hp.tree, hp.cert.lambda, 3).ok());
    }
    EXPECT_EQ(done, 10);
}

TEST(Perturbation, RejectsNonFixedPoint) {
    EXPECT_THROW(build_horseshoe_perturbation(PwaMap::tent(), rat(1, 2), rat(1, 4), 2, 1), DomainError);
}

TEST(Json, AtomTreeKeysAreWords) {
    AtomTree tree = build_atoms(PwaMap::double_tent(), d_horseshoe(), 2);
    Json j = to_json(tree);
    EXPECT_EQ(j.at("generations").at(1).size(), 4u);
    EXPECT_EQ(interval_from_json(j.at("generations").at(1).at("1,1")), Interval::closed(rat(25, 64), rat(27, 64)));
}
