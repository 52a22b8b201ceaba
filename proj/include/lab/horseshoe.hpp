#pragma once

#include "lab/core.hpp"
#include "lab/interval.hpp"
#include "lab/pwa_map.hpp"

#include <string>
#include <vector>

namespace lab {

struct Horseshoe {
    std::vector<Interval> intervals;
    int m = 0;
};

/// Pairwise disjoint closed intervals with nonempty interiors, each image
/// covering all of them inside its interior.
Verdict<Horseshoe> verify_horseshoe(const PwaMap& f, const std::vector<Interval>& intervals);

using Word = std::vector<int>;  // letters 1..m

/// generations[n-1] lists the m^n atoms of generation n in lexicographic word order.
struct AtomTree {
    int m = 0;
    std::vector<std::vector<Interval>> generations;

    int depth() const { return static_cast<int>(generations.size()); }
    const Interval& atom(const Word& w) const;
};

std::size_t word_index(const Word& w, int m);
Word index_word(std::size_t index, int n, int m);
std::string word_key(const Word& w);  // "1,2,1"

/// Generation k+1 atom for word (i_1..i_{k+1}) is the leftmost component C of
/// atom(i_1..i_k) intersected with f^-1(atom(i_2..i_{k+1})) that lies in the
/// interior of its parent and maps onto that atom.
AtomTree build_atoms(const PwaMap& f, const Horseshoe& hs, int n);
/// Counts, disjointness, nesting and the image condition, rechecked exactly.
Verdict<bool> verify_atom_tree(const PwaMap& f, const AtomTree& tree);

struct HyperbolicityCertificate {
    Rational lambda;
    int depth = 0;
    std::vector<Rational> max_lengths;  // generation 1..depth
};

Verdict<HyperbolicityCertificate> verify_c0_hyperbolic(const AtomTree& tree, const Rational& lambda, int n);

/// mu(atom) = 1/m^n for a word of length n; the empty word gives 1.
Rational bernoulli_weight(const AtomTree& tree, const Word& word);
/// -sum mu(A) log mu(A) over generation n, as the coefficient of log m.
/// Also checks that children weights add up to their parent's.
Rational bernoulli_entropy_coefficient(const AtomTree& tree, int n);

struct HorseshoePerturbation {
    PwaMap g;
    Interval J;                   // support of the change
    std::vector<Rational> nodes;  // x_0 < ... < x_m
    Horseshoe hs;
    AtomTree tree;
    HyperbolicityCertificate cert;
};

HorseshoePerturbation build_horseshoe_perturbation(const PwaMap& f, const Rational& x0, const Rational& epsilon,
                                                   int m, long q, int depth = 4);

}  // namespace lab
