#include "lab/horseshoe.hpp"

#include <algorithm>

namespace lab {

Verdict<Horseshoe> verify_horseshoe(const PwaMap& f, const std::vector<Interval>& intervals) {
    if (intervals.size() < 2) throw DomainError("verify_horseshoe: need at least two intervals");
    for (std::size_t i = 0; i < intervals.size(); ++i) {
        const auto& I = intervals[i];
        require_in_unit(I, "verify_horseshoe");
        if (!I.closed_lo || !I.closed_hi || !(I.lo < I.hi))
            return Refusal{"interior", "interval " + std::to_string(i + 1) + " is not closed with nonempty interior"};
    }
    for (std::size_t i = 0; i < intervals.size(); ++i)
        for (std::size_t j = i + 1; j < intervals.size(); ++j)
            if (!disjoint(intervals[i], intervals[j]))
                return Refusal{"disjointness",
                               "intervals " + std::to_string(i + 1) + " and " + std::to_string(j + 1) + " meet"};
    for (std::size_t i = 0; i < intervals.size(); ++i) {
        Interval img = image_of_interval(f, intervals[i]).interior();
        for (std::size_t j = 0; j < intervals.size(); ++j)
            if (!subset(intervals[j], img))
                return Refusal{"covering", "interior of f(I_" + std::to_string(i + 1) + ") = " + to_string(img) +
                                               " misses I_" + std::to_string(j + 1)};
    }
    return Horseshoe{intervals, static_cast<int>(intervals.size())};
}

std::size_t word_index(const Word& w, int m) {
    std::size_t k = 0;
    for (int c : w) {
        if (c < 1 || c > m) throw DomainError("word letter " + std::to_string(c) + " outside 1.." + std::to_string(m));
        k = k * static_cast<std::size_t>(m) + static_cast<std::size_t>(c - 1);
    }
    return k;
}

Word index_word(std::size_t index, int n, int m) {
    Word w(static_cast<std::size_t>(n));
    for (int i = n - 1; i >= 0; --i) {
        w[static_cast<std::size_t>(i)] = static_cast<int>(index % static_cast<std::size_t>(m)) + 1;
        index /= static_cast<std::size_t>(m);
    }
    return w;
}

std::string word_key(const Word& w) {
    std::string s;
    for (std::size_t i = 0; i < w.size(); ++i) s += (i ? "," : "") + std::to_string(w[i]);
    return s;
}

const Interval& AtomTree::atom(const Word& w) const {
    if (w.empty() || static_cast<int>(w.size()) > depth())
        throw DomainError("atom: word length outside 1.." + std::to_string(depth()));
    return generations[w.size() - 1][word_index(w, m)];
}

AtomTree build_atoms(const PwaMap& f, const Horseshoe& hs, int n) {
    if (n < 1) throw DomainError("build_atoms: depth must be >= 1");
    AtomTree tree{hs.m, {hs.intervals}};
    for (int k = 1; k < n; ++k) {
        const auto& prev = tree.generations.back();
        std::vector<Interval> next;
        next.reserve(prev.size() * static_cast<std::size_t>(hs.m));
        for (std::size_t idx = 0; idx < prev.size() * static_cast<std::size_t>(hs.m); ++idx) {
            Word w = index_word(idx, k + 1, hs.m);
            const Interval& parent = prev[idx / static_cast<std::size_t>(hs.m)];
            Word tail(w.begin() + 1, w.end());
            const Interval& target = tree.atom(tail);
            bool found = false;
            for (const auto& c : preimage_components(f, parent, target)) {
                if (subset(c, parent.interior()) && image_of_interval(f, c) == target) {
                    next.push_back(c);
                    found = true;
                    break;
                }
            }
            if (!found) throw InternalError("build_atoms: no qualifying component for word " + word_key(w));
        }
        tree.generations.push_back(std::move(next));
    }
    return tree;
}

Verdict<bool> verify_atom_tree(const PwaMap& f, const AtomTree& tree) {
    if (tree.m < 2 || tree.generations.empty()) throw DomainError("verify_atom_tree: empty tree");
    std::size_t count = 1;
    for (int n = 1; n <= tree.depth(); ++n) {
        count *= static_cast<std::size_t>(tree.m);
        const auto& gen = tree.generations[static_cast<std::size_t>(n - 1)];
        if (gen.size() != count)
            return Refusal{"count", "generation " + std::to_string(n) + " has " + std::to_string(gen.size()) +
                                        " atoms"};
        std::vector<Interval> sorted = gen;
        std::sort(sorted.begin(), sorted.end(), [](const Interval& a, const Interval& b) { return a.lo < b.lo; });
        for (std::size_t i = 1; i < sorted.size(); ++i)
            if (!disjoint(sorted[i - 1], sorted[i]))
                return Refusal{"disjointness", "generation " + std::to_string(n) + " atoms overlap"};
        for (std::size_t idx = 0; idx < gen.size(); ++idx) {
            Word w = index_word(idx, n, tree.m);
            const Interval& A = gen[idx];
            Interval img = image_of_interval(f, A);
            if (n == 1) {
                for (const auto& B : gen)
                    if (!subset(B, img.interior()))
                        return Refusal{"image", "generation 1 atom " + word_key(w) + " does not cover"};
                continue;
            }
            Word parent(w.begin(), w.end() - 1), tail(w.begin() + 1, w.end());
            if (!subset(A, tree.atom(parent).interior()))
                return Refusal{"nesting", "atom " + word_key(w) + " not inside its parent"};
            if (!subset(tree.atom(tail), img))
                return Refusal{"image", "f(atom " + word_key(w) + ") misses atom " + word_key(tail)};
        }
    }
    return true;
}

Verdict<HyperbolicityCertificate> verify_c0_hyperbolic(const AtomTree& tree, const Rational& lambda, int n) {
    if (!(lambda > 0 && lambda < 1)) throw DomainError("verify_c0_hyperbolic: lambda must lie in (0,1)");
    if (n < 1 || n > tree.depth()) throw DomainError("verify_c0_hyperbolic: tree has fewer generations than n");
    HyperbolicityCertificate cert{lambda, n, {}};
    Rational power = 1;
    for (int k = 1; k <= n; ++k) {
        power *= lambda;
        Rational mx = 0;
        for (const auto& A : tree.generations[static_cast<std::size_t>(k - 1)]) mx = std::max(mx, A.length());
        if (!(mx < power))
            return Refusal{"generation " + std::to_string(k),
                           "max length " + to_string(mx) + " >= lambda^" + std::to_string(k) + " = " + to_string(power)};
        cert.max_lengths.push_back(mx);
    }
    return cert;
}

Rational bernoulli_weight(const AtomTree& tree, const Word& word) {
    if (static_cast<int>(word.size()) > tree.depth()) throw DomainError("bernoulli_weight: word longer than tree");
    word_index(word, tree.m);
    Rational w = 1;
    for (std::size_t i = 0; i < word.size(); ++i) w /= tree.m;
    return w;
}

Rational bernoulli_entropy_coefficient(const AtomTree& tree, int n) {
    if (n < 0 || n > tree.depth()) throw DomainError("bernoulli_entropy_coefficient: bad generation");
    if (n == 0) return 0;
    const auto& gen = tree.generations[static_cast<std::size_t>(n - 1)];
    Rational h = 0;
    for (std::size_t idx = 0; idx < gen.size(); ++idx) {
        Word w = index_word(idx, n, tree.m);
        Rational mu = bernoulli_weight(tree, w);
        // -log_m mu as an integer exponent
        Rational t = mu;
        int e = 0;
        while (t < 1) {
            t *= tree.m;
            ++e;
        }
        if (t != 1) throw InternalError("bernoulli weight is not a power of 1/m");
        h += mu * e;
        Rational children = 0;
        Word c = w;
        c.push_back(0);
        if (n < tree.depth()) {
            for (int a = 1; a <= tree.m; ++a) {
                c.back() = a;
                children += bernoulli_weight(tree, c);
            }
            if (children != mu) throw InternalError("bernoulli weights are not additive at " + word_key(w));
        }
    }
    return h;
}

HorseshoePerturbation build_horseshoe_perturbation(const PwaMap& f, const Rational& x0, const Rational& epsilon,
                                                   int m, long q, int depth) {
    if (x0 < 0 || x0 > 1 || f.eval(x0) != x0)
        throw DomainError("build_horseshoe_perturbation: x0 = " + to_string(x0) + " is not a fixed point");
    if (epsilon <= 0) throw DomainError("build_horseshoe_perturbation: epsilon must be positive");
    if (m < 2) throw DomainError("build_horseshoe_perturbation: m must be >= 2");
    if (q < 1) throw DomainError("build_horseshoe_perturbation: q must be >= 1");
    if (depth < 1) throw DomainError("build_horseshoe_perturbation: depth must be >= 1");

    Rational L = f.max_abs_slope();
    Rational delta = epsilon / 4;
    if (L > 0) delta = std::min(delta, Rational(epsilon / (3 * L)));
    Rational ell = std::min(Rational(1, static_cast<unsigned long>(q)), delta) / 2;
    Rational a = std::max(Rational(0), Rational(x0 - ell / 2));
    Rational b = std::min(Rational(1), Rational(x0 + ell / 2));
    Rational w = b - a;

    std::vector<Rational> xs;
    Rational lo = a + w / 4, hi = b - w / 4;
    for (int l = 0; l <= m; ++l) xs.push_back(lo + (hi - lo) * l / m);
    std::vector<Node> win;
    push_node(win, a, f.eval(a));
    for (int l = 0; l <= m; ++l) push_node(win, xs[static_cast<std::size_t>(l)], l % 2 == 0 ? a : b);
    push_node(win, b, f.eval(b));
    PwaMap g = splice(f, {Window{win}});
    if (!(sup_distance(g, f) < epsilon))
        throw InternalError("build_horseshoe_perturbation: sup distance bound violated");

    Interval V = Interval::closed(xs.front(), xs.back());
    auto comps = preimage_components(g, V, V);
    if (static_cast<int>(comps.size()) != m)
        throw InternalError("build_horseshoe_perturbation: expected " + std::to_string(m) + " components");
    std::vector<Rational> gaps;
    for (std::size_t i = 1; i < comps.size(); ++i) gaps.push_back(comps[i].lo - comps[i - 1].hi);
    std::vector<Interval> hsint;
    for (std::size_t i = 0; i < comps.size(); ++i) {
        Rational gmin = i == 0 ? gaps.front() : gaps[i - 1];
        if (i < gaps.size()) gmin = std::min(gmin, gaps[i]);
        hsint.push_back(Interval::closed(comps[i].lo - gmin / 4, comps[i].hi + gmin / 4));
    }
    auto hs = verify_horseshoe(g, hsint);
    if (!hs) throw InternalError("build_horseshoe_perturbation: planted horseshoe refused (" + hs.refusal().condition + ")");

    AtomTree tree = build_atoms(g, hs.value(), depth);
    auto ok = verify_atom_tree(g, tree);
    if (!ok) throw InternalError("build_horseshoe_perturbation: atom tree refused (" + ok.refusal().condition + ")");

    // lambda above both the first-generation length and every generation-to-generation ratio
    Rational c = 0, ratio = 0, prev = 0;
    for (int k = 0; k < depth; ++k) {
        Rational mx = 0;
        for (const auto& A : tree.generations[static_cast<std::size_t>(k)]) mx = std::max(mx, A.length());
        if (k == 0)
            c = mx;
        else
            ratio = std::max(ratio, Rational(mx / prev));
        prev = mx;
    }
    Rational lambda = (1 + std::max(c, ratio)) / 2;
    auto cert = verify_c0_hyperbolic(tree, lambda, depth);
    if (!cert) throw InternalError("build_horseshoe_perturbation: hyperbolicity refused");
    return {g, Interval::closed(a, b), xs, hs.value(), std::move(tree), cert.value()};
}

}  // namespace lab
