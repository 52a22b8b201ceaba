#include "lab/measures.hpp"

#include <algorithm>
#include <deque>
#include <mutex>

namespace lab {

AtomicMeasure::AtomicMeasure(std::vector<Atom> atoms) : atoms_(std::move(atoms)) {
    if (atoms_.empty()) throw DomainError("AtomicMeasure needs at least one atom");
    std::sort(atoms_.begin(), atoms_.end(), [](const Atom& a, const Atom& b) { return a.point < b.point; });
    Rational total = 0;
    for (std::size_t k = 0; k < atoms_.size(); ++k) {
        const auto& a = atoms_[k];
        if (a.point < 0 || a.point > 1) throw DomainError("atom " + to_string(a.point) + " outside [0,1]");
        if (a.weight <= 0) throw DomainError("atom weight must be positive");
        if (k > 0 && atoms_[k - 1].point == a.point) throw DomainError("duplicate atom " + to_string(a.point));
        total += a.weight;
    }
    if (total != 1) throw DomainError("atom weights sum to " + to_string(total) + ", not 1");
}

AtomicMeasure AtomicMeasure::dirac(const Rational& x) { return AtomicMeasure({{x, 1}}); }

AtomicMeasure AtomicMeasure::empirical(const std::vector<Rational>& samples) {
    if (samples.empty()) throw DomainError("empirical measure of no samples");
    std::vector<Rational> s = samples;
    std::sort(s.begin(), s.end());
    Rational w(1, static_cast<unsigned long>(s.size()));
    w.canonicalize();
    std::vector<Atom> atoms;
    for (auto& x : s) {
        if (!atoms.empty() && atoms.back().point == x)
            atoms.back().weight += w;
        else
            atoms.push_back({x, w});
    }
    return AtomicMeasure(std::move(atoms));
}

Rational AtomicMeasure::mass_of(const Interval& I) const {
    Rational m = 0;
    for (const auto& a : atoms_)
        if (I.contains(a.point)) m += a.weight;
    return m;
}

bool AtomicMeasure::operator==(const AtomicMeasure& o) const {
    if (atoms_.size() != o.atoms_.size()) return false;
    for (std::size_t k = 0; k < atoms_.size(); ++k)
        if (atoms_[k].point != o.atoms_[k].point || atoms_[k].weight != o.atoms_[k].weight) return false;
    return true;
}

AtomicMeasure birkhoff_empirical(const PwaMap& f, const Rational& x, int n) {
    if (n < 1) throw DomainError("birkhoff_empirical: n must be >= 1");
    std::vector<Rational> orbit;
    orbit.reserve(static_cast<std::size_t>(n));
    Rational y = x;
    for (int j = 0; j < n; ++j) {
        orbit.push_back(y);
        if (j + 1 < n) y = f.eval(y);
    }
    return AtomicMeasure::empirical(orbit);
}

Rational integrate(const PwaMap& psi, const AtomicMeasure& mu) {
    Rational s = 0;
    for (const auto& a : mu.atoms()) s += a.weight * psi.eval(a.point);
    return s;
}

TestFunctionId test_function_id(int i) {
    if (i < 1) throw DomainError("test functions are indexed from 1");
    if (i == 1) return {0, 0};
    long k = i - 2;
    int L = 1;
    while (k >= (1L << L) + 1) {
        k -= (1L << L) + 1;
        ++L;
    }
    return {L, k};
}

namespace {
PwaMap build_test_function(int i) {
    auto id = test_function_id(i);
    if (id.level == 0) return PwaMap::identity();
    Rational h = pow2(-id.level);
    Rational c = Rational(id.j) * h;
    std::vector<Node> nodes;
    push_node(nodes, 0, c == 0 ? 1 : 0);
    if (c > 0) {
        push_node(nodes, c - h, 0);
        push_node(nodes, c, 1);
    }
    if (c < 1) {
        push_node(nodes, c + h, 0);
        push_node(nodes, 1, 0);
    }
    return PwaMap::from_nodes(nodes);
}
}  // namespace

const PwaMap& test_function(int i) {
    static std::mutex m;
    static std::deque<PwaMap> cache;  // stable references
    std::lock_guard<std::mutex> lock(m);
    while (static_cast<int>(cache.size()) < i) cache.push_back(build_test_function(static_cast<int>(cache.size()) + 1));
    if (i < 1) throw DomainError("test functions are indexed from 1");
    return cache[static_cast<std::size_t>(i - 1)];
}

Rational test_function_lipschitz(int i) {
    auto id = test_function_id(i);
    return id.level == 0 ? Rational(1) : pow2(id.level);
}

WeakStarDistance weakstar_distance(const AtomicMeasure& mu, const AtomicMeasure& nu, int N) {
    if (N < 1) throw DomainError("weakstar_distance: N must be >= 1");
    Rational s = 0;
    for (int i = 1; i <= N; ++i) {
        const PwaMap& psi = test_function(i);
        s += pow2(-i) * abs(integrate(psi, mu) - integrate(psi, nu));
    }
    return {s, pow2(-N)};
}

Lemma1Parameters lemma1_parameters(const Rational& epsilon) {
    if (epsilon <= 0) throw DomainError("lemma1_parameters: epsilon must be positive");
    if (epsilon > 2) throw DomainError("lemma1_parameters: epsilon must be at most 2");
    int n = 1;
    while (!(pow2(-n) < epsilon / 2)) ++n;
    Rational lip = 1;
    for (int i = 1; i <= n; ++i) lip = std::max(lip, test_function_lipschitz(i));
    Rational delta = epsilon / (4 * lip);
    Rational bound = std::min(delta, Rational(epsilon / 4));
    long q = next_int_above(1 / bound);
    return {n, delta, q};
}

Rational dirac_lipschitz_bound(int N) {
    Rational s = 0;
    for (int i = 1; i <= N; ++i) s += pow2(-i) * test_function_lipschitz(i);
    return s;
}

}  // namespace lab
