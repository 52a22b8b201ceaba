#pragma once

#include "lab/core.hpp"
#include "lab/interval.hpp"
#include "lab/pwa_map.hpp"

#include <vector>

namespace lab {

/// Finitely supported probability measure on [0,1]; atoms kept sorted by point.
class AtomicMeasure {
public:
    struct Atom {
        Rational point, weight;
    };

    explicit AtomicMeasure(std::vector<Atom> atoms);
    static AtomicMeasure dirac(const Rational& x);
    /// Uniform weight on the samples, coincident samples merged.
    static AtomicMeasure empirical(const std::vector<Rational>& samples);

    const std::vector<Atom>& atoms() const { return atoms_; }
    Rational mass_of(const Interval& I) const;
    bool operator==(const AtomicMeasure& o) const;

private:
    std::vector<Atom> atoms_;
};

/// (1/n) sum_{j<n} delta_{f^j(x)}.
AtomicMeasure birkhoff_empirical(const PwaMap& f, const Rational& x, int n);

Rational integrate(const PwaMap& psi, const AtomicMeasure& mu);

/// Test-function family for the weak* metric, 1-based. Psi_1(x) = x; then for
/// L = 1, 2, ... the 2^L + 1 nodal hats on the grid j/2^L, j = 0..2^L, left to
/// right (the j = 0 and j = 2^L members are the boundary half-hats).
struct TestFunctionId {
    int level;  // 0 for Psi_1
    long j;
};
TestFunctionId test_function_id(int i);
const PwaMap& test_function(int i);
/// Exact Lipschitz constant: 1 for Psi_1, 2^L for a level-L hat.
Rational test_function_lipschitz(int i);

struct WeakStarDistance {
    Rational truncated_value;
    Rational tail_bound;
};
WeakStarDistance weakstar_distance(const AtomicMeasure& mu, const AtomicMeasure& nu, int N);

struct Lemma1Parameters {
    int n;
    Rational delta;
    long q;
};
Lemma1Parameters lemma1_parameters(const Rational& epsilon);

/// Sum_{i<=N} 2^{-i} Lip(Psi_i): bound on the truncated distance between two
/// Dirac masses per unit of separation.
Rational dirac_lipschitz_bound(int N);

}  // namespace lab
