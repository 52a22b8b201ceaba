#include "lab/pseudo_physical.hpp"

#include <algorithm>

namespace lab {

BasinEstimate basin_estimate(const PwaMap& f, const AtomicMeasure& mu, const Rational& epsilon, long grid_size,
                             int n, int N) {
    if (grid_size < 2) throw DomainError("basin_estimate: grid_size must be >= 2");
    if (n < 1) throw DomainError("basin_estimate: horizon must be >= 1");
    if (N < 1) throw DomainError("basin_estimate: truncation must be >= 1");
    long hits = 0;
    for (long i = 0; i < grid_size; ++i) {
        Rational x(2 * i + 1, static_cast<unsigned long>(2 * grid_size));
        x.canonicalize();
        auto d = weakstar_distance(birkhoff_empirical(f, x, n), mu, N);
        if (d.truncated_value + d.tail_bound < epsilon) ++hits;
    }
    Rational frac(hits, static_cast<unsigned long>(grid_size));
    frac.canonicalize();
    return {mu, epsilon, grid_size, n, N, hits, frac};
}

namespace {

// Length r of the cycle carried by nu; throws unless nu is an equal-weight periodic orbit.
int orbit_length(const PwaMap& f, const AtomicMeasure& nu) {
    const auto& atoms = nu.atoms();
    int r = static_cast<int>(atoms.size());
    Rational w(1, static_cast<unsigned long>(r));
    for (const auto& a : atoms)
        if (a.weight != w) throw DomainError("measure is not an orbit measure: unequal weights");
    auto has = [&](const Rational& x) {
        return std::binary_search(atoms.begin(), atoms.end(), AtomicMeasure::Atom{x, 0},
                                  [](const auto& a, const auto& b) { return a.point < b.point; });
    };
    Rational y = atoms.front().point;
    for (int j = 1; j <= r; ++j) {
        y = f.eval(y);
        if (!has(y)) throw DomainError("measure is not an orbit measure: support not invariant");
        if (y == atoms.front().point && j < r)
            throw DomainError("measure is not an orbit measure: support is not a single cycle");
    }
    if (y != atoms.front().point) throw DomainError("measure is not an orbit measure: orbit does not close");
    return r;
}

}  // namespace

bool is_q_shrinked_periodic(const PwaMap& f, const AtomicMeasure& nu, long q, const ShrinkingCertificate& cert) {
    if (q < 1) throw DomainError("is_q_shrinked_periodic: q must be >= 1");
    int r = orbit_length(f, nu);
    if (!reverify(f, cert)) return false;
    if (!(cert.interval.length() < Rational(1, static_cast<unsigned long>(q)))) return false;
    for (const auto& a : nu.atoms()) {
        bool inside = std::any_of(cert.images.begin(), cert.images.end(),
                                  [&](const Interval& im) { return im.contains(a.point); });
        if (!inside) return false;
    }
    return r % cert.period == 0;
}

SeparationReport separation_functional(const PwaMap& f, const ShrinkingCertificate& cert, const AtomicMeasure& mu2,
                                       const Rational& lambda) {
    if (!(lambda > 0 && lambda < 1)) throw DomainError("separation_functional: lambda must lie in (0,1)");
    auto v = reverify(f, cert);
    if (!v) throw DomainError("separation_functional: certificate refused (" + v.refusal().condition + ")");
    for (const auto& a : mu2.atoms())
        for (const auto& im : cert.images)
            if (im.contains(a.point))
                throw DomainError("separation_functional: mu2 has an atom at " + to_string(a.point) +
                                  " inside the shrinking orbit");

    const Interval& I = cert.interval;
    const Interval& R = cert.return_image;
    bool gap_lo = R.lo > I.lo, gap_hi = R.hi < I.hi;
    if (!gap_lo && !gap_hi) throw DomainError("separation_functional: degenerate geometry, no room for a ramp");

    Rational half(1, 2);
    std::vector<Node> nodes;
    if (I.lo > 0) {
        push_node(nodes, 0, 0);
        push_node(nodes, I.lo, 0);
    } else {
        push_node(nodes, 0, gap_lo ? half : Rational(1));
    }
    push_node(nodes, R.lo, 1);
    push_node(nodes, R.hi, 1);
    if (I.hi < 1) {
        push_node(nodes, I.hi, 0);
        push_node(nodes, 1, 0);
    } else {
        push_node(nodes, 1, gap_hi ? half : Rational(1));
    }
    PwaMap psi = PwaMap::from_nodes(nodes);

    AtomicMeasure mu1 = orbit_measure(f, cert);
    Rational i1 = integrate(psi, mu1);
    Rational i2 = integrate(psi, mu2);
    Rational ic = lambda * i1 + (1 - lambda) * i2;
    Rational inv_p(1, static_cast<unsigned long>(cert.period));
    if (i1 != inv_p || i2 != 0 || !(ic > 0 && ic < inv_p))
        throw InternalError("separation_functional: integrals violate the expected sandwich");
    return {psi, i1, i2, ic, cert.period, lambda, mu1};
}

}  // namespace lab
