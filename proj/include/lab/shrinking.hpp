#pragma once

#include "lab/core.hpp"
#include "lab/interval.hpp"
#include "lab/measures.hpp"
#include "lab/pwa_map.hpp"

#include <optional>
#include <vector>

namespace lab {

/// Exact witness that `interval` is periodic shrinking (preperiod 0), or that
/// `entry` falls into it after `preperiod` steps under the length conditions.
struct ShrinkingCertificate {
    Interval interval;             // I, relatively open
    int period = 1;                // p
    std::vector<Interval> images;  // f^j(closure I), j = 0..p-1
    Interval return_image;         // f^p(closure I)
    int preperiod = 0;
    std::optional<Interval> entry;       // J when preperiod > 0
    std::vector<Interval> entry_images;  // f^j(closure J), j = 0..preperiod

    const Interval& covered() const { return entry ? *entry : interval; }
};

Verdict<ShrinkingCertificate> verify_periodic_shrinking(const PwaMap& f, const Interval& I, int p);
Verdict<ShrinkingCertificate> verify_eventually_periodic_shrinking(const PwaMap& f, const Interval& J, int n,
                                                                  const Interval& I, int p);
/// Rebuilds the certificate from (f, I, p[, J, n]) and compares it field by field.
Verdict<ShrinkingCertificate> reverify(const PwaMap& f, const ShrinkingCertificate& cert);

struct ShrinkingCover {
    PwaMap map;
    std::vector<ShrinkingCertificate> certificates;
    long q = 1, k = 1;
    long N = 1;  // grid size used by the construction
    Rational delta;
};

/// Lebesgue measure of [0,1] minus the union of the covered intervals.
Rational cover_deficiency(const ShrinkingCover& cover);
Verdict<bool> verify_shrinking_cover(const ShrinkingCover& cover);

ShrinkingCover perturb_to_shrinking_cover(const PwaMap& f, const Rational& epsilon, long q, long k);

struct FixedCluster {
    PwaMap map;
    Rational x0;
    Rational delta;
    Interval central;                    // constant plateau around x0, length delta/2 (clipped at 0 or 1)
    std::vector<Rational> fixed_points;  // the q extra fixed points
    std::vector<Interval> plateaus;      // closed plateau around each extra point
    Rational eta;                        // one third of the minimum fixed-point spacing
};

FixedCluster perturb_to_fixed_cluster(const PwaMap& f, long q, const Rational& epsilon);

/// Periodic orbit measure through the leftmost fixed point of f^p in closure(I).
AtomicMeasure orbit_measure(const PwaMap& f, const ShrinkingCertificate& cert);

Verdict<Interval> non_expansivity_witness(const PwaMap& f, const Rational& alpha, const ShrinkingCover& cover);

}  // namespace lab
