#pragma once

#include "lab/core.hpp"
#include "lab/measures.hpp"
#include "lab/pwa_map.hpp"
#include "lab/shrinking.hpp"

namespace lab {

struct BasinEstimate {
    AtomicMeasure mu;
    Rational epsilon;
    long grid_size = 0;
    int horizon = 0;
    int truncation = 0;
    long hits = 0;
    Rational hit_fraction;
};

/// Samples x = (2i+1)/(2 grid_size); x hits when the horizon-n empirical measure
/// is within epsilon of mu, counting the 2^-N tail against it.
BasinEstimate basin_estimate(const PwaMap& f, const AtomicMeasure& mu, const Rational& epsilon, long grid_size,
                             int n, int N);

/// nu must be equal-weight on one periodic orbit, otherwise DomainError.
bool is_q_shrinked_periodic(const PwaMap& f, const AtomicMeasure& nu, long q, const ShrinkingCertificate& cert);

struct SeparationReport {
    PwaMap psi;
    Rational integral_mu1, integral_mu2, integral_combo;
    int p = 1;
    Rational lambda;
    AtomicMeasure mu1;
};

SeparationReport separation_functional(const PwaMap& f, const ShrinkingCertificate& cert, const AtomicMeasure& mu2,
                                       const Rational& lambda);

}  // namespace lab
