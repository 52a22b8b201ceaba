#pragma once

#include "lab/core.hpp"
#include "lab/measures.hpp"
#include "lab/pwa_map.hpp"

#include <cstddef>
#include <optional>
#include <vector>

namespace lab {

struct PseudoOrbit {
    std::vector<Rational> points;
    Rational delta;
    bool periodic = false;
    int period = 0;  // equals points.size() when periodic
};

/// Every gap |f(y_n) - y_{n+1}| < delta, including the wrap when periodic.
bool verify_pseudo_orbit(const PwaMap& f, const PseudoOrbit& po);

struct ShadowOptions {
    std::size_t component_cap = 4096;  // tube pieces before falling back to fixed points of f^p
    std::size_t piece_cap = lab::piece_cap();
};

struct Shadow {
    Rational z;
    std::vector<Rational> orbit;  // f^n(z), n < p
    bool used_fallback = false;
};

/// Leftmost z with f^p(z) = z and |f^n(z) - y_n| < epsilon for n < p. A run of
/// fixed points of slope one contributes its midpoint instead of its left end.
Verdict<Shadow> shadow_periodic(const PwaMap& f, const PseudoOrbit& po, const Rational& epsilon,
                                const ShadowOptions& opt = {});

struct ErgodicOptions {
    std::optional<Rational> delta;  // defaults to the shadowing radius
    int horizon = 10000;
    ShadowOptions shadow;
};

struct ErgodicReport {
    int p = 0;
    Rational epsilon;  // shadowing radius
    Rational delta;
    Rational recurrence_gap;  // |f^p(x) - x|
    Rational z;
    AtomicMeasure nu;
    AtomicMeasure empirical;
    WeakStarDistance distance;
    Rational bound;  // 2 epsilon0 + 2^-N
    bool within_bound = false;
};

Verdict<ErgodicReport> ergodic_to_periodic(const PwaMap& f, const Rational& x, int n0, const Rational& epsilon0,
                                           int N, const ErgodicOptions& opt = {});

}  // namespace lab
