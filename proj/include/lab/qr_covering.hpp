#pragma once

#include "lab/core.hpp"
#include "lab/interval.hpp"
#include "lab/pwa_map.hpp"
#include "lab/shrinking.hpp"

#include <optional>
#include <string>
#include <vector>

namespace lab {

/// Candidate good q,r-covering: intervals[i] holds the periodic shrinking
/// interval of certificates[i].
struct QRCovering {
    long q = 1;
    int r = 1;
    std::vector<Interval> intervals;
    std::vector<ShrinkingCertificate> certificates;
};

/// Outcome of verify_qr_covering. condition is 0 when ok, otherwise the
/// number (1 cover, 2 length, 3 shrinking interval) of the first failed clause.
struct QRCheck {
    bool ok = true;
    int condition = 0;
    std::string detail;
    std::optional<Rational> uncovered_point;
    std::optional<std::size_t> index;
};

QRCheck verify_qr_covering(const PwaMap& f, const QRCovering& cov);

/// Grid member J_i = (i/2q', (i+2)/2q'), i = 0..2q'-2; the two end members are
/// closed at 0 and at 1 so that the family covers [0,1].
Interval qr_grid_interval(long q_prime, long i);

struct QRPlateau {
    Rational representative;  // g^r-fixed point the plateau is planted on
    Interval V;               // region where g was modified
    Interval plateau;         // I, relatively open, g constant on its closure
    int period = 1;           // minimal period of the representative
    int step = 1;
    long grid_index = 0;
    std::size_t pieces = 0;   // affine pieces of g on closure(V)
};

struct QRConstruction {
    PwaMap g;
    QRCovering cover;
    int steps = 0;
    long q_prime = 1;
    Rational cap;  // strict upper bound on every covering interval length
    std::vector<QRPlateau> plateaus;
    Rational sup_distance;
};

/// Multi-step plateau planting that turns f into a good q,r-covered map g
/// with sup_distance(g, f) < epsilon.
QRConstruction construct_qr_covered(const PwaMap& f, long q, int r, const Rational& epsilon);

}  // namespace lab
