#include "lab/shadowing.hpp"

#include <algorithm>

namespace lab {

bool verify_pseudo_orbit(const PwaMap& f, const PseudoOrbit& po) {
    if (po.points.empty()) return true;
    if (po.periodic && po.period != static_cast<int>(po.points.size())) return false;
    for (std::size_t n = 0; n + 1 < po.points.size(); ++n)
        if (!(abs(f.eval(po.points[n]) - po.points[n + 1]) < po.delta)) return false;
    if (po.periodic && !(abs(f.eval(po.points.back()) - po.points.front()) < po.delta)) return false;
    return true;
}

namespace {

// Subset of the tube on which f^n is affine, with its values at the domain ends.
struct TubePiece {
    Interval dom;
    Rational v_lo, v_hi;
};

Rational lerp(const Rational& x0, const Rational& x1, const Rational& y0, const Rational& y1, const Rational& y) {
    return x0 + (y - y0) * (x1 - x0) / (y1 - y0);
}

// Points of the piece where the affine values lie in the open window (c - eps, c + eps).
std::optional<TubePiece> restrict_to_window(const TubePiece& t, const Rational& c, const Rational& eps) {
    Rational wl = c - eps, wh = c + eps;
    if (t.v_lo == t.v_hi) {
        if (t.v_lo > wl && t.v_lo < wh) return t;
        return std::nullopt;
    }
    const Rational& x0 = t.dom.lo;
    const Rational& x1 = t.dom.hi;
    Rational a = lerp(x0, x1, t.v_lo, t.v_hi, wl), b = lerp(x0, x1, t.v_lo, t.v_hi, wh);
    if (a > b) std::swap(a, b);
    Interval d = intersect(t.dom, Interval::open(a, b));
    if (d.empty()) return std::nullopt;
    Rational s = (t.v_hi - t.v_lo) / (x1 - x0);
    return TubePiece{d, t.v_lo + s * (d.lo - x0), t.v_lo + s * (d.hi - x0)};
}

// Applies f to the values of each piece, splitting where the values cross breakpoints of f.
std::vector<TubePiece> advance(const PwaMap& f, const std::vector<TubePiece>& tube) {
    std::vector<TubePiece> out;
    const auto& bp = f.breakpoints();
    for (const auto& t : tube) {
        if (t.v_lo == t.v_hi) {
            Rational v = f.eval(t.v_lo);
            out.push_back({t.dom, v, v});
            continue;
        }
        Rational lo = std::min(t.v_lo, t.v_hi), hi = std::max(t.v_lo, t.v_hi);
        std::vector<Rational> cuts{t.dom.lo};
        auto first = std::upper_bound(bp.begin(), bp.end(), lo);
        std::vector<Rational> xs;
        for (auto it = first; it != bp.end() && *it < hi; ++it)
            xs.push_back(lerp(t.dom.lo, t.dom.hi, t.v_lo, t.v_hi, *it));
        std::sort(xs.begin(), xs.end());
        cuts.insert(cuts.end(), xs.begin(), xs.end());
        cuts.push_back(t.dom.hi);
        Rational s = (t.v_hi - t.v_lo) / (t.dom.hi - t.dom.lo);
        for (std::size_t k = 0; k + 1 < cuts.size(); ++k) {
            Interval d = Interval::closed(cuts[k], cuts[k + 1]);
            if (k == 0) d.closed_lo = t.dom.closed_lo;
            if (k + 2 == cuts.size()) d.closed_hi = t.dom.closed_hi;
            Rational ua = t.v_lo + s * (cuts[k] - t.dom.lo), ub = t.v_lo + s * (cuts[k + 1] - t.dom.lo);
            out.push_back({d, f.eval(ua), f.eval(ub)});
        }
    }
    return out;
}

struct Candidate {
    Interval set;  // a point or a run of slope-one fixed points
    bool segment;
};

// Solutions of f^p(x) = x on pieces where the values are f^p.
void collect_fixed(const std::vector<TubePiece>& tube, std::vector<Candidate>& out) {
    for (const auto& t : tube) {
        const Rational& x0 = t.dom.lo;
        const Rational& x1 = t.dom.hi;
        if (x0 == x1) {
            if (t.v_lo == x0 && t.dom.contains(x0)) out.push_back({t.dom, false});
            continue;
        }
        Rational s = (t.v_hi - t.v_lo) / (x1 - x0);
        if (s == 1) {
            if (t.v_lo == x0) out.push_back({t.dom, true});
            continue;
        }
        // v_lo + s (x - x0) = x
        Rational x = (t.v_lo - s * x0) / (1 - s);
        if (t.dom.contains(x)) out.push_back({Interval::point(x), false});
    }
}

Rational pick(std::vector<Candidate> cands) {
    std::sort(cands.begin(), cands.end(), [](const Candidate& a, const Candidate& b) { return a.set.lo < b.set.lo; });
    // touching segment runs form one run
    std::vector<Candidate> merged;
    for (auto& c : cands) {
        if (!merged.empty() && merged.back().segment && c.segment && merged.back().set.hi == c.set.lo &&
            (merged.back().set.closed_hi || c.set.closed_lo)) {
            merged.back().set.hi = c.set.hi;
            merged.back().set.closed_hi = c.set.closed_hi;
            continue;
        }
        merged.push_back(c);
    }
    Rational best = 2;
    for (const auto& c : merged) {
        Rational z = c.segment ? c.set.midpoint() : c.set.lo;
        best = std::min(best, z);
    }
    return best;
}

// Tracks the tube from the given start; returns nullopt when the cap is exceeded.
std::optional<std::vector<Candidate>> track(const PwaMap& f, const PseudoOrbit& po, const Rational& eps,
                                            const Interval& start, std::size_t cap) {
    int p = po.period;
    std::vector<TubePiece> tube, next;
    if (!start.empty())
        if (auto r = restrict_to_window({start, start.lo, start.hi}, po.points[0], eps)) tube.push_back(*r);
    for (int n = 1; n < p && !tube.empty(); ++n) {
        tube = advance(f, tube);
        next.clear();
        for (const auto& t : tube)
            if (auto r = restrict_to_window(t, po.points[static_cast<std::size_t>(n)], eps)) next.push_back(*r);
        tube.swap(next);
        if (tube.size() > cap) return std::nullopt;
    }
    tube = advance(f, tube);
    if (tube.size() > cap) return std::nullopt;
    std::vector<Candidate> cands;
    collect_fixed(tube, cands);
    return cands;
}

bool in_tube(const PwaMap& f, const PseudoOrbit& po, const Rational& z, const Rational& eps) {
    Rational y = z;
    for (int n = 0; n < po.period; ++n) {
        if (!(abs(y - po.points[static_cast<std::size_t>(n)]) < eps)) return false;
        y = f.eval(y);
    }
    return y == z;
}

}  // namespace

Verdict<Shadow> shadow_periodic(const PwaMap& f, const PseudoOrbit& po, const Rational& epsilon,
                                const ShadowOptions& opt) {
    if (!po.periodic || po.period < 1) throw DomainError("shadow_periodic: pseudo-orbit must be periodic");
    if (epsilon <= 0) throw DomainError("shadow_periodic: epsilon must be positive");
    if (!verify_pseudo_orbit(f, po)) throw DomainError("shadow_periodic: pseudo-orbit fails its delta gaps");

    Interval start = intersect(Interval::closed(0, 1), Interval::open(po.points[0] - epsilon, po.points[0] + epsilon));
    Shadow out;
    auto cands = track(f, po, epsilon, start, opt.component_cap);
    if (!cands) {
        out.used_fallback = true;
        cands.emplace();
        for (const auto& c : fixed_points_of_iterate(f, po.period, opt.piece_cap)) {
            if (c.kind == FixedKind::point) {
                if (in_tube(f, po, c.set.lo, epsilon)) cands->push_back({c.set, false});
                continue;
            }
            // f^n is injective on a run of fixed points of f^p, so tracking it stays small
            auto seg = track(f, po, epsilon, intersect(c.set, start), static_cast<std::size_t>(-1));
            for (auto& s : *seg) cands->push_back({s.set, true});
        }
    }
    if (cands->empty()) return Refusal{"empty_tube", "no periodic point of period dividing " +
                                                          std::to_string(po.period) + " in the epsilon-tube"};
    out.z = pick(*cands);
    if (!in_tube(f, po, out.z, epsilon)) throw InternalError("shadow_periodic: chosen point fails the tube check");
    Rational y = out.z;
    for (int n = 0; n < po.period; ++n) {
        out.orbit.push_back(y);
        y = f.eval(y);
    }
    return out;
}

Verdict<ErgodicReport> ergodic_to_periodic(const PwaMap& f, const Rational& x, int n0, const Rational& epsilon0,
                                           int N, const ErgodicOptions& opt) {
    if (n0 < 1) throw DomainError("ergodic_to_periodic: n0 must be >= 1");
    if (epsilon0 <= 0) throw DomainError("ergodic_to_periodic: epsilon0 must be positive");
    if (N < 1) throw DomainError("ergodic_to_periodic: N must be >= 1");
    if (x < 0 || x > 1) throw DomainError("ergodic_to_periodic: x outside [0,1]");

    ErgodicReport r{0, epsilon0 / dirac_lipschitz_bound(N), 0, 0, 0, AtomicMeasure::dirac(x),
                    AtomicMeasure::dirac(x), {0, 0}, 2 * epsilon0 + pow2(-N), false};
    r.delta = opt.delta ? *opt.delta : r.epsilon;
    if (r.delta <= 0) throw DomainError("ergodic_to_periodic: delta must be positive");

    std::vector<Rational> orbit{x};
    Rational y = x;
    for (int p = 1; p <= opt.horizon; ++p) {
        y = f.eval(y);
        if (p >= n0 && abs(y - x) < r.delta) {
            r.p = p;
            r.recurrence_gap = abs(y - x);
            break;
        }
        orbit.push_back(y);
    }
    if (r.p == 0)
        return Refusal{"no_recurrence", "no return within " + to_string(r.delta) + " of x by step " +
                                            std::to_string(opt.horizon)};

    PseudoOrbit po{orbit, r.delta, true, r.p};
    auto sh = shadow_periodic(f, po, r.epsilon, opt.shadow);
    if (!sh) return sh.refusal();
    r.z = sh.value().z;
    r.nu = AtomicMeasure::empirical(sh.value().orbit);
    r.empirical = AtomicMeasure::empirical(orbit);
    r.distance = weakstar_distance(r.nu, r.empirical, N);
    r.within_bound = r.distance.truncated_value + r.distance.tail_bound < r.bound;
    return r;
}

}  // namespace lab
