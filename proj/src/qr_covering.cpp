#include "lab/qr_covering.hpp"

#include <algorithm>
#include <set>

namespace lab {

namespace {

// Points of P not in U; at most two pieces.
std::vector<Interval> subtract(const Interval& P, const Interval& U) {
    if (P.empty()) return {};
    if (U.empty() || disjoint(P, U)) return {P};
    std::vector<Interval> out;
    Interval L{P.lo, U.lo, P.closed_lo, !U.closed_lo};
    Interval R{U.hi, P.hi, !U.closed_hi, P.closed_hi};
    if (!L.empty()) out.push_back(L);
    if (!R.empty()) out.push_back(R);
    return out;
}

std::vector<Interval> subtract_all(std::vector<Interval> parts, const std::vector<Interval>& holes) {
    for (const auto& h : holes) {
        std::vector<Interval> next;
        for (const auto& p : parts)
            for (auto& piece : subtract(p, h)) next.push_back(std::move(piece));
        parts = std::move(next);
    }
    std::sort(parts.begin(), parts.end(), [](const Interval& a, const Interval& b) {
        if (a.lo != b.lo) return a.lo < b.lo;
        return a.closed_lo && !b.closed_lo;
    });
    return parts;
}

std::vector<Interval> fixed_sets(const PwaMap& f, int r) {
    std::vector<Interval> out;
    for (const auto& c : fixed_points_of_iterate(f, r)) out.push_back(c.set);
    return out;
}

// A point of the piece: its left end when attained, else its midpoint.
Rational pick_point(const Interval& piece) { return piece.closed_lo ? piece.lo : piece.midpoint(); }

Rational iterate_point(const PwaMap& f, Rational x, int n) {
    for (int j = 0; j < n; ++j) x = f.eval(x);
    return x;
}

struct Slot {
    Interval U;
    long grid = 0;
    bool old = false;
};

// Distance from the endpoint e of U to the nearest fixed point beyond it
// (0 when a fixed segment continues past e).
Rational distance_beyond(const std::vector<Interval>& K, const Rational& e, bool right) {
    std::optional<Rational> best;
    for (const auto& c : K) {
        Rational d;
        if (right) {
            if (!(c.hi > e)) continue;
            d = c.lo > e ? Rational(c.lo - e) : Rational(0);
        } else {
            if (!(c.lo < e)) continue;
            d = c.hi < e ? Rational(e - c.hi) : Rational(0);
        }
        if (!best || d < *best) best = d;
    }
    return best ? *best : Rational(1);
}

void enlarge(Slot& s, bool right, const std::vector<Interval>& K, const Rational& cap) {
    Rational room = cap - s.U.length();
    if (!(room > 0)) throw InternalError("construct_qr_covered: no room left to enlarge " + to_string(s.U));
    Rational e = right ? s.U.hi : s.U.lo;
    Rational d = distance_beyond(K, e, right);
    Rational eta = room / 2;
    if (d > 0) eta = std::min(eta, Rational(d / 2));
    if (right) {
        Rational hi = e + eta;
        s.U = hi >= 1 ? Interval::rel_open(s.U.lo, 1) : Interval::rel_open(s.U.lo, hi);
    } else {
        Rational lo = e - eta;
        s.U = lo <= 0 ? Interval::rel_open(0, s.U.hi) : Interval::rel_open(lo, s.U.hi);
    }
}

// Fixed points of J_i not lying in the closure of any other slot.
std::vector<Interval> exclusive_part(const std::vector<Slot>& slots, std::size_t i, const std::vector<Interval>& K) {
    std::vector<Interval> parts;
    for (const auto& c : K) {
        Interval p = intersect(c, slots[i].U);
        if (!p.empty()) parts.push_back(p);
    }
    std::vector<Interval> holes;
    for (std::size_t j = 0; j < slots.size(); ++j)
        if (j != i) holes.push_back(slots[j].U.closure());
    return subtract_all(std::move(parts), holes);
}

}  // namespace

Interval qr_grid_interval(long q_prime, long i) {
    if (q_prime < 1 || i < 0 || i > 2 * q_prime - 2) throw DomainError("qr_grid_interval: index out of range");
    Rational lo(i, 2 * q_prime), hi(i + 2, 2 * q_prime);
    lo.canonicalize();
    hi.canonicalize();
    return Interval::rel_open(lo, hi);
}

QRCheck verify_qr_covering(const PwaMap& f, const QRCovering& cov) {
    if (cov.q < 1 || cov.r < 1) throw DomainError("verify_qr_covering: q, r must be >= 1");
    QRCheck out;
    auto fail = [&](int cond, std::string detail, std::optional<std::size_t> idx) {
        out.ok = false;
        out.condition = cond;
        out.detail = std::move(detail);
        out.index = idx;
        return out;
    };
    if (cov.intervals.size() != cov.certificates.size())
        return fail(3, "interval and certificate counts differ", std::nullopt);

    auto rest = subtract_all(fixed_sets(f, cov.r), cov.intervals);
    if (!rest.empty()) {
        out.uncovered_point = pick_point(rest.front());
        return fail(1, "fixed point " + to_string(*out.uncovered_point) + " of f^" + std::to_string(cov.r) +
                           " is not covered",
                    std::nullopt);
    }

    Rational bound(1, static_cast<unsigned long>(cov.q));
    for (std::size_t i = 0; i < cov.intervals.size(); ++i) {
        const auto& U = cov.intervals[i];
        require_in_unit(U, "verify_qr_covering");
        if (U.empty() || !U.is_rel_open()) return fail(2, "interval " + std::to_string(i) + " is not open", i);
        if (!(U.length() < bound))
            return fail(2, "interval " + std::to_string(i) + " has length " + to_string(U.length()) + " >= 1/q", i);
    }

    for (std::size_t i = 0; i < cov.certificates.size(); ++i) {
        const auto& c = cov.certificates[i];
        if (c.preperiod != 0) return fail(3, "certificate " + std::to_string(i) + " is not periodic", i);
        if (c.period < 1 || cov.r % c.period != 0)
            return fail(3, "period " + std::to_string(c.period) + " does not divide r", i);
        auto v = reverify(f, c);
        if (!v) return fail(3, "certificate " + std::to_string(i) + ": " + v.refusal().condition, i);
        if (!subset(c.interval.closure(), cov.intervals[i]))
            return fail(3, "closure of " + to_string(c.interval) + " not inside " + to_string(cov.intervals[i]), i);
    }
    return out;
}

QRConstruction construct_qr_covered(const PwaMap& f, long q, int r, const Rational& epsilon) {
    if (epsilon <= 0) throw DomainError("construct_qr_covered: epsilon must be positive");
    if (q < 1 || r < 1) throw DomainError("construct_qr_covered: q, r must be >= 1");

    Rational L = f.max_abs_slope();
    long qp = 1;
    auto cap_of = [](long n) -> Rational { return Rational(11, 10) / n; };
    while (!(cap_of(qp) < Rational(1, static_cast<unsigned long>(q)) && cap_of(qp) < epsilon / 2 &&
             L * cap_of(qp) < epsilon / 2))
        ++qp;
    const Rational cap = cap_of(qp);
    const long grid_count = 2 * qp - 1;

    QRConstruction out{f, {q, r, {}, {}}, 0, qp, cap, {}, 0};
    PwaMap g = f;
    std::vector<Slot> slots;  // every interval chosen so far, old ones first
    std::set<long> used;

    for (int step = 1;; ++step) {
        auto K = fixed_sets(g, r);
        std::vector<Interval> covering;
        for (const auto& s : slots) covering.push_back(s.U);
        auto rest = subtract_all(K, covering);
        if (rest.empty()) break;
        if (step > grid_count)
            throw InternalError("construct_qr_covered: step bound 2q'-1 = " + std::to_string(grid_count) +
                                " exceeded");
        out.steps = step;
        for (auto& s : slots) s.old = true;
        std::size_t first_new = slots.size();

        // greedy cover of the uncovered fixed points, largest start first
        while (!rest.empty()) {
            Rational z = rest.front().lo;
            long pick = -1;
            for (long i = grid_count - 1; i >= 0; --i)
                if (!used.count(i) && qr_grid_interval(qp, i).contains(z)) {
                    pick = i;
                    break;
                }
            if (pick < 0) throw InternalError("construct_qr_covered: no free grid interval at " + to_string(z));
            used.insert(pick);
            slots.push_back({qr_grid_interval(qp, pick), pick, false});
            rest = subtract_all(std::move(rest), {slots.back().U});
        }

        // minimality: drop new intervals without an exclusive fixed point after
        // pushing their boundary fixed points into a neighbour
        for (bool changed = true; changed;) {
            changed = false;
            for (std::size_t i = first_new; i < slots.size(); ++i) {
                if (!exclusive_part(slots, i, K).empty()) continue;
                std::vector<Interval> others;
                for (std::size_t j = 0; j < slots.size(); ++j)
                    if (j != i) others.push_back(slots[j].U);
                std::vector<Interval> mine;
                for (const auto& c : K) {
                    Interval p = intersect(c, slots[i].U);
                    if (!p.empty()) mine.push_back(p);
                }
                for (const auto& piece : subtract_all(std::move(mine), others)) {
                    if (piece.lo != piece.hi)
                        throw InternalError("construct_qr_covered: uncovered fixed segment " + to_string(piece));
                    const Rational& e = piece.lo;
                    std::optional<std::size_t> best;
                    for (std::size_t j = 0; j < slots.size(); ++j) {
                        if (j == i || !slots[j].U.closure().contains(e)) continue;
                        if (!best || slots[j].U.length() < slots[*best].U.length()) best = j;
                    }
                    if (!best) throw InternalError("construct_qr_covered: stray fixed point " + to_string(e));
                    enlarge(slots[*best], slots[*best].U.hi == e, K, cap);
                }
                used.erase(slots[i].grid);
                slots.erase(slots.begin() + static_cast<std::ptrdiff_t>(i));
                changed = true;
                break;
            }
        }
        if (first_new == slots.size()) continue;

        // representatives and their protected orbits under the current map
        struct Plan {
            std::size_t slot;
            Rational x;
            int period;
        };
        std::vector<Plan> plans;
        std::vector<Rational> orbit_points;
        for (std::size_t i = first_new; i < slots.size(); ++i) {
            Rational x = pick_point(exclusive_part(slots, i, K).front());
            int p = 1;
            while (iterate_point(g, x, p) != x) ++p;
            if (r % p != 0) throw InternalError("construct_qr_covered: representative period does not divide r");
            Rational y = x;
            for (int j = 0; j < r; ++j, y = g.eval(y)) orbit_points.push_back(y);
            plans.push_back({i, x, p});
        }
        std::sort(orbit_points.begin(), orbit_points.end());
        orbit_points.erase(std::unique(orbit_points.begin(), orbit_points.end()), orbit_points.end());

        std::vector<Window> windows;
        for (const auto& plan : plans) {
            const Slot& s = slots[plan.slot];
            const Rational& x = plan.x;
            Interval V = s.U;
            for (std::size_t j = 0; j < slots.size(); ++j) {
                if (j == plan.slot) continue;
                Interval C = slots[j].U.closure();
                if (C.hi < x && C.hi >= V.lo) V = Interval{C.hi, V.hi, false, V.closed_hi};
                if (C.lo > x && C.lo <= V.hi) V = Interval{V.lo, C.lo, V.closed_lo, false};
            }
            Rational d = 1;
            if (x != V.lo) d = std::min(d, Rational(x - V.lo));
            if (x != V.hi) d = std::min(d, Rational(V.hi - x));
            for (const auto& y : orbit_points)
                if (y != x) d = std::min(d, Rational(abs(y - x)));
            Rational rho = d / 2;
            Rational plo = std::max(Rational(0), Rational(x - rho));
            Rational phi = std::min(Rational(1), Rational(x + rho));
            Rational v = g.eval(x);

            std::vector<Node> nodes;
            auto add = [&](const Rational& px, const Rational& py) {
                if (!nodes.empty() && nodes.back().x == px) return;
                nodes.push_back({px, py});
            };
            add(V.lo, g.eval(V.lo));
            for (const auto& y : orbit_points)
                if (y > V.lo && y < plo) add(y, g.eval(y));
            add(plo, v);
            add(phi, v);
            for (const auto& y : orbit_points)
                if (y > phi && y < V.hi) add(y, g.eval(y));
            add(V.hi, g.eval(V.hi));
            windows.push_back({nodes});

            QRPlateau pl;
            pl.representative = x;
            pl.V = V;
            pl.plateau = Interval::rel_open(plo, phi);
            pl.period = plan.period;
            pl.step = step;
            pl.grid_index = s.grid;
            pl.pieces = nodes.size() - 1;
            out.plateaus.push_back(pl);
        }
        std::sort(windows.begin(), windows.end(),
                  [](const Window& a, const Window& b) { return a.nodes.front().x < b.nodes.front().x; });
        g = splice(g, windows);
    }

    // plateaus are listed in slot order so that intervals[i] matches plateaus[i]
    std::vector<QRPlateau> ordered;
    for (const auto& s : slots)
        for (const auto& pl : out.plateaus)
            if (pl.grid_index == s.grid) ordered.push_back(pl);
    out.plateaus = std::move(ordered);

    out.g = g;
    for (std::size_t i = 0; i < slots.size(); ++i) {
        const auto& pl = out.plateaus.at(i);
        auto v = verify_periodic_shrinking(g, pl.plateau, pl.period);
        if (!v)
            throw InternalError("construct_qr_covered: plateau " + to_string(pl.plateau) + " refused (" +
                                v.refusal().condition + ")");
        out.cover.intervals.push_back(slots[i].U);
        out.cover.certificates.push_back(std::move(v).value());
    }
    out.sup_distance = sup_distance(g, f);
    if (!(out.sup_distance < epsilon)) throw InternalError("construct_qr_covered: sup distance bound violated");
    auto check = verify_qr_covering(g, out.cover);
    if (!check.ok) throw InternalError("construct_qr_covered: covering refused: " + check.detail);
    return out;
}

}  // namespace lab
