#include "lab/pwa_map.hpp"

#include <algorithm>

namespace lab {

PwaMap::PwaMap(std::vector<Rational> breakpoints, std::vector<Rational> values)
    : bp_(std::move(breakpoints)), val_(std::move(values)) {
    if (bp_.size() < 2 || bp_.size() != val_.size())
        throw DomainError("PwaMap needs at least two breakpoints and one value per breakpoint");
    if (bp_.front() != 0 || bp_.back() != 1) throw DomainError("PwaMap breakpoints must start at 0 and end at 1");
    for (std::size_t k = 0; k + 1 < bp_.size(); ++k)
        if (!(bp_[k] < bp_[k + 1])) throw DomainError("PwaMap breakpoints must be strictly increasing");
    for (const auto& v : val_)
        if (v < 0 || v > 1) throw DomainError("PwaMap value " + to_string(v) + " outside [0,1]");
}

PwaMap PwaMap::from_nodes(const std::vector<Node>& nodes) {
    std::vector<Rational> b, v;
    b.reserve(nodes.size());
    v.reserve(nodes.size());
    for (const auto& n : nodes) {
        b.push_back(n.x);
        v.push_back(n.y);
    }
    return PwaMap(std::move(b), std::move(v));
}

PwaMap PwaMap::identity() { return PwaMap({0, 1}, {0, 1}); }
PwaMap PwaMap::constant(const Rational& c) { return PwaMap({0, 1}, {c, c}); }
PwaMap PwaMap::tent() { return PwaMap({0, rat(1, 2), 1}, {0, 1, 0}); }
PwaMap PwaMap::double_tent() {
    return PwaMap({0, rat(1, 4), rat(1, 2), rat(3, 4), 1}, {0, 1, 0, 1, 0});
}

std::vector<Node> PwaMap::nodes() const {
    std::vector<Node> out;
    out.reserve(bp_.size());
    for (std::size_t k = 0; k < bp_.size(); ++k) out.push_back({bp_[k], val_[k]});
    return out;
}

std::size_t PwaMap::piece_of(const Rational& x) const {
    auto it = std::upper_bound(bp_.begin(), bp_.end(), x);
    std::size_t k = it == bp_.begin() ? 0 : static_cast<std::size_t>(it - bp_.begin()) - 1;
    return std::min(k, pieces() - 1);
}

Rational PwaMap::eval(const Rational& x) const {
    if (x < 0 || x > 1) throw DomainError("eval: x = " + to_string(x) + " outside [0,1]");
    std::size_t k = piece_of(x);
    if (x == bp_[k]) return val_[k];
    if (x == bp_[k + 1]) return val_[k + 1];
    return val_[k] + (x - bp_[k]) * (val_[k + 1] - val_[k]) / (bp_[k + 1] - bp_[k]);
}

Rational PwaMap::slope(std::size_t k) const { return (val_[k + 1] - val_[k]) / (bp_[k + 1] - bp_[k]); }

Rational PwaMap::max_abs_slope() const {
    Rational m = 0;
    for (std::size_t k = 0; k < pieces(); ++k) m = std::max(m, abs(slope(k)));
    return m;
}

void push_node(std::vector<Node>& out, Rational x, Rational y) {
    if (!out.empty() && out.back().x == x) {
        if (out.back().y != y) throw InternalError("discontinuous node sequence at x = " + to_string(x));
        return;
    }
    if (out.size() >= 2) {
        const Node& a = out[out.size() - 2];
        const Node& b = out.back();
        if ((b.y - a.y) * (x - b.x) == (y - b.y) * (b.x - a.x)) {
            out.back() = Node{std::move(x), std::move(y)};
            return;
        }
    }
    out.push_back(Node{std::move(x), std::move(y)});
}

namespace {
[[noreturn]] void cap_exceeded(std::size_t cap) {
    throw ResourceError("piece count exceeds the cap of " + std::to_string(cap) +
                        " pieces (set LAB_PIECE_CAP to raise it)");
}
}  // namespace

Polyline apply(const PwaMap& f, const Polyline& p, std::size_t cap) {
    const auto& bp = f.breakpoints();
    const auto& val = f.values();
    Polyline out;
    if (p.nodes.empty()) return out;
    push_node(out.nodes, p.nodes.front().x, f.eval(p.nodes.front().y));
    for (std::size_t s = 0; s + 1 < p.nodes.size(); ++s) {
        const Node& a = p.nodes[s];
        const Node& b = p.nodes[s + 1];
        if (a.y < b.y) {
            auto it = std::upper_bound(bp.begin(), bp.end(), a.y);
            for (; it != bp.end() && *it < b.y; ++it) {
                Rational x = a.x + (*it - a.y) * (b.x - a.x) / (b.y - a.y);
                push_node(out.nodes, std::move(x), val[static_cast<std::size_t>(it - bp.begin())]);
                if (out.nodes.size() > cap + 1) cap_exceeded(cap);
            }
        } else if (a.y > b.y) {
            auto it = std::lower_bound(bp.begin(), bp.end(), a.y);
            while (it != bp.begin()) {
                --it;
                if (!(*it > b.y)) break;
                Rational x = a.x + (*it - a.y) * (b.x - a.x) / (b.y - a.y);
                push_node(out.nodes, std::move(x), val[static_cast<std::size_t>(it - bp.begin())]);
                if (out.nodes.size() > cap + 1) cap_exceeded(cap);
            }
        }
        push_node(out.nodes, b.x, f.eval(b.y));
        if (out.nodes.size() > cap + 1) cap_exceeded(cap);
    }
    return out;
}

PwaMap compose(const PwaMap& f, const PwaMap& g, std::size_t cap) {
    Polyline p{g.nodes()};
    return PwaMap::from_nodes(apply(f, p, cap).nodes);
}

PwaMap iterate_map(const PwaMap& f, int n, std::size_t cap) {
    if (n < 1) throw DomainError("iterate_map: n must be >= 1");
    if (f.pieces() > cap) cap_exceeded(cap);
    if (n == 1) return f;
    Polyline p{f.nodes()};
    for (int k = 1; k < n; ++k) p = apply(f, p, cap);
    return PwaMap::from_nodes(p.nodes);
}

Polyline iterate_on(const PwaMap& f, int n, const Interval& D, std::size_t cap) {
    if (n < 0) throw DomainError("iterate_on: n must be >= 0");
    require_in_unit(D, "iterate_on");
    Polyline p;
    push_node(p.nodes, D.lo, D.lo);
    push_node(p.nodes, D.hi, D.hi);
    for (int k = 0; k < n; ++k) p = apply(f, p, cap);
    return p;
}

Interval image_of_interval(const PwaMap& f, const Interval& I) {
    if (I.empty()) throw DomainError("image_of_interval: empty interval");
    require_in_unit(I, "image_of_interval");
    if (I.lo == I.hi) return Interval::point(f.eval(I.lo));
    struct Cand {
        Rational y;
        bool in;
    };
    std::vector<Cand> c;
    c.push_back({f.eval(I.lo), I.closed_lo});
    const auto& bp = f.breakpoints();
    for (auto it = std::upper_bound(bp.begin(), bp.end(), I.lo); it != bp.end() && *it < I.hi; ++it)
        c.push_back({f.values()[static_cast<std::size_t>(it - bp.begin())], true});
    c.push_back({f.eval(I.hi), I.closed_hi});

    Rational lo = c[0].y, hi = c[0].y;
    for (const auto& k : c) {
        lo = std::min(lo, k.y);
        hi = std::max(hi, k.y);
    }
    auto attained = [&](const Rational& m) {
        for (std::size_t k = 0; k < c.size(); ++k) {
            if (c[k].y != m) continue;
            if (c[k].in) return true;
            if (k + 1 < c.size() && c[k + 1].y == m) return true;
        }
        return false;
    };
    return Interval{lo, hi, attained(lo), attained(hi)};
}

Rational sup_distance(const PwaMap& f, const PwaMap& g) {
    std::vector<Rational> xs;
    xs.reserve(f.breakpoints().size() + g.breakpoints().size());
    std::merge(f.breakpoints().begin(), f.breakpoints().end(), g.breakpoints().begin(), g.breakpoints().end(),
               std::back_inserter(xs));
    xs.erase(std::unique(xs.begin(), xs.end()), xs.end());
    Rational m = 0;
    for (const auto& x : xs) m = std::max(m, Rational(abs(f.eval(x) - g.eval(x))));
    return m;
}

std::vector<FixedComponent> fixed_points_of_polyline(const Polyline& p) {
    std::vector<Interval> raw;
    const auto& n = p.nodes;
    if (n.size() == 1) {
        if (n[0].x == n[0].y) raw.push_back(Interval::point(n[0].x));
    }
    for (std::size_t s = 0; s + 1 < n.size(); ++s) {
        Rational h0 = n[s].y - n[s].x, h1 = n[s + 1].y - n[s + 1].x;
        if (h0 == 0 && h1 == 0) {
            raw.push_back(Interval::closed(n[s].x, n[s + 1].x));
        } else if (h0 == 0) {
            raw.push_back(Interval::point(n[s].x));
        } else if (h1 == 0) {
            raw.push_back(Interval::point(n[s + 1].x));
        } else if ((h0 < 0) != (h1 < 0)) {
            raw.push_back(Interval::point(n[s].x + h0 * (n[s + 1].x - n[s].x) / (h0 - h1)));
        }
    }
    std::vector<FixedComponent> out;
    for (auto& I : raw) {
        if (!out.empty() && I.lo <= out.back().set.hi) {
            auto& last = out.back();
            if (I.hi > last.set.hi) last.set.hi = I.hi;
            last.kind = last.set.lo == last.set.hi ? FixedKind::point : FixedKind::segment;
            continue;
        }
        FixedKind k = I.lo == I.hi ? FixedKind::point : FixedKind::segment;
        out.push_back({std::move(I), k});
    }
    return out;
}

std::vector<FixedComponent> fixed_points_of_iterate(const PwaMap& f, int r, std::size_t cap) {
    if (r < 1) throw DomainError("fixed_points_of_iterate: r must be >= 1");
    return fixed_points_of_polyline(iterate_on(f, r, Interval::closed(0, 1), cap));
}

std::vector<Interval> preimage_components(const PwaMap& f, const Interval& D, const Interval& T) {
    require_in_unit(D, "preimage_components");
    std::vector<Interval> out;
    auto add = [&](Interval I) {
        if (!out.empty() && out.back().hi >= I.lo) {
            if (I.hi > out.back().hi) out.back().hi = I.hi;
            return;
        }
        out.push_back(std::move(I));
    };
    if (D.lo == D.hi) {
        if (T.contains(f.eval(D.lo))) out.push_back(Interval::point(D.lo));
        return out;
    }
    const auto& bp = f.breakpoints();
    for (std::size_t k = f.piece_of(D.lo); k < f.pieces() && bp[k] < D.hi; ++k) {
        Rational x0 = std::max(bp[k], D.lo), x1 = std::min(bp[k + 1], D.hi);
        if (!(x0 < x1)) continue;
        Rational y0 = f.eval(x0), y1 = f.eval(x1);
        if (y0 == y1) {
            if (T.contains(y0)) add(Interval::closed(x0, x1));
            continue;
        }
        Rational ylo = std::max(std::min(y0, y1), T.lo), yhi = std::min(std::max(y0, y1), T.hi);
        if (ylo > yhi) continue;
        Rational xa = x0 + (ylo - y0) * (x1 - x0) / (y1 - y0);
        Rational xb = x0 + (yhi - y0) * (x1 - x0) / (y1 - y0);
        if (xa > xb) std::swap(xa, xb);
        add(Interval::closed(xa, xb));
    }
    return out;
}

PwaMap splice(const PwaMap& f, const std::vector<Window>& windows) {
    const auto& bp = f.breakpoints();
    const auto& val = f.values();
    std::vector<Node> out;
    out.reserve(bp.size() + 4 * windows.size());
    std::size_t i = 0;
    Rational last_b = -1;
    for (const auto& w : windows) {
        if (w.nodes.size() < 2) throw InternalError("splice: window needs two nodes");
        const Rational& a = w.nodes.front().x;
        const Rational& b = w.nodes.back().x;
        if (a < last_b || !(a < b)) throw InternalError("splice: windows out of order");
        if (a > 0 && w.nodes.front().y != f.eval(a))
            throw InternalError("splice: window start " + to_string(a) + " breaks continuity");
        if (b < 1 && w.nodes.back().y != f.eval(b))
            throw InternalError("splice: window end " + to_string(b) + " breaks continuity");
        for (; i < bp.size() && bp[i] < a; ++i) push_node(out, bp[i], val[i]);
        for (const auto& n : w.nodes) push_node(out, n.x, n.y);
        while (i < bp.size() && bp[i] <= b) ++i;
        last_b = b;
    }
    for (; i < bp.size(); ++i) push_node(out, bp[i], val[i]);
    return PwaMap::from_nodes(out);
}

}  // namespace lab
