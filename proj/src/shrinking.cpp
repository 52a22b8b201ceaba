#include "lab/shrinking.hpp"

#include <algorithm>
#include <numeric>

namespace lab {

namespace {

std::vector<Interval> image_chain(const PwaMap& f, const Interval& start, int steps) {
    std::vector<Interval> out;
    out.reserve(static_cast<std::size_t>(steps) + 1);
    out.push_back(start.closure());
    for (int j = 1; j <= steps; ++j) out.push_back(image_of_interval(f, out.back()));
    return out;
}

void require_open_nonempty(const Interval& I, const char* what) {
    require_in_unit(I, what);
    if (I.empty() || I.length() == 0) throw DomainError(std::string(what) + ": interval must be nonempty");
    if (!I.is_rel_open()) throw DomainError(std::string(what) + ": interval must be relatively open");
}

}  // namespace

Verdict<ShrinkingCertificate> verify_periodic_shrinking(const PwaMap& f, const Interval& I, int p) {
    require_open_nonempty(I, "verify_periodic_shrinking");
    if (p < 1) throw DomainError("verify_periodic_shrinking: period must be >= 1");

    auto chain = image_chain(f, I, p);
    ShrinkingCertificate cert;
    cert.interval = I;
    cert.period = p;
    cert.return_image = chain.back();
    chain.pop_back();
    cert.images = std::move(chain);

    std::vector<std::size_t> order(cert.images.size());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return cert.images[a].lo < cert.images[b].lo; });
    for (std::size_t k = 1; k < order.size(); ++k) {
        const auto& a = cert.images[order[k - 1]];
        const auto& b = cert.images[order[k]];
        if (!disjoint(a, b))
            return Refusal{"disjointness", "images " + std::to_string(order[k - 1]) + " and " +
                                               std::to_string(order[k]) + " meet: " + to_string(a) + ", " +
                                               to_string(b)};
    }
    if (!subset(cert.return_image, I))
        return Refusal{"containment", "f^" + std::to_string(p) + " image " + to_string(cert.return_image) +
                                          " not inside " + to_string(I)};
    for (int j = 1; j < p; ++j)
        if (!(cert.images[j].length() < I.length()))
            return Refusal{"length", "image " + std::to_string(j) + " has length " +
                                         to_string(cert.images[j].length()) + " >= " + to_string(I.length())};
    return cert;
}

Verdict<ShrinkingCertificate> verify_eventually_periodic_shrinking(const PwaMap& f, const Interval& J, int n,
                                                                  const Interval& I, int p) {
    require_open_nonempty(J, "verify_eventually_periodic_shrinking");
    if (n < 1) throw DomainError("verify_eventually_periodic_shrinking: preperiod must be >= 1");
    auto base = verify_periodic_shrinking(f, I, p);
    if (!base) return base;
    ShrinkingCertificate cert = std::move(base).value();
    cert.preperiod = n;
    cert.entry = J;
    cert.entry_images = image_chain(f, J, n);
    if (!subset(cert.entry_images.back(), I))
        return Refusal{"containment", "f^" + std::to_string(n) + " image of entry " +
                                          to_string(cert.entry_images.back()) + " not inside " + to_string(I)};
    if (!(I.length() < J.length()))
        return Refusal{"length", "core length " + to_string(I.length()) + " >= entry length " +
                                     to_string(J.length())};
    for (int j = 1; j < n; ++j)
        if (!(cert.entry_images[j].length() < J.length()))
            return Refusal{"length", "entry image " + std::to_string(j) + " has length " +
                                         to_string(cert.entry_images[j].length()) + " >= " +
                                         to_string(J.length())};
    return cert;
}

Verdict<ShrinkingCertificate> reverify(const PwaMap& f, const ShrinkingCertificate& cert) {
    auto fresh = cert.preperiod == 0
                     ? verify_periodic_shrinking(f, cert.interval, cert.period)
                     : verify_eventually_periodic_shrinking(f, *cert.entry, cert.preperiod, cert.interval,
                                                            cert.period);
    if (!fresh) return fresh;
    const auto& c = fresh.value();
    if (c.images != cert.images || !(c.return_image == cert.return_image) ||
        c.entry_images != cert.entry_images)
        return Refusal{"mismatch", "stored images differ from recomputed ones"};
    return fresh;
}

Rational cover_deficiency(const ShrinkingCover& cover) {
    std::vector<Interval> parts;
    for (const auto& c : cover.certificates) parts.push_back(c.covered().closure());
    std::sort(parts.begin(), parts.end(), [](const Interval& a, const Interval& b) { return a.lo < b.lo; });
    Rational covered = 0;
    bool have = false;
    Rational lo, hi;
    for (const auto& p : parts) {
        if (have && p.lo <= hi) {
            hi = std::max(hi, p.hi);
            continue;
        }
        if (have) covered += hi - lo;
        lo = p.lo;
        hi = p.hi;
        have = true;
    }
    if (have) covered += hi - lo;
    return 1 - covered;
}

Verdict<bool> verify_shrinking_cover(const ShrinkingCover& cover) {
    if (cover.q < 1 || cover.k < 1) throw DomainError("verify_shrinking_cover: q, k must be >= 1");
    Rational bound(1, static_cast<unsigned long>(cover.q));
    for (std::size_t i = 0; i < cover.certificates.size(); ++i) {
        const auto& c = cover.certificates[i];
        auto v = reverify(cover.map, c);
        if (!v) return Refusal{v.refusal().condition, "interval " + std::to_string(i) + ": " + v.refusal().detail};
        if (!(c.covered().length() < bound))
            return Refusal{"length", "interval " + std::to_string(i) + " not shorter than 1/q"};
    }
    Rational def = cover_deficiency(cover);
    if (!(def < Rational(1, static_cast<unsigned long>(cover.k))))
        return Refusal{"deficiency", "uncovered measure " + to_string(def) + " not below 1/k"};
    return true;
}

ShrinkingCover perturb_to_shrinking_cover(const PwaMap& f, const Rational& epsilon, long q, long k) {
    if (epsilon <= 0) throw DomainError("perturb_to_shrinking_cover: epsilon must be positive");
    if (q < 1 || k < 1) throw DomainError("perturb_to_shrinking_cover: q, k must be >= 1");

    Rational L = f.max_abs_slope();
    Rational delta = epsilon / 4;
    if (L > 0) delta = std::min(delta, Rational(epsilon / (2 * L)));
    long N = std::max(q + 1, next_int_above(1 / delta));
    Rational h(1, static_cast<unsigned long>(N));
    h.canonicalize();
    auto mid = [&](long i) -> Rational { return (Rational(i) + Rational(1, 2)) * h; };

    std::vector<long> target(static_cast<std::size_t>(N));
    for (long i = 0; i < N; ++i) {
        Rational c = f.eval(mid(i));
        long j = std::max(0L, next_int_above(Rational(N) * (c - epsilon / 2)));
        if (j >= N || !(Rational(j + 1) * h < c + epsilon / 2))
            throw InternalError("perturb_to_shrinking_cover: no grid cell inside the window at cell " +
                                std::to_string(i));
        target[static_cast<std::size_t>(i)] = j;
    }

    Rational s = h / (4 * k);
    std::vector<Node> nodes;
    for (long i = 0; i < N; ++i) {
        Rational v = mid(target[static_cast<std::size_t>(i)]);
        push_node(nodes, Rational(i) * h, v);
        push_node(nodes, Rational(i + 1) * h - s, v);
    }
    push_node(nodes, 1, mid(target.back()));
    PwaMap g = PwaMap::from_nodes(nodes);

    if (!(sup_distance(g, f) < 3 * epsilon))
        throw InternalError("perturb_to_shrinking_cover: sup distance bound violated");

    // cycle structure of the index map i -> target[i]
    std::vector<int> period(static_cast<std::size_t>(N), 0);
    for (long i = 0; i < N; ++i) {
        long x = i;
        for (long step = 1; step <= N; ++step) {
            x = target[static_cast<std::size_t>(x)];
            if (x == i) {
                period[static_cast<std::size_t>(i)] = static_cast<int>(step);
                break;
            }
        }
    }

    ShrinkingCover cover{g, {}, q, k, N, delta};
    for (long i = 0; i < N; ++i) {
        Interval I = Interval::open(Rational(i) * h, Rational(i + 1) * h - s);
        if (period[static_cast<std::size_t>(i)] > 0) {
            auto v = verify_periodic_shrinking(g, I, period[static_cast<std::size_t>(i)]);
            if (!v) throw InternalError("perturb_to_shrinking_cover: cell " + std::to_string(i) + " refused (" +
                                        v.refusal().condition + ")");
            cover.certificates.push_back(std::move(v).value());
            continue;
        }
        long c = i;
        int n = 0;
        while (period[static_cast<std::size_t>(c)] == 0) {
            c = target[static_cast<std::size_t>(c)];
            ++n;
        }
        Rational r = h / 8;
        Interval core = Interval::open(mid(c) - r, mid(c) + r);
        auto v = verify_eventually_periodic_shrinking(g, I, n, core, period[static_cast<std::size_t>(c)]);
        if (!v) throw InternalError("perturb_to_shrinking_cover: cell " + std::to_string(i) + " refused (" +
                                    v.refusal().condition + ")");
        cover.certificates.push_back(std::move(v).value());
    }
    if (!(cover_deficiency(cover) < Rational(1, static_cast<unsigned long>(k))))
        throw InternalError("perturb_to_shrinking_cover: deficiency bound violated");
    return cover;
}

FixedCluster perturb_to_fixed_cluster(const PwaMap& f, long q, const Rational& epsilon) {
    if (q < 1) throw DomainError("perturb_to_fixed_cluster: q must be >= 1");
    if (epsilon <= 0) throw DomainError("perturb_to_fixed_cluster: epsilon must be positive");

    auto comps = fixed_points_of_iterate(f, 1);
    if (comps.empty()) throw InternalError("perturb_to_fixed_cluster: no fixed point found");
    Rational x0 = comps.front().set.lo;
    for (const auto& c : comps) {
        Rational x = c.kind == FixedKind::point ? c.set.lo : c.set.midpoint();
        if (x > 0 && x < 1) {
            x0 = x;
            break;
        }
    }
    bool at0 = x0 == 0, at1 = x0 == 1;
    long cR = at1 ? 0 : (at0 ? q : (q + 1) / 2);
    long cL = q - cR;

    Rational delta(1, static_cast<unsigned long>(q + 1));
    for (int attempt = 0; attempt < 256; ++attempt, delta /= 2) {
        if (!at0 && !(delta / 2 < x0)) continue;
        if (!at1 && !(x0 + delta / 2 < 1)) continue;
        Rational wlo = at0 ? Rational(0) : Rational(x0 - delta / 2);
        Rational whi = at1 ? Rational(1) : Rational(x0 + delta / 2);
        // a lone point on one side sits farther out, so that its gap to the central
        // plateau still reaches eta (needs 2 delta/13 <= s < 2 delta/9)
        auto spacing = [&delta](long c) -> Rational {
            if (c == 0) return 0;
            if (c == 1) return delta / 5;
            return delta / 4 / (c + 1);
        };
        Rational dR = spacing(cR), dL = spacing(cL);
        Rational d = cR == 0 ? dL : (cL == 0 ? dR : std::min(dR, dL));
        Rational w = d / 4;

        std::vector<Rational> pts;
        for (long i = cL; i >= 1; --i) pts.push_back(x0 - delta / 4 - Rational(i) * dL);
        for (long i = 1; i <= cR; ++i) pts.push_back(x0 + delta / 4 + Rational(i) * dR);

        std::vector<Node> win;
        Rational clo = at0 ? Rational(0) : Rational(x0 - delta / 4);
        Rational chi = at1 ? Rational(1) : Rational(x0 + delta / 4);
        if (!at0) push_node(win, wlo, f.eval(wlo));
        for (const auto& x : pts)
            if (x < x0) {
                push_node(win, x - w / 2, x);
                push_node(win, x + w / 2, x);
            }
        push_node(win, clo, x0);
        push_node(win, chi, x0);
        for (const auto& x : pts)
            if (x > x0) {
                push_node(win, x - w / 2, x);
                push_node(win, x + w / 2, x);
            }
        if (!at1) push_node(win, whi, f.eval(whi));
        PwaMap g = splice(f, {Window{win}});
        if (!(sup_distance(g, f) < epsilon)) continue;

        FixedCluster out{g, x0, delta, Interval::closed(clo, chi), pts, {}, 0};
        for (const auto& x : pts) out.plateaus.push_back(Interval::closed(x - w / 2, x + w / 2));
        std::vector<Rational> all = pts;
        all.push_back(x0);
        std::sort(all.begin(), all.end());
        Rational mind = 1;
        for (std::size_t i = 1; i < all.size(); ++i) mind = std::min(mind, Rational(all[i] - all[i - 1]));
        out.eta = mind / 3;
        std::vector<Interval> flats = out.plateaus;
        flats.push_back(out.central);
        std::sort(flats.begin(), flats.end(), [](const Interval& a, const Interval& b) { return a.lo < b.lo; });
        for (std::size_t i = 1; i < flats.size(); ++i)
            if (flats[i].lo - flats[i - 1].hi < out.eta)
                throw InternalError("perturb_to_fixed_cluster: plateaus closer than eta");
        return out;
    }
    throw InternalError("perturb_to_fixed_cluster: could not meet the epsilon bound");
}

AtomicMeasure orbit_measure(const PwaMap& f, const ShrinkingCertificate& cert) {
    int p = cert.period;
    Polyline P = iterate_on(f, p, cert.interval.closure());
    auto comps = fixed_points_of_polyline(P);
    if (comps.empty()) throw InternalError("orbit_measure: no fixed point of f^p in the closure of I");
    Rational y = comps.front().set.lo;
    std::vector<Rational> orbit;
    for (int j = 0; j < p; ++j) {
        orbit.push_back(y);
        y = f.eval(y);
    }
    return AtomicMeasure::empirical(orbit);
}

Verdict<Interval> non_expansivity_witness(const PwaMap& f, const Rational& alpha, const ShrinkingCover& cover) {
    (void)f;
    if (alpha <= 0) throw DomainError("non_expansivity_witness: alpha must be positive");
    for (const auto& c : cover.certificates) {
        const Interval& I = c.covered();
        if (!(I.length() < alpha)) continue;
        bool ok = true;
        for (const auto& im : c.images) ok = ok && im.length() < alpha;
        for (const auto& im : c.entry_images) ok = ok && im.length() < alpha;
        if (ok) return I;
    }
    return Refusal{"length", "no cover interval shorter than " + to_string(alpha)};
}

}  // namespace lab
