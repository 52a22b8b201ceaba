#include "lab/cascade.hpp"

#include <algorithm>

namespace lab {

TriMatrix::TriMatrix(int n) : n_(n), bits_(entries(n), 0) {
    if (n < 1) throw DomainError("TriMatrix needs at least one row");
}

std::size_t TriMatrix::offset(int i, int j) const {
    if (i < 1 || i > n_ || j < 1 || j > n_ + 1 - i)
        throw DomainError("TriMatrix position (" + std::to_string(i) + "," + std::to_string(j) + ") out of range");
    auto ii = static_cast<std::size_t>(i - 1);
    return ii * static_cast<std::size_t>(n_ + 1) - ii * (ii + 1) / 2 + static_cast<std::size_t>(j - 1);
}

int TriMatrix::at(int i, int j) const { return bits_[offset(i, j)]; }

void TriMatrix::set(int i, int j, int bit) {
    if (bit != 0 && bit != 1) throw DomainError("TriMatrix entries are bits");
    bits_[offset(i, j)] = static_cast<std::uint8_t>(bit);
}

TriMatrix TriMatrix::from_code(int n, std::uint64_t code) {
    TriMatrix t(n);
    if (entries(n) > 63) throw ResourceError("TriMatrix code limited to 63 entries");
    if (code >> entries(n)) throw DomainError("TriMatrix code too large for " + std::to_string(n) + " rows");
    for (std::size_t k = 0; k < t.bits_.size(); ++k) t.bits_[k] = static_cast<std::uint8_t>((code >> k) & 1u);
    return t;
}

std::uint64_t TriMatrix::code() const {
    if (bits_.size() > 63) throw ResourceError("TriMatrix code limited to 63 entries");
    std::uint64_t c = 0;
    for (std::size_t k = 0; k < bits_.size(); ++k) c |= static_cast<std::uint64_t>(bits_[k]) << k;
    return c;
}

std::string TriMatrix::key() const {
    std::string s;
    for (int i = 1; i <= n_; ++i) {
        if (i > 1) s += '/';
        for (int j = 1; j <= n_ + 1 - i; ++j) s += static_cast<char>('0' + at(i, j));
    }
    return s;
}

TriMatrix TriMatrix::parse(const std::string& key) {
    std::vector<std::string> rows{""};
    for (char c : key) {
        if (c == '/')
            rows.emplace_back();
        else if (c == '0' || c == '1')
            rows.back() += c;
        else
            throw ParseError("bad character in matrix key '" + key + "'");
    }
    int n = static_cast<int>(rows.size());
    TriMatrix t(n);
    for (int i = 1; i <= n; ++i) {
        const auto& r = rows[static_cast<std::size_t>(i - 1)];
        if (static_cast<int>(r.size()) != n + 1 - i) throw ParseError("row " + std::to_string(i) + " of '" + key + "' has wrong length");
        for (int j = 1; j <= n + 1 - i; ++j) t.set(i, j, r[static_cast<std::size_t>(j - 1)] - '0');
    }
    return t;
}

TriMatrix tri_project(const TriMatrix& t) {
    int n = t.rows() - 1;
    if (n < 1) throw DomainError("tri_project needs at least two rows");
    TriMatrix s(n);
    for (int i = 1; i <= n; ++i)
        for (int j = 1; j <= n + 1 - i; ++j) s.set(i, j, t.at(i, j));
    return s;
}

TriMatrix tri_shift(const TriMatrix& t) {
    int n = t.rows() - 1;
    if (n < 1) throw DomainError("tri_shift needs at least two rows");
    TriMatrix s(n);
    for (int i = 1; i <= n; ++i)
        for (int j = 1; j <= n + 1 - i; ++j) s.set(i, j, t.at(i + 1, j));
    return s;
}

TriMatrix tri_embed(const TriMatrix& t, const std::vector<int>& diag) {
    int n = t.rows();
    if (static_cast<int>(diag.size()) != n + 1) throw DomainError("tri_embed: diagonal must have n+1 bits");
    TriMatrix s(n + 1);
    for (int i = 1; i <= n; ++i)
        for (int j = 1; j <= n + 1 - i; ++j) s.set(i, j, t.at(i, j));
    for (int i = 1; i <= n + 1; ++i) s.set(i, n + 2 - i, diag[static_cast<std::size_t>(i - 1)]);
    return s;
}

const Interval& CascadeAtoms::atom(const TriMatrix& t) const {
    if (t.rows() < 1 || t.rows() > depth) throw DomainError("atom: generation outside 1.." + std::to_string(depth));
    return atoms[static_cast<std::size_t>(t.rows() - 1)][t.code()];
}

namespace {

std::size_t gen_size(int n) { return std::size_t{1} << TriMatrix::entries(n); }

// Diagonal bits for the d-th child, first row most significant.
std::vector<int> child_diag(std::uint64_t d, int n) {
    std::vector<int> diag(static_cast<std::size_t>(n + 1));
    for (int i = 1; i <= n + 1; ++i) diag[static_cast<std::size_t>(i - 1)] = static_cast<int>((d >> (n + 1 - i)) & 1u);
    return diag;
}

std::vector<Node> stage1_nodes(const Interval& J) {
    Rational j0 = J.lo, l = J.hi - J.lo;
    return {{j0, j0},
            {j0 + l / 8, j0},
            {j0 + 3 * l / 8, j0 + l},
            {j0 + 5 * l / 8, j0 + l},
            {j0 + 7 * l / 8, j0},
            {j0 + l, j0}};
}

void run_stages(CascadeAtoms& ca, const PwaMap& f1, int N) {
    Rational j0 = ca.J.lo, l = ca.J.hi - ca.J.lo;
    ca.depth = N;
    ca.maps = {f1};
    ca.atoms = {{Interval::closed(j0 + l / 8, j0 + 3 * l / 8), Interval::closed(j0 + 5 * l / 8, j0 + 7 * l / 8)}};
    ca.stage_bounds.clear();
    Rational unit = l / 8;  // spacing of the current generation inside its parents

    for (int n = 1; n < N; ++n) {
        const PwaMap& fn = ca.maps.back();
        const auto& gen = ca.atoms.back();
        Rational mu = unit / 2;
        std::uint64_t K = std::uint64_t{1} << (n + 1);
        std::vector<Interval> next(gen_size(n + 1));
        std::vector<Window> windows;
        windows.reserve(gen.size());
        Rational next_unit = 1;
        for (std::uint64_t c = 0; c < gen.size(); ++c) {
            TriMatrix t = TriMatrix::from_code(n, c);
            const Interval& A = gen[c];
            Rational u = A.length() / (2 * K + 1);
            next_unit = std::min(next_unit, u);
            std::vector<Node> nodes{{A.lo, fn.eval(A.lo)}};
            for (std::uint64_t d = 0; d < K; ++d) {
                TriMatrix s = tri_embed(t, child_diag(d, n));
                Interval C = Interval::closed(A.lo + (2 * d + 1) * u, A.lo + (2 * d + 2) * u);
                const Interval& B = gen[tri_shift(s).code()];
                Rational e_lo = B.lo - mu, e_hi = B.hi + mu;
                if (d % 2 == 0) {
                    nodes.push_back({C.lo, e_lo});
                    nodes.push_back({C.hi, e_hi});
                } else {
                    nodes.push_back({C.lo, e_hi});
                    nodes.push_back({C.hi, e_lo});
                }
                next[s.code()] = C;
            }
            nodes.push_back({A.hi, fn.eval(A.hi)});
            windows.push_back({std::move(nodes)});
        }
        std::sort(windows.begin(), windows.end(),
                  [](const Window& a, const Window& b) { return a.nodes.front().x < b.nodes.front().x; });
        PwaMap next_map = splice(fn, windows);
        Rational bound = sup_distance(next_map, fn);
        if (!(bound < pow2(1 - n)))
            throw InternalError("build_cascade_map: stage " + std::to_string(n + 1) + " moved the map by " +
                                to_string(bound));
        ca.stage_bounds.push_back(bound);
        ca.maps.push_back(std::move(next_map));
        ca.atoms.push_back(std::move(next));
        unit = next_unit;
    }
}

void require_depth(int N) {
    if (N < 1) throw DomainError("cascade depth must be >= 1");
    if (N > kMaxCascadeDepth)
        throw ResourceError("cascade depth " + std::to_string(N) + " exceeds the cap " +
                            std::to_string(kMaxCascadeDepth));
}

}  // namespace

CascadeAtoms build_cascade_map(const Interval& J, const Interval& I, const Interval& Iprime, int N) {
    require_depth(N);
    for (const Interval* X : {&J, &I, &Iprime}) {
        require_in_unit(*X, "build_cascade_map");
        if (X->closed_lo || X->closed_hi || !(X->lo < X->hi))
            throw DomainError("build_cascade_map: J, I, I' must be open and nonempty");
    }
    if (!(I.lo < J.lo && J.hi < I.hi)) throw DomainError("build_cascade_map: closure of J must lie in I");
    if (!(Iprime.lo < I.lo && I.hi < Iprime.hi)) throw DomainError("build_cascade_map: closure of I must lie in I'");

    PwaMap f1 = splice(PwaMap::constant(J.lo), {Window{stage1_nodes(J)}});
    CascadeAtoms ca;
    ca.J = J;
    ca.I = I;
    ca.Iprime = Iprime;
    run_stages(ca, f1, N);
    if (!subset(image_of_interval(ca.map(), J.closure()), Iprime))
        throw InternalError("build_cascade_map: image of closure(J) leaves I'");
    return ca;
}

namespace {

CascadeCheck fail(int gen, const TriMatrix* t, std::string cond, std::string detail) {
    return {false, gen, t ? t->key() : "", std::move(cond), std::move(detail)};
}

bool affine_on(const PwaMap& f, const Interval& A) {
    const auto& bp = f.breakpoints();
    auto it = std::upper_bound(bp.begin(), bp.end(), A.lo);
    return it == bp.end() || *it >= A.hi;
}

}  // namespace

CascadeCheck verify_cascade(const CascadeAtoms& ca) {
    int N = ca.depth;
    if (N < 1 || static_cast<int>(ca.maps.size()) != N || static_cast<int>(ca.atoms.size()) != N)
        return fail(0, nullptr, "shape", "depth, maps and generations disagree");
    const PwaMap& f = ca.map();

    for (int n = 1; n <= N; ++n) {
        const auto& gen = ca.atoms[static_cast<std::size_t>(n - 1)];
        if (gen.size() != gen_size(n))
            return fail(n, nullptr, "count", std::to_string(gen.size()) + " atoms instead of " +
                                                 std::to_string(gen_size(n)));
        for (std::uint64_t c = 0; c < gen.size(); ++c) {
            TriMatrix t = TriMatrix::from_code(n, c);
            const Interval& A = gen[c];
            if (!A.closed_lo || !A.closed_hi || !(A.lo < A.hi) || A.lo < 0 || A.hi > 1)
                return fail(n, &t, "interior", "atom " + to_string(A) + " is not a closed interval with interior");
            if (!(A.length() < pow2(-n)))
                return fail(n, &t, "length", "length " + to_string(A.length()) + " not below 2^-" + std::to_string(n));
            Interval img = image_of_interval(f, A);
            if (n == 1) {
                for (const auto& B : gen)
                    if (!subset(B, img.interior()))
                        return fail(n, &t, "horseshoe", "interior of f(atom) = " + to_string(img.interior()) +
                                                            " misses " + to_string(B));
                continue;
            }
            const Interval& P = ca.atom(tri_project(t));
            if (!subset(A, P.interior()))
                return fail(n, &t, "nesting", to_string(A) + " not inside the interior of " + to_string(P));
            TriMatrix st = tri_shift(t);
            if (!subset(ca.atom(st), img.interior()))
                return fail(n, &t, "expansion", "interior of f(atom) = " + to_string(img.interior()) +
                                                    " misses atom " + st.key());
            if (n >= 3) {
                const Interval& Q = ca.atom(tri_project(st));
                if (!subset(img, Q.interior()))
                    return fail(n, &t, "preimage", "f(atom) = " + to_string(img) + " not inside the interior of " +
                                                       to_string(Q));
            }
        }
        std::vector<std::uint64_t> order(gen.size());
        for (std::uint64_t c = 0; c < gen.size(); ++c) order[c] = c;
        std::sort(order.begin(), order.end(), [&](auto a, auto b) { return gen[a].lo < gen[b].lo; });
        for (std::size_t k = 1; k < order.size(); ++k)
            if (!disjoint(gen[order[k - 1]], gen[order[k]])) {
                TriMatrix t = TriMatrix::from_code(n, order[k]);
                return fail(n, &t, "disjointness", "overlaps atom " + TriMatrix::from_code(n, order[k - 1]).key());
            }
    }

    for (int k = 1; k <= N; ++k) {
        const PwaMap& fk = ca.maps[static_cast<std::size_t>(k - 1)];
        const auto& gen = ca.atoms[static_cast<std::size_t>(k - 1)];
        for (std::uint64_t c = 0; c < gen.size(); ++c) {
            const Interval& A = gen[c];
            TriMatrix t = TriMatrix::from_code(k, c);
            if (!affine_on(fk, A)) return fail(k, &t, "slope", "stage map is not affine on the atom");
            Rational s = abs((fk.eval(A.hi) - fk.eval(A.lo)) / (A.hi - A.lo));
            if (!(s > pow2(k))) return fail(k, &t, "slope", "slope " + to_string(s) + " not above 2^" + std::to_string(k));
        }
        if (k == N) break;
        const PwaMap& next = ca.maps[static_cast<std::size_t>(k)];
        Rational d = sup_distance(next, fk);
        if (static_cast<int>(ca.stage_bounds.size()) != N - 1 || ca.stage_bounds[static_cast<std::size_t>(k - 1)] != d)
            return fail(k, nullptr, "cauchy", "stored stage bound disagrees with the maps");
        if (!(d < pow2(1 - k))) return fail(k, nullptr, "cauchy", "stage change " + to_string(d) + " too large");
        if (!(sup_distance(f, fk) < pow2(2 - k)))
            return fail(k, nullptr, "cauchy", "f_N too far from f_" + std::to_string(k));
        // locality: agreement at every breakpoint of either map outside the open atoms
        std::vector<Interval> sorted = gen;
        std::sort(sorted.begin(), sorted.end(), [](const Interval& a, const Interval& b) { return a.lo < b.lo; });
        auto inside = [&](const Rational& x) {
            auto it = std::upper_bound(sorted.begin(), sorted.end(), x,
                                       [](const Rational& v, const Interval& a) { return v < a.lo; });
            return it != sorted.begin() && std::prev(it)->interior().contains(x);
        };
        for (const PwaMap* m : {&fk, &next})
            for (const auto& x : m->breakpoints())
                if (!inside(x) && next.eval(x) != fk.eval(x))
                    return fail(k, nullptr, "locality", "stage " + std::to_string(k + 1) + " changed the map at " +
                                                            to_string(x) + " outside the atoms");
    }
    return {};
}

Verdict<TriMatrix> itinerary(const CascadeAtoms& ca, const Rational& x, int n) {
    if (n < 1 || n > ca.depth) throw DomainError("itinerary: n outside 1.." + std::to_string(ca.depth));
    if (x < 0 || x > 1) throw DomainError("itinerary: x outside [0,1]");
    std::optional<TriMatrix> t;
    for (std::uint64_t c = 0; c < 2; ++c)
        if (ca.atoms[0][c].contains(x)) t = TriMatrix::from_code(1, c);
    if (!t) return Refusal{"escape", "x leaves the generation-1 atoms"};
    for (int k = 1; k < n; ++k) {
        std::optional<TriMatrix> next;
        for (std::uint64_t d = 0; d < (std::uint64_t{1} << (k + 1)) && !next; ++d) {
            TriMatrix s = tri_embed(*t, child_diag(d, k));
            if (ca.atom(s).contains(x)) next = s;
        }
        if (!next) return Refusal{"escape", "x leaves the generation-" + std::to_string(k + 1) + " atoms"};
        t = std::move(next);
    }
    return *t;
}

CascadeEmbedding embed_cascade(const PwaMap& f, const Rational& x0, const Rational& epsilon, int N) {
    require_depth(N);
    if (x0 < 0 || x0 > 1 || f.eval(x0) != x0) throw DomainError("embed_cascade: x0 is not a fixed point");
    if (epsilon <= 0) throw DomainError("embed_cascade: epsilon must be positive");
    Rational L = f.max_abs_slope();
    Rational delta = epsilon / 7;
    if (L > 0) delta = std::min(delta, Rational(epsilon / (7 * L)));
    auto clip = [](const Rational& v) -> Rational { return std::min(Rational(1), std::max(Rational(0), v)); };
    Interval I = Interval::open(clip(x0 - delta), clip(x0 + delta));
    Interval J = Interval::open(clip(x0 - delta / 2), clip(x0 + delta / 2));

    std::vector<Node> win;
    if (I.lo < J.lo) win.push_back({I.lo, f.eval(I.lo)});
    for (auto& nd : stage1_nodes(J)) win.push_back(nd);
    if (J.hi < I.hi) win.push_back({I.hi, f.eval(I.hi)});
    PwaMap g1 = splice(f, {Window{win}});

    CascadeEmbedding out{g1, {}, delta, 0};
    out.cascade.J = J;
    out.cascade.I = I;
    out.cascade.Iprime = Interval::open(clip(x0 - epsilon / 6), clip(x0 + epsilon / 6));
    run_stages(out.cascade, g1, N);
    out.g = out.cascade.map();
    out.sup_distance = sup_distance(out.g, f);
    if (!(out.sup_distance < epsilon)) throw InternalError("embed_cascade: sup distance bound violated");
    return out;
}

}  // namespace lab
