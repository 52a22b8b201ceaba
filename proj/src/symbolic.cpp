#include "lab/symbolic.hpp"

#include <algorithm>
#include <set>

namespace lab {

Cylinder Cylinder::from(const std::vector<std::pair<Position, int>>& entries) {
    Cylinder c;
    for (const auto& [pos, bit] : entries) {
        if (pos.first < 1 || pos.second < 1) throw DomainError("cylinder positions start at (1,1)");
        if (bit != 0 && bit != 1) throw DomainError("cylinder entries are bits");
        if (!c.constraints.emplace(pos, bit).second) throw DomainError("cylinder position repeated");
    }
    return c;
}

Rational cylinder_measure(const Cylinder& c) { return pow2(-static_cast<int>(c.size())); }

Cylinder shift_preimage(const Cylinder& c) {
    Cylinder out;
    for (const auto& [pos, bit] : c.constraints) out.constraints.emplace(Position{pos.first, pos.second + 1}, bit);
    return out;
}

Cylinder atom_cylinder(const TriMatrix& t) {
    Cylinder c;
    for (int i = 1; i <= t.rows(); ++i)
        for (int j = 1; j <= t.rows() + 1 - i; ++j) c.constraints.emplace(Position{i, j}, t.at(i, j));
    return c;
}

std::vector<Position> PartitionSpec::positions() const {
    std::vector<Position> out;
    for (int i = 1; i <= k; ++i)
        for (int j = 1; j <= k + n - i; ++j) out.push_back({i, j});
    return out;
}

namespace {

std::vector<Position> triangle(int k) {
    std::vector<Position> tri;
    for (int i = 1; i <= k; ++i)
        for (int j = 1; j <= k + 1 - i; ++j) tri.push_back({i, j});
    return tri;
}

// Depth-first walk over consistent tuples (B_0, ..., B_{n-1}) of triangle atoms,
// B_l pulled back l times. Each leaf is one nonempty piece of the join.
struct JoinWalk {
    int k, n;
    std::vector<Position> tri;
    std::map<Position, int> assigned;
    std::vector<std::uint64_t> by_exponent;
    bool cylinders = false;  // also rebuild each piece through Cylinder for small cases
    bool cylinder_mismatch = false;
    std::vector<Cylinder> chosen;

    void walk(int l) {
        if (l == n) {
            std::size_t e = assigned.size();
            if (by_exponent.size() <= e) by_exponent.resize(e + 1, 0);
            ++by_exponent[e];
            if (cylinders) {
                Cylinder piece;
                for (const auto& c : chosen)
                    for (const auto& [pos, bit] : c.constraints) piece.constraints.emplace(pos, bit);
                if (cylinder_measure(piece) != pow2(-static_cast<int>(e))) cylinder_mismatch = true;
            }
            return;
        }
        std::vector<std::size_t> fresh;
        for (std::size_t t = 0; t < tri.size(); ++t)
            if (!assigned.count({tri[t].first, tri[t].second + l})) fresh.push_back(t);
        for (std::uint64_t b = 0; b < (std::uint64_t{1} << fresh.size()); ++b) {
            for (std::size_t f = 0; f < fresh.size(); ++f)
                assigned[{tri[fresh[f]].first, tri[fresh[f]].second + l}] = static_cast<int>((b >> f) & 1u);
            if (cylinders) {
                Cylinder c;
                for (const auto& [i, j] : tri) c.constraints.emplace(Position{i, j}, assigned.at({i, j + l}));
                for (int s = 0; s < l; ++s) c = shift_preimage(c);
                chosen.push_back(std::move(c));
            }
            walk(l + 1);
            if (cylinders) chosen.pop_back();
        }
        for (auto t : fresh) assigned.erase({tri[t].first, tri[t].second + l});
    }
};

}  // namespace

EntropyReport partition_entropy(int k, int n, bool oracle) {
    if (k < 1 || n < 1) throw DomainError("partition_entropy: k and n must be >= 1");
    EntropyReport r;
    PartitionSpec spec{k, n};
    r.coefficient = spec.position_count();
    if (!oracle) return r;

    std::set<Position> joined;
    auto tri = triangle(k);
    for (int l = 0; l < n; ++l)
        for (const auto& [i, j] : tri) joined.insert({i, j + l});
    long P = static_cast<long>(joined.size());
    if (P > kOracleMaxPositions) {
        r.oracle_refusal = Refusal{"resource", "oracle needs 2^" + std::to_string(P) + " pieces, above 2^" +
                                                   std::to_string(kOracleMaxPositions)};
        return r;
    }
    r.oracle_run = true;
    auto spec_pos = spec.positions();
    std::set<Position> spec_set(spec_pos.begin(), spec_pos.end());

    JoinWalk w{k, n, tri, {}, {}, P <= 12, false, {}};
    w.walk(0);
    // masses 2^-e grouped by exponent keep the sums exact and small
    Rational mass = 0, entropy = 0;
    std::uint64_t pieces = 0;
    for (std::size_t e = 0; e < w.by_exponent.size(); ++e) {
        auto c = w.by_exponent[e];
        if (c == 0) continue;
        pieces += c;
        Rational m = Rational(static_cast<unsigned long>(c)) * pow2(-static_cast<int>(e));
        mass += m;
        entropy += m * static_cast<unsigned long>(e);
    }
    r.pieces = pieces;
    r.oracle_confirmed = spec_set == joined && !w.cylinder_mismatch && mass == 1 &&
                         entropy == Rational(r.coefficient) && pieces == (std::uint64_t{1} << r.coefficient);
    return r;
}

MixingReport mixing_product_check(const Cylinder& ch, const Cylinder& ck, int n) {
    if (n < 0) throw DomainError("mixing_product_check: n must be >= 0");
    MixingReport r;
    Cylinder moved = ch;
    for (int i = 0; i < n; ++i) moved = shift_preimage(moved);
    Cylinder both = ck;
    for (const auto& [pos, bit] : moved.constraints) {
        auto [it, inserted] = both.constraints.emplace(pos, bit);
        if (!inserted && it->second != bit) r.conflict = true;
    }
    r.intersection_measure = r.conflict ? Rational(0) : cylinder_measure(both);
    r.product_measure = cylinder_measure(ch) * cylinder_measure(ck);
    r.product_holds = r.intersection_measure == r.product_measure;
    if (!ch.constraints.empty() && !ck.constraints.empty()) {
        int max_ck = 0, min_ch = ch.constraints.begin()->first.second;
        for (const auto& [pos, bit] : ck.constraints) max_ck = std::max(max_ck, pos.second);
        for (const auto& [pos, bit] : ch.constraints) min_ch = std::min(min_ch, pos.second);
        r.n0 = std::max(0, max_ck + 1 - min_ch);
    }
    return r;
}

}  // namespace lab
