#pragma once

#include "lab/cascade.hpp"
#include "lab/core.hpp"

#include <cstdint>
#include <map>
#include <optional>
#include <utility>
#include <vector>

namespace lab {

using Position = std::pair<int, int>;  // (row i, column j), both from 1

/// Cylinder of {0,1}^{N+ x N+}: finitely many fixed positions.
struct Cylinder {
    std::map<Position, int> constraints;

    static Cylinder from(const std::vector<std::pair<Position, int>>& entries);
    std::size_t size() const { return constraints.size(); }
    bool operator==(const Cylinder& o) const { return constraints == o.constraints; }
};

/// 2^-(number of constraints).
Rational cylinder_measure(const Cylinder& c);
/// Moves every constraint one column to the right.
Cylinder shift_preimage(const Cylinder& c);
/// All n(n+1)/2 entries of t fixed.
Cylinder atom_cylinder(const TriMatrix& t);

struct PartitionSpec {
    int k = 1, n = 1;
    /// (i, j) with 1 <= i <= k, 1 <= j <= k + n - i.
    std::vector<Position> positions() const;
    long position_count() const { return static_cast<long>(k) * n + static_cast<long>(k) * (k - 1) / 2; }
};

constexpr int kOracleMaxPositions = 24;

struct EntropyReport {
    long coefficient = 0;  // of log 2
    bool oracle_run = false;
    bool oracle_confirmed = false;
    std::uint64_t pieces = 0;
    std::optional<Refusal> oracle_refusal;
};

/// Closed form kn + k(k-1)/2; with oracle set, also enumerates every piece of the
/// refined partition (built as a join of shifted triangle partitions) and checks
/// count, masses and entropy exactly.
EntropyReport partition_entropy(int k, int n, bool oracle);

struct MixingReport {
    bool product_holds = false;
    bool conflict = false;
    Rational intersection_measure;
    Rational product_measure;
    long n0 = 0;  // from n0 on, the shifted positions never meet those of ck
};

MixingReport mixing_product_check(const Cylinder& ch, const Cylinder& ck, int n);

}  // namespace lab
