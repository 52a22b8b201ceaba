#pragma once

#include "lab/core.hpp"
#include "lab/interval.hpp"
#include "lab/pwa_map.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace lab {

/// Triangular bit matrix with n rows; row i (1-based) holds t_{i,1..n+1-i}.
class TriMatrix {
public:
    explicit TriMatrix(int n = 1);
    static std::size_t entries(int n) { return static_cast<std::size_t>(n) * static_cast<std::size_t>(n + 1) / 2; }
    /// Bit k of code is the k-th entry in row-major order.
    static TriMatrix from_code(int n, std::uint64_t code);
    /// Rows separated by '/', e.g. "10/1".
    static TriMatrix parse(const std::string& key);

    int rows() const { return n_; }
    int at(int i, int j) const;
    void set(int i, int j, int bit);
    std::uint64_t code() const;
    std::string key() const;
    bool operator==(const TriMatrix& o) const { return n_ == o.n_ && bits_ == o.bits_; }

private:
    std::size_t offset(int i, int j) const;
    int n_;
    std::vector<std::uint8_t> bits_;
};

/// Drops the last diagonal.
TriMatrix tri_project(const TriMatrix& t);
/// s_{i,j} = t_{i+1,j}: drops the first row.
TriMatrix tri_shift(const TriMatrix& t);
/// Appends a new last diagonal; diag[i-1] becomes entry (i, n+2-i).
TriMatrix tri_embed(const TriMatrix& t, const std::vector<int>& diag);

struct CascadeAtoms {
    Interval J, I, Iprime;
    int depth = 0;
    std::vector<PwaMap> maps;                     // f_1..f_N
    std::vector<std::vector<Interval>> atoms;     // atoms[n-1][code] for generation n
    std::vector<Rational> stage_bounds;           // sup_distance(f_{n+1}, f_n), n = 1..N-1

    const PwaMap& map() const { return maps.back(); }
    const Interval& atom(const TriMatrix& t) const;
};

/// Largest depth accepted by the builder (generation 5 already has 2^15 atoms).
constexpr int kMaxCascadeDepth = 5;

/// Stage 1 is a two-branch horseshoe on closure(J) with slope 4 and constant value
/// J.lo outside closure(J); each later stage replaces f on every atom by a zigzag
/// through its children.
CascadeAtoms build_cascade_map(const Interval& J, const Interval& I, const Interval& Iprime, int N);

struct CascadeCheck {
    bool ok = true;
    int generation = 0;
    std::string matrix;
    std::string condition;
    std::string detail;
};

/// Rechecks every atom condition for f_N plus the per-stage slope, locality and
/// Cauchy bounds, reporting the first violation.
CascadeCheck verify_cascade(const CascadeAtoms& ca);

Verdict<TriMatrix> itinerary(const CascadeAtoms& ca, const Rational& x, int n);

struct CascadeEmbedding {
    PwaMap g;
    CascadeAtoms cascade;  // maps are the embedded stage maps
    Rational delta;
    Rational sup_distance;
};

/// Plants the cascade on J around the fixed point x0, with g = f off (x0 - delta, x0 + delta).
CascadeEmbedding embed_cascade(const PwaMap& f, const Rational& x0, const Rational& epsilon, int N);

}  // namespace lab
