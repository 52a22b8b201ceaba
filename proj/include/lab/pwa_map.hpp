#pragma once

#include "lab/core.hpp"
#include "lab/interval.hpp"

#include <cstddef>
#include <vector>

namespace lab {

struct Node {
    Rational x, y;
};

/// Continuous piecewise-affine self-map of [0,1] given by its graph nodes.
/// Immutable once built.
class PwaMap {
public:
    PwaMap(std::vector<Rational> breakpoints, std::vector<Rational> values);

    static PwaMap from_nodes(const std::vector<Node>& nodes);
    static PwaMap identity();
    static PwaMap constant(const Rational& c);
    /// T: 0 -> 0, 1/2 -> 1, 1 -> 0.
    static PwaMap tent();
    /// D: nodes at 0, 1/4, 1/2, 3/4, 1 with values 0, 1, 0, 1, 0.
    static PwaMap double_tent();

    const std::vector<Rational>& breakpoints() const { return bp_; }
    const std::vector<Rational>& values() const { return val_; }
    std::size_t pieces() const { return bp_.size() - 1; }
    std::vector<Node> nodes() const;

    Rational eval(const Rational& x) const;
    /// Index of the piece [bp_k, bp_{k+1}] holding x; at an interior breakpoint the right piece.
    std::size_t piece_of(const Rational& x) const;
    Rational slope(std::size_t piece) const;
    Rational max_abs_slope() const;

    bool operator==(const PwaMap& o) const { return bp_ == o.bp_ && val_ == o.val_; }

private:
    std::vector<Rational> bp_, val_;
};

/// Graph of a continuous piecewise-affine function on [nodes.front().x, nodes.back().x].
struct Polyline {
    std::vector<Node> nodes;
};

/// Appends (x, y), dropping the previous node when it is collinear with its neighbours.
void push_node(std::vector<Node>& out, Rational x, Rational y);

/// f applied after p, i.e. the graph of f(p(x)); throws ResourceError past cap pieces.
Polyline apply(const PwaMap& f, const Polyline& p, std::size_t cap);

/// f o g.
PwaMap compose(const PwaMap& f, const PwaMap& g, std::size_t cap = piece_cap());
PwaMap iterate_map(const PwaMap& f, int n, std::size_t cap = piece_cap());
/// f^n restricted to the closed interval D, as a polyline.
Polyline iterate_on(const PwaMap& f, int n, const Interval& D, std::size_t cap = piece_cap());

Interval image_of_interval(const PwaMap& f, const Interval& I);
Rational sup_distance(const PwaMap& f, const PwaMap& g);

enum class FixedKind { point, segment };
struct FixedComponent {
    Interval set;
    FixedKind kind;
};

std::vector<FixedComponent> fixed_points_of_polyline(const Polyline& p);
std::vector<FixedComponent> fixed_points_of_iterate(const PwaMap& f, int r, std::size_t cap = piece_cap());

/// Connected components of D intersected with f^{-1}(T), both closed; left to right.
std::vector<Interval> preimage_components(const PwaMap& f, const Interval& D, const Interval& T);

/// Replacement of f on [a, b] by the polygon through nodes (first x = a, last x = b).
struct Window {
    std::vector<Node> nodes;
};
/// Windows sorted and with disjoint interiors. Endpoint values must match f except at 0 and 1.
PwaMap splice(const PwaMap& f, const std::vector<Window>& windows);

}  // namespace lab
