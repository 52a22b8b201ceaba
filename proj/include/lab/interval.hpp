#pragma once

#include "lab/core.hpp"

#include <string>

namespace lab {

/// Subinterval of [0,1] with exact endpoints and open/closed flags.
struct Interval {
    Rational lo, hi;
    bool closed_lo = true;
    bool closed_hi = true;

    static Interval closed(Rational a, Rational b);
    static Interval open(Rational a, Rational b);
    static Interval point(Rational a);
    /// Open in the relative topology of [0,1]: closed only at 0 or 1.
    static Interval rel_open(Rational a, Rational b);

    bool empty() const { return lo > hi || (lo == hi && !(closed_lo && closed_hi)); }
    Rational length() const { return empty() ? Rational(0) : Rational(hi - lo); }
    Rational midpoint() const { return (lo + hi) / 2; }
    bool contains(const Rational& x) const;
    Interval closure() const { return closed(lo, hi); }
    Interval interior() const { return open(lo, hi); }
    bool is_rel_open() const;

    bool operator==(const Interval& o) const {
        return lo == o.lo && hi == o.hi && closed_lo == o.closed_lo && closed_hi == o.closed_hi;
    }
};

/// Checks 0 <= lo <= hi <= 1.
void require_in_unit(const Interval& I, const char* what);

/// a is a subset of b (respecting endpoint flags).
bool subset(const Interval& a, const Interval& b);
bool disjoint(const Interval& a, const Interval& b);
Interval intersect(const Interval& a, const Interval& b);

/// "[1/4, 1/2)" style rendering.
std::string to_string(const Interval& I);

}  // namespace lab
