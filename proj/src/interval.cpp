#include "lab/interval.hpp"

namespace lab {

Interval Interval::closed(Rational a, Rational b) { return {std::move(a), std::move(b), true, true}; }
Interval Interval::open(Rational a, Rational b) { return {std::move(a), std::move(b), false, false}; }
Interval Interval::point(Rational a) { return closed(a, a); }

Interval Interval::rel_open(Rational a, Rational b) {
    bool cl = a <= 0, ch = b >= 1;
    if (a < 0) a = 0;
    if (b > 1) b = 1;
    return {std::move(a), std::move(b), cl, ch};
}

bool Interval::contains(const Rational& x) const {
    if (x < lo || x > hi) return false;
    if (x == lo && !closed_lo) return false;
    if (x == hi && !closed_hi) return false;
    return true;
}

bool Interval::is_rel_open() const {
    return (!closed_lo || lo == 0) && (!closed_hi || hi == 1);
}

void require_in_unit(const Interval& I, const char* what) {
    if (I.lo < 0 || I.hi > 1 || I.lo > I.hi)
        throw DomainError(std::string(what) + ": interval " + to_string(I) + " not inside [0,1]");
}

bool subset(const Interval& a, const Interval& b) {
    if (a.empty()) return true;
    if (b.empty()) return false;
    if (a.lo < b.lo || (a.lo == b.lo && a.closed_lo && !b.closed_lo)) return false;
    if (a.hi > b.hi || (a.hi == b.hi && a.closed_hi && !b.closed_hi)) return false;
    return true;
}

Interval intersect(const Interval& a, const Interval& b) {
    Interval r;
    if (a.lo > b.lo) {
        r.lo = a.lo;
        r.closed_lo = a.closed_lo;
    } else if (b.lo > a.lo) {
        r.lo = b.lo;
        r.closed_lo = b.closed_lo;
    } else {
        r.lo = a.lo;
        r.closed_lo = a.closed_lo && b.closed_lo;
    }
    if (a.hi < b.hi) {
        r.hi = a.hi;
        r.closed_hi = a.closed_hi;
    } else if (b.hi < a.hi) {
        r.hi = b.hi;
        r.closed_hi = b.closed_hi;
    } else {
        r.hi = a.hi;
        r.closed_hi = a.closed_hi && b.closed_hi;
    }
    return r;
}

bool disjoint(const Interval& a, const Interval& b) { return intersect(a, b).empty(); }

std::string to_string(const Interval& I) {
    return std::string(I.closed_lo ? "[" : "(") + to_string(I.lo) + ", " + to_string(I.hi) +
           (I.closed_hi ? "]" : ")");
}

}  // namespace lab
