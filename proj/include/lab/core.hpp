#pragma once

#include <gmpxx.h>

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <variant>

namespace lab {

inline constexpr const char* kToolVersion = "1.0.0";

using Rational = mpq_class;

/// Precondition or domain violation (x outside [0,1], empty interval, ...).
struct DomainError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

/// A configured resource limit was hit (piece cap, enumeration size).
struct ResourceError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// A construction reached a state its invariants rule out.
struct InternalError : std::logic_error {
    using std::logic_error::logic_error;
};

/// Malformed textual input.
struct ParseError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

/// A verifier's negative answer. Carries the name of the failed condition.
struct Refusal {
    std::string condition;
    std::string detail;
};

template <class T>
class Verdict {
public:
    Verdict(T value) : v_(std::move(value)) {}
    Verdict(Refusal r) : v_(std::move(r)) {}

    bool ok() const { return v_.index() == 0; }
    explicit operator bool() const { return ok(); }

    const T& value() const& {
        if (!ok()) throw DomainError("verdict is a refusal: " + refusal().condition);
        return std::get<0>(v_);
    }
    T&& value() && {
        if (!ok()) throw DomainError("verdict is a refusal: " + refusal().condition);
        return std::get<0>(std::move(v_));
    }
    const Refusal& refusal() const { return std::get<1>(v_); }

private:
    std::variant<T, Refusal> v_;
};

Rational rat(long num, long den = 1);
Rational pow2(int e);  // 2^e, e may be negative

/// "num/den" with den > 0, always including the denominator.
std::string to_string(const Rational& q);
/// Accepts "a/b" or "a" with optional sign; canonicalizes.
Rational parse_rational(std::string_view s);

Rational abs(const Rational& q);
Rational floor_q(const Rational& q);
/// Smallest integer strictly greater than q.
long next_int_above(const Rational& q);

/// Iterate piece cap: LAB_PIECE_CAP if set, else 2^20.
std::size_t piece_cap();

}  // namespace lab
