#include "lab/core.hpp"

#include <cctype>
#include <cstdlib>

namespace lab {

Rational rat(long num, long den) {
    if (den == 0) throw DomainError("zero denominator");
    Rational q(num, den);
    q.canonicalize();
    return q;
}

Rational pow2(int e) {
    mpz_class p = 1;
    p <<= static_cast<unsigned>(e < 0 ? -e : e);
    if (e >= 0) return Rational(p);
    Rational q(mpz_class(1), p);
    q.canonicalize();
    return q;
}

std::string to_string(const Rational& q) {
    return q.get_num().get_str() + "/" + q.get_den().get_str();
}

namespace {
bool all_digits(std::string_view s) {
    if (s.empty()) return false;
    for (char c : s)
        if (!std::isdigit(static_cast<unsigned char>(c))) return false;
    return true;
}
}  // namespace

Rational parse_rational(std::string_view s) {
    std::string_view body = s;
    bool neg = false;
    if (!body.empty() && (body.front() == '-' || body.front() == '+')) {
        neg = body.front() == '-';
        body.remove_prefix(1);
    }
    auto slash = body.find('/');
    std::string_view num = body.substr(0, slash);
    std::string_view den = slash == std::string_view::npos ? std::string_view("1") : body.substr(slash + 1);
    if (!all_digits(num) || !all_digits(den))
        throw ParseError("malformed rational '" + std::string(s) + "'");
    mpz_class n{std::string(num)}, d{std::string(den)};
    if (d == 0) throw ParseError("zero denominator in '" + std::string(s) + "'");
    if (neg) n = -n;
    Rational q(n, d);
    q.canonicalize();
    return q;
}

Rational abs(const Rational& q) { return q < 0 ? Rational(-q) : q; }

Rational floor_q(const Rational& q) {
    mpz_class r;
    mpz_fdiv_q(r.get_mpz_t(), q.get_num_mpz_t(), q.get_den_mpz_t());
    return Rational(r);
}

long next_int_above(const Rational& q) {
    Rational f = floor_q(q) + 1;
    return f.get_num().get_si();
}

std::size_t piece_cap() {
    if (const char* env = std::getenv("LAB_PIECE_CAP")) {
        char* end = nullptr;
        unsigned long long v = std::strtoull(env, &end, 10);
        if (end != env && *end == '\0' && v > 0) return static_cast<std::size_t>(v);
    }
    return std::size_t{1} << 20;
}

}  // namespace lab
