#pragma once

#include "lab/core.hpp"
#include "lab/pwa_map.hpp"

#include <cstdint>
#include <vector>

namespace labtest {

// splitmix64; fixed output on every platform, unlike the std distributions
class Rng {
public:
    explicit Rng(std::uint64_t seed) : s_(seed) {}
    std::uint64_t next() {
        std::uint64_t z = (s_ += 0x9e3779b97f4a7c15ULL);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }
    long below(long n) { return static_cast<long>(next() % static_cast<std::uint64_t>(n)); }
    lab::Rational unit(long den) { return lab::rat(below(den + 1), den); }

private:
    std::uint64_t s_;
};

// Equally spaced nodes with values on the grid k/den.
inline lab::PwaMap random_map(Rng& rng, int max_pieces = 5, long den = 16) {
    int n = 1 + static_cast<int>(rng.below(max_pieces));
    std::vector<lab::Node> nodes;
    for (int i = 0; i <= n; ++i) nodes.push_back({lab::rat(i, n), rng.unit(den)});
    return lab::PwaMap::from_nodes(nodes);
}

inline double to_d(const lab::Rational& q) { return q.get_d(); }

// f evaluated in doubles from its node list; an oracle independent of PwaMap::eval.
inline double eval_d(const lab::PwaMap& f, double x) {
    const auto& b = f.breakpoints();
    const auto& v = f.values();
    for (std::size_t k = 0; k + 1 < b.size(); ++k) {
        double x0 = b[k].get_d(), x1 = b[k + 1].get_d();
        if (x <= x1 || k + 2 == b.size()) {
            double t = (x - x0) / (x1 - x0);
            return v[k].get_d() + t * (v[k + 1].get_d() - v[k].get_d());
        }
    }
    return v.back().get_d();
}

}  // namespace labtest
