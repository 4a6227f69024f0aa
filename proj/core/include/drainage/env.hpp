#pragma once

#include <cstdint>

#include "drainage/lattice.hpp"

namespace drainage {

/// SplitMix64 finalizer with the golden-ratio increment folded in.
/// Bijective on 64-bit words, so chaining it never loses entropy.
inline std::uint64_t mix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

/// Keyed counter-mode hash of (seed, coordinates). Each coordinate is
/// mixed individually before being folded into the running key so that
/// nearby lattice points map to unrelated words.
inline std::uint64_t point_hash(std::uint64_t seed, const LatticePoint& w) {
    std::uint64_t h = mix64(seed ^ 0x5851f42d4c957f2dULL);
    for (int i = 0; i < w.d; ++i)
        h = mix64(h ^ mix64(static_cast<std::uint64_t>(w.c[i])));
    return mix64(h ^ static_cast<std::uint64_t>(w.d));
}

/// Seed for replicate `index`, giving decorrelated per-replicate streams
/// without any coordination.
inline std::uint64_t replicate_seed(std::uint64_t seed, std::uint64_t index) {
    return seed ^ mix64(index);
}

/// Deterministic lazily-evaluated random environment: every lattice
/// vertex carries a reproducible uniform in (0,1). Stateless; a value
/// type wrapping ModelParams. All queries are pure functions of
/// (seed, point), so the infinite lattice is explorable without storage
/// and results are independent of evaluation order.
class Environment {
public:
    explicit Environment(const ModelParams& params) : params_(params) {
        params.validate();
    }

    const ModelParams& params() const { return params_; }

    /// Uniform value of vertex w, bit-identical across calls.
    /// 53-bit mantissa grid; an exact 0 is remapped to the smallest
    /// positive representable grid value so the range is (0,1) exclusive.
    double uniform_at(const LatticePoint& w) const {
        check_dim(w);
        std::uint64_t m = point_hash(params_.seed, w) >> 11;
        if (m == 0) m = 1;
        return static_cast<double>(m) * 0x1.0p-53;
    }

    /// Open vertex predicate: U_w < p.
    bool is_open(const LatticePoint& w) const { return uniform_at(w) < params_.p; }

    /// Strict total order by (U value, lexicographic coordinates).
    /// The lexicographic tiebreak fires only on 53-bit collisions
    /// (probability ~2^-53 per pair) and keeps the order deterministic.
    bool priority_less(const LatticePoint& a, const LatticePoint& b) const {
        if (a == b) throw std::invalid_argument("priority_less: identical points");
        return priority_less_values(uniform_at(a), a, uniform_at(b), b);
    }

    /// Comparator core, exposed so the tie rule is testable with forced
    /// values.
    static bool priority_less_values(double ua, const LatticePoint& a, double ub,
                                     const LatticePoint& b) {
        if (ua != ub) return ua < ub;
        return a.lex_less(b);
    }

private:
    void check_dim(const LatticePoint& w) const {
        if (w.d != params_.d)
            throw std::invalid_argument("Environment: point dimension mismatch");
    }

    ModelParams params_;
};

}  // namespace drainage
