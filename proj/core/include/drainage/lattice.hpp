#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <stdexcept>
#include <string>

namespace drainage {

/// Maximum lattice dimension supported by the fixed-size point storage.
inline constexpr int kMaxDim = 6;

/// A vertex of Z^d. The last coordinate, c[d-1], is the oriented
/// "level" direction along which all paths advance.
struct LatticePoint {
    std::array<std::int64_t, kMaxDim> c{};
    int d = 2;

    LatticePoint() = default;
    LatticePoint(std::int64_t x, std::int64_t level) : d(2) {
        c[0] = x;
        c[1] = level;
    }
    LatticePoint(std::initializer_list<std::int64_t> coords) {
        if (coords.size() < 2 || coords.size() > kMaxDim)
            throw std::invalid_argument("LatticePoint: dimension out of range");
        d = static_cast<int>(coords.size());
        int i = 0;
        for (auto v : coords) c[i++] = v;
    }

    std::int64_t level() const { return c[d - 1]; }
    std::int64_t& level() { return c[d - 1]; }

    bool operator==(const LatticePoint& o) const {
        if (d != o.d) return false;
        for (int i = 0; i < d; ++i)
            if (c[i] != o.c[i]) return false;
        return true;
    }
    bool operator!=(const LatticePoint& o) const { return !(*this == o); }

    /// Lexicographic order on coordinates; used as the deterministic
    /// tiebreak for equal environment values.
    bool lex_less(const LatticePoint& o) const {
        for (int i = 0; i < d; ++i) {
            if (c[i] != o.c[i]) return c[i] < o.c[i];
        }
        return false;
    }

    std::string str() const;
};

/// Model parameters: dimension, open probability, seed and the
/// successor-scan guard.
struct ModelParams {
    int d = 2;
    double p = 0.5;
    std::uint64_t seed = 1;
    int max_search_height = 64;

    void validate() const {
        if (d < 2 || d > kMaxDim)
            throw std::invalid_argument("ModelParams: d must be in [2, " +
                                        std::to_string(kMaxDim) + "]");
        if (!(p > 0.0) || !(p < 1.0))
            throw std::invalid_argument("ModelParams: p must be in (0,1)");
        if (max_search_height < 1)
            throw std::invalid_argument("ModelParams: max_search_height must be >= 1");
    }
};

/// Thrown when a successor scan exceeds max_search_height levels.
/// With miss probability (1-p)^((l+1)^2-1) per level this signals
/// pathological parameters rather than bad luck.
struct SearchExceeded : std::runtime_error {
    explicit SearchExceeded(const std::string& what) : std::runtime_error(what) {}
};

/// Hash functor for unordered containers keyed on lattice points.
struct PointHash {
    std::size_t operator()(const LatticePoint& p) const;
};

}  // namespace drainage
