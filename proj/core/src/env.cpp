#include "drainage/env.hpp"

#include <string>

namespace drainage {

std::string LatticePoint::str() const {
    std::string s = "(";
    for (int i = 0; i < d; ++i) {
        if (i) s += ",";
        s += std::to_string(c[i]);
    }
    s += ")";
    return s;
}

std::size_t PointHash::operator()(const LatticePoint& p) const {
    // Container hashing only; the model environment uses point_hash with
    // an explicit seed.
    return static_cast<std::size_t>(point_hash(0x7f4a7c15ULL, p));
}

}  // namespace drainage
