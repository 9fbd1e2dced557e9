#pragma once

#include <Eigen/Dense>

#include <cstdint>
#include <string>
#include <string_view>

namespace urank {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

// FNV-1a, 64 bit. Used for prompt/transcript keys and seed derivation.
constexpr std::uint64_t fnv1a64(std::string_view data) {
    std::uint64_t hash = 0xcbf29ce484222325ull;
    for (char c : data) {
        hash ^= static_cast<std::uint64_t>(static_cast<unsigned char>(c));
        hash *= 0x100000001b3ull;
    }
    return hash;
}

std::string to_hex(std::uint64_t value);

// Named sub-seed so each randomized component draws from its own stream.
inline std::uint64_t derive_seed(std::uint64_t root_seed, std::string_view label) {
    return fnv1a64(label) ^ (root_seed * 0x9e3779b97f4a7c15ull + 0x2545f4914f6cdd1dull);
}

}  // namespace urank
