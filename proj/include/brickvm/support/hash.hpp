#pragma once

#include <bit>
#include <cstdint>
#include <string>
#include <string_view>

#include "brickvm/support/bytes.hpp"

namespace brickvm {

/// Incremental 64-bit FNV-1a. Used for state hashes and content fingerprints,
/// so the byte feed order is part of every caller's contract.
class Fnv1a64 {
public:
    static constexpr std::uint64_t kOffset = 0xcbf29ce484222325ull;
    static constexpr std::uint64_t kPrime = 0x00000100000001b3ull;

    void bytes(ByteView data) noexcept {
        for (auto b : data) byte(b);
    }
    void byte(std::uint8_t b) noexcept {
        state_ ^= b;
        state_ *= kPrime;
    }
    void u64(std::uint64_t v) noexcept {
        for (int i = 0; i < 8; ++i) byte(static_cast<std::uint8_t>(v >> (8 * i)));
    }
    void i64(std::int64_t v) noexcept { u64(static_cast<std::uint64_t>(v)); }
    void f64(double v) noexcept { u64(std::bit_cast<std::uint64_t>(v)); }
    void boolean(bool v) noexcept { byte(v ? 1 : 0); }
    // Length-prefixed so that ("ab","c") and ("a","bc") differ.
    void str(std::string_view s) noexcept {
        u64(s.size());
        for (char c : s) byte(static_cast<std::uint8_t>(c));
    }

    std::uint64_t value() const noexcept { return state_; }

private:
    std::uint64_t state_ = kOffset;
};

std::string hex64(std::uint64_t value);

inline std::uint64_t fnv1a64(ByteView data) {
    Fnv1a64 h;
    h.bytes(data);
    return h.value();
}

}  // namespace brickvm
