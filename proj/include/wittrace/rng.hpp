#pragma once

#include <cstdint>
#include <string_view>
#include <vector>

#include "wittrace/integer.hpp"

namespace wittrace {

/// Deterministic splittable generator (splitmix64 core). Streams derived
/// by split() are independent of draw order in the parent, so adding a
/// property never perturbs the instances another property sees.
class Rng {
  public:
    explicit Rng(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next_u64() {
        std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    /// Derive an independent stream keyed by a label.
    Rng split(std::string_view label) const {
        std::uint64_t h = 0xcbf29ce484222325ULL ^ state_;
        for (char c : label) {
            h ^= static_cast<std::uint64_t>(static_cast<unsigned char>(c));
            h *= 0x100000001b3ULL;
        }
        return Rng(h);
    }
    Rng split(std::uint64_t index) const {
        Rng r(state_ ^ (0x9e3779b97f4a7c15ULL * (index + 1)));
        r.next_u64();
        return r;
    }

    /// Uniform-ish integer in [lo, hi] (inclusive); plain modulo, which is
    /// deterministic across platforms (bias is irrelevant at these ranges).
    long uniform(long lo, long hi) {
        if (hi <= lo) return lo;
        std::uint64_t span = static_cast<std::uint64_t>(hi - lo) + 1;
        return lo + static_cast<long>(next_u64() % span);
    }

    Int uniform_int(long lo, long hi) { return Int(uniform(lo, hi)); }

    bool coin(unsigned denominator = 2) { return next_u64() % denominator == 0; }

    template <typename T>
    const T& pick(const std::vector<T>& v) {
        return v[static_cast<std::size_t>(uniform(0, static_cast<long>(v.size()) - 1))];
    }

  private:
    std::uint64_t state_;
};

}  // namespace wittrace
