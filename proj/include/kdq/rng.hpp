// Copyright 2026 The kdq developers
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

/**
 * @file
 * Counter-based pseudo-random generator (SplitMix64) with keyed substream
 * derivation. All stochastic operations in the library take an explicit
 * 64-bit seed and draw from substreams keyed by task indices, so results
 * are bit-reproducible and independent of evaluation order or threading.
 *
 * Distributions are implemented here rather than with <random> because the
 * standard library's distribution algorithms are implementation-defined and
 * would break cross-platform reproducibility of frozen test values.
 */

#pragma once

#include <cmath>
#include <cstdint>

namespace kdq {

inline std::uint64_t mix64(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

/// SplitMix64: output k is a mix of (origin + k*gamma), i.e. a pure counter.
class Rng {
  public:
    explicit Rng(std::uint64_t seed) : state_(mix64(seed ^ 0x6A09E667F3BCC909ULL)) {}

    /// Independent substream for (seed, key). Streams with distinct keys are
    /// statistically independent; derivation does not consume from `seed`'s
    /// own stream, so substream layouts are stable under refactoring.
    static Rng substream(std::uint64_t seed, std::uint64_t key) {
        Rng r(seed);
        r.state_ ^= mix64(key * 0x9E3779B97F4A7C15ULL + 0x243F6A8885A308D3ULL);
        return r;
    }

    std::uint64_t next_u64() {
        state_ += 0x9E3779B97F4A7C15ULL;
        return mix64(state_);
    }

    /// Uniform in [0, 1) with 53 random mantissa bits.
    double next_double() {
        return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
    }

    /// Uniform in [lo, hi).
    double next_uniform(double lo, double hi) { return lo + (hi - lo) * next_double(); }

    /// Standard normal via Box-Muller; the paired deviate is cached.
    double next_gaussian() {
        if (has_spare_) {
            has_spare_ = false;
            return spare_;
        }
        double u1 = 0.0;
        do {
            u1 = next_double();
        } while (u1 <= 0.0);
        const double u2 = next_double();
        const double r = std::sqrt(-2.0 * std::log(u1));
        const double t = 6.283185307179586476925286766559 * u2;
        spare_ = r * std::sin(t);
        has_spare_ = true;
        return r * std::cos(t);
    }

    /// Uniform integer in [0, n).
    std::uint64_t next_below(std::uint64_t n) {
        // Multiply-shift rejection-free map; bias is < 2^-64, irrelevant here.
        return static_cast<std::uint64_t>((static_cast<unsigned __int128>(next_u64()) * n) >> 64);
    }

  private:
    std::uint64_t state_;
    double spare_ = 0.0;
    bool has_spare_ = false;
};

} // namespace kdq
