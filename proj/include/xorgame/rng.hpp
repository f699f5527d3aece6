/*
 * Copyright 2026 The xorgame Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */
#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

#include "xorgame/numeric.hpp"

namespace xorgame {

/// splitmix64 finalizer; used to derive independent substream seeds.
inline std::uint64_t mix64(std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ull;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
}

/// Named substreams derived from one master seed. Every source of randomness
/// in a run hangs off (master, stream, index), so results are independent of
/// scheduling and worker count.
enum class Stream : std::uint64_t {
    kSchedule = 1,
    kInstance = 2,
    kDiscard = 3,
    kRepetition = 4,
    kTrial = 5,
    kMonteCarlo = 6,
    kSweepPoint = 7,
};

/// Seeded generator with explicitly implemented distributions.
///
/// The engine is mt19937_64 (state evolution fixed by the standard) and all
/// distributions are implemented here rather than taken from <random>, whose
/// distribution algorithms are implementation-defined. Identical seeds
/// therefore give identical streams on any platform.
class Rng {
  public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    static Rng substream(std::uint64_t master, Stream stream, std::uint64_t index = 0) {
        std::uint64_t z = mix64(master ^ (0x9e3779b97f4a7c15ull * (static_cast<std::uint64_t>(stream) + 1)));
        z = mix64(z ^ (0xbf58476d1ce4e5b9ull * (index + 1)));
        return Rng(z);
    }

    std::uint64_t raw() { return engine_(); }

    /// Uniform double in [0, 1), 53 random bits.
    double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

    int bit() { return static_cast<int>(engine_() >> 63); }

    /// Uniform integer in [0, n), unbiased.
    std::uint64_t below(std::uint64_t n) {
        const std::uint64_t limit = UINT64_MAX - UINT64_MAX % n;
        std::uint64_t r;
        do {
            r = engine_();
        } while (r >= limit);
        return r % n;
    }

    /// Box-Muller without caching: consumes exactly two raw draws per sample.
    double normal(double mean, double stddev) {
        const double u1 = uniform();
        const double u2 = uniform();
        const double radius = std::sqrt(-2.0 * std::log1p(-u1));
        return mean + stddev * radius * std::cos(kTwoPi * u2);
    }

    /// Counts unit-rate exponential arrivals before `mean`; exact for any mean.
    std::uint64_t poisson(double mean) {
        std::uint64_t k = 0;
        double elapsed = 0.0;
        for (;;) {
            elapsed += -std::log1p(-uniform());
            if (elapsed >= mean) return k;
            ++k;
        }
    }

    template <typename T>
    void shuffle(std::vector<T>& v) {
        for (std::size_t i = v.size(); i > 1; --i) {
            std::swap(v[i - 1], v[below(i)]);
        }
    }

  private:
    std::mt19937_64 engine_;
};

}  // namespace xorgame
