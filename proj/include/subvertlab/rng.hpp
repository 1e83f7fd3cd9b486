// Copyright 2026 The subvertlab Authors
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

#ifndef SUBVERTLAB_RNG_HPP_
#define SUBVERTLAB_RNG_HPP_

#include <cstdint>
#include <random>

#include "subvertlab/bits.hpp"

namespace subvertlab {

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

// Derives an independent stream seed from (seed, trial, stream). Used so that
// trial results never depend on scheduling order.
inline std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t trial, std::uint64_t stream) {
  return splitmix64(splitmix64(splitmix64(seed) ^ trial) ^ (stream * 0xD6E8FEB86659FD93ULL));
}

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next() { return engine_(); }
  bool coin() { return (engine_() >> 63) != 0; }

  // Uniform in [0, n) by rejection; n > 0.
  std::uint64_t below(std::uint64_t n) {
    if ((n & (n - 1)) == 0) return engine_() & (n - 1);
    std::uint64_t limit = UINT64_MAX - UINT64_MAX % n;
    std::uint64_t x;
    do {
      x = engine_();
    } while (x >= limit);
    return x % n;
  }

  double uniform01() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  // Uniform n-bit string. Consumes ceil(n/64) engine outputs.
  BitString bits(std::size_t n) {
    std::vector<std::uint8_t> bytes((n + 7) / 8);
    std::size_t i = 0;
    while (i < bytes.size()) {
      std::uint64_t w = engine_();
      for (int k = 0; k < 8 && i < bytes.size(); ++k, ++i) {
        bytes[i] = static_cast<std::uint8_t>(w >> (56 - 8 * k));
      }
    }
    return BitString::from_bytes(std::move(bytes), n);
  }

 private:
  std::mt19937_64 engine_;
};

// Named streams of one trial. Each game role draws from its own stream so
// that adding draws in one role does not shift another.
struct TrialStreams {
  enum : std::uint64_t { kGame = 1, kChallenge = 2, kChannel = 3, kAdversary = 4 };

  TrialStreams(std::uint64_t seed, std::uint64_t trial)
      : game(derive_seed(seed, trial, kGame)),
        challenge(derive_seed(seed, trial, kChallenge)),
        channel(derive_seed(seed, trial, kChannel)),
        adversary(derive_seed(seed, trial, kAdversary)) {}

  Rng game;
  Rng challenge;
  Rng channel;
  Rng adversary;
};

}  // namespace subvertlab

#endif  // SUBVERTLAB_RNG_HPP_
