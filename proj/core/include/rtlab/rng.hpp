// Copyright 2026 The rtlab Authors.
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

#ifndef RTLAB_RNG_HPP_
#define RTLAB_RNG_HPP_

#include <cstdint>
#include <random>
#include <string_view>

namespace rtlab {

// Recorded verbatim in experiment metadata.
inline constexpr std::string_view kRngAlgorithm =
    "mt19937_64, seeds derived per stream with splitmix64";

// One splitmix64 step; advances `state`.
std::uint64_t splitmix64(std::uint64_t& state);

// Seed for the `stream`-th independent substream of `seed`. Distinct streams
// of the same root seed never share an engine state in practice.
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream);

// Deterministic generator. Uniforms and bits are extracted from raw engine
// words directly so that output does not depend on the standard library's
// distribution implementations.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next_u64() { return engine_(); }

  // Uniform on [0, 1) with 53 random bits.
  double uniform() {
    return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
  }

  // Uniform on (0, 1].
  double uniform_open_left() { return 1.0 - uniform(); }

  std::uint32_t bit() {
    if (bits_left_ == 0) {
      bits_ = engine_();
      bits_left_ = 64;
    }
    const auto b = static_cast<std::uint32_t>(bits_ & 1U);
    bits_ >>= 1;
    --bits_left_;
    return b;
  }

  // Unbiased integer in [0, n), n >= 1.
  std::uint64_t below(std::uint64_t n);

 private:
  std::mt19937_64 engine_;
  std::uint64_t bits_ = 0;
  int bits_left_ = 0;
};

}  // namespace rtlab

#endif  // RTLAB_RNG_HPP_
