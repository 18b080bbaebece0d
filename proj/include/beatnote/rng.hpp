// Copyright 2026 The Beatnote Authors
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

#ifndef BEATNOTE_RNG_HPP_
#define BEATNOTE_RNG_HPP_

#include <array>
#include <cstdint>
#include <limits>

namespace beatnote {

/// Philox4x32-10 counter-based generator (Salmon et al., SC'11), usable as a
/// UniformRandomBitGenerator.  The 64-bit seed is the key; the 64-bit stream
/// id fills the upper counter words, so (seed, stream) pairs give independent
/// sequences without any shared state.
class Philox4x32 {
 public:
  using result_type = std::uint32_t;
  using Block = std::array<std::uint32_t, 4>;
  using Key = std::array<std::uint32_t, 2>;

  explicit Philox4x32(std::uint64_t seed = 0, std::uint64_t stream = 0)
      : key_{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32)},
        stream_(stream) {}

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }

  result_type operator()() {
    if (index_ == 4) {
      buffer_ = generate({static_cast<std::uint32_t>(counter_),
                          static_cast<std::uint32_t>(counter_ >> 32),
                          static_cast<std::uint32_t>(stream_),
                          static_cast<std::uint32_t>(stream_ >> 32)},
                         key_);
      ++counter_;
      index_ = 0;
    }
    return buffer_[index_++];
  }

  /// Uniform double in [0, 1) with 53 random bits.
  double uniform() {
    const std::uint64_t hi = (*this)() >> 5;
    const std::uint64_t lo = (*this)() >> 6;
    return static_cast<double>((hi << 26) | lo) * 0x1.0p-53;
  }

  /// The raw bijection: ten rounds of Philox on one counter block.
  static Block generate(Block ctr, Key key) {
    constexpr std::uint32_t kM0 = 0xD2511F53u;
    constexpr std::uint32_t kM1 = 0xCD9E8D57u;
    constexpr std::uint32_t kW0 = 0x9E3779B9u;
    constexpr std::uint32_t kW1 = 0xBB67AE85u;
    for (int r = 0; r < 10; ++r) {
      const std::uint64_t p0 = static_cast<std::uint64_t>(kM0) * ctr[0];
      const std::uint64_t p1 = static_cast<std::uint64_t>(kM1) * ctr[2];
      ctr = {static_cast<std::uint32_t>(p1 >> 32) ^ ctr[1] ^ key[0], static_cast<std::uint32_t>(p1),
             static_cast<std::uint32_t>(p0 >> 32) ^ ctr[3] ^ key[1], static_cast<std::uint32_t>(p0)};
      key[0] += kW0;
      key[1] += kW1;
    }
    return ctr;
  }

 private:
  Key key_;
  std::uint64_t stream_;
  std::uint64_t counter_ = 0;
  Block buffer_{};
  int index_ = 4;
};

/// Stream id for item `index` of a named purpose, so that e.g. reference
/// scans and trials drawn from one master seed never share a stream.
constexpr std::uint64_t derive_stream(std::uint32_t purpose, std::uint64_t index) {
  // splitmix64 finalizer over (purpose, index).
  std::uint64_t z = index + 0x9E3779B97F4A7C15ull * (static_cast<std::uint64_t>(purpose) + 1);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

/// Per-item seed from a master seed, so that an item can be regenerated from
/// its own seed alone (the value written to trial tables).
constexpr std::uint64_t derive_seed(std::uint64_t master, std::uint32_t purpose,
                                    std::uint64_t index) {
  return derive_stream(purpose, index ^ derive_stream(0, master));
}

/// Stream purposes used across the library.
enum StreamPurpose : std::uint32_t {
  kStreamTrial = 1,
  kStreamReference = 2,
  kStreamDrift = 3,
  kStreamSetpoint = 4,
  kStreamScan = 5,
  kStreamOptimizer = 6,
  kStreamSweep = 7,
  kStreamOracle = 8,
};

}  // namespace beatnote

#endif  // BEATNOTE_RNG_HPP_
