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

#include <cstdint>
#include <random>
#include <set>

#include <gtest/gtest.h>

#include "beatnote/rng.hpp"

namespace beatnote {
namespace {

using Block = Philox4x32::Block;

// Known-answer vectors of the Philox4x32-10 reference implementation.
TEST(Philox, KnownAnswers) {
  EXPECT_EQ(Philox4x32::generate({0, 0, 0, 0}, {0, 0}), (Block{0x6627e8d5, 0xe169c58d, 0xbc57ac4c, 0x9b00dbd8}));
  EXPECT_EQ(Philox4x32::generate({0xffffffff, 0xffffffff, 0xffffffff, 0xffffffff}, {0xffffffff, 0xffffffff}),
            (Block{0x408f276d, 0x41c83b0e, 0xa20bc7c6, 0x6d5451fd}));
  EXPECT_EQ(Philox4x32::generate({0x243f6a88, 0x85a308d3, 0x13198a2e, 0x03707344}, {0xa4093822, 0x299f31d0}),
            (Block{0xd16cfe09, 0x94fdcceb, 0x5001e420, 0x24126ea1}));
}

TEST(Philox, StreamStartsAtCounterZero) {
  Philox4x32 g(0, 0);
  const Block first = Philox4x32::generate({0, 0, 0, 0}, {0, 0});
  for (int i = 0; i < 4; ++i) EXPECT_EQ(g(), first[i]);
  const Block second = Philox4x32::generate({1, 0, 0, 0}, {0, 0});
  for (int i = 0; i < 4; ++i) EXPECT_EQ(g(), second[i]);
}

TEST(Philox, DeterministicAndDistinct) {
  Philox4x32 a(42, 7);
  Philox4x32 b(42, 7);
  Philox4x32 c(42, 8);
  Philox4x32 d(43, 7);
  int same_c = 0;
  int same_d = 0;
  for (int i = 0; i < 1000; ++i) {
    const auto x = a();
    EXPECT_EQ(x, b());
    same_c += x == c();
    same_d += x == d();
  }
  EXPECT_LT(same_c, 3);
  EXPECT_LT(same_d, 3);
}

TEST(Philox, UniformMoments) {
  Philox4x32 g(2026);
  double sum = 0;
  double sum2 = 0;
  const int n = 200000;
  for (int i = 0; i < n; ++i) {
    const double u = g.uniform();
    ASSERT_GE(u, 0.0);
    ASSERT_LT(u, 1.0);
    sum += u;
    sum2 += u * u;
  }
  const double mean = sum / n;
  EXPECT_NEAR(mean, 0.5, 5 * std::sqrt(1.0 / 12 / n));
  EXPECT_NEAR(sum2 / n - mean * mean, 1.0 / 12, 2e-3);
}

TEST(Philox, WorksWithStandardDistributions) {
  static_assert(std::uniform_random_bit_generator<Philox4x32>);
  Philox4x32 g(1);
  std::uniform_int_distribution<int> d(0, 9);
  std::array<int, 10> hist{};
  for (int i = 0; i < 100000; ++i) ++hist[d(g)];
  for (int h : hist) EXPECT_NEAR(h, 10000, 500);
}

TEST(SeedDerivation, DistinctAndStable) {
  std::set<std::uint64_t> seen;
  for (std::uint64_t master : {0ull, 1ull, 12345ull}) {
    for (int purpose = 1; purpose <= 8; ++purpose) {
      for (std::uint64_t i = 0; i < 200; ++i) seen.insert(derive_seed(master, purpose, i));
    }
  }
  EXPECT_EQ(seen.size(), 3u * 8u * 200u);
  EXPECT_EQ(derive_seed(9, kStreamTrial, 3), derive_seed(9, kStreamTrial, 3));
  EXPECT_NE(derive_stream(kStreamTrial, 0), derive_stream(kStreamReference, 0));
}

}  // namespace
}  // namespace beatnote
