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

#ifndef BEATNOTE_TRIAL_HPP_
#define BEATNOTE_TRIAL_HPP_

#include <array>
#include <cstdint>

namespace beatnote {

/// Counts from one integration window, channels ordered AA, AB, BA, BB.
/// Channel counts include the accidentals, which are also reported alone.
struct TrialRecord {
  std::uint64_t seed = 0;
  double tau = 0.0;
  double integration_time = 0.0;
  std::array<std::uint64_t, 4> counts{};
  std::uint64_t accidentals = 0;

  std::uint64_t n_aa() const { return counts[0]; }
  std::uint64_t n_ab() const { return counts[1]; }
  std::uint64_t n_ba() const { return counts[2]; }
  std::uint64_t n_bb() const { return counts[3]; }
  std::uint64_t total() const { return counts[0] + counts[1] + counts[2] + counts[3]; }
  std::uint64_t coincidences() const { return counts[1] + counts[2]; }

  /// Fraction of events in the coincidence channels.
  double coincidence_fraction() const {
    const std::uint64_t n = total();
    return n ? static_cast<double>(coincidences()) / static_cast<double>(n) : 0.0;
  }

  bool operator==(const TrialRecord&) const = default;
};

}  // namespace beatnote

#endif  // BEATNOTE_TRIAL_HPP_
