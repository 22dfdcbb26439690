// Copyright 2026 The dpopt Authors.
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

#pragma once

#include <cstdint>
#include <limits>

namespace dpopt {

/**
SplitMix64 (Steele, Lea and Flood 2014), fully specified so that generated
instances are reproducible in any language:

  state += 0x9E3779B97F4A7C15
  z = state
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9
  z = (z ^ (z >> 27)) * 0x94D049BB133111EB
  return z ^ (z >> 31)

The derived draws below are also part of the contract; std:: distributions
are not used because their output is implementation-defined.
*/
class SplitMix64 {
 public:
  using result_type = std::uint64_t;

  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }

  result_type operator()() { return next(); }
  std::uint64_t next();

  /// (next() >> 11) * 2^-53, in [0, 1).
  double uniform();
  /// 1 - uniform(), in (0, 1].
  double uniform_positive();
  /// Unbiased integer in [0, n) by rejection: draws r until
  /// r < 2^64 - (2^64 mod n), then returns r mod n.
  std::uint64_t below(std::uint64_t n);
  /// Box-Muller, cosine branch only: sqrt(-2 ln u1) cos(2 pi u2) with
  /// u1 = uniform_positive(), u2 = uniform(), drawn in that order.
  double normal();

 private:
  std::uint64_t state_;
};

}  // namespace dpopt
