// Copyright 2026 The paramnoise Authors
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

#ifndef PARAMNOISE_RNG_H_
#define PARAMNOISE_RNG_H_

#include <cstdint>
#include <iosfwd>
#include <random>

namespace paramnoise {

// Seedable random stream with a portable, fully specified output sequence.
//
// Bits come from std::mt19937_64, whose output is fixed by the C++ standard.
// Uniforms take the top 53 bits; standard normals use the Marsaglia polar
// method (pairs are generated and the second value is cached). None of the
// implementation-defined <random> distributions are used, so a given seed
// yields the same stream on every conforming toolchain.
class Rng {
 public:
  explicit Rng(std::uint64_t seed = 0);

  // Independent stream for (seed, stream) obtained by SplitMix64 mixing.
  static Rng Derive(std::uint64_t seed, std::uint64_t stream);

  std::uint64_t NextU64() { return engine_(); }

  // Uniform on [0, 1).
  double Uniform();
  // Uniform on [lo, hi).
  double Uniform(double lo, double hi) { return lo + (hi - lo) * Uniform(); }
  // Uniform integer in [0, n); n > 0.
  std::uint64_t UniformInt(std::uint64_t n);
  double Normal();

  std::uint64_t seed() const { return seed_; }

  bool operator==(const Rng& other) const;

  // Textual state (engine state + cached normal) for checkpoints.
  void Save(std::ostream& os) const;
  void Load(std::istream& is);

 private:
  std::uint64_t seed_;
  std::mt19937_64 engine_;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

std::uint64_t SplitMix64(std::uint64_t x);

}  // namespace paramnoise

#endif  // PARAMNOISE_RNG_H_
