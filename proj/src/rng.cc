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

#include "paramnoise/rng.h"

#include <cmath>
#include <cstdio>
#include <istream>
#include <ostream>
#include <string>

namespace paramnoise {

std::uint64_t SplitMix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

Rng::Rng(std::uint64_t seed) : seed_(seed), engine_(SplitMix64(seed)) {}

Rng Rng::Derive(std::uint64_t seed, std::uint64_t stream) {
  Rng rng(SplitMix64(seed ^ SplitMix64(stream + 0x632be59bd9b4e019ULL)));
  rng.seed_ = seed;
  return rng;
}

double Rng::Uniform() {
  return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
}

std::uint64_t Rng::UniformInt(std::uint64_t n) {
  // rejection keeps the result exactly uniform
  const std::uint64_t limit = (~std::uint64_t{0}) - (~std::uint64_t{0}) % n;
  std::uint64_t x;
  do {
    x = engine_();
  } while (x >= limit);
  return x % n;
}

double Rng::Normal() {
  if (has_spare_) {
    has_spare_ = false;
    return spare_;
  }
  double u, v, s;
  do {
    u = 2.0 * Uniform() - 1.0;
    v = 2.0 * Uniform() - 1.0;
    s = u * u + v * v;
  } while (s >= 1.0 || s == 0.0);
  const double scale = std::sqrt(-2.0 * std::log(s) / s);
  spare_ = v * scale;
  has_spare_ = true;
  return u * scale;
}

bool Rng::operator==(const Rng& other) const {
  return seed_ == other.seed_ && engine_ == other.engine_ &&
         has_spare_ == other.has_spare_ &&
         (!has_spare_ || spare_ == other.spare_);
}

void Rng::Save(std::ostream& os) const {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%a", spare_);
  os << seed_ << ' ' << (has_spare_ ? 1 : 0) << ' ' << buf << ' ' << engine_;
}

void Rng::Load(std::istream& is) {
  int has = 0;
  std::string spare;
  is >> seed_ >> has >> spare >> engine_;
  has_spare_ = has != 0;
  spare_ = std::strtod(spare.c_str(), nullptr);
}

}  // namespace paramnoise
