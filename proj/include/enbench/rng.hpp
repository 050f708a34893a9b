//------------------------------------------------------------------------------
//
//   Copyright 2026 The enbench Authors
//
//   Licensed under the Apache License, Version 2.0 (the "License");
//   you may not use this file except in compliance with the License.
//   You may obtain a copy of the License at
//
//       http://www.apache.org/licenses/LICENSE-2.0
//
//   Unless required by applicable law or agreed to in writing, software
//   distributed under the License is distributed on an "AS IS" BASIS,
//   WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
//   See the License for the specific language governing permissions and
//   limitations under the License.
//
//------------------------------------------------------------------------------

#pragma once

#include <cstddef>
#include <cstdint>
#include <random>

namespace enbench {

/// The seeded random stream used throughout. Distribution sampling goes
/// through the helpers below rather than <random> distributions so that draw
/// sequences do not depend on the standard library implementation.
using Rng = std::mt19937_64;

/// Uniform double in [0, 1) from the top 53 bits of one draw.
inline double uniform_unit(Rng &rng)
{
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

/// Uniform index in [0, n) by rejection; n must be > 0.
inline std::size_t uniform_index(Rng &rng, std::size_t n)
{
  auto const range = static_cast<std::uint64_t>(n);
  auto const limit = UINT64_MAX - (UINT64_MAX % range);
  std::uint64_t x  = rng();
  while (x >= limit)
  {
    x = rng();
  }
  return static_cast<std::size_t>(x % range);
}

/// splitmix64 finalizer; a bijection on 64-bit words.
constexpr std::uint64_t mix64(std::uint64_t z) noexcept
{
  z = (z ^ (z >> 30U)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27U)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31U);
}

/// Child seed for run `index` under `master`. Distinct indices always give
/// distinct seeds for a fixed master: the golden-ratio stride is odd, so the
/// pre-image is injective, and mix64 is a bijection.
constexpr std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index) noexcept
{
  return mix64(master + 0x9e3779b97f4a7c15ULL * (index + 1));
}

/// Stable 64-bit FNV-1a hash, used for prompt keys and config hashes.
constexpr std::uint64_t fnv1a64(char const *data, std::size_t size) noexcept
{
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (std::size_t i = 0; i < size; ++i)
  {
    h ^= static_cast<unsigned char>(data[i]);
    h *= 0x100000001b3ULL;
  }
  return h;
}

}  // namespace enbench
