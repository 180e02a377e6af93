/*
 * Copyright 2026 The deniable-fit Authors.
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#ifndef DENIABLE_RNG_H_
#define DENIABLE_RNG_H_

#include <cstdint>
#include <random>
#include <string_view>

namespace deniable {

using Rng = std::mt19937_64;

// Derives an independent seed for a named random stream ("decoy", "w1",
// "optimizer-start", ...) from a master seed and an index. Every random
// choice in the library is drawn from such a substream so that a single
// master seed replays a whole run.
std::uint64_t SubstreamSeed(std::uint64_t master, std::string_view name,
                            std::uint64_t index = 0);

inline Rng MakeRng(std::uint64_t master, std::string_view name,
                   std::uint64_t index = 0) {
  return Rng(SubstreamSeed(master, name, index));
}

}  // namespace deniable

#endif  // DENIABLE_RNG_H_
