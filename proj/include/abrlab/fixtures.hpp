/*
 * Copyright 2026 the abr-lab authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *      http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#ifndef ABRLAB_FIXTURES_HPP_
#define ABRLAB_FIXTURES_HPP_

#include <cstdint>
#include <string>
#include <vector>

#include "abrlab/ladder.hpp"

namespace abrlab::fixtures {

// Deterministic synthetic rate-quality curves: 15 to 18 short shots
// summing to exactly 25 s, saturating quality over encode bitrates 150 to
// 2400 Kbps across a 5-step resolution ladder. Same index, same content,
// on every host.
std::vector<ladder::ShotRQCurve> reference_content(int content_index);

// reference_content -> hulls -> 12-rung ladder -> chunk map, named
// content00..content14 for indices 0..14.
ladder::ChunkMap reference_chunk_map(int content_index);

std::string reference_content_id(int content_index);

inline constexpr int kReferenceContentCount = 15;
inline constexpr int kReferenceLadderRungs = 12;

}  // namespace abrlab::fixtures

#endif  // ABRLAB_FIXTURES_HPP_
