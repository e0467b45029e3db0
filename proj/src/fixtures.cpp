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

#include "abrlab/fixtures.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <cstdio>

namespace abrlab::fixtures {

namespace {

// splitmix64: host-independent deterministic stream.
struct Rng {
  uint64_t state;
  explicit Rng(uint64_t seed) : state(seed) {}
  uint64_t next() {
    state += 0x9e3779b97f4a7c15ULL;
    uint64_t z = state;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }
  double uniform() { return double(next() >> 11) * 0x1.0p-53; }
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
};

constexpr int kEncodePoints = 22;
constexpr double kMinKbps = 150.0;
constexpr double kMaxKbps = 2400.0;
constexpr std::array<int, 5> kHeights = {270, 360, 540, 720, 1080};

}  // namespace

std::string reference_content_id(int content_index) {
  char buf[16];
  std::snprintf(buf, sizeof(buf), "content%02d", content_index);
  return buf;
}

std::vector<ladder::ShotRQCurve> reference_content(int content_index) {
  Rng rng(0xabe1a6ULL * 2654435761ULL + uint64_t(content_index));
  const int n_shots = 15 + content_index % 4;

  // Shots sum to exactly 25 s and each stays short enough that a plan
  // draining to b_l during the last download can still end at b_t, so
  // the planners exercise the DP rather than living on fallbacks.
  std::vector<double> durations(n_shots, 25.0 / n_shots);
  for (int i = 0; i + 1 < n_shots; i += 2) {
    const double delta = rng.uniform(-0.25, 0.25);
    durations[i] += delta;
    durations[i + 1] -= delta;
  }

  std::vector<ladder::ShotRQCurve> shots;
  for (int s = 0; s < n_shots; ++s) {
    ladder::ShotRQCurve curve;
    curve.shot_id = s;
    curve.duration = durations[s];
    const double complexity = rng.uniform(0.6, 2.1);
    const double q_ceiling = rng.uniform(92.0, 98.0);
    // Resolution switch points across the bitrate range, jittered.
    std::array<double, 4> res_steps = {300.0, 600.0, 1100.0, 1900.0};
    for (double& r : res_steps) r *= rng.uniform(0.8, 1.2);

    for (int k = 0; k < kEncodePoints; ++k) {
      const double kbps =
          kMinKbps * std::pow(kMaxKbps / kMinKbps,
                              double(k) / (kEncodePoints - 1));
      ladder::RQPoint p;
      p.bits = std::llround(kbps * 1000.0 * curve.duration);
      const double sat = 1.0 - std::exp(-kbps / (complexity * 700.0));
      const double noise = rng.uniform(-1.0, 1.0);
      p.quality = std::clamp(q_ceiling * sat + noise, 0.0, 100.0);
      size_t level = 0;
      while (level < res_steps.size() && kbps >= res_steps[level]) ++level;
      p.resolution_height = kHeights[level];
      p.qp = 44 - k;
      curve.points.push_back(p);
    }
    shots.push_back(std::move(curve));
  }
  return shots;
}

ladder::ChunkMap reference_chunk_map(int content_index) {
  const std::vector<ladder::ShotHull> hulls =
      ladder::build_hulls(reference_content(content_index));
  const ladder::LadderResult lad =
      ladder::build_bitrate_ladder(hulls, kReferenceLadderRungs);
  return ladder::build_chunk_map(hulls, lad.budgets,
                                 reference_content_id(content_index));
}

}  // namespace abrlab::fixtures
