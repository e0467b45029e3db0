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

#ifndef ABRLAB_LADDER_HPP_
#define ABRLAB_LADDER_HPP_

#include <cstdint>
#include <string>
#include <vector>

namespace abrlab::ladder {

// One encode of one shot. quality is any [0,100] perceptual score,
// consumed as data.
struct RQPoint {
  int resolution_height = 0;  // pixels
  int qp = 0;                 // encoder quantizer index, opaque
  int64_t bits = 0;           // total bits for the shot, >= 0
  double quality = 0.0;       // in [0,100]
};

struct ShotRQCurve {
  int shot_id = 0;
  double duration = 0.0;  // seconds, > 0
  std::vector<RQPoint> points;
};

// Upper-left concave frontier: strictly increasing bits and quality,
// strictly decreasing marginal slope between consecutive points.
struct ConvexHullCurve {
  std::vector<RQPoint> points;
};

// A shot reduced to its hull, as consumed by the optimizer.
struct ShotHull {
  int shot_id = 0;
  double duration = 0.0;  // seconds, > 0
  ConvexHullCurve hull;
};

struct SegmentRecord {
  int shot_id = 0;
  double duration = 0.0;      // seconds
  int64_t bits = 0;
  double bitrate_kbps = 0.0;  // bits / duration / 1000
  int resolution_height = 0;  // pixels
  double quality = 0.0;       // in [0,100]
};

struct StreamRow {
  std::vector<SegmentRecord> segments;  // one per shot, in shot order
};

// 2D encoding chunk map: rows are streams ordered low to high budget,
// columns are shots.
struct ChunkMap {
  std::string content_id;
  std::vector<StreamRow> streams;
  std::vector<double> shot_durations;  // seconds

  size_t n_chunks() const { return shot_durations.size(); }
  size_t n_streams() const { return streams.size(); }
  double content_duration() const;
};

// One optimizer result. When the budget falls strictly between two
// Lagrangian sweep points the lower (feasible) selection is returned and
// quality_gap carries the duality-gap upper bound on forgone quality.
struct SelectResult {
  std::vector<RQPoint> selection;  // one per shot, in shot order
  int64_t achieved_total_bits = 0;
  double achieved_mean_quality = 0.0;  // duration-weighted
  double quality_gap = 0.0;            // >= 0; 0 at sweep points
};

// One point of the Lagrangian sweep curve, in increasing-bits order.
struct SweepPoint {
  int64_t total_bits = 0;
  double mean_quality = 0.0;          // duration-weighted
  std::vector<size_t> point_index;    // chosen hull index per shot
};

struct LadderResult {
  std::vector<int64_t> budgets;  // strictly increasing bit budgets
  bool flat_quality = false;     // max quality == min quality
};

// Prunes dominated points and keeps the concave frontier. Input order is
// irrelevant. Throws "no encode points" on empty input.
ConvexHullCurve build_convex_hull(const std::vector<RQPoint>& points);

// Full Lagrangian sweep curve: starts at the all-minimum selection and
// applies hull upgrade steps in decreasing-slope order; steps with equal
// slope are applied as one batch. Bits and quality strictly increase
// along the curve.
std::vector<SweepPoint> enumerate_sweep(const std::vector<ShotHull>& shots);

// Dynamic-Optimizer selection: maximizes duration-weighted mean quality
// subject to total bits <= bit_budget by bisecting the Lagrange
// multiplier until adjacent sweep points bracket the budget. Exact at
// sweep-point budgets. Throws "budget infeasible" if the budget is below
// the all-minimum selection.
SelectResult do_select(const std::vector<ShotHull>& shots, int64_t bit_budget);

// Budgets whose selection qualities are equally spaced between the
// quality at the minimum feasible budget and at the maximum useful
// budget. Targets are inverted by linear interpolation on the sweep
// curve. Throws on n_rungs < 2.
LadderResult build_bitrate_ladder(const std::vector<ShotHull>& shots,
                                  int n_rungs);

// One do_select row per budget. Budgets must be strictly increasing and
// feasible.
ChunkMap build_chunk_map(const std::vector<ShotHull>& shots,
                         const std::vector<int64_t>& ladder_budgets,
                         std::string content_id);

// Convenience: hulls each shot of a raw curve set.
std::vector<ShotHull> build_hulls(const std::vector<ShotRQCurve>& shots);

}  // namespace abrlab::ladder

#endif  // ABRLAB_LADDER_HPP_
