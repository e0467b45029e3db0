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

#include "abrlab/ladder.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace abrlab::ladder {

namespace {

// One hull upgrade step; slope is d(duration * quality) / d(bits).
struct UpgradeStep {
  double slope = 0.0;
  size_t shot = 0;
  size_t to_index = 0;
};

double total_duration(const std::vector<ShotHull>& shots) {
  double d = 0.0;
  for (const auto& s : shots) d += s.duration;
  return d;
}

// Duration-weighted mean quality of a selection, summed in shot order.
double selection_quality(const std::vector<ShotHull>& shots,
                         const std::vector<size_t>& point_index) {
  double wq = 0.0;
  for (size_t i = 0; i < shots.size(); ++i)
    wq += shots[i].duration * shots[i].hull.points[point_index[i]].quality;
  return wq / total_duration(shots);
}

void validate_shots(const std::vector<ShotHull>& shots) {
  if (shots.empty()) throw std::runtime_error("no shots");
  for (const auto& s : shots) {
    if (s.duration <= 0.0)
      throw std::runtime_error("shot duration must be positive");
    if (s.hull.points.empty()) throw std::runtime_error("no encode points");
  }
}

}  // namespace

double ChunkMap::content_duration() const {
  double d = 0.0;
  for (double s : shot_durations) d += s;
  return d;
}

ConvexHullCurve build_convex_hull(const std::vector<RQPoint>& points) {
  if (points.empty()) throw std::runtime_error("no encode points");
  std::vector<RQPoint> sorted = points;
  std::stable_sort(sorted.begin(), sorted.end(),
                   [](const RQPoint& a, const RQPoint& b) {
                     if (a.bits != b.bits) return a.bits < b.bits;
                     return a.quality > b.quality;
                   });

  // Pareto prune: keep only strict quality improvements.
  std::vector<RQPoint> pareto;
  for (const auto& p : sorted) {
    if (pareto.empty() || p.quality > pareto.back().quality) {
      if (!pareto.empty() && p.bits == pareto.back().bits) continue;
      pareto.push_back(p);
    }
  }

  // Upper concave chain; collinear middle points are dropped.
  std::vector<RQPoint> hull;
  for (const auto& p : pareto) {
    while (hull.size() >= 2) {
      const RQPoint& a = hull[hull.size() - 2];
      const RQPoint& b = hull[hull.size() - 1];
      const double lhs = (b.quality - a.quality) * double(p.bits - b.bits);
      const double rhs = (p.quality - b.quality) * double(b.bits - a.bits);
      if (lhs <= rhs)
        hull.pop_back();
      else
        break;
    }
    hull.push_back(p);
  }
  return ConvexHullCurve{std::move(hull)};
}

std::vector<SweepPoint> enumerate_sweep(const std::vector<ShotHull>& shots) {
  validate_shots(shots);
  const double dur_total = total_duration(shots);

  std::vector<UpgradeStep> steps;
  for (size_t i = 0; i < shots.size(); ++i) {
    const auto& pts = shots[i].hull.points;
    for (size_t k = 1; k < pts.size(); ++k) {
      const double dq = pts[k].quality - pts[k - 1].quality;
      const double db = double(pts[k].bits - pts[k - 1].bits);
      steps.push_back({shots[i].duration * dq / db, i, k});
    }
  }
  std::stable_sort(steps.begin(), steps.end(),
                   [](const UpgradeStep& a, const UpgradeStep& b) {
                     if (a.slope != b.slope) return a.slope > b.slope;
                     if (a.shot != b.shot) return a.shot < b.shot;
                     return a.to_index < b.to_index;
                   });

  std::vector<size_t> current(shots.size(), 0);
  int64_t bits = 0;
  double wq = 0.0;
  for (const auto& s : shots) {
    bits += s.hull.points[0].bits;
    wq += s.duration * s.hull.points[0].quality;
  }

  std::vector<SweepPoint> sweep;
  sweep.push_back({bits, wq / dur_total, current});

  // Steps with equal slope change the selection at the same multiplier
  // and are applied as one batch.
  size_t a = 0;
  while (a < steps.size()) {
    size_t b = a;
    while (b < steps.size() && steps[b].slope == steps[a].slope) ++b;
    for (size_t k = a; k < b; ++k) {
      const auto& st = steps[k];
      const auto& pts = shots[st.shot].hull.points;
      bits += pts[st.to_index].bits - pts[st.to_index - 1].bits;
      wq += shots[st.shot].duration *
            (pts[st.to_index].quality - pts[st.to_index - 1].quality);
      current[st.shot] = st.to_index;
    }
    sweep.push_back({bits, wq / dur_total, current});
    a = b;
  }
  return sweep;
}

SelectResult do_select(const std::vector<ShotHull>& shots,
                       int64_t bit_budget) {
  const std::vector<SweepPoint> sweep = enumerate_sweep(shots);
  if (bit_budget < sweep.front().total_bits)
    throw std::runtime_error("budget infeasible");

  // Multiplier bisection collapses to a search over the sweep curve: the
  // selection is constant between adjacent batch slopes, so the budget is
  // bracketed exactly by the last sweep point with bits <= budget.
  size_t lo = 0, hi = sweep.size() - 1;
  while (lo < hi) {
    const size_t mid = (lo + hi + 1) / 2;
    if (sweep[mid].total_bits <= bit_budget)
      lo = mid;
    else
      hi = mid - 1;
  }

  SelectResult res;
  res.selection.reserve(shots.size());
  for (size_t i = 0; i < shots.size(); ++i)
    res.selection.push_back(shots[i].hull.points[sweep[lo].point_index[i]]);
  res.achieved_total_bits = sweep[lo].total_bits;
  res.achieved_mean_quality = selection_quality(shots, sweep[lo].point_index);
  if (lo + 1 < sweep.size() && sweep[lo].total_bits < bit_budget) {
    const auto& next = sweep[lo + 1];
    const double slope =
        (next.mean_quality - sweep[lo].mean_quality) /
        double(next.total_bits - sweep[lo].total_bits);
    res.quality_gap =
        slope * double(bit_budget - sweep[lo].total_bits);
  }
  return res;
}

LadderResult build_bitrate_ladder(const std::vector<ShotHull>& shots,
                                  int n_rungs) {
  if (n_rungs < 2) throw std::runtime_error("n_rungs must be at least 2");
  const std::vector<SweepPoint> sweep = enumerate_sweep(shots);
  const int64_t bits_min = sweep.front().total_bits;
  const int64_t bits_max = sweep.back().total_bits;
  const double q_min = sweep.front().mean_quality;
  const double q_max = sweep.back().mean_quality;

  LadderResult res;
  if (q_max <= q_min) {
    res.flat_quality = true;
    res.budgets.push_back(bits_min);
    if (bits_max > bits_min) res.budgets.push_back(bits_max);
    return res;
  }

  res.budgets.resize(n_rungs);
  res.budgets.front() = bits_min;
  res.budgets.back() = bits_max;
  size_t seg = 0;
  for (int i = 1; i + 1 < n_rungs; ++i) {
    const double target = q_min + (q_max - q_min) * double(i) / (n_rungs - 1);
    while (seg + 2 < sweep.size() && sweep[seg + 1].mean_quality <= target)
      ++seg;
    const auto& p0 = sweep[seg];
    const auto& p1 = sweep[seg + 1];
    const double frac =
        (target - p0.mean_quality) / (p1.mean_quality - p0.mean_quality);
    const double budget =
        double(p0.total_bits) + frac * double(p1.total_bits - p0.total_bits);
    res.budgets[i] = std::clamp<int64_t>(std::llround(budget),
                                         bits_min, bits_max);
  }
  for (int i = 1; i < n_rungs; ++i) {
    if (res.budgets[i] <= res.budgets[i - 1]) {
      if (res.budgets[i - 1] + 1 > bits_max)
        throw std::runtime_error("ladder budgets collide");
      res.budgets[i] = res.budgets[i - 1] + 1;
    }
  }
  return res;
}

ChunkMap build_chunk_map(const std::vector<ShotHull>& shots,
                         const std::vector<int64_t>& ladder_budgets,
                         std::string content_id) {
  validate_shots(shots);
  if (ladder_budgets.empty()) throw std::runtime_error("no ladder budgets");
  for (size_t i = 1; i < ladder_budgets.size(); ++i)
    if (ladder_budgets[i] <= ladder_budgets[i - 1])
      throw std::runtime_error("budgets must be strictly increasing");

  // A rung below the cheapest combination still yields a row: the
  // all-minimum selection.
  int64_t min_total = 0;
  for (const auto& s : shots) min_total += s.hull.points.front().bits;

  ChunkMap map;
  map.content_id = std::move(content_id);
  for (const auto& s : shots) map.shot_durations.push_back(s.duration);
  for (int64_t budget : ladder_budgets) {
    const SelectResult sel = do_select(shots, std::max(budget, min_total));
    StreamRow row;
    for (size_t i = 0; i < shots.size(); ++i) {
      const RQPoint& p = sel.selection[i];
      SegmentRecord seg;
      seg.shot_id = shots[i].shot_id;
      seg.duration = shots[i].duration;
      seg.bits = p.bits;
      seg.bitrate_kbps = double(p.bits) / shots[i].duration / 1000.0;
      seg.resolution_height = p.resolution_height;
      seg.quality = p.quality;
      row.segments.push_back(seg);
    }
    map.streams.push_back(std::move(row));
  }
  return map;
}

std::vector<ShotHull> build_hulls(const std::vector<ShotRQCurve>& shots) {
  std::vector<ShotHull> hulls;
  hulls.reserve(shots.size());
  for (const auto& s : shots) {
    if (s.duration <= 0.0)
      throw std::runtime_error("shot duration must be positive");
    hulls.push_back({s.shot_id, s.duration, build_convex_hull(s.points)});
  }
  return hulls;
}

}  // namespace abrlab::ladder
