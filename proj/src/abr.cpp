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

#include "abrlab/abr.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace abrlab::abr {

namespace {

constexpr double kGridHz = 10.0;  // DP buffer grid, states per second
constexpr double kInf = std::numeric_limits<double>::infinity();

int grid_up(double seconds) {
  const double scaled = seconds * kGridHz - 1e-9;
  if (scaled >= 1e9) return std::numeric_limits<int>::max();
  return std::max(0, int(std::ceil(scaled)));
}

int grid_nearest(double seconds) {
  return int(std::llround(seconds * kGridHz));
}

void require_map(const ClientState& state) {
  if (state.chunk_map == nullptr || state.chunk_map->streams.empty() ||
      state.next_chunk >= state.chunk_map->n_chunks())
    throw std::runtime_error("client state has no upcoming chunk");
}

const ladder::SegmentRecord& segment(const ClientState& state, size_t stream,
                                     size_t chunk) {
  return state.chunk_map->streams[stream].segments[chunk];
}

// Chunks whose playback starts within the horizon: keep adding while the
// cumulative duration already included stays < h; always at least one.
size_t horizon_chunks(const ClientState& state, double h) {
  const auto& durs = state.chunk_map->shot_durations;
  size_t k = 0;
  double cum = 0.0;
  while (state.next_chunk + k < durs.size() && (k == 0 || cum < h)) {
    cum += durs[state.next_chunk + k];
    ++k;
  }
  return k;
}

}  // namespace

PolicyKind policy_from_name(const std::string& name) {
  if (name == "bb") return PolicyKind::bb;
  if (name == "rb") return PolicyKind::rb;
  if (name == "qb") return PolicyKind::qb;
  if (name == "oqb") return PolicyKind::oqb;
  throw std::runtime_error("unknown policy: " + name);
}

std::string policy_name(PolicyKind kind) {
  switch (kind) {
    case PolicyKind::bb: return "bb";
    case PolicyKind::rb: return "rb";
    case PolicyKind::qb: return "qb";
    case PolicyKind::oqb: return "oqb";
  }
  throw std::runtime_error("unknown policy kind");
}

double estimate_throughput(const std::vector<DownloadSample>& history, int w) {
  if (history.empty()) throw std::runtime_error("empty download history");
  if (w <= 0) throw std::runtime_error("window must be positive");
  const size_t k = std::min<size_t>(w, history.size());
  double acc = 0.0;
  for (size_t i = history.size() - k; i < history.size(); ++i) {
    const double seconds = std::max(history[i].seconds, 1e-12);
    acc += history[i].bits / seconds / 1000.0;
  }
  return acc / double(k);
}

Decision decide_bb(const ClientState& state, const PolicyConfig& config) {
  require_map(state);
  const size_t n = state.chunk_map->n_streams();
  size_t lo = 0, hi = 0;
  for (size_t j = 1; j < n; ++j) {
    if (segment(state, j, state.next_chunk).bitrate_kbps <
        segment(state, lo, state.next_chunk).bitrate_kbps)
      lo = j;
    if (segment(state, j, state.next_chunk).bitrate_kbps >=
        segment(state, hi, state.next_chunk).bitrate_kbps)
      hi = j;
  }
  if (state.buffer <= config.r) return Decision::stream_at(lo);
  if (state.buffer >= config.r + config.c) return Decision::stream_at(hi);

  const double r_min = segment(state, lo, state.next_chunk).bitrate_kbps;
  const double r_max = segment(state, hi, state.next_chunk).bitrate_kbps;
  const double threshold =
      r_min + (state.buffer - config.r) / config.c * (r_max - r_min);
  size_t best = lo;
  for (size_t j = 0; j < n; ++j)
    if (segment(state, j, state.next_chunk).bitrate_kbps <= threshold)
      best = j;
  return Decision::stream_at(best);
}

Decision decide_rb(const ClientState& state, const PolicyConfig& config) {
  require_map(state);
  if (state.history.empty()) return Decision::stream_at(0);
  const double est = estimate_throughput(state.history, config.w);
  size_t best = 0;
  for (size_t j = 0; j < state.chunk_map->n_streams(); ++j) {
    const double bits = double(segment(state, j, state.next_chunk).bits);
    if (est > 0.0 && bits / (est * 1000.0) <= state.buffer) best = j;
  }
  return Decision::stream_at(best);
}

QbPlan plan_qb(const ClientState& state, const PolicyConfig& config,
               const DownloadTimeModel& model) {
  require_map(state);
  const size_t k = horizon_chunks(state, config.h);
  const size_t n_streams = state.chunk_map->n_streams();
  const auto& durs = state.chunk_map->shot_durations;

  const int cap = grid_nearest(config.b_h);
  const int floor_ds = grid_nearest(config.b_l);
  const int target_ds = std::clamp(grid_nearest(config.b_t), 0, cap);
  const int b0 = std::clamp(grid_nearest(state.buffer), 0, cap);

  std::vector<int> dur_ds(k);
  std::vector<double> dur_s(k);
  for (size_t m = 0; m < k; ++m) {
    dur_s[m] = durs[state.next_chunk + m];
    dur_ds[m] = grid_nearest(dur_s[m]);
  }

  // Download grid time for stage m at state b choosing stream j. The
  // request instant is state-derived: elapsed wall time equals the buffer
  // drained plus the content added so far.
  std::vector<int> dur_prefix(k + 1, 0);
  for (size_t m = 0; m < k; ++m) dur_prefix[m + 1] = dur_prefix[m] + dur_ds[m];
  const auto tau_ds = [&](size_t m, int b, size_t j) -> int {
    const double t_request =
        state.now + double(b0 - b + dur_prefix[m]) / kGridHz;
    const size_t chunk = state.next_chunk + m;
    double seconds;
    try {
      seconds = model(t_request, double(segment(state, j, chunk).bits));
    } catch (const std::exception&) {
      return std::numeric_limits<int>::max();
    }
    if (!(seconds >= 0.0) || seconds * kGridHz >= 1e9)
      return std::numeric_limits<int>::max();
    return grid_up(seconds);
  };

  // Backward value pass with the terminal pinned to the state nearest b_t.
  std::vector<std::vector<double>> value(k + 1,
                                         std::vector<double>(cap + 1, -kInf));
  std::vector<std::vector<size_t>> choice(k, std::vector<size_t>(cap + 1, 0));
  value[k][target_ds] = 0.0;
  for (size_t m = k; m-- > 0;) {
    for (int b = 0; b <= cap; ++b) {
      for (size_t j = 0; j < n_streams; ++j) {
        const int t = tau_ds(m, b, j);
        if (t > b - floor_ds) continue;
        const int b_next = b - t + dur_ds[m];
        if (b_next > cap) continue;
        const double v = value[m + 1][b_next];
        if (v == -kInf) continue;
        const double total =
            dur_s[m] * segment(state, j, state.next_chunk + m).quality + v;
        if (total > value[m][b]) {
          value[m][b] = total;
          choice[m][b] = j;
        }
      }
    }
  }

  QbPlan plan;
  if (value[0][b0] > -kInf) {
    plan.feasible = true;
    plan.value = value[0][b0];
    int b = b0;
    for (size_t m = 0; m < k; ++m) {
      const size_t j = choice[m][b];
      plan.streams.push_back(j);
      b = b - tau_ds(m, b, j) + dur_ds[m];
    }
    return plan;
  }

  // Diagnose the failure. Pause is reserved for plans that cannot finish
  // without overflowing b_h: if some sequence survives both bounds but
  // misses the terminal, the safe move is the lowest stream. Only when the
  // cap alone is what kills every floor-respecting sequence does the
  // client pause to shed buffer.
  const auto reachable_ends = [&](bool capped) {
    const int limit = capped ? cap : cap + dur_prefix[k];
    std::vector<char> cur(limit + 1, 0), nxt(limit + 1, 0);
    cur[std::min(b0, limit)] = 1;
    for (size_t m = 0; m < k; ++m) {
      std::fill(nxt.begin(), nxt.end(), 0);
      for (int b = 0; b <= limit; ++b) {
        if (!cur[b]) continue;
        for (size_t j = 0; j < n_streams; ++j) {
          const int t = tau_ds(m, b, j);
          if (t > b - floor_ds) continue;
          const int b_next = b - t + dur_ds[m];
          if (b_next > limit) continue;
          nxt[b_next] = 1;
        }
      }
      std::swap(cur, nxt);
    }
    return cur;
  };

  const std::vector<char> ends = reachable_ends(true);
  if (std::any_of(ends.begin(), ends.end(), [](char c) { return c; })) {
    plan.fallback = QbPlan::Fallback::lowest;
    return plan;
  }

  const std::vector<char> uncapped = reachable_ends(false);
  const bool survives_floor =
      std::any_of(uncapped.begin(), uncapped.end(), [](char c) { return c; });
  plan.fallback =
      survives_floor ? QbPlan::Fallback::pause : QbPlan::Fallback::lowest;
  return plan;
}

Decision decide_qb(const ClientState& state, const PolicyConfig& config) {
  require_map(state);
  if (state.after_pause)
    return Decision::stream_at(state.chunk_map->n_streams() - 1);
  if (state.history.empty()) return Decision::stream_at(0);
  const double est = estimate_throughput(state.history, config.w);
  const DownloadTimeModel model = [est](double, double bits) {
    return est > 0.0 ? bits / (est * 1000.0) : kInf;
  };
  const QbPlan plan = plan_qb(state, config, model);
  if (plan.feasible) return Decision::stream_at(plan.streams.front());
  return plan.fallback == QbPlan::Fallback::pause ? Decision::pause()
                                                  : Decision::stream_at(0);
}

Decision decide_oqb(const ClientState& state, const PolicyConfig& config,
                    const trace::NetworkTrace& tr) {
  require_map(state);
  if (state.after_pause)
    return Decision::stream_at(state.chunk_map->n_streams() - 1);
  const DownloadTimeModel model = [&tr](double t_request, double bits) {
    return trace::time_to_deliver(tr, t_request, bits);
  };
  const QbPlan plan = plan_qb(state, config, model);
  if (plan.feasible) return Decision::stream_at(plan.streams.front());
  return plan.fallback == QbPlan::Fallback::pause ? Decision::pause()
                                                  : Decision::stream_at(0);
}

Decision decide(PolicyKind kind, const ClientState& state,
                const PolicyConfig& config, const trace::NetworkTrace& tr) {
  switch (kind) {
    case PolicyKind::bb: return decide_bb(state, config);
    case PolicyKind::rb: return decide_rb(state, config);
    case PolicyKind::qb: return decide_qb(state, config);
    case PolicyKind::oqb: return decide_oqb(state, config, tr);
  }
  throw std::runtime_error("unknown policy kind");
}

}  // namespace abrlab::abr
