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

#ifndef ABRLAB_ABR_HPP_
#define ABRLAB_ABR_HPP_

#include <functional>
#include <string>
#include <vector>

#include "abrlab/ladder.hpp"
#include "abrlab/trace.hpp"

namespace abrlab::abr {

enum class PolicyKind { bb, rb, qb, oqb };

PolicyKind policy_from_name(const std::string& name);
std::string policy_name(PolicyKind kind);

struct PolicyConfig {
  double r = 5.0;    // reservoir, seconds (BB)
  double c = 4.5;    // cushion, seconds (BB)
  int w = 5;         // throughput estimation window, chunks (RB, QB)
  double h = 10.0;   // planning horizon, seconds (QB, OQB)
  double b_l = 1.0;  // min allowed buffer, seconds (QB, OQB)
  double b_h = 10.0; // max allowed buffer, seconds (QB, OQB)
  double b_t = 3.0;  // target buffer at end of horizon, seconds (QB, OQB)
};

struct DownloadSample {
  double bits = 0.0;
  double seconds = 0.0;  // pure transfer time, pause waits excluded
};

// Client view at a request instant. after_pause marks the first request
// following a resolved pause; QB/OQB then return the top stream.
struct ClientState {
  double now = 0.0;      // wall seconds
  size_t next_chunk = 0;
  double buffer = 0.0;   // seconds of content
  std::vector<DownloadSample> history;
  const ladder::ChunkMap* chunk_map = nullptr;
  bool after_pause = false;
};

struct Decision {
  enum class Kind { stream, pause } kind = Kind::stream;
  size_t stream_index = 0;  // valid when kind == stream

  static Decision stream_at(size_t i) { return {Kind::stream, i}; }
  static Decision pause() { return {Kind::pause, 0}; }
};

// Predicted transfer seconds for `bits` starting at wall time t_request.
using DownloadTimeModel = std::function<double(double t_request, double bits)>;

// Arithmetic mean of per-chunk throughput over the last min(w, n) chunks,
// in Kbps. Throws on empty history.
double estimate_throughput(const std::vector<DownloadSample>& history, int w);

Decision decide_bb(const ClientState& state, const PolicyConfig& config);
Decision decide_rb(const ClientState& state, const PolicyConfig& config);

// Dynamic-programming plan diagnostics, exposed for verification.
struct QbPlan {
  bool feasible = false;
  std::vector<size_t> streams;  // one per horizon chunk when feasible
  double value = 0.0;           // sum of duration * quality
  enum class Fallback { none, lowest, pause } fallback = Fallback::none;
};

// DP over buffer states on a 0.1 s grid in [0, b_h]: transitions drain
// the predicted download time (rounded up to the grid) and add the chunk
// duration (rounded to nearest); a plan is infeasible if the buffer
// crosses below b_l during a download or exceeds b_h at completion, and
// must end at the grid state nearest b_t. Horizon chunks: while the
// cumulative duration from next_chunk stays < h, at least one.
// Fallbacks when no plan exists: buffer cannot be kept at or above b_l
// (or cannot reach the terminal from below) -> lowest; every plan
// overflows b_h (or overshoots the terminal from above) -> pause.
QbPlan plan_qb(const ClientState& state, const PolicyConfig& config,
               const DownloadTimeModel& model);

// QB: model = constant estimate_throughput over the window; empty
// history falls back to stream 0. OQB: model = the actual trace.
Decision decide_qb(const ClientState& state, const PolicyConfig& config);
Decision decide_oqb(const ClientState& state, const PolicyConfig& config,
                    const trace::NetworkTrace& tr);

// Dispatch by kind; `tr` is consulted by OQB only.
Decision decide(PolicyKind kind, const ClientState& state,
                const PolicyConfig& config, const trace::NetworkTrace& tr);

}  // namespace abrlab::abr

#endif  // ABRLAB_ABR_HPP_
