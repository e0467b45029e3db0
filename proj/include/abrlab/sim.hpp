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

#ifndef ABRLAB_SIM_HPP_
#define ABRLAB_SIM_HPP_

#include <cstdint>
#include <string>
#include <vector>

#include "abrlab/abr.hpp"
#include "abrlab/ladder.hpp"
#include "abrlab/trace.hpp"

namespace abrlab::sim {

struct SessionConfig {
  int prefetch_chunks = 1;  // B0 >= 1
  abr::PolicyKind policy = abr::PolicyKind::bb;
  abr::PolicyConfig policy_config;
  trace::NetworkTrace trace;
  ladder::ChunkMap chunk_map;
};

struct DownloadRecord {
  size_t chunk_index = 0;
  size_t stream_index = 0;
  double t_request = 0.0;   // wall seconds, transfer start (pause excluded)
  double t_complete = 0.0;  // wall seconds
  int64_t bits = 0;
};

struct RebufferRecord {
  double t_start = 0.0;      // wall seconds
  double duration = 0.0;     // seconds, > 0
  size_t before_chunk = 0;   // chunk whose download the stall waited on
};

struct PlaybackRecord {
  size_t chunk_index = 0;
  size_t stream_index = 0;
  double t_play_start = 0.0;  // wall seconds
  double duration = 0.0;      // seconds
  double bitrate_kbps = 0.0;
  double quality = 0.0;
  int resolution_height = 0;
};

// Complete event-level record of one playout. Per-second series are
// sampled on left-closed windows of the post-startup wall clock:
// bitrate/quality are time-weighted over played instants (0-imputed
// while stalled for bitrate; quality covers played instants only),
// buffer is the level at the window start, stalled is "any stalled
// instant within the window".
struct SessionLog {
  std::string content_id;
  std::string trace_id;
  std::string abr_name;
  std::vector<DownloadRecord> downloads;
  std::vector<RebufferRecord> rebuffers;
  std::vector<PlaybackRecord> playback;
  double startup_delay = 0.0;  // wall seconds until first frame
  double wall_time = 0.0;      // total wall seconds including startup
  std::vector<double> buffer_series;   // seconds of content
  std::vector<double> bitrate_series;  // Kbps, 0 while stalled
  std::vector<double> quality_series;  // played instants only
  std::vector<bool> stalled_series;

  double content_duration() const;
  double rebuffer_time() const;
};

// Runs the deterministic playout loop: prefetch B0 chunks at stream 0,
// sequential downloads with the policy consulted at each request
// instant, buffer drained at 1 s/s during playback. A stall runs exactly
// until the blocking chunk completes; a download finishing at the exact
// depletion instant is not a stall. Pause decisions idle the downloader
// until buffer <= max(0, b_h - next chunk duration). Throws "starved"
// when the trace cannot deliver another bit and on invalid policy
// decisions.
SessionLog simulate(const SessionConfig& config);

// Fraction of sessions with any stalled instant per window of the
// post-startup wall clock. Throws on empty input or window <= 0.
std::vector<double> rebuffer_ratio(const std::vector<SessionLog>& logs,
                                   double window = 1.0);

// Per-second series as CSV `t,bitrate_kbps,buffer_s,quality,stalled`.
std::string series_csv(const SessionLog& log);

}  // namespace abrlab::sim

#endif  // ABRLAB_SIM_HPP_
