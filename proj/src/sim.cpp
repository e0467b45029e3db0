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

#include "abrlab/sim.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include "abrlab/json_io.hpp"

namespace abrlab::sim {

namespace {

// Tolerance for exact-boundary ties in wall-clock arithmetic.
constexpr double kTieEps = 1e-9;

double played_content(const std::vector<PlaybackRecord>& playback, double t) {
  double played = 0.0;
  for (const auto& rec : playback) {
    if (t >= rec.t_play_start + rec.duration)
      played += rec.duration;
    else if (t > rec.t_play_start)
      played += t - rec.t_play_start;
  }
  return played;
}

double downloaded_content(const SessionLog& log,
                          const ladder::ChunkMap& map, double t) {
  double content = 0.0;
  for (const auto& d : log.downloads)
    if (d.t_complete <= t) content += map.shot_durations[d.chunk_index];
  return content;
}

}  // namespace

double SessionLog::content_duration() const {
  double d = 0.0;
  for (const auto& rec : playback) d += rec.duration;
  return d;
}

double SessionLog::rebuffer_time() const {
  double d = 0.0;
  for (const auto& r : rebuffers) d += r.duration;
  return d;
}

SessionLog simulate(const SessionConfig& config) {
  const ladder::ChunkMap& map = config.chunk_map;
  if (config.prefetch_chunks < 1)
    throw std::runtime_error("prefetch_chunks must be >= 1");
  if (map.streams.empty() || map.shot_durations.empty())
    throw std::runtime_error("empty chunk map");
  for (const auto& row : map.streams)
    if (row.segments.size() != map.shot_durations.size())
      throw std::runtime_error("ragged chunk map");

  const size_t n_chunks = map.n_chunks();
  const size_t n_streams = map.n_streams();
  const size_t prefetch = std::min<size_t>(config.prefetch_chunks, n_chunks);

  SessionLog log;
  log.content_id = map.content_id;
  log.trace_id = config.trace.trace_id;
  log.abr_name = abr::policy_name(config.policy);

  const auto seg = [&](size_t stream, size_t chunk)
      -> const ladder::SegmentRecord& {
    return map.streams[stream].segments[chunk];
  };
  const auto download = [&](size_t chunk, size_t stream, double t_request) {
    const int64_t bits = seg(stream, chunk).bits;
    const double dt =
        trace::time_to_deliver(config.trace, t_request, double(bits));
    log.downloads.push_back({chunk, stream, t_request, t_request + dt, bits});
    return t_request + dt;
  };
  const auto play = [&](size_t chunk, size_t stream, double t_start) {
    const ladder::SegmentRecord& s = seg(stream, chunk);
    log.playback.push_back({chunk, stream, t_start, s.duration,
                            s.bitrate_kbps, s.quality, s.resolution_height});
  };
  const auto buffer_at = [&](double t) {
    return downloaded_content(log, map, t) - played_content(log.playback, t);
  };

  // Prefetch at the lowest stream, back to back; playback starts when the
  // prefetch completes.
  double t = 0.0;
  for (size_t i = 0; i < prefetch; ++i) t = download(i, 0, t);
  log.startup_delay = t;
  play(0, 0, t);
  for (size_t i = 1; i < prefetch; ++i)
    play(i, 0, log.playback.back().t_play_start +
                   log.playback.back().duration);

  // Prefetch downloads are not policy evidence: the first adaptive decision
  // sees an empty history.
  std::vector<abr::DownloadSample> history;
  for (size_t i = prefetch; i < n_chunks; ++i) {
    const double t_free = log.downloads.back().t_complete;
    if (i > prefetch)
      history.push_back({double(log.downloads.back().bits),
                         log.downloads.back().t_complete -
                             log.downloads.back().t_request});

    abr::ClientState state;
    state.now = t_free;
    state.next_chunk = i;
    state.buffer = std::max(0.0, buffer_at(t_free));
    state.history = history;
    state.chunk_map = &map;

    abr::Decision d =
        abr::decide(config.policy, state, config.policy_config, config.trace);
    double t_request = t_free;
    if (d.kind == abr::Decision::Kind::pause) {
      const double gate = std::max(
          0.0, config.policy_config.b_h - map.shot_durations[i]);
      // Buffer drains at 1 s/s while the downloader idles.
      t_request = t_free + std::max(0.0, state.buffer - gate);
      state.now = t_request;
      state.buffer = std::max(0.0, buffer_at(t_request));
      state.after_pause = true;
      d = abr::decide(config.policy, state, config.policy_config,
                      config.trace);
      if (d.kind == abr::Decision::Kind::pause)
        throw std::runtime_error("policy paused twice");
    }
    if (d.stream_index >= n_streams)
      throw std::runtime_error("invalid stream index");

    const double t_complete = download(i, d.stream_index, t_request);
    const PlaybackRecord& prev = log.playback.back();
    const double drained = prev.t_play_start + prev.duration;
    if (t_complete > drained + kTieEps) {
      log.rebuffers.push_back({drained, t_complete - drained, i});
      play(i, d.stream_index, t_complete);
    } else {
      play(i, d.stream_index, drained);
    }
  }

  log.wall_time =
      log.playback.back().t_play_start + log.playback.back().duration;

  // Per-second series on left-closed windows of the post-startup clock.
  const double span = log.wall_time - log.startup_delay;
  const size_t n_windows = size_t(std::ceil(span - kTieEps));
  for (size_t k = 0; k < n_windows; ++k) {
    const double w0 = log.startup_delay + double(k);
    const double w1 = std::min(w0 + 1.0, log.wall_time);
    double played_w = 0.0, bit_acc = 0.0, q_acc = 0.0;
    for (const auto& rec : log.playback) {
      const double s = std::max(w0, rec.t_play_start);
      const double e = std::min(w1, rec.t_play_start + rec.duration);
      if (e > s) {
        played_w += e - s;
        bit_acc += (e - s) * rec.bitrate_kbps;
        q_acc += (e - s) * rec.quality;
      }
    }
    bool stalled = false;
    for (const auto& r : log.rebuffers)
      if (r.t_start < w1 && r.t_start + r.duration > w0) stalled = true;
    log.buffer_series.push_back(std::max(0.0, buffer_at(w0)));
    log.bitrate_series.push_back(bit_acc / (w1 - w0));
    log.quality_series.push_back(played_w > 0.0 ? q_acc / played_w : 0.0);
    log.stalled_series.push_back(stalled);
  }
  return log;
}

std::vector<double> rebuffer_ratio(const std::vector<SessionLog>& logs,
                                   double window) {
  if (logs.empty()) throw std::runtime_error("no session logs");
  if (window <= 0.0) throw std::runtime_error("window must be positive");
  double max_span = 0.0;
  for (const auto& log : logs)
    max_span = std::max(max_span, log.wall_time - log.startup_delay);
  const size_t n = size_t(std::ceil(max_span / window - kTieEps));
  std::vector<double> ratio(n, 0.0);
  for (const auto& log : logs) {
    for (size_t k = 0; k < n; ++k) {
      const double w0 = double(k) * window;
      const double w1 = w0 + window;
      for (const auto& r : log.rebuffers) {
        const double s = r.t_start - log.startup_delay;
        if (s < w1 && s + r.duration > w0) {
          ratio[k] += 1.0;
          break;
        }
      }
    }
  }
  for (double& v : ratio) v /= double(logs.size());
  return ratio;
}

std::string series_csv(const SessionLog& log) {
  std::ostringstream out;
  out << "t,bitrate_kbps,buffer_s,quality,stalled\n";
  for (size_t k = 0; k < log.buffer_series.size(); ++k) {
    out << k << "," << io::format_double(log.bitrate_series[k]) << ","
        << io::format_double(log.buffer_series[k]) << ","
        << io::format_double(log.quality_series[k]) << ","
        << (log.stalled_series[k] ? 1 : 0) << "\n";
  }
  return out.str();
}

}  // namespace abrlab::sim
