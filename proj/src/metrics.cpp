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

#include "abrlab/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <set>
#include <sstream>
#include <stdexcept>

#include "abrlab/json_io.hpp"

namespace abrlab::metrics {

namespace {

void require_complete(const sim::SessionLog& log) {
  if (log.playback.empty()) throw std::runtime_error("empty session log");
}

// Fractional (tie-averaged) ranks, 1-based.
std::vector<double> fractional_ranks(const std::vector<double>& v) {
  const size_t n = v.size();
  std::vector<size_t> order(n);
  std::iota(order.begin(), order.end(), size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](size_t a, size_t b) { return v[a] < v[b]; });
  std::vector<double> ranks(n, 0.0);
  size_t i = 0;
  while (i < n) {
    size_t j = i;
    while (j + 1 < n && v[order[j + 1]] == v[order[i]]) ++j;
    const double r = (double(i) + double(j)) / 2.0 + 1.0;
    for (size_t k = i; k <= j; ++k) ranks[order[k]] = r;
    i = j + 1;
  }
  return ranks;
}

double pearson(const std::vector<double>& x, const std::vector<double>& y) {
  const double n = double(x.size());
  double mx = 0.0, my = 0.0;
  for (size_t i = 0; i < x.size(); ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= n;
  my /= n;
  double sxy = 0.0, sxx = 0.0, syy = 0.0;
  for (size_t i = 0; i < x.size(); ++i) {
    sxy += (x[i] - mx) * (y[i] - my);
    sxx += (x[i] - mx) * (x[i] - mx);
    syy += (y[i] - my) * (y[i] - my);
  }
  if (sxx <= 0.0 || syy <= 0.0)
    return std::numeric_limits<double>::quiet_NaN();
  return sxy / std::sqrt(sxx * syy);
}

}  // namespace

SessionIndicators indicators(const sim::SessionLog& log) {
  require_complete(log);
  SessionIndicators ind;
  const auto& pb = log.playback;
  double q_acc = 0.0, diff_acc = 0.0, played_bits = 0.0;
  for (size_t i = 0; i < pb.size(); ++i) {
    q_acc += pb[i].quality;
    played_bits += pb[i].bitrate_kbps * pb[i].duration;
    if (i + 1 < pb.size()) {
      if (pb[i].stream_index != pb[i + 1].stream_index) ++ind.n_switches;
      diff_acc += std::abs(pb[i + 1].quality - pb[i].quality);
    }
  }
  ind.mean_chunk_quality = q_acc / double(pb.size());
  ind.mean_chunk_quality_diff =
      pb.size() > 1 ? diff_acc / double(pb.size() - 1) : 0.0;
  ind.n_rebuffers = int(log.rebuffers.size());
  ind.rebuffer_time = log.rebuffer_time();
  const double span = log.wall_time - log.startup_delay;
  ind.mean_bitrate = span > 0.0 ? played_bits / span : 0.0;
  return ind;
}

SessionFeatures features(const sim::SessionLog& log) {
  require_complete(log);
  SessionFeatures f;
  const auto& pb = log.playback;
  double wq = 0.0, dur = 0.0;
  for (const auto& rec : pb) {
    wq += rec.quality * rec.duration;
    dur += rec.duration;
  }
  f.mean_quality = wq / dur;
  f.rebuffer_duration = log.rebuffer_time();
  double res_acc = 0.0;
  for (size_t i = 0; i + 1 < pb.size(); ++i)
    res_acc +=
        std::abs(double(pb[i + 1].resolution_height - pb[i].resolution_height));
  f.resolution_switch_mag =
      pb.size() > 1 ? res_acc / double(pb.size() - 1) : 0.0;

  double min_q = pb.front().quality;
  for (const auto& rec : pb) min_q = std::min(min_q, rec.quality);
  double onset = 0.0, cum = 0.0;
  for (const auto& rec : pb) {
    if (rec.quality == min_q) onset = cum;
    cum += rec.duration;
  }
  f.tll = dur - onset;
  return f;
}

ContinuousFeatures continuous_features(const sim::SessionLog& log,
                                       double interval) {
  require_complete(log);
  if (interval <= 0.0) throw std::runtime_error("interval must be positive");
  ContinuousFeatures cf;
  cf.interval = interval;
  const double span = log.wall_time - log.startup_delay;
  const size_t n = size_t(std::ceil(span / interval - 1e-9));
  const double content = log.content_duration();
  for (size_t k = 0; k < n; ++k) {
    const double w0 = log.startup_delay + double(k) * interval;
    const double w1 = w0 + interval;
    double played_w = 0.0, q_acc = 0.0;
    for (const auto& rec : log.playback) {
      const double s = std::max(w0, rec.t_play_start);
      const double e = std::min(w1, rec.t_play_start + rec.duration);
      if (e > s) {
        played_w += e - s;
        q_acc += (e - s) * rec.quality;
      }
    }
    cf.quality.push_back(played_w > 0.0 ? q_acc / played_w : 0.0);

    bool stalled_any = false, stalled_at_end = false;
    double last_stall_end = -1.0;
    for (const auto& r : log.rebuffers) {
      if (r.t_start < w1 && r.t_start + r.duration > w0) stalled_any = true;
      if (r.t_start <= w1 && r.t_start + r.duration > w1)
        stalled_at_end = true;
      if (r.t_start + r.duration <= w1)
        last_stall_end = std::max(last_stall_end, r.t_start + r.duration);
    }
    cf.rebuffering.push_back(stalled_any);
    double tsr;
    if (stalled_at_end)
      tsr = 0.0;
    else if (last_stall_end >= 0.0)
      tsr = w1 - last_stall_end;
    else
      tsr = w1 - log.startup_delay;
    cf.time_since_rebuffer.push_back(std::min(tsr, content));
  }
  return cf;
}

double srocc(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size())
    throw std::runtime_error("srocc length mismatch");
  if (x.size() < 2)
    throw std::runtime_error("srocc needs at least 2 samples");
  return pearson(fractional_ranks(x), fractional_ranks(y));
}

double rmse(const std::vector<double>& pred,
            const std::vector<double>& truth) {
  if (pred.size() != truth.size())
    throw std::runtime_error("rmse length mismatch");
  if (pred.empty()) throw std::runtime_error("rmse needs samples");
  double acc = 0.0;
  for (size_t i = 0; i < pred.size(); ++i)
    acc += (pred[i] - truth[i]) * (pred[i] - truth[i]);
  return std::sqrt(acc / double(pred.size()));
}

double outage_rate(const std::vector<double>& pred,
                   const std::vector<double>& truth_mean,
                   const std::vector<double>& truth_ci_halfwidth) {
  if (pred.size() != truth_mean.size() ||
      pred.size() != truth_ci_halfwidth.size())
    throw std::runtime_error("outage_rate length mismatch");
  if (pred.empty()) throw std::runtime_error("outage_rate needs samples");
  size_t outages = 0;
  for (size_t i = 0; i < pred.size(); ++i)
    if (std::abs(pred[i] - truth_mean[i]) > 2.0 * truth_ci_halfwidth[i])
      ++outages;
  return double(outages) / double(pred.size());
}

std::vector<TraceSplit> trace_splits(
    const std::vector<std::string>& trace_ids) {
  if (trace_ids.size() != 7)
    throw std::runtime_error("exactly 7 trace ids required");
  if (std::set<std::string>(trace_ids.begin(), trace_ids.end()).size() != 7)
    throw std::runtime_error("duplicate trace id");
  std::vector<TraceSplit> splits;
  for (size_t i = 0; i < 7; ++i) {
    for (size_t j = i + 1; j < 7; ++j) {
      TraceSplit sp;
      sp.test = {trace_ids[i], trace_ids[j]};
      for (size_t k = 0; k < 7; ++k)
        if (k != i && k != j) sp.train.push_back(trace_ids[k]);
      splits.push_back(std::move(sp));
    }
  }
  return splits;
}

std::string features_csv_header() {
  return "content,trace,abr,mean_quality,rebuffer_duration,"
         "resolution_switch_mag,tll";
}

std::string features_csv_row(const sim::SessionLog& log) {
  const SessionFeatures f = features(log);
  std::ostringstream out;
  out << log.content_id << "," << log.trace_id << "," << log.abr_name << ","
      << io::format_double(f.mean_quality) << ","
      << io::format_double(f.rebuffer_duration) << ","
      << io::format_double(f.resolution_switch_mag) << ","
      << io::format_double(f.tll);
  return out.str();
}

std::string continuous_csv(const ContinuousFeatures& cf) {
  std::ostringstream out;
  out << "t,quality,rebuffering,time_since_rebuffer\n";
  for (size_t k = 0; k < cf.quality.size(); ++k) {
    out << io::format_double(double(k + 1) * cf.interval) << ","
        << io::format_double(cf.quality[k]) << ","
        << (cf.rebuffering[k] ? 1 : 0) << ","
        << io::format_double(cf.time_since_rebuffer[k]) << "\n";
  }
  return out.str();
}

}  // namespace abrlab::metrics
