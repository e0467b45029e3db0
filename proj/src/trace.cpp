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

#include "abrlab/trace.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace abrlab::trace {

namespace {

constexpr double kBitsPerKbPerSecond = 1000.0;  // 1 Kbps = 1000 bits/s

double hold_end(const NetworkTrace& tr, size_t i) {
  return i + 1 < tr.samples.size() ? tr.samples[i + 1].t : tr.duration;
}

void validate(const NetworkTrace& tr) {
  if (tr.samples.empty()) throw std::runtime_error("empty trace");
  if (tr.samples.front().t != 0.0)
    throw std::runtime_error("trace must start at t=0");
  for (size_t i = 0; i < tr.samples.size(); ++i) {
    if (tr.samples[i].kbps < 0.0)
      throw std::runtime_error("negative bandwidth sample");
    if (i + 1 < tr.samples.size() &&
        tr.samples[i + 1].t <= tr.samples[i].t)
      throw std::runtime_error("non-monotone sample times");
  }
  if (tr.duration <= tr.samples.back().t)
    throw std::runtime_error("trace duration must extend past last sample");
}

// Integral of kbps*1000 over [a, b] within one cycle, 0 <= a <= b <= duration.
double bits_within_cycle(const NetworkTrace& tr, double a, double b) {
  double bits = 0.0;
  for (size_t i = 0; i < tr.samples.size(); ++i) {
    const double s = std::max(a, tr.samples[i].t);
    const double e = std::min(b, hold_end(tr, i));
    if (e > s) bits += tr.samples[i].kbps * kBitsPerKbPerSecond * (e - s);
  }
  return bits;
}

}  // namespace

double NetworkTrace::total_bits_per_cycle() const {
  return bits_within_cycle(*this, 0.0, duration);
}

NetworkTrace from_kbps_per_second(std::string trace_id,
                                  const std::vector<double>& kbps) {
  NetworkTrace tr;
  tr.trace_id = std::move(trace_id);
  tr.samples.reserve(kbps.size());
  for (size_t i = 0; i < kbps.size(); ++i)
    tr.samples.push_back({static_cast<double>(i), kbps[i]});
  tr.duration = static_cast<double>(kbps.size());
  validate(tr);
  return tr;
}

NetworkTrace parse_hsdpa_log(std::string_view text, std::string trace_id) {
  struct RawInterval {
    double end_s;  // interval end, relative seconds
    double bytes;
  };
  std::vector<int64_t> timestamps_ms;
  std::vector<double> bytes;

  size_t line_no = 0;
  size_t pos = 0;
  while (pos <= text.size()) {
    const size_t eol = std::min(text.find('\n', pos), text.size());
    std::string line(text.substr(pos, eol - pos));
    pos = eol + 1;
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    std::istringstream ss(line);
    int64_t ts = 0;
    double by = 0.0;
    if (!(ss >> ts >> by) || by < 0)
      throw std::runtime_error("malformed trace line " + std::to_string(line_no));
    if (!timestamps_ms.empty() && ts <= timestamps_ms.back())
      throw std::runtime_error("non-monotone timestamp at line " +
                               std::to_string(line_no));
    timestamps_ms.push_back(ts);
    bytes.push_back(by);
  }
  if (timestamps_ms.empty()) throw std::runtime_error("empty trace");

  // First interval length defaults to the second line's (or 1 s).
  const double first_len_s =
      timestamps_ms.size() > 1
          ? static_cast<double>(timestamps_ms[1] - timestamps_ms[0]) / 1000.0
          : 1.0;
  std::vector<RawInterval> raw;
  raw.reserve(timestamps_ms.size());
  const double t0 =
      static_cast<double>(timestamps_ms.front()) / 1000.0 - first_len_s;
  for (size_t i = 0; i < timestamps_ms.size(); ++i)
    raw.push_back({static_cast<double>(timestamps_ms[i]) / 1000.0 - t0,
                   bytes[i]});

  // Resample onto a uniform 1 s grid, preserving delivered bits. Each grid
  // second's kbps is the mean rate over the portion of it the log covers.
  const double total_s = raw.back().end_s;
  const size_t n_grid = static_cast<size_t>(std::ceil(total_s - 1e-9));
  NetworkTrace tr;
  tr.trace_id = std::move(trace_id);
  tr.samples.reserve(n_grid);
  size_t j = 0;  // raw interval cursor
  for (size_t k = 0; k < n_grid; ++k) {
    const double g0 = static_cast<double>(k);
    const double g1 = std::min(g0 + 1.0, total_s);
    double bits = 0.0;
    for (size_t i = j; i < raw.size(); ++i) {
      const double i0 = i == 0 ? 0.0 : raw[i - 1].end_s;
      const double i1 = raw[i].end_s;
      if (i1 <= g0) {
        j = i + 1;
        continue;
      }
      if (i0 >= g1) break;
      const double overlap = std::min(i1, g1) - std::max(i0, g0);
      bits += raw[i].bytes * 8.0 * (overlap / (i1 - i0));
    }
    tr.samples.push_back({g0, bits / (g1 - g0) / kBitsPerKbPerSecond});
  }
  tr.duration = total_s;
  validate(tr);
  return tr;
}

NetworkTrace load_hsdpa_log(const std::filesystem::path& file) {
  std::ifstream in(file);
  if (!in) throw std::runtime_error("cannot open trace file: " + file.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_hsdpa_log(ss.str(), file.stem().string());
}

NetworkTrace crop(const NetworkTrace& tr, double t0, double t1) {
  if (!(t0 >= 0.0) || !(t1 > t0) || t1 > tr.duration + 1e-9)
    throw std::runtime_error("invalid crop window");
  NetworkTrace out;
  out.trace_id = tr.trace_id;
  for (size_t i = 0; i < tr.samples.size(); ++i) {
    const double s = std::max(t0, tr.samples[i].t);
    const double e = std::min(t1, hold_end(tr, i));
    if (e > s) out.samples.push_back({s - t0, tr.samples[i].kbps});
  }
  out.duration = t1 - t0;
  validate(out);
  return out;
}

TraceStats stats(const NetworkTrace& tr) {
  validate(tr);
  TraceStats st;
  st.min_kbps = std::numeric_limits<double>::infinity();
  st.max_kbps = -std::numeric_limits<double>::infinity();
  double wsum = 0.0, mean_acc = 0.0;
  for (size_t i = 0; i < tr.samples.size(); ++i) {
    const double w = hold_end(tr, i) - tr.samples[i].t;
    const double x = tr.samples[i].kbps;
    wsum += w;
    mean_acc += w * x;
    st.min_kbps = std::min(st.min_kbps, x);
    st.max_kbps = std::max(st.max_kbps, x);
  }
  st.mean_kbps = mean_acc / wsum;
  double var_acc = 0.0;
  for (size_t i = 0; i < tr.samples.size(); ++i) {
    const double w = hold_end(tr, i) - tr.samples[i].t;
    const double d = tr.samples[i].kbps - st.mean_kbps;
    var_acc += w * d * d;
  }
  st.std_kbps = std::sqrt(var_acc / wsum);
  st.cov = st.mean_kbps > 0.0 ? st.std_kbps / st.mean_kbps : 0.0;
  return st;
}

double bits_deliverable(const NetworkTrace& tr, double t1, double t2) {
  validate(tr);
  if (t1 < 0.0 || t1 > t2) throw std::runtime_error("invalid time range");
  if (t1 == t2) return 0.0;
  const double cycle_bits = tr.total_bits_per_cycle();
  const double d = tr.duration;
  // F(t) = bits over [0, t] with wrap-around.
  const auto cumulative = [&](double t) {
    const double cycles = std::floor(t / d);
    const double rem = t - cycles * d;
    return cycles * cycle_bits + bits_within_cycle(tr, 0.0, rem);
  };
  return cumulative(t2) - cumulative(t1);
}

double time_to_deliver(const NetworkTrace& tr, double t_start, double bits) {
  validate(tr);
  if (t_start < 0.0) throw std::runtime_error("invalid start time");
  if (bits < 0.0) throw std::runtime_error("negative bit amount");
  if (bits == 0.0) return 0.0;
  if (tr.total_bits_per_cycle() <= 0.0) throw std::runtime_error("starved");

  // Walk hold intervals from t_start, wrapping; exact at boundaries.
  double remaining = bits;
  double elapsed = 0.0;
  double pos = std::fmod(t_start, tr.duration);
  // Index of the hold interval containing pos.
  size_t i = 0;
  while (i + 1 < tr.samples.size() && tr.samples[i + 1].t <= pos) ++i;
  while (true) {
    const double seg_end = hold_end(tr, i);
    const double width = seg_end - pos;
    const double rate = tr.samples[i].kbps * kBitsPerKbPerSecond;
    const double seg_bits = rate * width;
    if (seg_bits >= remaining && rate > 0.0) {
      return elapsed + remaining / rate;
    }
    remaining -= seg_bits;
    elapsed += width;
    if (i + 1 < tr.samples.size()) {
      ++i;
      pos = tr.samples[i].t;
    } else {
      i = 0;
      pos = 0.0;
    }
  }
}

std::string to_csv(const NetworkTrace& tr) {
  std::ostringstream out;
  out << "t_seconds,kbps\n";
  out.precision(17);
  for (const auto& s : tr.samples) out << s.t << "," << s.kbps << "\n";
  return out.str();
}

NetworkTrace parse_csv(std::string_view text, std::string trace_id) {
  NetworkTrace tr;
  tr.trace_id = std::move(trace_id);
  size_t pos = 0;
  size_t line_no = 0;
  while (pos <= text.size()) {
    const size_t eol = std::min(text.find('\n', pos), text.size());
    std::string line(text.substr(pos, eol - pos));
    pos = eol + 1;
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    if (line_no == 1 && line.find("t_seconds") != std::string::npos) continue;
    std::replace(line.begin(), line.end(), ',', ' ');
    std::istringstream ss(line);
    double t = 0.0, kbps = 0.0;
    if (!(ss >> t >> kbps))
      throw std::runtime_error("malformed csv line " + std::to_string(line_no));
    tr.samples.push_back({t, kbps});
  }
  if (tr.samples.empty()) throw std::runtime_error("empty trace");
  const double last_hold =
      tr.samples.size() > 1
          ? tr.samples.back().t - tr.samples[tr.samples.size() - 2].t
          : 1.0;
  tr.duration = tr.samples.back().t + last_hold;
  validate(tr);
  return tr;
}

}  // namespace abrlab::trace
