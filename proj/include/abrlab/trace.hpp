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

#ifndef ABRLAB_TRACE_HPP_
#define ABRLAB_TRACE_HPP_

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace abrlab::trace {

// One bandwidth sample: kbps holds over [t, next sample's t) (zero-order
// hold); the last sample holds until the trace's duration.
struct Sample {
  double t = 0.0;     // seconds, strictly increasing, starts at 0
  double kbps = 0.0;  // >= 0
};

// Immutable after construction. Replay wraps to t=0 past `duration`, so
// every query below is defined for arbitrarily large times.
struct NetworkTrace {
  std::string trace_id;
  std::vector<Sample> samples;
  double duration = 0.0;  // seconds; last sample holds until here

  double total_bits_per_cycle() const;
};

// Duration-weighted statistics over one trace cycle.
struct TraceStats {
  double min_kbps = 0.0;
  double max_kbps = 0.0;
  double mean_kbps = 0.0;  // mu_B
  double std_kbps = 0.0;   // sigma_B, duration-weighted population std
  double cov = 0.0;        // sigma_B / mu_B, 0 when mean is 0
};

// Builds a trace from per-second kbps values (uniform 1 s grid).
NetworkTrace from_kbps_per_second(std::string trace_id,
                                  const std::vector<double>& kbps);

// Parses an HSDPA-style log: `<timestamp_ms> <bytes_received>` per line,
// extra trailing columns ignored, blank lines skipped. Byte counts cover
// the interval ending at the line's timestamp; the first line's interval
// is assumed equal to the second line's (1 s for a one-line log). The
// result is resampled onto a uniform 1 s grid, preserving delivered bits.
// Throws std::runtime_error on malformed lines (with line number),
// non-monotone timestamps, or an empty log.
NetworkTrace parse_hsdpa_log(std::string_view text, std::string trace_id = "");

// parse_hsdpa_log over a file's contents; trace_id defaults to the stem.
NetworkTrace load_hsdpa_log(const std::filesystem::path& file);

// Restricts a trace to the window [t0, t1) of its timeline, re-zeroed.
NetworkTrace crop(const NetworkTrace& tr, double t0, double t1);

TraceStats stats(const NetworkTrace& tr);

// Integral of bandwidth over [t1, t2] in bits; wraps past the trace end.
// Additive: bits(a,b) + bits(b,c) == bits(a,c). Throws if t1 > t2.
double bits_deliverable(const NetworkTrace& tr, double t1, double t2);

// Smallest dt with bits_deliverable(t_start, t_start + dt) >= bits.
// Throws "starved" if bits > 0 and a full wrapped cycle delivers nothing.
double time_to_deliver(const NetworkTrace& tr, double t_start, double bits);

// Canonical CSV form `t_seconds,kbps` (header included).
std::string to_csv(const NetworkTrace& tr);
NetworkTrace parse_csv(std::string_view text, std::string trace_id = "");

}  // namespace abrlab::trace

#endif  // ABRLAB_TRACE_HPP_
