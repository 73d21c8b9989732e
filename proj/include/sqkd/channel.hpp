// Copyright 2026 The sqkd Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace sqkd::channel {

enum class Party : std::uint8_t { Alice, Bob, Charlie };
enum class EventKind : std::uint8_t { Qubit, Classical };

std::string_view party_name(Party party);
std::string_view kind_name(EventKind kind);

/// A qubit or classical message in flight. Times are simulated seconds.
struct ChannelEvent {
  std::uint64_t event_id = 0;
  EventKind kind = EventKind::Qubit;
  Party sender = Party::Alice;
  Party receiver = Party::Bob;
  double send_time = 0.0;
  double arrival_time = 0.0;
  std::string summary;
};

struct LinkConfig {
  double rate = 1.0;           // items per simulated second, > 0
  double latency = 0.0;        // fixed propagation delay
  double extra_service = 0.0;  // per-item hold time added by a relay
};

/// Rate check parameters. The window is counted in arrivals.
struct RateWindow {
  std::size_t window_arrivals = 16;
  double threshold_l = 1.0;
};

/// Relative slack on the threshold comparison so that an honest stream at
/// exactly l survives floating-point accumulation of arrival times.
inline constexpr double kRateRelativeSlack = 1e-9;

enum class SpeedVerdict : std::uint8_t { Ok, Abort };

/// (count - 1) / (last - first) over the trailing `window_arrivals`
/// arrivals. Empty when fewer than two arrivals are available or when they
/// share a timestamp.
std::optional<double> observed_rate(std::span<const double> arrivals,
                                    const RateWindow& window);

/// Abort iff the rate is undefined or below threshold_l (inclusive pass at
/// equality).
SpeedVerdict enforce_threshold(std::optional<double> rate,
                               const RateWindow& window);

using LinkId = std::size_t;

/// Single-owner event queue for one simulation run. Links are lossless and
/// order-preserving; each link serializes its items at its configured rate.
class Network {
 public:
  explicit Network(bool record_events = true) : record_(record_events) {}

  LinkId add_link(Party from, Party to, LinkConfig config);

  const LinkConfig& link_config(LinkId link) const {
    return links_[link].config;
  }

  /// arrival = max(send_time, link free time) + 1/rate + extra_service +
  /// latency. `summary` is only invoked when events are being recorded.
  template <typename SummaryFn>
  ChannelEvent schedule_send(LinkId link, EventKind kind, double send_time,
                             SummaryFn&& summary) {
    ChannelEvent event = schedule_untitled(link, kind, send_time);
    if (record_) {
      event.summary = summary();
      events_.push_back(event);
    }
    return event;
  }

  ChannelEvent schedule_send(LinkId link, EventKind kind, double send_time) {
    return schedule_send(link, kind, send_time, [] { return std::string{}; });
  }

  bool recording() const { return record_; }
  const std::vector<ChannelEvent>& events() const { return events_; }
  std::vector<ChannelEvent> take_events() { return std::move(events_); }

 private:
  struct Link {
    Party from;
    Party to;
    LinkConfig config;
    double free_at = 0.0;
  };

  ChannelEvent schedule_untitled(LinkId link, EventKind kind,
                                 double send_time);

  bool record_;
  std::uint64_t next_id_ = 0;
  std::vector<Link> links_;
  std::vector<ChannelEvent> events_;
};

/// Incremental sliding-window monitor used by a receiver as items arrive.
class RateMonitor {
 public:
  explicit RateMonitor(RateWindow window) : window_(window) {}

  /// Records an arrival and returns the verdict for the current window.
  /// The first arrival alone cannot be judged and passes.
  SpeedVerdict push(double arrival_time);

  std::size_t count() const { return count_; }

 private:
  RateWindow window_;
  std::vector<double> ring_;
  std::size_t count_ = 0;
};

}  // namespace sqkd::channel
