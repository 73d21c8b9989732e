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

#include "sqkd/channel.hpp"

#include <algorithm>
#include <stdexcept>

namespace sqkd::channel {

std::string_view party_name(Party party) {
  switch (party) {
    case Party::Alice: return "alice";
    case Party::Bob: return "bob";
    case Party::Charlie: return "charlie";
  }
  return "?";
}

std::string_view kind_name(EventKind kind) {
  return kind == EventKind::Qubit ? "qubit" : "classical";
}

std::optional<double> observed_rate(std::span<const double> arrivals,
                                    const RateWindow& window) {
  const std::size_t take = std::min(arrivals.size(), window.window_arrivals);
  if (take < 2) return std::nullopt;
  const double first = arrivals[arrivals.size() - take];
  const double last = arrivals.back();
  if (!(last > first)) return std::nullopt;
  return static_cast<double>(take - 1) / (last - first);
}

SpeedVerdict enforce_threshold(std::optional<double> rate,
                               const RateWindow& window) {
  if (!rate) return SpeedVerdict::Abort;
  return *rate < window.threshold_l * (1.0 - kRateRelativeSlack)
             ? SpeedVerdict::Abort
             : SpeedVerdict::Ok;
}

LinkId Network::add_link(Party from, Party to, LinkConfig config) {
  if (!(config.rate > 0.0)) throw std::invalid_argument("link rate must be > 0");
  if (config.latency < 0.0 || config.extra_service < 0.0) {
    throw std::invalid_argument("link delays must be nonnegative");
  }
  links_.push_back(Link{from, to, config});
  return links_.size() - 1;
}

ChannelEvent Network::schedule_untitled(LinkId id, EventKind kind,
                                        double send_time) {
  Link& link = links_.at(id);
  const double start = std::max(send_time, link.free_at);
  link.free_at = start + 1.0 / link.config.rate + link.config.extra_service;
  ChannelEvent event;
  event.event_id = next_id_++;
  event.kind = kind;
  event.sender = link.from;
  event.receiver = link.to;
  event.send_time = send_time;
  event.arrival_time = link.free_at + link.config.latency;
  return event;
}

SpeedVerdict RateMonitor::push(double arrival_time) {
  const std::size_t cap = std::max<std::size_t>(window_.window_arrivals, 2);
  if (ring_.size() < cap) {
    ring_.push_back(arrival_time);
  } else {
    ring_[count_ % cap] = arrival_time;
  }
  ++count_;
  if (count_ < 2) return SpeedVerdict::Ok;

  const std::size_t held = ring_.size();
  const std::size_t newest = (count_ - 1) % cap;
  const std::size_t oldest = held < cap ? 0 : count_ % cap;
  const double span = ring_[newest] - ring_[oldest];
  std::optional<double> rate;
  if (span > 0.0) rate = static_cast<double>(held - 1) / span;
  return enforce_threshold(rate, window_);
}

}  // namespace sqkd::channel
