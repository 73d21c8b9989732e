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

#include "sqkd/transcript_io.hpp"

namespace sqkd::io {

std::string bits_to_hex(const protocol::Bits& bits) {
  static constexpr char kDigits[] = "0123456789abcdef";
  std::string out;
  out.reserve((bits.size() + 3) / 4);
  for (std::size_t i = 0; i < bits.size(); i += 4) {
    unsigned nibble = 0;
    for (std::size_t k = 0; k < 4; ++k) {
      nibble <<= 1;
      if (i + k < bits.size()) nibble |= bits[i + k] & 1u;
    }
    out.push_back(kDigits[nibble]);
  }
  return out;
}

nlohmann::ordered_json event_json(const channel::ChannelEvent& event) {
  nlohmann::ordered_json j;
  j["event_id"] = event.event_id;
  j["kind"] = channel::kind_name(event.kind);
  j["sender"] = channel::party_name(event.sender);
  j["receiver"] = channel::party_name(event.receiver);
  j["send_time"] = event.send_time;
  j["arrival_time"] = event.arrival_time;
  j["summary"] = event.summary;
  return j;
}

nlohmann::ordered_json summary_json(const protocol::Transcript& t) {
  nlohmann::ordered_json j;
  j["n"] = t.params.n;
  j["N"] = t.total_qubits;
  j["agreed_count"] = t.sift.agreed_count;
  j["qber"] = t.check ? nlohmann::ordered_json(t.check->qber)
                      : nlohmann::ordered_json(nullptr);
  j["aborted"] = t.aborted();
  j["abort_reason"] =
      t.aborted()
          ? nlohmann::ordered_json(protocol::abort_reason_name(t.abort))
          : nlohmann::ordered_json(nullptr);
  if (t.aborted()) {
    j["key_A_hex"] = nullptr;
    j["key_B_hex"] = nullptr;
  } else {
    j["key_A_hex"] = bits_to_hex(t.sift.sifted_key_A);
    j["key_B_hex"] = bits_to_hex(t.sift.sifted_key_B);
  }
  return j;
}

std::string transcript_jsonl(const protocol::Transcript& t) {
  std::string out;
  for (const auto& event : t.events) {
    out += event_json(event).dump();
    out.push_back('\n');
  }
  out += summary_json(t).dump();
  out.push_back('\n');
  return out;
}

}  // namespace sqkd::io
