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

#include <filesystem>
#include <string>

#include <json.hpp>

#include "sqkd/channel.hpp"
#include "sqkd/protocol.hpp"

namespace sqkd::io {

/// Bits packed MSB-first into hex digits; a short final digit is padded
/// with zero bits on the right. Empty input gives "".
std::string bits_to_hex(const protocol::Bits& bits);

/// {event_id, kind, sender, receiver, send_time, arrival_time, summary}
nlohmann::ordered_json event_json(const channel::ChannelEvent& event);

/// {n, N, agreed_count, qber, aborted, abort_reason, key_A_hex, key_B_hex}.
/// qber is null when the error check never ran; abort_reason and the keys
/// are null as appropriate.
nlohmann::ordered_json summary_json(const protocol::Transcript& transcript);

/// One line per event, then the summary line.
std::string transcript_jsonl(const protocol::Transcript& transcript);

}  // namespace sqkd::io
