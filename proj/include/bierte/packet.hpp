/*
 * Copyright 2026 the biertesim authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 * http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#ifndef BIERTE_PACKET_HPP
#define BIERTE_PACKET_HPP

#include <cstdint>
#include <optional>
#include <string>

#include "bierte/bitstring.hpp"

namespace bierte {

enum class PayloadProto { Ipmc, MplsContinuation };

struct BierTeHeader {
  int si = 0;
  BitString bs;
  PayloadProto proto = PayloadProto::Ipmc;
};

/// Single transport label; the prototype does not support label stacks.
struct MplsHeader {
  std::uint32_t label = 0;
};

/// In-memory simulator packet. Header layering when both are present is MPLS
/// outermost, then BIER-TE, then the IPMC payload.
struct Packet {
  std::string group;
  unsigned payload_len = 0;
  std::optional<MplsHeader> mpls;
  std::optional<BierTeHeader> bierte;
  std::uint64_t trace_id = 0;
  unsigned recirc_count = 0;
};

}  // namespace bierte

#endif  // BIERTE_PACKET_HPP
