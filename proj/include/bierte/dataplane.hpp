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

#ifndef BIERTE_DATAPLANE_HPP
#define BIERTE_DATAPLANE_HPP

#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "bierte/packet.hpp"
#include "bierte/tables.hpp"

namespace bierte {

/// Port and node liveness as observed locally by adjacent nodes. A down node
/// makes every incident port down.
struct PortState {
  void set_link(const NodeId& a, const NodeId& b, bool up);
  void set_node(const NodeId& n, bool up);
  bool node_up(const NodeId& n) const;
  bool link_up(const NodeId& a, const NodeId& b) const;

  std::set<std::pair<NodeId, NodeId>> down_links;  // canonical lexicographic pairs
  std::set<NodeId> down_nodes;
};

enum class Chain { Ip, Mpls, Bierte, Btaft, Sbtaft, Mept };

const char* chain_name(Chain c);

struct TraceRecord {
  NodeId node;
  Chain chain = Chain::Bierte;
  std::string action;
  std::string key;  // matched bit, label, group or combination; "-" if none
  std::optional<BitString> bs_before;
  std::optional<BitString> bs_after;

  /// `node chain action key bs_before bs_after`, '-' for absent fields.
  std::string to_line() const;
};

enum class EmitKind { Link, Routed, Tunnel };

struct Emission {
  EmitKind kind = EmitKind::Link;
  NodeId to;
  int si = -1;       // Link/Routed: SI of the traversed adjacency
  unsigned bit = 0;  // Link/Routed: traversed adjacency bit
  Packet pkt;
};

struct Delivery {
  NodeId node;
  std::string group;
  unsigned payload_len = 0;
};

struct HopOutput {
  std::vector<Emission> emissions;
  std::vector<Delivery> deliveries;
  unsigned recircs = 0;
  std::vector<TraceRecord> trace;

  void merge(HopOutput&& other);
};

/// One full processing pass of a packet at an up node: dispatch to the MPLS,
/// BIER-TE or IP chain based on the outermost header.
HopOutput process(const TableSet& tables, const PortState& ports, const NodeId& node,
                  const Packet& pkt);

HopOutput ip_chain(const TableSet& tables, const PortState& ports, const NodeId& node,
                   const Packet& pkt);
HopOutput mpls_chain(const TableSet& tables, const PortState& ports, const NodeId& node,
                     const Packet& pkt);
HopOutput bierte_chain(const TableSet& tables, const PortState& ports, const NodeId& node,
                       const Packet& pkt);
/// FRR rewrite for a copy whose egress port is down; the copy's BS must
/// already have the local adjacency bits masked out.
HopOutput btaft_apply(const TableSet& tables, const PortState& ports, const NodeId& node,
                      const Packet& pkt, unsigned failed_bit);
/// One-shot node protection at a backup ingress; returns the rewritten packet
/// and appends the trace record to `out`. Identity when no protected bits are
/// present in the BS.
Packet sbtaft_apply(const TableSet& tables, const NodeId& backup_node, const Packet& pkt,
                    const NodeId& protected_ingress, HopOutput& out);

}  // namespace bierte

#endif  // BIERTE_DATAPLANE_HPP
