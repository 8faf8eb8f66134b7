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

#ifndef BIERTE_TABLES_HPP
#define BIERTE_TABLES_HPP

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "bierte/bitstring.hpp"
#include "bierte/topology.hpp"

namespace bierte {

enum class BiftAction { Connected, Routed, Decap };

struct BiftEntry {
  int si = 0;
  unsigned key_bit = 0;
  BitString fbm;  // complement of the node's full adjacency bits in this SI
  BiftAction action = BiftAction::Connected;
  NodeId next_hop;            // connected / routed
  std::vector<NodeId> path;   // routed only
};

/// FRR rewrite masks for one protected adjacency. nnh_bit is set for node
/// protection entries (one per next-next hop of the failed node).
struct BtaftEntry {
  int si = 0;
  unsigned protected_bit = 0;
  std::optional<unsigned> nnh_bit;
  BitString reset;
  BitString add;
};

/// Precomputed one-shot node protection at a backup subset ingress, one entry
/// per non-empty combination of the protected ingress's adjacency bits.
struct SBtaftEntry {
  int si = 0;
  NodeId protected_ingress;
  BitString nnh_combination;
  BitString reset;
  BitString add;
};

struct MeptEntry {
  NodeId node;  // the PLR: penultimate hop of the protected tunnel
  std::uint32_t primary_label = 0;
  NodeId primary_next;
  std::uint32_t backup_label = 0;
  NodeId backup_next;
};

enum class MplsOp { Forward, PopToBierte, PopToSbtaft };

struct MplsEntry {
  MplsOp op = MplsOp::Forward;
  NodeId next_hop;            // Forward only
  NodeId protected_ingress;   // PopToSbtaft only
};

struct IpTarget {
  int si = 0;
  BitString bs_template;  // tree bits plus the target BFERs' decap bits
  NodeId ingress;         // the subset's primary ingress
  bool direct = false;    // ingress is the injecting BFIR itself
  std::uint32_t label = 0;
  NodeId first_hop;       // first tunnel hop after the BFIR
};

struct IpEncapEntry {
  std::string group;
  std::vector<IpTarget> targets;  // sorted by si
};

enum class FrrMode { None, Link, Node };

struct CompileOptions {
  FrrMode frr = FrrMode::None;
  unsigned sbtaft_cap = 10;  // max protected-ingress adjacency bits
};

/// Compiled per-node forwarding state. Immutable after compile_tables.
struct TableSet {
  unsigned bsl = 0;
  std::map<NodeId, std::vector<BiftEntry>> bift;
  std::map<NodeId, std::vector<BtaftEntry>> btaft;
  std::map<NodeId, std::vector<SBtaftEntry>> sbtaft;
  std::map<NodeId, std::vector<MeptEntry>> mept;
  std::map<NodeId, std::map<std::uint32_t, MplsEntry>> mpls;
  std::map<NodeId, std::vector<IpEncapEntry>> ip;  // keyed by BFIR

  BitString local_bits(const NodeId& node, int si) const;
  const BiftEntry* bift_entry(const NodeId& node, int si, unsigned bit) const;
  std::vector<const BtaftEntry*> btaft_for(const NodeId& node, int si, unsigned bit) const;
  const MeptEntry* mept_for(const NodeId& node, std::uint32_t label) const;
  const MplsEntry* mpls_entry(const NodeId& node, std::uint32_t label) const;
  const IpEncapEntry* ip_entry(const NodeId& node, const std::string& group) const;
  /// Union of the protected ingress's adjacency bits covered by S-BTAFT
  /// entries at `node` for this SI; all-zeros when none exist.
  BitString sbtaft_guard(const NodeId& node, const NodeId& protected_ingress, int si) const;
  const SBtaftEntry* sbtaft_lookup(const NodeId& node, const NodeId& protected_ingress, int si,
                                   const BitString& combination) const;

  /// Stable text dump used by goldens; byte-identical for identical input.
  std::string dump() const;
};

TableSet compile_tables(const Topology& t, const CompileOptions& opts = {});

std::vector<BiftEntry> build_bift(const Topology& t, const NodeId& node);
std::vector<BtaftEntry> build_btaft(const Topology& t, const NodeId& node, FrrMode mode);
std::vector<SBtaftEntry> build_sbtaft(const Topology& t, const NodeId& backup,
                                      const NodeId& protected_ingress, unsigned cap = 10);
std::vector<MeptEntry> build_mept(const Topology& t);
std::map<NodeId, std::map<std::uint32_t, MplsEntry>> build_mpls(const Topology& t);
std::map<NodeId, std::vector<IpEncapEntry>> build_ip(const Topology& t,
                                                     const std::map<std::string, GroupSpec>& groups);

}  // namespace bierte

#endif  // BIERTE_TABLES_HPP
