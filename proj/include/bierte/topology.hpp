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

#ifndef BIERTE_TOPOLOGY_HPP
#define BIERTE_TOPOLOGY_HPP

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "bierte/bitstring.hpp"
#include "bierte/errors.hpp"

namespace bierte {

using NodeId = std::string;

enum class Role : unsigned {
  Bfir = 1u << 0,
  SBfir = 1u << 1,
  Bfr = 1u << 2,
  Bfer = 1u << 3,
};

struct RoleSet {
  unsigned mask = 0;

  bool has(Role r) const { return mask & static_cast<unsigned>(r); }
  void add(Role r) { mask |= static_cast<unsigned>(r); }
  bool empty() const { return mask == 0; }

  std::string to_string() const;
  static RoleSet parse(std::string_view csv);  // throws ConfigError on unknown role
};

enum class AdjKind { Connected, Routed, LocalDecap };

/// One directed adjacency owning one bit position within its SI. Decap
/// adjacencies have from == to and mark a BFER's own bit.
struct Adjacency {
  NodeId from;
  NodeId to;
  int si = 0;
  unsigned bit = 0;
  AdjKind kind = AdjKind::Connected;
  std::vector<NodeId> path;  // routed only: full underlay path, front()==from, back()==to
};

struct Subset {
  int si = 0;
  std::vector<NodeId> ingresses;          // first entry is the primary
  std::map<NodeId, NodeId> protection;    // primary ingress -> backup ingress
};

struct TunnelBackup {
  std::uint32_t label = 0;
  std::vector<NodeId> hops;  // front() == penultimate primary hop (the PLR)
  NodeId ingress;            // backup S-BFIR, == hops.back()
};

struct Tunnel {
  NodeId from;  // BFIR
  NodeId to;    // S-BFIR
  std::uint32_t label = 0;
  std::vector<NodeId> hops;  // front() == from, back() == to
  std::optional<TunnelBackup> backup;
};

struct GroupSpec {
  std::string name;
  std::vector<NodeId> bfers;
  /// Optional operator-configured distribution tree per SI (link bits only;
  /// decap bits of the group's BFERs are implied).
  std::map<int, std::vector<unsigned>> tree_bits;
};

/// Immutable model of one BIER-TE domain as declared by the topology file.
/// All cross-references are resolved and validated at load time; afterwards
/// the object is safe for shared concurrent reads.
class Topology {
 public:
  static Topology load(const std::string& text);
  static Topology load_file(const std::string& path);

  unsigned bsl() const { return bsl_; }
  const std::map<NodeId, RoleSet>& nodes() const { return nodes_; }
  const std::vector<Adjacency>& adjacencies() const { return adjacencies_; }
  const std::vector<Subset>& subsets() const { return subsets_; }
  const std::vector<Tunnel>& tunnels() const { return tunnels_; }
  const std::map<std::string, GroupSpec>& groups() const { return groups_; }
  /// Undirected physical edges (canonical lexicographic order). Routed
  /// adjacencies never contribute here.
  const std::set<std::pair<NodeId, NodeId>>& underlay() const { return underlay_; }

  bool has_node(const NodeId& id) const { return nodes_.count(id) != 0; }
  RoleSet roles(const NodeId& id) const;
  bool underlay_edge(const NodeId& a, const NodeId& b) const;
  std::vector<NodeId> underlay_neighbors(const NodeId& n) const;

  /// Bits owned by `node` in `si`: outgoing link adjacencies plus its own
  /// decap bits. Unknown SI or node yields all-zeros.
  BitString adjacent_bits(const NodeId& node, int si) const;
  /// All member bits of an SI (links and decaps).
  BitString member_bits(int si) const;
  const Adjacency* adjacency_for_bit(int si, unsigned bit) const;
  std::vector<const Adjacency*> adjacencies_from(const NodeId& node, int si) const;
  std::vector<int> subset_ids() const;
  const Subset* subset(int si) const;
  const Tunnel* tunnel_between(const NodeId& from, const NodeId& to) const;
  /// SIs in which `node` has a decap bit, ascending.
  std::vector<int> decap_sis(const NodeId& node) const;

  /// Re-serialize to the topology file format (stable ordering).
  std::string to_text() const;

  /// Copy with additional routed adjacencies appended to an SI; bits are
  /// assigned from the lowest free positions. Used by the subset repair pass.
  Topology with_routed_links(int si,
                             const std::vector<std::pair<std::pair<NodeId, NodeId>,
                                                         std::vector<NodeId>>>& links) const;

 private:
  friend class TopologyParser;

  void finalize();  // builds indexes, validates invariants

  unsigned bsl_ = 256;
  std::map<NodeId, RoleSet> nodes_;
  std::vector<Adjacency> adjacencies_;
  std::vector<Subset> subsets_;
  std::vector<Tunnel> tunnels_;
  std::map<std::string, GroupSpec> groups_;
  std::set<std::pair<NodeId, NodeId>> underlay_;

  std::map<std::pair<int, unsigned>, std::size_t> by_bit_;  // (si, bit) -> adjacency index
};

}  // namespace bierte

#endif  // BIERTE_TOPOLOGY_HPP
