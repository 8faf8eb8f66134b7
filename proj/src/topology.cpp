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

#include "bierte/topology.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

namespace bierte {

namespace {

std::vector<std::string> split_ws(const std::string& line) {
  std::vector<std::string> out;
  std::istringstream is(line);
  std::string tok;
  while (is >> tok) out.push_back(tok);
  return out;
}

std::vector<std::string> split_on(std::string_view text, char sep) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (start <= text.size()) {
    std::size_t end = text.find(sep, start);
    if (end == std::string_view::npos) {
      out.emplace_back(text.substr(start));
      break;
    }
    out.emplace_back(text.substr(start, end - start));
    start = end + 1;
  }
  return out;
}

long parse_long(const std::string& tok, int line, const char* what) {
  try {
    std::size_t used = 0;
    long v = std::stol(tok, &used);
    if (used != tok.size()) throw std::invalid_argument(tok);
    return v;
  } catch (const std::exception&) {
    throw ConfigError(line, std::string("expected integer ") + what + ", got '" + tok + "'");
  }
}

std::pair<NodeId, NodeId> canon(const NodeId& a, const NodeId& b) {
  return a < b ? std::make_pair(a, b) : std::make_pair(b, a);
}

}  // namespace

std::string RoleSet::to_string() const {
  std::string out;
  auto append = [&](Role r, const char* name) {
    if (has(r)) {
      if (!out.empty()) out += ',';
      out += name;
    }
  };
  append(Role::Bfir, "bfir");
  append(Role::SBfir, "sbfir");
  append(Role::Bfr, "bfr");
  append(Role::Bfer, "bfer");
  return out;
}

RoleSet RoleSet::parse(std::string_view csv) {
  RoleSet roles;
  for (const auto& part : split_on(csv, ',')) {
    if (part == "bfir") {
      roles.add(Role::Bfir);
    } else if (part == "sbfir") {
      roles.add(Role::SBfir);
    } else if (part == "bfr") {
      roles.add(Role::Bfr);
    } else if (part == "bfer") {
      roles.add(Role::Bfer);
    } else {
      throw ConfigError("unknown role '" + std::string(part) + "'");
    }
  }
  if (roles.empty()) throw ConfigError("node needs at least one role");
  return roles;
}

// ---------------------------------------------------------------------------
// Parser
// ---------------------------------------------------------------------------

class TopologyParser {
 public:
  Topology parse(const std::string& text) {
    std::istringstream is(text);
    std::string line;
    int lineno = 0;
    while (std::getline(is, line)) {
      ++lineno;
      auto hash = line.find('#');
      if (hash != std::string::npos) line.erase(hash);
      auto toks = split_ws(line);
      if (toks.empty()) continue;
      parse_statement(lineno, toks);
    }
    assign_auto_bits();
    check_lines();
    topo_.finalize();
    return std::move(topo_);
  }

 private:
  struct AdjLine {
    std::size_t index;
    int line;
  };

  void parse_statement(int line, const std::vector<std::string>& toks) {
    const std::string& kw = toks[0];
    if (kw == "bsl") {
      need(line, toks, 2);
      long v = parse_long(toks[1], line, "bsl");
      if (v < 8 || v > 256) throw ConfigError(line, "bsl must be in [8, 256]");
      topo_.bsl_ = static_cast<unsigned>(v);
    } else if (kw == "node") {
      need(line, toks, 4);
      if (toks[2] != "roles") throw ConfigError(line, "expected 'roles'");
      if (topo_.nodes_.count(toks[1])) throw ConfigError(line, "duplicate node " + toks[1]);
      try {
        topo_.nodes_[toks[1]] = RoleSet::parse(toks[3]);
      } catch (const ConfigError& e) {
        throw ConfigError(line, e.what());
      }
    } else if (kw == "link" || kw == "routed") {
      parse_adjacency(line, toks, kw == "routed");
    } else if (kw == "decap") {
      need(line, toks, 6);
      expect(line, toks[2], "si");
      expect(line, toks[4], "bit");
      Adjacency adj;
      adj.from = adj.to = toks[1];
      adj.si = static_cast<int>(parse_long(toks[3], line, "si"));
      adj.kind = AdjKind::LocalDecap;
      push_adjacency(line, adj, toks[5]);
    } else if (kw == "underlay") {
      need(line, toks, 3);
      if (toks[1] == toks[2]) throw ConfigError(line, "underlay self-loop");
      topo_.underlay_.insert(canon(toks[1], toks[2]));
      underlay_lines_.emplace_back(canon(toks[1], toks[2]), line);
    } else if (kw == "subset") {
      parse_subset(line, toks);
    } else if (kw == "tunnel") {
      parse_tunnel(line, toks);
    } else if (kw == "group") {
      need(line, toks, 4);
      expect(line, toks[2], "bfers");
      if (topo_.groups_.count(toks[1])) throw ConfigError(line, "duplicate group " + toks[1]);
      GroupSpec g;
      g.name = toks[1];
      g.bfers.assign(toks.begin() + 3, toks.end());
      topo_.groups_[g.name] = g;
      group_lines_[g.name] = line;
    } else if (kw == "tree") {
      need(line, toks, 6);
      expect(line, toks[2], "si");
      expect(line, toks[4], "bits");
      auto it = topo_.groups_.find(toks[1]);
      if (it == topo_.groups_.end()) throw ConfigError(line, "tree for unknown group " + toks[1]);
      int si = static_cast<int>(parse_long(toks[3], line, "si"));
      std::vector<unsigned> bits;
      for (std::size_t i = 5; i < toks.size(); ++i) {
        bits.push_back(static_cast<unsigned>(parse_long(toks[i], line, "bit")));
      }
      it->second.tree_bits[si] = bits;
      tree_lines_.emplace_back(std::make_pair(toks[1], si), line);
    } else {
      throw ConfigError(line, "unknown keyword '" + kw + "'");
    }
  }

  void parse_adjacency(int line, const std::vector<std::string>& toks, bool routed) {
    need(line, toks, 7);
    expect(line, toks[3], "si");
    expect(line, toks[5], "bit");
    Adjacency adj;
    adj.from = toks[1];
    adj.to = toks[2];
    adj.si = static_cast<int>(parse_long(toks[4], line, "si"));
    adj.kind = routed ? AdjKind::Routed : AdjKind::Connected;
    if (adj.from == adj.to) throw ConfigError(line, "adjacency self-loop " + adj.from);
    if (routed) {
      if (toks.size() < 9 || toks[7] != "path") {
        throw ConfigError(line, "routed adjacency needs 'path n1 n2 ...'");
      }
      adj.path.assign(toks.begin() + 8, toks.end());
      if (adj.path.size() < 2 || adj.path.front() != adj.from || adj.path.back() != adj.to) {
        throw ConfigError(line, "routed path must run from " + adj.from + " to " + adj.to);
      }
    }
    push_adjacency(line, adj, toks[6]);
  }

  void push_adjacency(int line, Adjacency adj, const std::string& bit_tok) {
    if (bit_tok == "auto") {
      adj.bit = 0;  // resolved by assign_auto_bits
    } else {
      adj.bit = static_cast<unsigned>(parse_long(bit_tok, line, "bit"));
      if (adj.bit < 1) throw ConfigError(line, "bit positions are 1-based");
    }
    topo_.adjacencies_.push_back(std::move(adj));
    adj_lines_.push_back({topo_.adjacencies_.size() - 1, line});
  }

  void parse_subset(int line, const std::vector<std::string>& toks) {
    need(line, toks, 4);
    Subset s;
    s.si = static_cast<int>(parse_long(toks[1], line, "si"));
    expect(line, toks[2], "ingresses");
    std::size_t i = 3;
    while (i < toks.size() && toks[i] != "protect") s.ingresses.push_back(toks[i++]);
    if (i < toks.size()) {
      ++i;  // skip 'protect'
      for (; i < toks.size(); ++i) {
        auto parts = split_on(toks[i], ':');
        if (parts.size() != 2 || parts[0].empty() || parts[1].empty()) {
          throw ConfigError(line, "protect entries are primary:backup pairs");
        }
        s.protection[parts[0]] = parts[1];
      }
    }
    if (s.ingresses.empty()) throw ConfigError(line, "subset needs at least one ingress");
    for (const auto& existing : topo_.subsets_) {
      if (existing.si == s.si) throw ConfigError(line, "duplicate subset " + std::to_string(s.si));
    }
    topo_.subsets_.push_back(std::move(s));
    subset_lines_.emplace_back(topo_.subsets_.size() - 1, line);
  }

  void parse_tunnel(int line, const std::vector<std::string>& toks) {
    need(line, toks, 7);
    Tunnel t;
    t.from = toks[1];
    t.to = toks[2];
    expect(line, toks[3], "label");
    t.label = parse_label(line, toks[4]);
    expect(line, toks[5], "hops");
    std::size_t i = 6;
    while (i < toks.size() && toks[i] != "backup") t.hops.push_back(toks[i++]);
    if (i < toks.size()) {
      ++i;  // skip 'backup'
      if (i + 1 >= toks.size()) throw ConfigError(line, "backup needs 'LABEL hops n1 ...'");
      TunnelBackup b;
      b.label = parse_label(line, toks[i++]);
      expect(line, toks[i++], "hops");
      while (i < toks.size()) b.hops.push_back(toks[i++]);
      if (b.hops.size() < 2) throw ConfigError(line, "backup path needs at least two hops");
      b.ingress = b.hops.back();
      t.backup = std::move(b);
    }
    if (t.hops.empty()) throw ConfigError(line, "tunnel needs at least one hop");
    topo_.tunnels_.push_back(std::move(t));
    tunnel_lines_.emplace_back(topo_.tunnels_.size() - 1, line);
  }

  std::uint32_t parse_label(int line, const std::string& tok) {
    long v = parse_long(tok, line, "label");
    if (v < 1 || v > 0xFFFFF) throw ConfigError(line, "MPLS label must be in [1, 2^20)");
    return static_cast<std::uint32_t>(v);
  }

  void assign_auto_bits() {
    std::map<int, std::set<unsigned>> used;
    for (const auto& adj : topo_.adjacencies_) {
      if (adj.bit != 0) used[adj.si].insert(adj.bit);
    }
    std::vector<std::size_t> autos;
    for (std::size_t i = 0; i < topo_.adjacencies_.size(); ++i) {
      if (topo_.adjacencies_[i].bit == 0) autos.push_back(i);
    }
    std::sort(autos.begin(), autos.end(), [&](std::size_t a, std::size_t b) {
      const auto& x = topo_.adjacencies_[a];
      const auto& y = topo_.adjacencies_[b];
      return std::tie(x.si, x.from, x.to) < std::tie(y.si, y.from, y.to);
    });
    for (std::size_t i : autos) {
      auto& adj = topo_.adjacencies_[i];
      unsigned bit = 1;
      while (used[adj.si].count(bit)) ++bit;
      adj.bit = bit;
      used[adj.si].insert(bit);
    }
  }

  // Location-bearing checks for the errors the loader is contractually
  // required to pinpoint: dangling node references, duplicate bit positions
  // and bits outside the BitString length. finalize() re-checks everything
  // structurally as a backstop for programmatic construction.
  void check_lines() const {
    auto node_ok = [&](const NodeId& id) { return topo_.nodes_.count(id) != 0; };
    std::map<std::pair<int, unsigned>, int> first_line;
    for (const auto& [index, line] : adj_lines_) {
      const Adjacency& adj = topo_.adjacencies_[index];
      if (!node_ok(adj.from)) throw ConfigError(line, "unknown node " + adj.from);
      if (!node_ok(adj.to)) throw ConfigError(line, "unknown node " + adj.to);
      for (const auto& hop : adj.path) {
        if (!node_ok(hop)) throw ConfigError(line, "unknown node " + hop + " in routed path");
      }
      if (adj.bit > topo_.bsl_) {
        throw ConfigError(line, "bit " + std::to_string(adj.bit) + " outside bsl " +
                                    std::to_string(topo_.bsl_) +
                                    ": subset members are limited to the BitString length");
      }
      auto key = std::make_pair(adj.si, adj.bit);
      auto [it, fresh] = first_line.insert({key, line});
      if (!fresh) {
        throw ConfigError(line, "bit " + std::to_string(adj.bit) + " in si " +
                                    std::to_string(adj.si) + " already assigned at line " +
                                    std::to_string(it->second));
      }
    }
    for (const auto& [index, line] : subset_lines_) {
      for (const auto& ing : topo_.subsets_[index].ingresses) {
        if (!node_ok(ing)) throw ConfigError(line, "unknown node " + ing);
      }
    }
    for (const auto& [index, line] : tunnel_lines_) {
      const Tunnel& t = topo_.tunnels_[index];
      for (const auto& hop : t.hops) {
        if (!node_ok(hop)) throw ConfigError(line, "unknown node " + hop);
      }
      if (t.backup) {
        for (const auto& hop : t.backup->hops) {
          if (!node_ok(hop)) throw ConfigError(line, "unknown node " + hop);
        }
      }
    }
    for (const auto& [edge, line] : underlay_lines_) {
      if (!node_ok(edge.first)) throw ConfigError(line, "unknown node " + edge.first);
      if (!node_ok(edge.second)) throw ConfigError(line, "unknown node " + edge.second);
    }
    for (const auto& [name, g] : topo_.groups_) {
      int line = group_lines_.count(name) ? group_lines_.at(name) : 0;
      for (const auto& bfer : g.bfers) {
        if (!node_ok(bfer)) throw ConfigError(line, "unknown node " + bfer);
      }
    }
    for (const auto& [key, line] : tree_lines_) {
      const auto& bits = topo_.groups_.at(key.first).tree_bits.at(key.second);
      for (unsigned bit : bits) {
        bool is_link = false;
        for (const auto& adj : topo_.adjacencies_) {
          if (adj.si == key.second && adj.bit == bit && adj.kind != AdjKind::LocalDecap) {
            is_link = true;
          }
        }
        if (!is_link) {
          throw ConfigError(line, "tree bit " + std::to_string(bit) +
                                      " is not a link bit of si " + std::to_string(key.second));
        }
      }
    }
  }

  void need(int line, const std::vector<std::string>& toks, std::size_t n) const {
    if (toks.size() < n) {
      throw ConfigError(line, "statement '" + toks[0] + "' is missing fields");
    }
  }

  void expect(int line, const std::string& got, const char* want) const {
    if (got != want) {
      throw ConfigError(line, std::string("expected '") + want + "', got '" + got + "'");
    }
  }

  Topology topo_;
  std::vector<AdjLine> adj_lines_;
  std::vector<std::pair<std::size_t, int>> subset_lines_;
  std::vector<std::pair<std::size_t, int>> tunnel_lines_;
  std::vector<std::pair<std::pair<NodeId, NodeId>, int>> underlay_lines_;
  std::map<std::string, int> group_lines_;
  std::vector<std::pair<std::pair<std::string, int>, int>> tree_lines_;
};

Topology Topology::load(const std::string& text) {
  TopologyParser parser;
  return parser.parse(text);
}

Topology Topology::load_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open topology file " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  try {
    return load(buf.str());
  } catch (const ConfigError& e) {
    throw ConfigError(path + ": " + e.what());
  }
}

// ---------------------------------------------------------------------------
// Validation and indexes
// ---------------------------------------------------------------------------

void Topology::finalize() {
  auto require_node = [&](const NodeId& id, const std::string& where) {
    if (!nodes_.count(id)) throw ConfigError("unknown node " + id + " in " + where);
  };

  by_bit_.clear();
  for (std::size_t i = 0; i < adjacencies_.size(); ++i) {
    const auto& adj = adjacencies_[i];
    require_node(adj.from, "adjacency");
    require_node(adj.to, "adjacency");
    if (adj.bit < 1 || adj.bit > bsl_) {
      throw ConfigError("bit " + std::to_string(adj.bit) + " in si " + std::to_string(adj.si) +
                        " outside bsl " + std::to_string(bsl_) +
                        ": subset member count is limited to the BitString length");
    }
    auto key = std::make_pair(adj.si, adj.bit);
    if (by_bit_.count(key)) {
      throw ConfigError("duplicate bit " + std::to_string(adj.bit) + " in si " +
                        std::to_string(adj.si));
    }
    by_bit_[key] = i;
    if (adj.kind == AdjKind::LocalDecap) {
      if (!nodes_.at(adj.from).has(Role::Bfer)) {
        throw ConfigError("decap bit on " + adj.from + " which lacks the bfer role");
      }
    }
  }
  // one decap per (node, si)
  {
    std::set<std::pair<NodeId, int>> seen;
    for (const auto& adj : adjacencies_) {
      if (adj.kind != AdjKind::LocalDecap) continue;
      if (!seen.insert({adj.from, adj.si}).second) {
        throw ConfigError("node " + adj.from + " has two decap bits in si " +
                          std::to_string(adj.si));
      }
    }
  }

  // Physical graph: connected adjacencies imply underlay edges.
  for (const auto& e : underlay_) {
    require_node(e.first, "underlay edge");
    require_node(e.second, "underlay edge");
  }
  for (const auto& adj : adjacencies_) {
    if (adj.kind == AdjKind::Connected) underlay_.insert(canon(adj.from, adj.to));
  }

  std::sort(subsets_.begin(), subsets_.end(),
            [](const Subset& a, const Subset& b) { return a.si < b.si; });
  for (const auto& s : subsets_) {
    for (const auto& ing : s.ingresses) {
      require_node(ing, "subset " + std::to_string(s.si));
      RoleSet r = nodes_.at(ing);
      if (!r.has(Role::SBfir) && !r.has(Role::Bfir)) {
        throw ConfigError("subset ingress " + ing + " needs the sbfir or bfir role");
      }
    }
    for (const auto& [primary, backup] : s.protection) {
      auto in_list = [&](const NodeId& n) {
        return std::find(s.ingresses.begin(), s.ingresses.end(), n) != s.ingresses.end();
      };
      if (!in_list(primary) || !in_list(backup)) {
        throw ConfigError("protection pair " + primary + ":" + backup +
                          " references nodes outside the ingress list of si " +
                          std::to_string(s.si));
      }
      if (primary == backup) {
        throw ConfigError("subset " + std::to_string(s.si) + " protects " + primary +
                          " with itself");
      }
    }
    if (!s.protection.empty() && s.ingresses.size() < 2) {
      throw ConfigError("subset " + std::to_string(s.si) +
                        " enables ingress protection but has fewer than two ingresses");
    }
  }

  // Routed adjacencies: declared underlay realization, and no transit through
  // a foreign subset's ingress.
  for (const auto& adj : adjacencies_) {
    if (adj.kind != AdjKind::Routed) continue;
    for (const auto& hop : adj.path) require_node(hop, "routed path");
    for (std::size_t i = 0; i + 1 < adj.path.size(); ++i) {
      if (!underlay_edge(adj.path[i], adj.path[i + 1])) {
        throw ConfigError("routed path hop " + adj.path[i] + "-" + adj.path[i + 1] +
                          " is not an underlay edge");
      }
    }
    for (std::size_t i = 1; i + 1 < adj.path.size(); ++i) {
      const NodeId& hop = adj.path[i];
      for (const auto& s : subsets_) {
        if (s.si == adj.si) continue;
        if (std::find(s.ingresses.begin(), s.ingresses.end(), hop) != s.ingresses.end()) {
          throw ConfigError("routed path in si " + std::to_string(adj.si) + " transits " + hop +
                            ", an ingress of si " + std::to_string(s.si));
        }
      }
    }
  }

  // Tunnels.
  std::set<std::uint32_t> labels;
  for (const auto& t : tunnels_) {
    require_node(t.from, "tunnel");
    require_node(t.to, "tunnel");
    if (!nodes_.at(t.from).has(Role::Bfir)) {
      throw ConfigError("tunnel source " + t.from + " needs the bfir role");
    }
    if (!nodes_.at(t.to).has(Role::SBfir) && !nodes_.at(t.to).has(Role::Bfir)) {
      throw ConfigError("tunnel endpoint " + t.to + " needs the sbfir role");
    }
    if (t.hops.front() != t.from || t.hops.back() != t.to) {
      throw ConfigError("tunnel hops must run from " + t.from + " to " + t.to);
    }
    for (const auto& hop : t.hops) require_node(hop, "tunnel hops");
    for (std::size_t i = 0; i + 1 < t.hops.size(); ++i) {
      if (!underlay_edge(t.hops[i], t.hops[i + 1])) {
        throw ConfigError("tunnel hop " + t.hops[i] + "-" + t.hops[i + 1] +
                          " is not an underlay edge");
      }
    }
    if (!labels.insert(t.label).second) {
      throw ConfigError("label " + std::to_string(t.label) + " is not unique");
    }
    if (t.backup) {
      const auto& b = *t.backup;
      if (!labels.insert(b.label).second) {
        throw ConfigError("label " + std::to_string(b.label) + " is not unique");
      }
      for (const auto& hop : b.hops) require_node(hop, "tunnel backup hops");
      const NodeId& plr = t.hops.size() >= 2 ? t.hops[t.hops.size() - 2] : t.from;
      if (b.hops.front() != plr) {
        throw ConfigError("backup path of label " + std::to_string(t.label) +
                          " must start at the penultimate hop " + plr);
      }
      for (std::size_t i = 0; i + 1 < b.hops.size(); ++i) {
        if (!underlay_edge(b.hops[i], b.hops[i + 1])) {
          throw ConfigError("backup hop " + b.hops[i] + "-" + b.hops[i + 1] +
                            " is not an underlay edge");
        }
      }
      if (std::find(b.hops.begin(), b.hops.end(), t.to) != b.hops.end()) {
        throw ConfigError("backup path of label " + std::to_string(t.label) +
                          " must avoid the protected ingress " + t.to);
      }
      // The backup ingress must be designated by some subset's protection map.
      bool designated = false;
      for (const auto& s : subsets_) {
        auto it = s.protection.find(t.to);
        if (it != s.protection.end() && it->second == b.ingress) designated = true;
      }
      if (!designated) {
        throw ConfigError("backup ingress " + b.ingress + " for " + t.to +
                          " is not designated by any subset protection map");
      }
    }
  }

  // Groups.
  for (const auto& [name, g] : groups_) {
    for (const auto& bfer : g.bfers) {
      require_node(bfer, "group " + name);
      if (!nodes_.at(bfer).has(Role::Bfer)) {
        throw ConfigError("group " + name + " member " + bfer + " lacks the bfer role");
      }
    }
    for (const auto& [si, bits] : g.tree_bits) {
      for (unsigned bit : bits) {
        const Adjacency* adj = adjacency_for_bit(si, bit);
        if (adj == nullptr || adj->kind == AdjKind::LocalDecap) {
          throw ConfigError("tree for group " + name + " uses bit " + std::to_string(bit) +
                            " which is not a link bit of si " + std::to_string(si));
        }
      }
    }
  }
}

// ---------------------------------------------------------------------------
// Accessors
// ---------------------------------------------------------------------------

RoleSet Topology::roles(const NodeId& id) const {
  auto it = nodes_.find(id);
  return it == nodes_.end() ? RoleSet{} : it->second;
}

bool Topology::underlay_edge(const NodeId& a, const NodeId& b) const {
  return underlay_.count(canon(a, b)) != 0;
}

std::vector<NodeId> Topology::underlay_neighbors(const NodeId& n) const {
  std::vector<NodeId> out;
  for (const auto& e : underlay_) {
    if (e.first == n) out.push_back(e.second);
    if (e.second == n) out.push_back(e.first);
  }
  std::sort(out.begin(), out.end());
  return out;
}

BitString Topology::adjacent_bits(const NodeId& node, int si) const {
  BitString bits(bsl_);
  for (const auto& adj : adjacencies_) {
    if (adj.si == si && adj.from == node) bits.set(adj.bit);
  }
  return bits;
}

BitString Topology::member_bits(int si) const {
  BitString bits(bsl_);
  for (const auto& adj : adjacencies_) {
    if (adj.si == si) bits.set(adj.bit);
  }
  return bits;
}

const Adjacency* Topology::adjacency_for_bit(int si, unsigned bit) const {
  auto it = by_bit_.find({si, bit});
  return it == by_bit_.end() ? nullptr : &adjacencies_[it->second];
}

std::vector<const Adjacency*> Topology::adjacencies_from(const NodeId& node, int si) const {
  std::vector<const Adjacency*> out;
  for (const auto& adj : adjacencies_) {
    if (adj.si == si && adj.from == node) out.push_back(&adj);
  }
  std::sort(out.begin(), out.end(),
            [](const Adjacency* a, const Adjacency* b) { return a->bit < b->bit; });
  return out;
}

std::vector<int> Topology::subset_ids() const {
  std::set<int> sis;
  for (const auto& adj : adjacencies_) sis.insert(adj.si);
  for (const auto& s : subsets_) sis.insert(s.si);
  return {sis.begin(), sis.end()};
}

const Subset* Topology::subset(int si) const {
  for (const auto& s : subsets_) {
    if (s.si == si) return &s;
  }
  return nullptr;
}

const Tunnel* Topology::tunnel_between(const NodeId& from, const NodeId& to) const {
  for (const auto& t : tunnels_) {
    if (t.from == from && t.to == to) return &t;
  }
  return nullptr;
}

std::vector<int> Topology::decap_sis(const NodeId& node) const {
  std::vector<int> out;
  for (const auto& adj : adjacencies_) {
    if (adj.kind == AdjKind::LocalDecap && adj.from == node) out.push_back(adj.si);
  }
  std::sort(out.begin(), out.end());
  return out;
}

// ---------------------------------------------------------------------------
// Serialization
// ---------------------------------------------------------------------------

std::string Topology::to_text() const {
  std::ostringstream os;
  os << "bsl " << bsl_ << "\n\n";
  for (const auto& [id, roles] : nodes_) {
    os << "node " << id << " roles " << roles.to_string() << "\n";
  }
  os << "\n";
  std::vector<const Adjacency*> sorted;
  for (const auto& adj : adjacencies_) sorted.push_back(&adj);
  std::sort(sorted.begin(), sorted.end(), [](const Adjacency* a, const Adjacency* b) {
    return std::tie(a->si, a->bit) < std::tie(b->si, b->bit);
  });
  for (const Adjacency* adj : sorted) {
    switch (adj->kind) {
      case AdjKind::Connected:
        os << "link " << adj->from << " " << adj->to << " si " << adj->si << " bit " << adj->bit
           << "\n";
        break;
      case AdjKind::Routed:
        os << "routed " << adj->from << " " << adj->to << " si " << adj->si << " bit " << adj->bit
           << " path";
        for (const auto& hop : adj->path) os << " " << hop;
        os << "\n";
        break;
      case AdjKind::LocalDecap:
        os << "decap " << adj->from << " si " << adj->si << " bit " << adj->bit << "\n";
        break;
    }
  }
  // Underlay edges not implied by connected adjacencies.
  std::set<std::pair<NodeId, NodeId>> implied;
  for (const auto& adj : adjacencies_) {
    if (adj.kind == AdjKind::Connected) implied.insert(canon(adj.from, adj.to));
  }
  bool blank = false;
  for (const auto& e : underlay_) {
    if (implied.count(e)) continue;
    if (!blank) {
      os << "\n";
      blank = true;
    }
    os << "underlay " << e.first << " " << e.second << "\n";
  }
  if (!subsets_.empty()) os << "\n";
  for (const auto& s : subsets_) {
    os << "subset " << s.si << " ingresses";
    for (const auto& ing : s.ingresses) os << " " << ing;
    if (!s.protection.empty()) {
      os << " protect";
      for (const auto& [p, b] : s.protection) os << " " << p << ":" << b;
    }
    os << "\n";
  }
  if (!tunnels_.empty()) os << "\n";
  for (const auto& t : tunnels_) {
    os << "tunnel " << t.from << " " << t.to << " label " << t.label << " hops";
    for (const auto& hop : t.hops) os << " " << hop;
    if (t.backup) {
      os << " backup " << t.backup->label << " hops";
      for (const auto& hop : t.backup->hops) os << " " << hop;
    }
    os << "\n";
  }
  if (!groups_.empty()) os << "\n";
  for (const auto& [name, g] : groups_) {
    os << "group " << name << " bfers";
    for (const auto& bfer : g.bfers) os << " " << bfer;
    os << "\n";
    for (const auto& [si, bits] : g.tree_bits) {
      os << "tree " << name << " si " << si << " bits";
      for (unsigned bit : bits) os << " " << bit;
      os << "\n";
    }
  }
  return os.str();
}

Topology Topology::with_routed_links(
    int si, const std::vector<std::pair<std::pair<NodeId, NodeId>, std::vector<NodeId>>>& links)
    const {
  Topology out = *this;
  std::set<unsigned> used;
  for (const auto& adj : out.adjacencies_) {
    if (adj.si == si) used.insert(adj.bit);
  }
  unsigned next = 1;
  for (const auto& [ends, path] : links) {
    while (used.count(next)) ++next;
    Adjacency adj;
    adj.from = ends.first;
    adj.to = ends.second;
    adj.si = si;
    adj.bit = next;
    adj.kind = AdjKind::Routed;
    adj.path = path;
    used.insert(next);
    out.adjacencies_.push_back(std::move(adj));
  }
  out.finalize();
  return out;
}

}  // namespace bierte
