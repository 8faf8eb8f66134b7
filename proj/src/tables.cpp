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

#include "bierte/tables.hpp"

#include <algorithm>
#include <functional>
#include <set>
#include <sstream>

#include "bierte/errors.hpp"

namespace bierte {

namespace {

struct SiPath {
  std::vector<unsigned> bits;   // adjacency bits along the path, in order
  std::vector<NodeId> nodes;    // visited nodes including src and dst
};

// Deterministic shortest path over the directed link adjacencies of one SI:
// minimal hop count, ties broken by the lexicographically smallest bit
// sequence. edge_ok filters adjacencies, node_ok filters intermediate and
// destination nodes (src is always allowed).
std::optional<SiPath> shortest_si_path(
    const Topology& t, int si, const NodeId& src, const NodeId& dst,
    const std::function<bool(const Adjacency&)>& edge_ok,
    const std::function<bool(const NodeId&)>& node_ok) {
  if (src == dst) return SiPath{{}, {src}};

  struct Label {
    unsigned dist = ~0u;
    std::vector<unsigned> bits;
    std::vector<NodeId> nodes;
  };
  std::map<NodeId, Label> best;
  best[src] = Label{0, {}, {src}};

  auto better = [](const Label& a, const Label& b) {
    if (a.dist != b.dist) return a.dist < b.dist;
    return a.bits < b.bits;
  };

  // Label-correcting sweep; graphs here are small.
  bool changed = true;
  while (changed) {
    changed = false;
    for (const auto& adj : t.adjacencies()) {
      if (adj.si != si || adj.kind == AdjKind::LocalDecap) continue;
      if (!edge_ok(adj)) continue;
      auto from_it = best.find(adj.from);
      if (from_it == best.end()) continue;
      if (!node_ok(adj.to)) continue;
      Label cand = from_it->second;
      cand.dist += 1;
      cand.bits.push_back(adj.bit);
      cand.nodes.push_back(adj.to);
      auto [to_it, fresh] = best.emplace(adj.to, cand);
      if (!fresh && better(cand, to_it->second)) {
        to_it->second = std::move(cand);
        changed = true;
      } else if (fresh) {
        changed = true;
      }
    }
  }

  auto it = best.find(dst);
  if (it == best.end()) return std::nullopt;
  return SiPath{it->second.bits, it->second.nodes};
}

// Deterministic shortest-path tree from root over one SI's link adjacencies:
// per node the inbound adjacency with minimal (parent distance, bit).
std::map<NodeId, const Adjacency*> shortest_path_tree(const Topology& t, int si,
                                                      const NodeId& root) {
  std::map<NodeId, unsigned> dist;
  dist[root] = 0;
  bool changed = true;
  while (changed) {
    changed = false;
    for (const auto& adj : t.adjacencies()) {
      if (adj.si != si || adj.kind == AdjKind::LocalDecap) continue;
      auto it = dist.find(adj.from);
      if (it == dist.end()) continue;
      unsigned cand = it->second + 1;
      auto [to_it, fresh] = dist.emplace(adj.to, cand);
      if (!fresh && cand < to_it->second) {
        to_it->second = cand;
        changed = true;
      } else if (fresh) {
        changed = true;
      }
    }
  }
  std::map<NodeId, const Adjacency*> parent;
  for (const auto& adj : t.adjacencies()) {
    if (adj.si != si || adj.kind == AdjKind::LocalDecap) continue;
    if (!dist.count(adj.from) || !dist.count(adj.to)) continue;
    if (dist.at(adj.from) + 1 != dist.at(adj.to)) continue;
    auto [it, fresh] = parent.emplace(adj.to, &adj);
    if (!fresh) {
      const Adjacency* cur = it->second;
      if (std::tie(dist.at(adj.from), adj.bit) < std::tie(dist.at(cur->from), cur->bit)) {
        it->second = &adj;
      }
    }
  }
  return parent;
}

std::string adj_name(const Adjacency& adj) {
  return "bit " + std::to_string(adj.bit) + " (" + adj.from + "->" + adj.to + ") in si " +
         std::to_string(adj.si);
}

// Physical-link filter for link protection: the failed link is unusable in
// both directions.
bool avoids_link(const Adjacency& adj, const NodeId& a, const NodeId& b) {
  if (adj.kind != AdjKind::Connected) return true;
  return !((adj.from == a && adj.to == b) || (adj.from == b && adj.to == a));
}

}  // namespace

// ---------------------------------------------------------------------------
// BIFT
// ---------------------------------------------------------------------------

std::vector<BiftEntry> build_bift(const Topology& t, const NodeId& node) {
  std::vector<BiftEntry> out;
  for (int si : t.subset_ids()) {
    BitString local = t.adjacent_bits(node, si);
    if (local.none()) continue;
    BitString fbm = local.complement();
    for (const Adjacency* adj : t.adjacencies_from(node, si)) {
      BiftEntry e;
      e.si = si;
      e.key_bit = adj->bit;
      e.fbm = fbm;
      switch (adj->kind) {
        case AdjKind::Connected:
          e.action = BiftAction::Connected;
          e.next_hop = adj->to;
          break;
        case AdjKind::Routed:
          e.action = BiftAction::Routed;
          e.next_hop = adj->to;
          e.path = adj->path;
          break;
        case AdjKind::LocalDecap:
          e.action = BiftAction::Decap;
          break;
      }
      out.push_back(std::move(e));
    }
  }
  std::sort(out.begin(), out.end(), [](const BiftEntry& a, const BiftEntry& b) {
    return std::tie(a.si, a.key_bit) < std::tie(b.si, b.key_bit);
  });
  return out;
}

// ---------------------------------------------------------------------------
// BTAFT
// ---------------------------------------------------------------------------

std::vector<BtaftEntry> build_btaft(const Topology& t, const NodeId& node, FrrMode mode) {
  std::vector<BtaftEntry> out;
  if (mode == FrrMode::None) return out;
  for (int si : t.subset_ids()) {
    for (const Adjacency* adj : t.adjacencies_from(node, si)) {
      if (adj->kind != AdjKind::Connected) continue;  // only ports can be observed down
      const NodeId& next = adj->to;
      if (mode == FrrMode::Link) {
        auto path = shortest_si_path(
            t, si, node, next,
            [&](const Adjacency& a) { return avoids_link(a, node, next); },
            [](const NodeId&) { return true; });
        if (!path) {
          throw CompileError("no disjoint backup path for " + adj_name(*adj));
        }
        BtaftEntry e;
        e.si = si;
        e.protected_bit = adj->bit;
        e.reset = BitString::of(t.bsl(), {adj->bit});
        e.add = BitString::of(t.bsl(), path->bits);
        out.push_back(std::move(e));
      } else {
        for (const Adjacency* nnh : t.adjacencies_from(next, si)) {
          if (nnh->kind == AdjKind::LocalDecap) continue;
          auto path = shortest_si_path(
              t, si, node, nnh->to, [](const Adjacency&) { return true; },
              [&](const NodeId& n) { return n != next; });
          if (!path) {
            throw CompileError("no backup path around " + next + " for " + adj_name(*adj) +
                               " toward next-next hop " + nnh->to);
          }
          BtaftEntry e;
          e.si = si;
          e.protected_bit = adj->bit;
          e.nnh_bit = nnh->bit;
          e.reset = BitString::of(t.bsl(), {adj->bit, nnh->bit});
          e.add = BitString::of(t.bsl(), path->bits);
          out.push_back(std::move(e));
        }
      }
    }
  }
  std::sort(out.begin(), out.end(), [](const BtaftEntry& a, const BtaftEntry& b) {
    return std::tie(a.si, a.protected_bit, a.nnh_bit) <
           std::tie(b.si, b.protected_bit, b.nnh_bit);
  });
  return out;
}

// ---------------------------------------------------------------------------
// S-BTAFT
// ---------------------------------------------------------------------------

std::vector<SBtaftEntry> build_sbtaft(const Topology& t, const NodeId& backup,
                                      const NodeId& protected_ingress, unsigned cap) {
  std::vector<SBtaftEntry> out;
  for (const Subset& s : t.subsets()) {
    auto it = s.protection.find(protected_ingress);
    if (it == s.protection.end() || it->second != backup) continue;

    std::vector<const Adjacency*> links;
    for (const Adjacency* adj : t.adjacencies_from(protected_ingress, s.si)) {
      if (adj->kind != AdjKind::LocalDecap) links.push_back(adj);
    }
    if (links.size() > cap) {
      throw CompileError("ingress " + protected_ingress + " has " +
                         std::to_string(links.size()) + " adjacency bits in si " +
                         std::to_string(s.si) + ", above the combination cap " +
                         std::to_string(cap) + "; split the subset");
    }
    if (links.empty()) continue;

    // Singleton masks are node-protection rewrites computed from the backup
    // ingress's position; combinations aggregate them by OR.
    std::vector<BitString> resets, adds;
    for (const Adjacency* adj : links) {
      auto path = shortest_si_path(
          t, s.si, backup, adj->to, [](const Adjacency&) { return true; },
          [&](const NodeId& n) { return n != protected_ingress; });
      if (!path) {
        throw CompileError("no backup path from " + backup + " around " + protected_ingress +
                           " toward " + adj->to + " in si " + std::to_string(s.si));
      }
      resets.push_back(BitString::of(t.bsl(), {adj->bit}));
      adds.push_back(BitString::of(t.bsl(), path->bits));
    }

    unsigned k = static_cast<unsigned>(links.size());
    for (unsigned m = 1; m < (1u << k); ++m) {
      SBtaftEntry e;
      e.si = s.si;
      e.protected_ingress = protected_ingress;
      e.nnh_combination = BitString(t.bsl());
      e.reset = BitString(t.bsl());
      e.add = BitString(t.bsl());
      for (unsigned i = 0; i < k; ++i) {
        if (!(m & (1u << i))) continue;
        e.nnh_combination.set(links[i]->bit);
        e.reset = e.reset | resets[i];
        e.add = e.add | adds[i];
      }
      out.push_back(std::move(e));
    }
  }
  std::sort(out.begin(), out.end(), [](const SBtaftEntry& a, const SBtaftEntry& b) {
    if (a.si != b.si) return a.si < b.si;
    return a.nnh_combination.set_bits() < b.nnh_combination.set_bits();
  });
  return out;
}

// ---------------------------------------------------------------------------
// MEPT / MPLS / IP
// ---------------------------------------------------------------------------

std::vector<MeptEntry> build_mept(const Topology& t) {
  std::vector<MeptEntry> out;
  for (const Tunnel& tun : t.tunnels()) {
    if (!tun.backup) continue;
    MeptEntry e;
    e.node = tun.hops.size() >= 2 ? tun.hops[tun.hops.size() - 2] : tun.from;
    e.primary_label = tun.label;
    e.primary_next = tun.to;
    e.backup_label = tun.backup->label;
    e.backup_next = tun.backup->hops.size() >= 2 ? tun.backup->hops[1] : tun.backup->ingress;
    out.push_back(std::move(e));
  }
  std::sort(out.begin(), out.end(), [](const MeptEntry& a, const MeptEntry& b) {
    return std::tie(a.node, a.primary_label) < std::tie(b.node, b.primary_label);
  });
  return out;
}

std::map<NodeId, std::map<std::uint32_t, MplsEntry>> build_mpls(const Topology& t) {
  std::map<NodeId, std::map<std::uint32_t, MplsEntry>> out;
  for (const Tunnel& tun : t.tunnels()) {
    for (std::size_t i = 1; i < tun.hops.size(); ++i) {
      MplsEntry e;
      if (i + 1 == tun.hops.size()) {
        e.op = MplsOp::PopToBierte;
      } else {
        e.op = MplsOp::Forward;
        e.next_hop = tun.hops[i + 1];
      }
      out[tun.hops[i]][tun.label] = std::move(e);
    }
    if (!tun.backup) continue;
    const auto& hops = tun.backup->hops;
    for (std::size_t i = 1; i < hops.size(); ++i) {
      MplsEntry e;
      if (i + 1 == hops.size()) {
        e.op = MplsOp::PopToSbtaft;
        e.protected_ingress = tun.to;
      } else {
        e.op = MplsOp::Forward;
        e.next_hop = hops[i + 1];
      }
      out[hops[i]][tun.backup->label] = std::move(e);
    }
  }
  return out;
}

std::map<NodeId, std::vector<IpEncapEntry>> build_ip(
    const Topology& t, const std::map<std::string, GroupSpec>& groups) {
  std::map<NodeId, std::vector<IpEncapEntry>> out;
  for (const auto& [node, roles] : t.nodes()) {
    if (!roles.has(Role::Bfir)) continue;
    std::vector<IpEncapEntry> entries;
    for (const auto& [name, group] : groups) {
      // Split the BFER set by subset: lowest SI holding a decap bit wins.
      std::map<int, std::vector<NodeId>> by_si;
      for (const NodeId& bfer : group.bfers) {
        auto sis = t.decap_sis(bfer);
        if (sis.empty()) {
          throw CompileError("group " + name + " references " + bfer +
                             " which is in no subset");
        }
        by_si[sis.front()].push_back(bfer);
      }
      IpEncapEntry entry;
      entry.group = name;
      for (const auto& [si, bfers] : by_si) {
        const Subset* subset = t.subset(si);
        if (subset == nullptr || subset->ingresses.empty()) {
          throw CompileError("si " + std::to_string(si) + " used by group " + name +
                             " has no configured ingress");
        }
        IpTarget target;
        target.si = si;
        target.ingress = subset->ingresses.front();
        target.bs_template = BitString(t.bsl());

        auto tree_it = group.tree_bits.find(si);
        if (tree_it != group.tree_bits.end()) {
          for (unsigned bit : tree_it->second) target.bs_template.set(bit);
        } else {
          auto parents = shortest_path_tree(t, si, target.ingress);
          for (const NodeId& bfer : bfers) {
            NodeId cur = bfer;
            while (cur != target.ingress) {
              auto it = parents.find(cur);
              if (it == parents.end()) {
                throw CompileError("no path from ingress " + target.ingress + " to " + bfer +
                                   " inside si " + std::to_string(si));
              }
              target.bs_template.set(it->second->bit);
              cur = it->second->from;
            }
          }
        }
        for (const NodeId& bfer : bfers) {
          const Adjacency* decap = nullptr;
          for (const Adjacency* adj : t.adjacencies_from(bfer, si)) {
            if (adj->kind == AdjKind::LocalDecap) decap = adj;
          }
          if (decap == nullptr) {
            throw CompileError("BFER " + bfer + " has no decap bit in si " + std::to_string(si));
          }
          target.bs_template.set(decap->bit);
        }

        if (target.ingress == node) {
          target.direct = true;
        } else {
          const Tunnel* tun = t.tunnel_between(node, target.ingress);
          if (tun == nullptr) {
            throw CompileError("no tunnel from " + node + " to ingress " + target.ingress +
                               " for group " + name);
          }
          target.label = tun->label;
          target.first_hop = tun->hops.size() >= 2 ? tun->hops[1] : tun->to;
        }
        entry.targets.push_back(std::move(target));
      }
      entries.push_back(std::move(entry));
    }
    if (!entries.empty()) out[node] = std::move(entries);
  }
  return out;
}

// ---------------------------------------------------------------------------
// Compile and lookup
// ---------------------------------------------------------------------------

TableSet compile_tables(const Topology& t, const CompileOptions& opts) {
  TableSet tables;
  tables.bsl = t.bsl();
  for (const auto& [node, roles] : t.nodes()) {
    auto bift = build_bift(t, node);
    if (!bift.empty()) tables.bift[node] = std::move(bift);
    auto btaft = build_btaft(t, node, opts.frr);
    if (!btaft.empty()) tables.btaft[node] = std::move(btaft);
  }
  for (const Subset& s : t.subsets()) {
    for (const auto& [primary, backup] : s.protection) {
      auto entries = build_sbtaft(t, backup, primary, opts.sbtaft_cap);
      auto& dst = tables.sbtaft[backup];
      dst.insert(dst.end(), entries.begin(), entries.end());
    }
  }
  for (auto& e : build_mept(t)) tables.mept[e.node].push_back(e);
  tables.mpls = build_mpls(t);
  tables.ip = build_ip(t, t.groups());
  return tables;
}

BitString TableSet::local_bits(const NodeId& node, int si) const {
  BitString bits(bsl);
  auto it = bift.find(node);
  if (it == bift.end()) return bits;
  for (const auto& e : it->second) {
    if (e.si == si) bits.set(e.key_bit);
  }
  return bits;
}

const BiftEntry* TableSet::bift_entry(const NodeId& node, int si, unsigned bit) const {
  auto it = bift.find(node);
  if (it == bift.end()) return nullptr;
  for (const auto& e : it->second) {
    if (e.si == si && e.key_bit == bit) return &e;
  }
  return nullptr;
}

std::vector<const BtaftEntry*> TableSet::btaft_for(const NodeId& node, int si,
                                                   unsigned bit) const {
  std::vector<const BtaftEntry*> out;
  auto it = btaft.find(node);
  if (it == btaft.end()) return out;
  for (const auto& e : it->second) {
    if (e.si == si && e.protected_bit == bit) out.push_back(&e);
  }
  return out;
}

const MeptEntry* TableSet::mept_for(const NodeId& node, std::uint32_t label) const {
  auto it = mept.find(node);
  if (it == mept.end()) return nullptr;
  for (const auto& e : it->second) {
    if (e.primary_label == label) return &e;
  }
  return nullptr;
}

const MplsEntry* TableSet::mpls_entry(const NodeId& node, std::uint32_t label) const {
  auto it = mpls.find(node);
  if (it == mpls.end()) return nullptr;
  auto jt = it->second.find(label);
  return jt == it->second.end() ? nullptr : &jt->second;
}

const IpEncapEntry* TableSet::ip_entry(const NodeId& node, const std::string& group) const {
  auto it = ip.find(node);
  if (it == ip.end()) return nullptr;
  for (const auto& e : it->second) {
    if (e.group == group) return &e;
  }
  return nullptr;
}

BitString TableSet::sbtaft_guard(const NodeId& node, const NodeId& protected_ingress,
                                 int si) const {
  BitString bits(bsl);
  auto it = sbtaft.find(node);
  if (it == sbtaft.end()) return bits;
  for (const auto& e : it->second) {
    if (e.si == si && e.protected_ingress == protected_ingress) {
      bits = bits | e.nnh_combination;
    }
  }
  return bits;
}

const SBtaftEntry* TableSet::sbtaft_lookup(const NodeId& node, const NodeId& protected_ingress,
                                           int si, const BitString& combination) const {
  auto it = sbtaft.find(node);
  if (it == sbtaft.end()) return nullptr;
  for (const auto& e : it->second) {
    if (e.si == si && e.protected_ingress == protected_ingress &&
        e.nnh_combination == combination) {
      return &e;
    }
  }
  return nullptr;
}

// ---------------------------------------------------------------------------
// Dump
// ---------------------------------------------------------------------------

std::string TableSet::dump() const {
  std::ostringstream os;
  os << "tables bsl " << bsl << "\n";
  std::set<NodeId> node_ids;
  for (const auto& [n, _] : bift) node_ids.insert(n);
  for (const auto& [n, _] : btaft) node_ids.insert(n);
  for (const auto& [n, _] : sbtaft) node_ids.insert(n);
  for (const auto& [n, _] : mept) node_ids.insert(n);
  for (const auto& [n, _] : mpls) node_ids.insert(n);
  for (const auto& [n, _] : ip) node_ids.insert(n);

  for (const NodeId& node : node_ids) {
    os << "node " << node << "\n";
    if (auto it = bift.find(node); it != bift.end()) {
      for (const auto& e : it->second) {
        os << "  bift si " << e.si << " key " << e.key_bit << " fbm " << e.fbm.render() << " ";
        switch (e.action) {
          case BiftAction::Connected:
            os << "connected " << e.next_hop;
            break;
          case BiftAction::Routed: {
            os << "routed";
            for (const auto& hop : e.path) os << " " << hop;
            break;
          }
          case BiftAction::Decap:
            os << "decap";
            break;
        }
        os << "\n";
      }
    }
    if (auto it = btaft.find(node); it != btaft.end()) {
      for (const auto& e : it->second) {
        os << "  btaft si " << e.si << " protect " << e.protected_bit << " nnh ";
        if (e.nnh_bit) {
          os << *e.nnh_bit;
        } else {
          os << "-";
        }
        os << " reset " << e.reset.render() << " add " << e.add.render() << "\n";
      }
    }
    if (auto it = sbtaft.find(node); it != sbtaft.end()) {
      for (const auto& e : it->second) {
        os << "  sbtaft si " << e.si << " ingress " << e.protected_ingress << " combo "
           << e.nnh_combination.render() << " reset " << e.reset.render() << " add "
           << e.add.render() << "\n";
      }
    }
    if (auto it = mept.find(node); it != mept.end()) {
      for (const auto& e : it->second) {
        os << "  mept primary " << e.primary_label << " next " << e.primary_next << " backup "
           << e.backup_label << " bnext " << e.backup_next << "\n";
      }
    }
    if (auto it = mpls.find(node); it != mpls.end()) {
      for (const auto& [label, e] : it->second) {
        os << "  mpls " << label << " ";
        switch (e.op) {
          case MplsOp::Forward:
            os << "forward " << e.next_hop;
            break;
          case MplsOp::PopToBierte:
            os << "pop";
            break;
          case MplsOp::PopToSbtaft:
            os << "pop-protect " << e.protected_ingress;
            break;
        }
        os << "\n";
      }
    }
    if (auto it = ip.find(node); it != ip.end()) {
      for (const auto& e : it->second) {
        for (const auto& target : e.targets) {
          os << "  ip group " << e.group << " si " << target.si << " template "
             << target.bs_template.render();
          if (target.direct) {
            os << " direct";
          } else {
            os << " label " << target.label << " via " << target.first_hop;
          }
          os << "\n";
        }
      }
    }
  }
  return os.str();
}

}  // namespace bierte
