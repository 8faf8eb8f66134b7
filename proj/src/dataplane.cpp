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

#include "bierte/dataplane.hpp"

#include <sstream>
#include <stdexcept>

namespace bierte {

namespace {

std::pair<NodeId, NodeId> canon(const NodeId& a, const NodeId& b) {
  return a < b ? std::make_pair(a, b) : std::make_pair(b, a);
}

std::string bit_list(const BitString& bs) {
  std::string out;
  for (unsigned bit : bs.set_bits()) {
    if (!out.empty()) out += ',';
    out += std::to_string(bit);
  }
  return out.empty() ? "-" : out;
}

TraceRecord make_trace(const NodeId& node, Chain chain, std::string action, std::string key,
                       std::optional<BitString> before = std::nullopt,
                       std::optional<BitString> after = std::nullopt) {
  TraceRecord r;
  r.node = node;
  r.chain = chain;
  r.action = std::move(action);
  r.key = std::move(key);
  r.bs_before = std::move(before);
  r.bs_after = std::move(after);
  return r;
}

HopOutput bierte_pass(const TableSet& tables, const PortState& ports, const NodeId& node,
                      const Packet& pkt, unsigned depth);

// MPLS transit emission with egress protection: when the next port is down
// and a MEPT entry exists, the label is swapped to the backup tunnel.
void emit_mpls(HopOutput& out, const TableSet& tables, const PortState& ports,
               const NodeId& node, Packet pkt, const NodeId& next) {
  std::uint32_t label = pkt.mpls->label;
  auto inner = [&]() -> std::optional<BitString> {
    if (pkt.bierte) return pkt.bierte->bs;
    return std::nullopt;
  };
  if (ports.link_up(node, next)) {
    out.trace.push_back(
        make_trace(node, Chain::Mpls, "forward", std::to_string(label), inner(), inner()));
    out.emissions.push_back(Emission{EmitKind::Tunnel, next, -1, 0, std::move(pkt)});
    return;
  }
  const MeptEntry* mept = tables.mept_for(node, label);
  if (mept == nullptr) {
    out.trace.push_back(make_trace(node, Chain::Mpls, "drop-unprotected",
                                   std::to_string(label), inner(), inner()));
    return;
  }
  if (!ports.link_up(node, mept->backup_next)) {
    out.trace.push_back(make_trace(node, Chain::Mept, "drop-backup-down",
                                   std::to_string(label), inner(), inner()));
    return;
  }
  pkt.mpls->label = mept->backup_label;
  out.trace.push_back(make_trace(node, Chain::Mept, "swap",
                                 std::to_string(label) + "->" +
                                     std::to_string(mept->backup_label),
                                 inner(), inner()));
  out.emissions.push_back(Emission{EmitKind::Tunnel, mept->backup_next, -1, 0, std::move(pkt)});
}

HopOutput btaft_pass(const TableSet& tables, const PortState& ports, const NodeId& node,
                     const Packet& pkt, unsigned failed_bit, unsigned depth) {
  HopOutput out;
  const BierTeHeader& hdr = *pkt.bierte;
  auto entries = tables.btaft_for(node, hdr.si, failed_bit);
  if (entries.empty()) {
    out.trace.push_back(make_trace(node, Chain::Btaft, "drop-unprotected",
                                   std::to_string(failed_bit), hdr.bs, hdr.bs));
    return out;
  }

  BitString reset(tables.bsl);
  BitString add(tables.bsl);
  const char* action = nullptr;
  if (!entries.front()->nnh_bit.has_value()) {
    // Link protection: one entry per protected adjacency.
    reset = entries.front()->reset;
    add = entries.front()->add;
    out.recircs += 1;
    action = "link-protect";
  } else {
    // Node protection: aggregate the masks of every entry whose NNH bit is
    // active, then apply them once.
    unsigned matched = 0;
    for (const BtaftEntry* e : entries) {
      if (hdr.bs.test(*e->nnh_bit)) {
        reset = reset | e->reset;
        add = add | e->add;
        ++matched;
      }
    }
    out.recircs += matched + 1;
    action = "node-protect";
  }

  // Reset first, add second: backup path bits win.
  BitString rewritten = hdr.bs.and_not(reset) | add;
  out.trace.push_back(
      make_trace(node, Chain::Btaft, action, std::to_string(failed_bit), hdr.bs, rewritten));
  Packet next = pkt;
  next.bierte->bs = rewritten;
  out.merge(bierte_pass(tables, ports, node, next, depth + 1));
  return out;
}

HopOutput bierte_pass(const TableSet& tables, const PortState& ports, const NodeId& node,
                      const Packet& pkt, unsigned depth) {
  HopOutput out;
  const BierTeHeader& hdr = *pkt.bierte;
  if (depth > tables.bsl + 2) {
    out.trace.push_back(
        make_trace(node, Chain::Bierte, "drop-frr-depth", "-", hdr.bs, hdr.bs));
    return out;
  }

  BitString local = tables.local_bits(node, hdr.si);
  BitString active = hdr.bs & local;
  auto bits = active.set_bits();
  out.recircs += static_cast<unsigned>(bits.size());
  if (bits.empty()) {
    out.trace.push_back(make_trace(node, Chain::Bierte, "discard", "-", hdr.bs, hdr.bs));
    return out;
  }

  for (unsigned bit : bits) {
    const BiftEntry* entry = tables.bift_entry(node, hdr.si, bit);
    switch (entry->action) {
      case BiftAction::Decap: {
        out.deliveries.push_back(Delivery{node, pkt.group, pkt.payload_len});
        out.trace.push_back(
            make_trace(node, Chain::Bierte, "decap", std::to_string(bit), hdr.bs, hdr.bs));
        break;
      }
      case BiftAction::Connected: {
        Packet copy = pkt;
        copy.bierte->bs = hdr.bs & entry->fbm;
        copy.recirc_count = pkt.recirc_count;
        if (ports.link_up(node, entry->next_hop)) {
          out.trace.push_back(make_trace(node, Chain::Bierte, "connected", std::to_string(bit),
                                         hdr.bs, copy.bierte->bs));
          out.emissions.push_back(
              Emission{EmitKind::Link, entry->next_hop, hdr.si, bit, std::move(copy)});
        } else {
          out.trace.push_back(make_trace(node, Chain::Bierte, "divert", std::to_string(bit),
                                         hdr.bs, copy.bierte->bs));
          out.merge(btaft_pass(tables, ports, node, copy, bit, depth));
        }
        break;
      }
      case BiftAction::Routed: {
        Packet copy = pkt;
        copy.bierte->bs = hdr.bs & entry->fbm;
        out.trace.push_back(make_trace(node, Chain::Bierte, "routed", std::to_string(bit),
                                       hdr.bs, copy.bierte->bs));
        out.emissions.push_back(
            Emission{EmitKind::Routed, entry->next_hop, hdr.si, bit, std::move(copy)});
        break;
      }
    }
  }
  return out;
}

}  // namespace

void PortState::set_link(const NodeId& a, const NodeId& b, bool up) {
  if (up) {
    down_links.erase(canon(a, b));
  } else {
    down_links.insert(canon(a, b));
  }
}

void PortState::set_node(const NodeId& n, bool up) {
  if (up) {
    down_nodes.erase(n);
  } else {
    down_nodes.insert(n);
  }
}

bool PortState::node_up(const NodeId& n) const { return down_nodes.count(n) == 0; }

bool PortState::link_up(const NodeId& a, const NodeId& b) const {
  return down_links.count(canon(a, b)) == 0 && node_up(a) && node_up(b);
}

const char* chain_name(Chain c) {
  switch (c) {
    case Chain::Ip:
      return "ip";
    case Chain::Mpls:
      return "mpls";
    case Chain::Bierte:
      return "bierte";
    case Chain::Btaft:
      return "btaft";
    case Chain::Sbtaft:
      return "sbtaft";
    case Chain::Mept:
      return "mept";
  }
  return "?";
}

std::string TraceRecord::to_line() const {
  std::ostringstream os;
  os << node << " " << chain_name(chain) << " " << action << " " << (key.empty() ? "-" : key)
     << " " << (bs_before ? bs_before->render() : "-") << " "
     << (bs_after ? bs_after->render() : "-");
  return os.str();
}

void HopOutput::merge(HopOutput&& other) {
  for (auto& e : other.emissions) emissions.push_back(std::move(e));
  for (auto& d : other.deliveries) deliveries.push_back(std::move(d));
  recircs += other.recircs;
  for (auto& t : other.trace) trace.push_back(std::move(t));
}

HopOutput ip_chain(const TableSet& tables, const PortState& ports, const NodeId& node,
                   const Packet& pkt) {
  HopOutput out;
  const IpEncapEntry* entry = tables.ip_entry(node, pkt.group);
  if (entry == nullptr) {
    out.trace.push_back(make_trace(node, Chain::Ip, "drop-no-match", pkt.group));
    return out;
  }
  // The prototype copies once per destination subset and recirculates each
  // copy through the encapsulation pass.
  out.recircs += static_cast<unsigned>(entry->targets.size());
  for (const IpTarget& target : entry->targets) {
    Packet copy = pkt;
    copy.bierte = BierTeHeader{target.si, target.bs_template, PayloadProto::Ipmc};
    out.trace.push_back(make_trace(node, Chain::Ip, "encap", pkt.group, std::nullopt,
                                   target.bs_template));
    if (target.direct) {
      out.merge(bierte_pass(tables, ports, node, copy, 0));
    } else {
      copy.mpls = MplsHeader{target.label};
      emit_mpls(out, tables, ports, node, std::move(copy), target.first_hop);
    }
  }
  return out;
}

HopOutput mpls_chain(const TableSet& tables, const PortState& ports, const NodeId& node,
                     const Packet& pkt) {
  HopOutput out;
  std::uint32_t label = pkt.mpls->label;
  const MplsEntry* entry = tables.mpls_entry(node, label);
  auto inner = [&]() -> std::optional<BitString> {
    if (pkt.bierte) return pkt.bierte->bs;
    return std::nullopt;
  };
  if (entry == nullptr) {
    out.trace.push_back(make_trace(node, Chain::Mpls, "drop-unknown-label",
                                   std::to_string(label), inner(), inner()));
    return out;
  }
  switch (entry->op) {
    case MplsOp::Forward: {
      emit_mpls(out, tables, ports, node, pkt, entry->next_hop);
      break;
    }
    case MplsOp::PopToBierte: {
      Packet popped = pkt;
      popped.mpls.reset();
      out.recircs += 1;
      out.trace.push_back(
          make_trace(node, Chain::Mpls, "pop", std::to_string(label), inner(), inner()));
      out.merge(bierte_pass(tables, ports, node, popped, 0));
      break;
    }
    case MplsOp::PopToSbtaft: {
      Packet popped = pkt;
      popped.mpls.reset();
      out.trace.push_back(
          make_trace(node, Chain::Mpls, "pop-protect", std::to_string(label), inner(), inner()));
      Packet rewritten = sbtaft_apply(tables, node, popped, entry->protected_ingress, out);
      out.merge(bierte_pass(tables, ports, node, rewritten, 0));
      break;
    }
  }
  return out;
}

HopOutput bierte_chain(const TableSet& tables, const PortState& ports, const NodeId& node,
                       const Packet& pkt) {
  return bierte_pass(tables, ports, node, pkt, 0);
}

HopOutput btaft_apply(const TableSet& tables, const PortState& ports, const NodeId& node,
                      const Packet& pkt, unsigned failed_bit) {
  return btaft_pass(tables, ports, node, pkt, failed_bit, 0);
}

Packet sbtaft_apply(const TableSet& tables, const NodeId& backup_node, const Packet& pkt,
                    const NodeId& protected_ingress, HopOutput& out) {
  const BierTeHeader& hdr = *pkt.bierte;
  BitString guard = tables.sbtaft_guard(backup_node, protected_ingress, hdr.si);
  BitString combination = hdr.bs & guard;
  if (combination.none()) return pkt;
  const SBtaftEntry* entry =
      tables.sbtaft_lookup(backup_node, protected_ingress, hdr.si, combination);
  if (entry == nullptr) {
    throw std::logic_error("S-BTAFT combination " + bit_list(combination) + " at " +
                           backup_node + " has no entry; compiler must cover all combinations");
  }
  // Single lookup, single rewrite; no per-NNH copies or recirculations.
  Packet rewritten = pkt;
  rewritten.bierte->bs = hdr.bs.and_not(entry->reset) | entry->add;
  out.trace.push_back(make_trace(backup_node, Chain::Sbtaft, "apply", bit_list(combination),
                                 hdr.bs, rewritten.bierte->bs));
  return rewritten;
}

HopOutput process(const TableSet& tables, const PortState& ports, const NodeId& node,
                  const Packet& pkt) {
  HopOutput out;
  if (pkt.mpls) {
    out = mpls_chain(tables, ports, node, pkt);
  } else if (pkt.bierte) {
    out = bierte_chain(tables, ports, node, pkt);
  } else {
    out = ip_chain(tables, ports, node, pkt);
  }
  for (auto& em : out.emissions) {
    em.pkt.recirc_count = pkt.recirc_count + out.recircs;
  }
  return out;
}

}  // namespace bierte
