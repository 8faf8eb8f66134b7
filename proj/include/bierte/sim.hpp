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

#ifndef BIERTE_SIM_HPP
#define BIERTE_SIM_HPP

#include <map>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "bierte/dataplane.hpp"
#include "bierte/topology.hpp"

namespace bierte {

struct Event {
  enum class Kind { Inject, LinkDown, LinkUp, NodeDown, NodeUp };
  Kind kind = Kind::Inject;
  std::string group;          // Inject
  NodeId at;                  // Inject
  unsigned payload_len = 1000;
  NodeId a, b;                // link events; a only for node events
  int line = 0;
};

struct Scenario {
  std::vector<Event> events;

  static Scenario load(const std::string& text);
  static Scenario load_file(const std::string& path);
};

struct InjectionResult {
  std::string group;
  NodeId at;
  std::map<NodeId, unsigned> copies;  // per BFER
  std::set<NodeId> expected;          // no-failure oracle expectation
  bool exactly_once = true;           // every expected BFER exactly once, nothing else
  bool oracle_match = true;           // delivered set equals the oracle set
};

struct DeliveryReport {
  std::vector<InjectionResult> injections;
  std::map<std::pair<int, unsigned>, unsigned> traversals;  // (si, link bit) -> count
  std::map<NodeId, unsigned> recircs;
  bool exactly_once = true;
  bool loop_free = true;
  bool oracle_match = true;

  bool all_ok() const { return exactly_once && loop_free && oracle_match; }
  std::string to_text(const Topology& t) const;
};

struct RunResult {
  DeliveryReport report;
  std::vector<TraceRecord> trace;

  std::string trace_text() const;
};

/// Apply scenario events in order; each injection propagates to quiescence
/// (FIFO, deterministic) before the next event. Throws SimError when an
/// injection exceeds the hop budget (nodes x bits x 4).
RunResult run(const Topology& t, const TableSet& tables, const Scenario& s);

/// Delivery oracle: exhaustive walk over the topology's adjacencies honoring
/// the bit-consumption rule, independent of the compiled tables and the
/// dataplane code. Port state is not consulted; the result is the intended
/// no-failure delivery set.
std::set<NodeId> oracle_deliveries(const Topology& t, int si, const BitString& bs,
                                   const NodeId& start);

}  // namespace bierte

#endif  // BIERTE_SIM_HPP
