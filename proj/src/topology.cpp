// Copyright 2026 The Tierguard Authors
//
// SPDX-License-Identifier: Apache-2.0

#include "tierguard/topology.hpp"

#include <algorithm>
#include <deque>
#include <set>

namespace tierguard {

HierarchyDecl baseline_hierarchy() {
  HierarchyDecl d;
  d.tiers = {
      {1, {VmId("VM1"), VmId("VM2"), VmId("VM3")}},
      {2, {VmId("VM4"), VmId("VM5"), VmId("VM6")}},
      {3, {VmId("VM7")}},
  };
  d.controls = {
      {"A", {LayerId::META}, 1, 2},
      {"B", {LayerId::VAULT, LayerId::IPS, LayerId::ANTIMAL}, 2, 3},
  };
  d.application_vm = VmId("VM7");
  return d;
}

namespace {

const ControlNode* find_control(const std::vector<ControlNode>& controls, const std::string& id) {
  for (const auto& c : controls) {
    if (c.control_id == id) return &c;
  }
  return nullptr;
}

}  // namespace

TierGraph TierGraph::build(const HierarchyDecl& decl) {
  TierGraph g;

  std::set<int> declared_tiers;
  for (const auto& t : decl.tiers) {
    if (t.tier < 1) throw TopologyError("tier index must be >= 1, got " + std::to_string(t.tier));
    if (!declared_tiers.insert(t.tier).second) {
      throw TopologyError("tier " + std::to_string(t.tier) + " declared twice");
    }
    for (const auto& vm : t.vms) {
      if (vm.empty()) throw TopologyError("empty vm_id in tier " + std::to_string(t.tier));
      if (!g.tier_of_.emplace(vm, t.tier).second) {
        throw TopologyError("vm " + vm.str() + " declared more than once");
      }
    }
  }

  std::set<int> control_sources;
  for (const auto& c : decl.controls) {
    if (c.control_id.empty()) throw TopologyError("control without id");
    if (find_control(g.controls_, c.control_id)) {
      throw TopologyError("control " + c.control_id + " declared twice");
    }
    if (c.to_tier != c.from_tier + 1) {
      throw TopologyError("control " + c.control_id + " must join adjacent tiers");
    }
    if (!declared_tiers.contains(c.from_tier) || !declared_tiers.contains(c.to_tier)) {
      throw TopologyError("control " + c.control_id + " references an undeclared tier");
    }
    if (c.gate_layers.empty()) {
      throw TopologyError("control " + c.control_id + " gates no layers");
    }
    for (auto l : c.gate_layers) {
      if (!is_inspection_layer(l)) {
        throw TopologyError("control " + c.control_id + " gates a non-inspection layer");
      }
    }
    if (!control_sources.insert(c.from_tier).second) {
      throw TopologyError("more than one control leaves tier " + std::to_string(c.from_tier));
    }
    g.controls_.push_back(c);
  }
  std::sort(g.controls_.begin(), g.controls_.end(),
            [](const ControlNode& a, const ControlNode& b) { return a.from_tier < b.from_tier; });

  std::set<std::pair<VmId, VmId>> seen_virtual;
  std::set<std::tuple<VmId, VmId, std::string>> seen_real;
  auto add_link = [&](const Link& link) {
    auto a = g.tier_of_.find(link.from);
    auto b = g.tier_of_.find(link.to);
    if (a == g.tier_of_.end()) throw TopologyError("link references unknown vm " + link.from.str());
    if (b == g.tier_of_.end()) throw TopologyError("link references unknown vm " + link.to.str());
    if (link.from == link.to) throw TopologyError("self link on " + link.from.str());
    if (link.kind == LinkKind::virtual_link) {
      if (link.via_control) {
        throw TopologyError("virtual link " + link.from.str() + "-" + link.to.str() +
                            " cannot name a control");
      }
      if (a->second != b->second) {
        throw TopologyError("virtual link " + link.from.str() + "-" + link.to.str() +
                            " crosses tiers");
      }
      auto key = std::minmax(link.from, link.to);
      if (!seen_virtual.insert(key).second) return;
      g.links_.push_back(link);
      g.virtual_adj_[link.from].push_back(link.to);
      g.virtual_adj_[link.to].push_back(link.from);
      return;
    }
    if (!link.via_control) {
      throw TopologyError("real link " + link.from.str() + "-" + link.to.str() +
                          " has no control");
    }
    const ControlNode* c = find_control(g.controls_, *link.via_control);
    if (!c) throw TopologyError("link references unknown control " + *link.via_control);
    // Real links are stored lower tier first.
    Link oriented = link;
    if (a->second > b->second) std::swap(oriented.from, oriented.to);
    int lo = std::min(a->second, b->second);
    int hi = std::max(a->second, b->second);
    if (lo != c->from_tier || hi != c->to_tier) {
      throw TopologyError("real link " + link.from.str() + "-" + link.to.str() +
                          " does not span the tiers of control " + c->control_id);
    }
    if (!seen_real.insert({oriented.from, oriented.to, c->control_id}).second) return;
    std::size_t idx = static_cast<std::size_t>(c - g.controls_.data());
    g.links_.push_back(oriented);
    g.real_up_[oriented.from].emplace_back(oriented.to, idx);
  };

  if (decl.auto_links) {
    for (const auto& t : decl.tiers) {
      for (std::size_t i = 0; i < t.vms.size(); ++i) {
        for (std::size_t j = i + 1; j < t.vms.size(); ++j) {
          add_link({LinkKind::virtual_link, t.vms[i], t.vms[j], std::nullopt});
        }
      }
    }
    for (const auto& c : g.controls_) {
      for (const auto& lo : decl.tiers) {
        if (lo.tier != c.from_tier) continue;
        for (const auto& hi : decl.tiers) {
          if (hi.tier != c.to_tier) continue;
          for (const auto& a : lo.vms) {
            for (const auto& b : hi.vms) add_link({LinkKind::real, a, b, c.control_id});
          }
        }
      }
    }
  }
  for (const auto& link : decl.links) add_link(link);

  if (!decl.application_vm.empty() && !g.tier_of_.contains(decl.application_vm)) {
    throw TopologyError("application vm " + decl.application_vm.str() + " is not declared");
  }
  g.application_vm_ = decl.application_vm;

  if (auto problem = check_graph(g)) throw TopologyError("post-validation: " + *problem);
  return g;
}

int TierGraph::tier(const VmId& vm) const {
  auto it = tier_of_.find(vm);
  if (it == tier_of_.end()) throw TopologyError("unknown vm " + vm.str());
  return it->second;
}

int TierGraph::top_tier() const noexcept {
  int top = 0;
  for (const auto& [vm, t] : tier_of_) top = std::max(top, t);
  return top;
}

bool TierGraph::reachable_without_control(const VmId& from, const VmId& to) const {
  tier(from);
  tier(to);
  if (from == to) return true;
  std::set<VmId> visited{from};
  std::deque<VmId> queue{from};
  while (!queue.empty()) {
    VmId cur = std::move(queue.front());
    queue.pop_front();
    auto it = virtual_adj_.find(cur);
    if (it == virtual_adj_.end()) continue;
    for (const auto& next : it->second) {
      if (next == to) return true;
      if (visited.insert(next).second) queue.push_back(next);
    }
  }
  return false;
}

std::vector<ControlNode> TierGraph::required_controls(const VmId& from, const VmId& to) const {
  const int from_tier = tier(from);
  const int to_tier = tier(to);
  if (to_tier < from_tier) {
    throw TopologyError("no ascending path from " + from.str() + " to " + to.str());
  }

  // Expand tier by tier: close the frontier under virtual links, then take the
  // real links that leave it. Each step crosses exactly one control.
  auto virtual_closure = [&](std::set<VmId> seeds) {
    std::deque<VmId> queue(seeds.begin(), seeds.end());
    while (!queue.empty()) {
      VmId cur = std::move(queue.front());
      queue.pop_front();
      auto it = virtual_adj_.find(cur);
      if (it == virtual_adj_.end()) continue;
      for (const auto& next : it->second) {
        if (seeds.insert(next).second) queue.push_back(next);
      }
    }
    return seeds;
  };

  std::vector<ControlNode> path;
  std::set<VmId> frontier = virtual_closure({from});
  for (int t = from_tier; t < to_tier; ++t) {
    std::set<VmId> next;
    std::optional<std::size_t> used;
    for (const auto& vm : frontier) {
      auto it = real_up_.find(vm);
      if (it == real_up_.end()) continue;
      for (const auto& [dst, ctrl] : it->second) {
        next.insert(dst);
        used = ctrl;
      }
    }
    if (next.empty()) {
      throw TopologyError("no real-link path from " + from.str() + " to " + to.str());
    }
    path.push_back(controls_[*used]);
    frontier = virtual_closure(std::move(next));
  }
  if (!frontier.contains(to)) {
    throw TopologyError("no path from " + from.str() + " to " + to.str());
  }
  return path;
}

std::vector<ControlNode> TierGraph::controls_between_tiers(int from_tier, int to_tier) const {
  std::vector<ControlNode> out;
  for (int t = from_tier; t < to_tier; ++t) {
    auto it = std::find_if(controls_.begin(), controls_.end(),
                           [t](const ControlNode& c) { return c.from_tier == t; });
    if (it == controls_.end()) {
      throw TopologyError("no control joins tier " + std::to_string(t) + " to " +
                          std::to_string(t + 1));
    }
    out.push_back(*it);
  }
  return out;
}

std::optional<std::string> check_graph(const TierGraph& g) {
  for (const auto& [vm, t] : g.vms()) {
    if (t < 1) return "vm " + vm.str() + " has tier < 1";
  }
  for (const auto& c : g.controls()) {
    if (c.to_tier != c.from_tier + 1) return "control " + c.control_id + " skips a tier";
    if (c.gate_layers.empty()) return "control " + c.control_id + " has no gate layers";
  }
  for (const auto& l : g.links()) {
    if (!g.contains(l.from) || !g.contains(l.to)) return "link to unknown vm";
    int a = g.vms().at(l.from);
    int b = g.vms().at(l.to);
    if (l.kind == LinkKind::virtual_link) {
      if (a != b) return "virtual link across tiers";
      if (l.via_control) return "virtual link names a control";
      continue;
    }
    if (!l.via_control) return "real link without control";
    std::size_t matches = 0;
    for (const auto& c : g.controls()) {
      if (c.control_id == *l.via_control) {
        ++matches;
        if (std::min(a, b) != c.from_tier || std::max(a, b) != c.to_tier) {
          return "real link does not match its control's tiers";
        }
      }
    }
    if (matches != 1) return "real link must reference exactly one control";
  }
  return std::nullopt;
}

}  // namespace tierguard
