// Copyright 2026 The Tierguard Authors
//
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "tierguard/core.hpp"

namespace tierguard {

struct ControlNode {
  std::string control_id;
  std::vector<LayerId> gate_layers;
  int from_tier = 1;
  int to_tier = 2;

  friend bool operator==(const ControlNode&, const ControlNode&) = default;
};

enum class LinkKind : std::uint8_t { virtual_link, real };

struct Link {
  LinkKind kind = LinkKind::virtual_link;
  VmId from;
  VmId to;
  std::optional<std::string> via_control;

  friend bool operator==(const Link&, const Link&) = default;
};

struct TierDecl {
  int tier = 1;
  std::vector<VmId> vms;

  friend bool operator==(const TierDecl&, const TierDecl&) = default;
};

/// Scenario-level description of the hierarchy. With `auto_links` set, every
/// tier is fully meshed by virtual links and each control gets real links
/// between all VM pairs of the two tiers it joins; `links` adds to that.
struct HierarchyDecl {
  std::vector<TierDecl> tiers;
  std::vector<ControlNode> controls;
  std::vector<Link> links;
  bool auto_links = true;
  VmId application_vm;

  friend bool operator==(const HierarchyDecl&, const HierarchyDecl&) = default;
};

/// VM1-VM3 on tier 1, VM4-VM6 on tier 2 behind Control A (metadata
/// inspection), VM7 hosting the application behind Control B (vault, IPS,
/// anti-malware).
HierarchyDecl baseline_hierarchy();

class TopologyError : public Error {
 public:
  using Error::Error;
};

/// Validated, immutable VM hierarchy.
class TierGraph {
 public:
  /// Throws TopologyError: inter-tier link without control, virtual link across
  /// tiers, unknown VM reference, malformed control.
  static TierGraph build(const HierarchyDecl& decl);

  const std::map<VmId, int>& vms() const noexcept { return tier_of_; }
  const std::vector<ControlNode>& controls() const noexcept { return controls_; }
  const std::vector<Link>& links() const noexcept { return links_; }
  const VmId& application_vm() const noexcept { return application_vm_; }

  bool contains(const VmId& vm) const { return tier_of_.contains(vm); }
  /// Throws TopologyError for an unknown VM.
  int tier(const VmId& vm) const;
  int top_tier() const noexcept;

  /// True iff `to` can be reached from `from` over virtual links only.
  bool reachable_without_control(const VmId& from, const VmId& to) const;

  /// Controls crossed on the tier-ascending real-link path; empty when both
  /// VMs share a tier. Throws TopologyError when no such path exists.
  std::vector<ControlNode> required_controls(const VmId& from, const VmId& to) const;

  /// Controls gating the ascent from `from_tier` to `to_tier` (chain lookup,
  /// no VM connectivity check). Used for sessions entering from VMs that sit
  /// outside the declared graph, e.g. LAN clients on tier 1.
  std::vector<ControlNode> controls_between_tiers(int from_tier, int to_tier) const;

 private:
  std::map<VmId, int> tier_of_;
  std::vector<ControlNode> controls_;
  std::vector<Link> links_;
  std::map<VmId, std::vector<VmId>> virtual_adj_;
  // real-link adjacency, upward only: from -> (to, control index)
  std::map<VmId, std::vector<std::pair<VmId, std::size_t>>> real_up_;
  VmId application_vm_;
};

/// Independent re-check of every TierGraph invariant on a built graph.
std::optional<std::string> check_graph(const TierGraph& g);

}  // namespace tierguard
