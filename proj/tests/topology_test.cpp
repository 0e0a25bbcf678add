// Copyright 2026 The Tierguard Authors
//
// SPDX-License-Identifier: Apache-2.0

#include "tierguard/topology.hpp"

#include <gtest/gtest.h>

#include "random_hierarchy.hpp"

namespace tierguard {
namespace {

using testing::OracleGraph;
using testing::random_chain;

std::vector<std::string> ids(const std::vector<ControlNode>& cs) {
  std::vector<std::string> out;
  for (const auto& c : cs) out.push_back(c.control_id);
  return out;
}

TEST(BuildHierarchy, BaselineDefault) {
  auto g = TierGraph::build(baseline_hierarchy());
  EXPECT_EQ(g.vms().size(), 7u);
  ASSERT_EQ(g.controls().size(), 2u);
  EXPECT_EQ(g.controls()[0].control_id, "A");
  EXPECT_EQ(g.controls()[0].gate_layers, std::vector<LayerId>{LayerId::META});
  EXPECT_EQ(g.controls()[1].gate_layers,
            (std::vector<LayerId>{LayerId::VAULT, LayerId::IPS, LayerId::ANTIMAL}));
  EXPECT_EQ(g.tier(VmId("VM7")), 3);
  EXPECT_EQ(g.top_tier(), 3);
  EXPECT_EQ(g.application_vm(), VmId("VM7"));
  EXPECT_FALSE(check_graph(g));
}

TEST(BuildHierarchy, SingleTierHasNoControls) {
  HierarchyDecl d;
  d.tiers = {{1, {VmId("a"), VmId("b")}}};
  auto g = TierGraph::build(d);
  EXPECT_TRUE(g.controls().empty());
  EXPECT_TRUE(g.reachable_without_control(VmId("a"), VmId("b")));
}

TEST(BuildHierarchy, CrossTierVirtualLinkRejected) {
  auto d = baseline_hierarchy();
  d.links.push_back({LinkKind::virtual_link, VmId("VM2"), VmId("VM4"), std::nullopt});
  EXPECT_THROW(TierGraph::build(d), TopologyError);
}

TEST(BuildHierarchy, InvalidDeclarationsRejected) {
  auto with = [](auto mutate) {
    auto d = baseline_hierarchy();
    mutate(d);
    return d;
  };
  // Inter-tier link without a control.
  EXPECT_THROW(TierGraph::build(with([](HierarchyDecl& d) {
                 d.links.push_back({LinkKind::real, VmId("VM1"), VmId("VM4"), std::nullopt});
               })),
               TopologyError);
  // Real link naming the wrong control.
  EXPECT_THROW(TierGraph::build(with([](HierarchyDecl& d) {
                 d.links.push_back({LinkKind::real, VmId("VM1"), VmId("VM4"), "B"});
               })),
               TopologyError);
  // Unknown VM.
  EXPECT_THROW(TierGraph::build(with([](HierarchyDecl& d) {
                 d.links.push_back({LinkKind::virtual_link, VmId("VM1"), VmId("VM9"), std::nullopt});
               })),
               TopologyError);
  // Control skipping a tier.
  EXPECT_THROW(TierGraph::build(with([](HierarchyDecl& d) { d.controls[1].from_tier = 1; })),
               TopologyError);
  // Empty gate.
  EXPECT_THROW(TierGraph::build(with([](HierarchyDecl& d) { d.controls[0].gate_layers.clear(); })),
               TopologyError);
  // Duplicate VM.
  EXPECT_THROW(TierGraph::build(with([](HierarchyDecl& d) { d.tiers[1].vms.push_back(VmId("VM1")); })),
               TopologyError);
  // Tier zero.
  EXPECT_THROW(TierGraph::build(with([](HierarchyDecl& d) { d.tiers.push_back({0, {VmId("X")}}); })),
               TopologyError);
  // Two controls leaving one tier.
  EXPECT_THROW(TierGraph::build(with([](HierarchyDecl& d) {
                 d.controls.push_back({"A2", {LayerId::FW}, 1, 2});
               })),
               TopologyError);
  // Undeclared application VM.
  EXPECT_THROW(TierGraph::build(with([](HierarchyDecl& d) { d.application_vm = VmId("VM8"); })),
               TopologyError);
}

TEST(ReachableWithoutControl, BaselineExamples) {
  auto g = TierGraph::build(baseline_hierarchy());
  EXPECT_TRUE(g.reachable_without_control(VmId("VM2"), VmId("VM1")));
  EXPECT_TRUE(g.reachable_without_control(VmId("VM2"), VmId("VM3")));
  EXPECT_FALSE(g.reachable_without_control(VmId("VM2"), VmId("VM5")));
  EXPECT_FALSE(g.reachable_without_control(VmId("VM5"), VmId("VM7")));
  for (const auto& [vm, t] : g.vms()) EXPECT_TRUE(g.reachable_without_control(vm, vm));
  EXPECT_THROW(g.reachable_without_control(VmId("VM2"), VmId("nope")), TopologyError);
}

TEST(RequiredControls, BaselineExamples) {
  auto g = TierGraph::build(baseline_hierarchy());
  EXPECT_EQ(ids(g.required_controls(VmId("VM2"), VmId("VM7"))), (std::vector<std::string>{"A", "B"}));
  EXPECT_TRUE(g.required_controls(VmId("VM2"), VmId("VM3")).empty());
  EXPECT_EQ(ids(g.required_controls(VmId("VM4"), VmId("VM7"))), std::vector<std::string>{"B"});
  EXPECT_THROW(g.required_controls(VmId("VM7"), VmId("VM1")), TopologyError);
  EXPECT_EQ(ids(g.controls_between_tiers(1, 3)), (std::vector<std::string>{"A", "B"}));
}

TEST(RequiredControls, DisconnectedDeclarationErrors) {
  HierarchyDecl d;
  d.tiers = {{1, {VmId("a")}}, {2, {VmId("b")}}};
  d.controls = {{"C", {LayerId::FW}, 1, 2}};
  d.auto_links = false;
  auto g = TierGraph::build(d);
  EXPECT_THROW(g.required_controls(VmId("a"), VmId("b")), TopologyError);
}

TEST(RequiredControls, FiveTierChainMatchesBfsOracle) {
  std::mt19937_64 rng(17);
  for (int i = 0; i < 50; ++i) {
    auto d = random_chain(rng, 5, false, 5);
    auto g = TierGraph::build(d);
    OracleGraph oracle(d);
    const VmId bottom = d.tiers.front().vms.back();
    const VmId top = d.tiers.back().vms.back();
    auto got = ids(g.required_controls(bottom, top));
    EXPECT_EQ(got.size(), 4u);
    EXPECT_EQ(std::optional(got), oracle.path_controls(bottom, top));
  }
}

class RandomHierarchies : public ::testing::TestWithParam<bool> {};

TEST_P(RandomHierarchies, AgreeWithOracleAndContain) {
  const bool sparse = GetParam();
  std::mt19937_64 rng(sparse ? 99 : 98);
  int checked_paths = 0;
  for (int i = 0; i < 1000; ++i) {
    auto d = random_chain(rng, 6, sparse);
    auto g = TierGraph::build(d);
    ASSERT_FALSE(check_graph(g));
    OracleGraph oracle(d);
    for (const auto& [a, ta] : oracle.tier) {
      for (const auto& [b, tb] : oracle.tier) {
        const bool reach = g.reachable_without_control(a, b);
        ASSERT_EQ(reach, oracle.virtual_reach(a, b));
        if (tb > ta) ASSERT_FALSE(reach);
        if (tb < ta) continue;
        auto expected = oracle.path_controls(a, b);
        if (!expected) {
          ASSERT_THROW(g.required_controls(a, b), TopologyError);
          continue;
        }
        auto got = ids(g.required_controls(a, b));
        ASSERT_EQ(got, *expected);
        ASSERT_EQ(static_cast<int>(got.size()), tb - ta);
        ++checked_paths;
      }
    }
  }
  EXPECT_GT(checked_paths, 1000);
}

INSTANTIATE_TEST_SUITE_P(Links, RandomHierarchies, ::testing::Values(false, true));

}  // namespace
}  // namespace tierguard
