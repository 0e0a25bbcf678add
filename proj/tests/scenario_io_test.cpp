// Copyright 2026 The Tierguard Authors
//
// SPDX-License-Identifier: Apache-2.0

#include "tierguard/scenario_io.hpp"

#include <gtest/gtest.h>

#include <random>

#include "fixtures.hpp"
#include "random_hierarchy.hpp"

namespace tierguard {
namespace {

const std::filesystem::path kData = std::filesystem::path(TIERGUARD_SOURCE_DIR) / "tests" / "data";
const std::filesystem::path kScenarios = std::filesystem::path(TIERGUARD_SOURCE_DIR) / "scenarios";

Scenario random_scenario(std::mt19937_64& rng) {
  Scenario s;
  s.name = "rand-" + std::to_string(rng() % 1000);
  s.seed = rng();
  s.duration = static_cast<double>(rng() % 10000) / 7.0;
  s.bin_width = 0.25 + static_cast<double>(rng() % 100) / 3.0;
  const int lans = static_cast<int>(rng() % 4);
  for (int i = 0; i < lans; ++i) {
    TenantId t("t" + std::to_string(i));
    s.lans.push_back({t, static_cast<std::uint32_t>(rng() % 600), 1 + static_cast<std::uint32_t>(rng() % 4),
                      0.01 + static_cast<double>(rng() % 1000) / 97.0,
                      static_cast<std::uint32_t>(rng() % 100), 100 + static_cast<std::uint32_t>(rng() % 9000)});
    for (int f = 0; f < 3; ++f) s.repositories.profiles[t]["f" + std::to_string(f)] = std::to_string(rng());
  }
  s.hierarchy = testing::random_chain(rng, 4, rng() % 2);
  for (int i = 0; i < static_cast<int>(rng() % 4); ++i) {
    AttackerProfile a;
    a.id = "a" + std::to_string(i);
    a.archetype = kArchetypes[rng() % kArchetypes.size()];
    a.source_vm = {VmId("x" + std::to_string(i)), TenantId("evil" + std::to_string(i)),
                   1 + static_cast<int>(rng() % 3)};
    a.target = VmId("v0");
    if (rng() % 2) a.intensity = static_cast<double>(rng() % 500) / 11.0;
    a.credentials_granted = rng() % 2;
    if (rng() % 2) a.impersonate = TenantId("t0");
    s.attackers.push_back(std::move(a));
  }
  s.repositories.ips_signatures = {"I" + std::to_string(rng() % 50)};
  s.repositories.antimalware_signatures = {"M" + std::to_string(rng() % 50), "MM"};
  if (rng() % 2) s.repositories.firewall.push_back({VmId("fw-only"), "tok\n\"quoted\""});
  if (rng() % 2) s.repositories.vault.push_back({VmId("vault-only"), "k"});
  for (auto& l : s.latencies.seconds) l = static_cast<double>(rng() % 10000) / 1e6;
  s.parameters.challenge_size = 1 + rng() % 3;
  s.parameters.anomaly_threshold = rng() % 10000;
  if (rng() % 2) s.parameters.anomaly_escalation = static_cast<std::uint32_t>(rng() % 5);
  s.parameters.queueing = rng() % 2 ? Queueing::single_server : Queueing::infinite_server;
  s.parameters.layer_evaluation = rng() % 2 ? LayerEvaluation::concurrent : LayerEvaluation::sequential;
  if (rng() % 2) s.parameters.disabled_layers = {LayerId::IPS, LayerId::ANTIMAL};
  return s;
}

TEST(ParseScenario, RoundTripOnBaselineDefault) {
  auto s = baseline_scenario();
  auto parsed = parse_scenario(serialize_scenario(s));
  ASSERT_TRUE(parsed.scenario) << (parsed.diagnostics.empty() ? "" : parsed.diagnostics[0].to_string());
  EXPECT_EQ(*parsed.scenario, s);
}

TEST(ParseScenario, RoundTripOnRandomScenarios) {
  std::mt19937_64 rng(2024);
  for (int i = 0; i < 300; ++i) {
    Scenario s = random_scenario(rng);
    std::string text = serialize_scenario(s);
    auto parsed = parse_scenario(text);
    ASSERT_TRUE(parsed.scenario) << text;
    ASSERT_EQ(*parsed.scenario, s) << text;
    ASSERT_EQ(serialize_scenario(*parsed.scenario), text);
  }
}

TEST(ParseScenario, BundledFileMatchesBuiltInDefault) {
  auto text = read_file(kScenarios / "baseline.json");
  ASSERT_TRUE(text);
  auto parsed = parse_scenario(*text);
  ASSERT_TRUE(parsed.scenario);
  EXPECT_EQ(*parsed.scenario, baseline_scenario());
  EXPECT_EQ(serialize_scenario(*parsed.scenario), *text);
}

TEST(ParseScenario, MissingSectionsTakeDefaults) {
  auto parsed = parse_scenario(R"({"meta": {"name": "tiny"}})");
  ASSERT_TRUE(parsed.scenario);
  EXPECT_EQ(parsed.scenario->name, "tiny");
  EXPECT_EQ(parsed.scenario->hierarchy, baseline_hierarchy());
  EXPECT_EQ(parsed.scenario->latencies, Latencies{});
  EXPECT_EQ(parsed.scenario->parameters, Parameters{});
}

TEST(ParseScenario, SyntaxErrorCarriesPosition) {
  auto parsed = parse_scenario("{\n  \"meta\": {\n    \"name\": oops\n  }\n}");
  EXPECT_FALSE(parsed.scenario);
  ASSERT_EQ(parsed.diagnostics.size(), 1u);
  EXPECT_EQ(parsed.diagnostics[0].line, 3u);
  EXPECT_EQ(parsed.diagnostics[0].column, 13u);
}

TEST(ParseScenario, GarbageNeverThrows) {
  std::mt19937_64 rng(8);
  const std::string base = serialize_scenario(baseline_scenario());
  for (int i = 0; i < 500; ++i) {
    std::string text = base;
    for (int k = 0; k < 3; ++k) text[rng() % text.size()] = static_cast<char>(32 + rng() % 95);
    text.resize(rng() % text.size());
    EXPECT_NO_THROW(parse_scenario(text));
  }
  EXPECT_NO_THROW(parse_scenario(""));
  EXPECT_NO_THROW(parse_scenario("[]"));
  EXPECT_FALSE(parse_scenario("[]").scenario);
}

TEST(ParseScenario, TypeErrorsAreDiagnostics) {
  auto parsed = parse_scenario(R"({"meta": {"name": 3, "seed": -1}, "lans": [{"clients": "many"}]})");
  EXPECT_FALSE(parsed.scenario);
  EXPECT_EQ(parsed.diagnostics.size(), 3u);
  auto bad_layer = parse_scenario(R"({"meta": {}, "parameters": {"disabled_layers": ["APP"]}})");
  EXPECT_FALSE(bad_layer.scenario);
}

TEST(ParseScenario, UnknownKeysStrictOrLenient) {
  const char* text = R"({"meta": {"name": "x", "colour": "blue"}, "extra": 1})";
  auto strict = parse_scenario(text);
  EXPECT_FALSE(strict.scenario);
  EXPECT_EQ(strict.diagnostics.size(), 2u);
  auto lenient = parse_scenario(text, true);
  ASSERT_TRUE(lenient.scenario);
  EXPECT_EQ(lenient.diagnostics.size(), 2u);
  EXPECT_FALSE(has_errors(lenient.diagnostics));
}

TEST(ValidateFile, Fixtures) {
  EXPECT_TRUE(validate_file(kScenarios / "baseline.json").empty());
  EXPECT_TRUE(validate_file(kScenarios / "all_archetypes.json").empty());

  auto topo = validate_file(kData / "cross_tier_virtual_link.json");
  ASSERT_EQ(topo.size(), 1u);
  EXPECT_EQ(topo[0].module, "topology");

  auto adv = validate_file(kData / "insider_without_credentials.json");
  ASSERT_EQ(adv.size(), 1u);
  EXPECT_EQ(adv[0].module, "adversary");

  auto syntax = validate_file(kData / "syntax_error.json");
  ASSERT_EQ(syntax.size(), 1u);
  EXPECT_EQ(syntax[0].line, 7u);
  EXPECT_TRUE(syntax[0].column);

  auto missing = validate_file(kData / "does_not_exist.json");
  ASSERT_EQ(missing.size(), 1u);
  EXPECT_EQ(missing[0].module, "io");
}

}  // namespace
}  // namespace tierguard
