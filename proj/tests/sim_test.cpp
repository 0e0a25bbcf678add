// Copyright 2026 The Tierguard Authors
//
// SPDX-License-Identifier: Apache-2.0

#include "tierguard/sim.hpp"

#include <gtest/gtest.h>

#include <cmath>

#include "fixtures.hpp"
#include "tierguard/report.hpp"

namespace tierguard {
namespace {

using testing::all_archetypes;
using testing::scaled;
using testing::with_external_attacker;

constexpr std::int64_t kSecond = 1'000'000'000;

Scenario small_baseline() { return scaled(baseline_scenario(), 40, 10.0); }

SessionRecord record_at(std::int64_t t, Origin o, std::optional<LayerId> deny_at) {
  SessionRecord r;
  r.origin = o;
  r.trace.started_ns = t;
  for (auto l : kInspectionLayers) {
    const bool deny = deny_at == l;
    r.trace = record_verdict(r.trace, {l, to_flag(!deny), ""}, t);
    if (deny) break;
  }
  return r;
}

TEST(GenerateWorkload, ArrivalCountWithinThreeSigma) {
  LanDecl lan{TenantId("t"), 500, 3, 0.1, 64, 1024};
  const double mean = 500 * 0.1 * 60.0;
  const double sigma = std::sqrt(mean);  // Poisson count
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    auto rng = stream_rng(seed, 0);
    auto w = generate_workload(lan, 0, 0, 60 * kSecond, rng);
    EXPECT_LT(std::abs(static_cast<double>(w.size()) - mean), 3 * sigma) << seed;
  }
}

TEST(GenerateWorkload, ZeroDurationHasNoEvents) {
  LanDecl lan{TenantId("t"), 1, 3, 0.1, 64, 1024};
  auto rng = stream_rng(1, 0);
  EXPECT_TRUE(generate_workload(lan, 0, 5 * kSecond, 5 * kSecond, rng).empty());
}

TEST(GenerateWorkload, SeedsDifferButReproduce) {
  LanDecl lan{TenantId("t"), 20, 3, 0.5, 64, 1024};
  auto gen = [&](std::uint64_t seed) {
    auto rng = stream_rng(seed, 0);
    std::vector<std::int64_t> times;
    for (const auto& r : generate_workload(lan, 0, 0, 20 * kSecond, rng)) times.push_back(r.arrival_ns);
    return times;
  };
  EXPECT_EQ(gen(1), gen(1));
  EXPECT_NE(gen(1), gen(2));
}

TEST(GenerateWorkload, SortedWithinRangeAndUniqueNonces) {
  LanDecl lan{TenantId("t"), 30, 3, 1.0, 64, 1024};
  auto rng = stream_rng(4, 3);
  auto w = generate_workload(lan, 3, 2 * kSecond, 9 * kSecond, rng);
  ASSERT_FALSE(w.empty());
  std::set<std::uint64_t> nonces;
  for (std::size_t i = 0; i < w.size(); ++i) {
    EXPECT_GE(w[i].arrival_ns, 2 * kSecond);
    EXPECT_LT(w[i].arrival_ns, 9 * kSecond);
    if (i) EXPECT_LE(w[i - 1].arrival_ns, w[i].arrival_ns);
    EXPECT_EQ(w[i].nonce >> 40, 3u);
    EXPECT_EQ(w[i].source.tenant_id, TenantId("t"));
    nonces.insert(w[i].nonce);
  }
  EXPECT_EQ(nonces.size(), w.size());
}

TEST(ExponentialDraw, MeanMatchesRate) {
  std::mt19937_64 rng(12);
  double sum = 0;
  const int n = 200000;
  for (int i = 0; i < n; ++i) {
    double x = exponential_draw(rng, 4.0);
    ASSERT_GE(x, 0.0);
    sum += x;
  }
  // Standard error of the mean is 0.25 / sqrt(n).
  EXPECT_NEAR(sum / n, 0.25, 4 * 0.25 / std::sqrt(n));
}

TEST(LayerLatency, DefaultOrdering) {
  Scenario s;
  for (auto cheap : {LayerId::FW, LayerId::META, LayerId::VAULT}) {
    EXPECT_GT(layer_latency(LayerId::IPS, s), layer_latency(cheap, s));
    EXPECT_GT(layer_latency(LayerId::ANTIMAL, s), layer_latency(cheap, s));
  }
  EXPECT_EQ(layer_latency(LayerId::FW, s), 1'000'000);
  EXPECT_EQ(layer_latency(LayerId::APP, s), 0);
  s.parameters.disabled_layers = {LayerId::IPS};
  EXPECT_EQ(layer_latency(LayerId::IPS, s), 0);
}

TEST(LayerLatency, ZeroLatenciesCompleteInstantly) {
  Scenario s = small_baseline();
  s.latencies.seconds = {0, 0, 0, 0, 0};
  auto r = run(s);
  for (const auto& rec : r.sessions) {
    if (rec.trace.outcome == Outcome::authorized) {
      ASSERT_EQ(rec.trace.completed_ns(), rec.trace.started_ns);
    }
  }
  EXPECT_EQ(authorized_latency(r.sessions).total_ns, 0);
}

TEST(LayerEvaluationMode, ConcurrentKeepsDecisionsAndNeverSlower) {
  Scenario s = all_archetypes(small_baseline());
  auto seq = run(s);
  s.parameters.layer_evaluation = LayerEvaluation::concurrent;
  auto con = run(s);
  ASSERT_EQ(seq.sessions.size(), con.sessions.size());
  for (std::size_t i = 0; i < seq.sessions.size(); ++i) {
    const auto& a = seq.sessions[i].trace;
    const auto& b = con.sessions[i].trace;
    ASSERT_EQ(a.session_id, b.session_id);
    ASSERT_EQ(a.verdicts, b.verdicts);
    ASSERT_EQ(a.outcome, b.outcome);
    ASSERT_LE(b.completed_ns() - b.started_ns, a.completed_ns() - a.started_ns);
  }
  EXPECT_LT(authorized_latency(con.sessions).total_ns, authorized_latency(seq.sessions).total_ns);
}

TEST(BinMetrics, SingleTraceLandsInItsBin) {
  std::vector<SessionRecord> recs{record_at(kSecond + kSecond / 2, Origin::tenant, std::nullopt)};
  auto m = bin_metrics(recs, kSecond);
  ASSERT_EQ(m.bins.size(), 2u);
  EXPECT_EQ(m.bins[1].at(Origin::tenant).authorized, 1u);
  EXPECT_EQ(m.bins[0].at(Origin::tenant).initiated, 0u);
  EXPECT_THROW(bin_metrics(recs, 0), Error);
}

TEST(BinMetrics, CountOracleOverMixedTraces) {
  std::mt19937_64 rng(31);
  std::vector<SessionRecord> recs;
  std::array<std::array<std::uint64_t, 6>, 2> expected{};  // 5 deny layers + authorized
  for (int i = 0; i < 100; ++i) {
    Origin o = rng() % 2 ? Origin::attacker : Origin::tenant;
    std::size_t pick = rng() % 6;
    std::optional<LayerId> deny = pick < 5 ? std::optional(kInspectionLayers[pick]) : std::nullopt;
    recs.push_back(record_at(static_cast<std::int64_t>(rng() % (10 * kSecond)), o, deny));
    ++expected[static_cast<std::size_t>(o)][pick];
  }
  auto m = bin_metrics(recs, kSecond / 4, 10 * kSecond);
  EXPECT_EQ(m.bins.size(), 40u);
  std::uint64_t all = 0;
  for (auto o : {Origin::tenant, Origin::attacker}) {
    Counters t = m.total(o);
    all += t.initiated;
    for (std::size_t l = 0; l < 5; ++l) EXPECT_EQ(t.denied[l], expected[static_cast<std::size_t>(o)][l]);
    EXPECT_EQ(t.authorized, expected[static_cast<std::size_t>(o)][5]);
    EXPECT_EQ(t.initiated, t.authorized + t.denied_total());
  }
  EXPECT_EQ(all, 100u);
}

TEST(Run, ZeroDurationIsEmpty) {
  Scenario s = small_baseline();
  s.duration = 0;
  auto r = run(s);
  EXPECT_TRUE(r.sessions.empty());
  EXPECT_TRUE(r.metrics.bins.empty());
  EXPECT_TRUE(r.events.empty());
}

TEST(Run, InvalidScenarioThrowsBeforeSimulating) {
  Scenario s = small_baseline();
  s.bin_width = 0;
  EXPECT_THROW(run(s), ScenarioError);
}

TEST(Run, BaselineScenarioAuthorizesTenantsAndDeniesAttackers) {
  auto r = run(with_external_attacker(small_baseline()));
  std::size_t tenants = 0, attackers = 0;
  for (const auto& rec : r.sessions) {
    ASSERT_FALSE(check_trace(rec.trace)) << rec.trace.session_id.str();
    ASSERT_EQ(rec.trace.verdicts.front().layer, LayerId::FW);
    ASSERT_EQ(rec.destination, "metadata/" + (rec.origin == Origin::tenant
                                                  ? rec.source.tenant_id.str()
                                                  : (rec.archetype == Archetype::masquerade
                                                         ? std::string("tenant-a")
                                                         : rec.source.tenant_id.str())));
    if (rec.origin == Origin::tenant) {
      ++tenants;
      ASSERT_EQ(rec.trace.outcome, Outcome::authorized);
      ASSERT_TRUE(rec.app_access);
    } else {
      ++attackers;
      ASSERT_EQ(rec.trace.outcome, Outcome::denied);
      ASSERT_EQ(rec.trace.denial_layer, expected_denial_layer(*rec.archetype));
      ASSERT_FALSE(rec.app_access);
    }
  }
  EXPECT_GT(tenants, 0u);
  EXPECT_GT(attackers, 0u);
  EXPECT_EQ(r.metrics.total(Origin::attacker).app_accesses, 0u);
}

TEST(Run, ConservationPerOriginAndBinPrefix) {
  auto r = run(all_archetypes(small_baseline()));
  for (auto o : {Origin::tenant, Origin::attacker}) {
    Counters prefix;
    for (const auto& bin : r.metrics.bins) {
      const Counters& c = bin.at(o);
      ASSERT_LE(c.app_accesses, c.authorized);
      prefix += c;
      ASSERT_EQ(prefix.initiated, prefix.authorized + prefix.denied_total());
    }
    EXPECT_EQ(prefix, r.metrics.total(o));
  }
  EXPECT_EQ(r.metrics.total(Origin::tenant).initiated + r.metrics.total(Origin::attacker).initiated,
            r.sessions.size());
}

TEST(Run, DeterministicAcrossRunsAndModes) {
  Scenario s = all_archetypes(small_baseline());
  auto a = run(s);
  auto b = run(s);
  SimulationOptions par;
  par.mode = ExecutionMode::parallel;
  par.threads = 4;
  auto c = run(s, par);
  const std::string ma = metrics_to_json(a.metrics).dump();
  EXPECT_EQ(ma, metrics_to_json(b.metrics).dump());
  EXPECT_EQ(ma, metrics_to_json(c.metrics).dump());
  EXPECT_EQ(traces_to_json(a), traces_to_json(c));
  ASSERT_EQ(a.events.size(), c.events.size());
  for (std::size_t i = 0; i < a.events.size(); ++i) {
    ASSERT_EQ(a.events[i].time_ns, c.events[i].time_ns);
    ASSERT_EQ(a.events[i].session, c.events[i].session);
  }
  s.seed += 1;
  EXPECT_NE(ma, metrics_to_json(run(s).metrics).dump());
}

TEST(Run, EventLogOrderedAndGated) {
  auto r = run(all_archetypes(small_baseline()));
  std::vector<int> app_events(r.sessions.size(), 0);
  for (std::size_t i = 0; i < r.events.size(); ++i) {
    const auto& e = r.events[i];
    if (i) ASSERT_LE(r.events[i - 1].time_ns, e.time_ns);
    ASSERT_GE(e.time_ns, 0);
    if (e.kind == EventKind::app_access) {
      const auto& rec = r.sessions[e.session];
      ASSERT_EQ(rec.trace.outcome, Outcome::authorized);
      ASSERT_EQ(e.controls_passed, rec.required_controls);
      ASSERT_EQ(rec.required_controls.size(), 2u);  // tier 1 -> tier 3
      ++app_events[e.session];
    }
  }
  for (std::size_t i = 0; i < r.sessions.size(); ++i) {
    ASSERT_EQ(app_events[i], r.sessions[i].app_access ? 1 : 0);
  }
}

TEST(Run, ZeroDaySessionsAuthorizeWithAnomalies) {
  auto r = run(all_archetypes(small_baseline()));
  std::size_t zero_day = 0;
  for (const auto& rec : r.sessions) {
    if (rec.archetype != Archetype::zero_day) continue;
    ++zero_day;
    ASSERT_EQ(rec.trace.outcome, Outcome::authorized);
    ASSERT_EQ(rec.anomalies, 1u);
    ASSERT_TRUE(rec.app_access);
    ASSERT_GT(rec.packets, 2u);
  }
  EXPECT_GT(zero_day, 0u);
  EXPECT_EQ(r.metrics.total(Origin::attacker).anomalies, zero_day);
}

TEST(Run, AnomalyEscalationDeniesFromTheNthOnward) {
  Scenario s = all_archetypes(small_baseline());
  s.parameters.anomaly_escalation = 3;
  auto r = run(s);
  std::size_t seen = 0;
  for (const auto& rec : r.sessions) {
    if (rec.archetype != Archetype::zero_day) continue;
    ++seen;
    if (seen < 3) ASSERT_EQ(rec.trace.outcome, Outcome::authorized) << seen;
    else ASSERT_EQ(rec.trace.denial_layer, LayerId::IPS) << seen;
  }
  EXPECT_GT(seen, 3u);
}

TEST(Run, EvidenceKeepsInitialPrefix) {
  auto r = run(all_archetypes(small_baseline()));
  for (const auto& rec : r.sessions) {
    ASSERT_LE(rec.initial_evidence, rec.evidence.size());
    if (rec.origin == Origin::attacker && rec.archetype != Archetype::external &&
        rec.archetype != Archetype::masquerade) {
      ASSERT_GE(rec.initial_evidence, 1u);
      ASSERT_EQ(rec.evidence.front().kind, EvidenceKind::exploit_payload);
    }
    if (rec.trace.denial_layer == LayerId::IPS || rec.trace.denial_layer == LayerId::ANTIMAL) {
      ASSERT_EQ(rec.evidence.back().kind, EvidenceKind::detection_record);
    }
  }
}

TEST(Run, AttackerOnlyScenarioDropsEveryBin) {
  Scenario s = with_external_attacker(small_baseline());
  s.lans.front().clients = 0;
  for (auto it = s.lans.begin() + 1; it != s.lans.end();) it = s.lans.erase(it);
  for (auto& a : s.attackers) a.intensity = 20.0;
  auto r = run(s);
  ASSERT_FALSE(r.metrics.bins.empty());
  for (std::size_t b = 1; b < r.metrics.bins.size(); ++b) {
    const Counters& c = r.metrics.bins[b].at(Origin::attacker);
    EXPECT_GT(c.dropped, 0u) << b;
    EXPECT_EQ(c.authorized, 0u) << b;
  }
  EXPECT_EQ(r.metrics.total(Origin::tenant).initiated, 0u);
}

TEST(Run, DisablingInspectionLayersRemovesExactlyTheirLatency) {
  Scenario s = small_baseline();
  auto full = authorized_latency(run(s).sessions);
  s.parameters.disabled_layers = {LayerId::IPS, LayerId::ANTIMAL};
  auto lite = authorized_latency(run(s).sessions);
  ASSERT_GT(full.count, 0u);
  // Without content inspection the insiders authorize too, so the counts
  // differ; compare the means exactly by cross-multiplying.
  const auto fc = static_cast<std::int64_t>(full.count);
  const auto lc = static_cast<std::int64_t>(lite.count);
  EXPECT_EQ(full.total_ns * lc - lite.total_ns * fc, 10'000'000 * fc * lc);
  EXPECT_GT(full.total_ns, fc * 5'000'000);
}

TEST(Run, SingleServerQueueingNeverFaster) {
  Scenario s = small_baseline();
  s.lans[0].arrival_rate = 50.0;  // enough load to queue at the 5 ms stations
  auto inf = run(s);
  s.parameters.queueing = Queueing::single_server;
  auto one = run(s);
  ASSERT_EQ(inf.sessions.size(), one.sessions.size());
  for (std::size_t i = 0; i < inf.sessions.size(); ++i) {
    ASSERT_EQ(inf.sessions[i].trace.verdicts, one.sessions[i].trace.verdicts);
    ASSERT_GE(one.sessions[i].trace.completed_ns(), inf.sessions[i].trace.completed_ns());
  }
  EXPECT_GT(authorized_latency(one.sessions).total_ns, authorized_latency(inf.sessions).total_ns);
}

}  // namespace
}  // namespace tierguard
