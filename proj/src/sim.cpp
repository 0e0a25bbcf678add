// Copyright 2026 The Tierguard Authors
//
// SPDX-License-Identifier: Apache-2.0

#include "tierguard/sim.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <map>
#include <queue>
#include <thread>
#include <tuple>

namespace tierguard {

std::string_view to_string(Origin o) noexcept {
  return o == Origin::tenant ? "tenant" : "attacker";
}

std::string_view to_string(EventKind k) noexcept {
  switch (k) {
    case EventKind::session_arrival: return "session_arrival";
    case EventKind::layer_complete: return "layer_complete";
    case EventKind::app_access: return "app_access";
  }
  return "?";
}

std::uint64_t Counters::denied_total() const noexcept {
  std::uint64_t n = 0;
  for (auto d : denied) n += d;
  return n;
}

Counters& Counters::operator+=(const Counters& o) noexcept {
  initiated += o.initiated;
  authorized += o.authorized;
  for (std::size_t i = 0; i < denied.size(); ++i) denied[i] += o.denied[i];
  dropped += o.dropped;
  anomalies += o.anomalies;
  app_accesses += o.app_accesses;
  return *this;
}

Counters Metrics::total(Origin o) const noexcept {
  Counters c;
  for (const auto& b : bins) c += b.at(o);
  return c;
}

double exponential_draw(std::mt19937_64& rng, double rate) {
  const double u = static_cast<double>(rng() >> 11) * 0x1.0p-53;
  return -std::log1p(-u) / rate;
}

std::mt19937_64 stream_rng(std::uint64_t seed, std::uint64_t stream) {
  // splitmix64 finaliser decorrelates neighbouring (seed, stream) pairs.
  std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (stream + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  z ^= z >> 31;
  return std::mt19937_64(z);
}

std::vector<SessionRequest> generate_workload(const LanDecl& lan, std::uint64_t stream,
                                              std::int64_t begin_ns, std::int64_t end_ns,
                                              std::mt19937_64& rng) {
  std::vector<SessionRequest> out;
  if (end_ns <= begin_ns || lan.arrival_rate <= 0.0 || lan.vms_per_client == 0) return out;
  const double begin = to_seconds(begin_ns);
  for (std::uint32_t c = 0; c < lan.clients; ++c) {
    double t = begin;
    for (;;) {
      t += exponential_draw(rng, lan.arrival_rate);
      const std::int64_t at = to_ns(t);
      if (at >= end_ns) break;
      SessionRequest r;
      r.arrival_ns = at;
      r.client = c;
      r.source = {lan_vm_id(lan.tenant, c, static_cast<std::uint32_t>(rng() % lan.vms_per_client)),
                  lan.tenant, 1};
      out.push_back(std::move(r));
    }
  }
  std::stable_sort(out.begin(), out.end(), [](const SessionRequest& a, const SessionRequest& b) {
    return std::tie(a.arrival_ns, a.client) < std::tie(b.arrival_ns, b.client);
  });
  for (std::size_t i = 0; i < out.size(); ++i) out[i].nonce = (stream << 40) | i;
  return out;
}

std::int64_t layer_latency(LayerId layer, const Scenario& s) {
  if (!is_inspection_layer(layer)) return 0;
  const auto& disabled = s.parameters.disabled_layers;
  if (std::find(disabled.begin(), disabled.end(), layer) != disabled.end()) return 0;
  return to_ns(s.latencies.seconds[layer_index(layer)]);
}

Metrics bin_metrics(std::span<const SessionRecord> sessions, std::int64_t bin_width_ns,
                    std::optional<std::int64_t> horizon_ns) {
  if (bin_width_ns <= 0) throw Error("bin width must be positive");
  Metrics m;
  m.bin_width_ns = bin_width_ns;
  std::size_t nbins = 0;
  if (horizon_ns) {
    nbins = static_cast<std::size_t>((*horizon_ns + bin_width_ns - 1) / bin_width_ns);
  }
  for (const auto& s : sessions) {
    nbins = std::max(nbins, static_cast<std::size_t>(s.trace.started_ns / bin_width_ns) + 1);
  }
  m.bins.resize(nbins);
  for (std::size_t i = 0; i < nbins; ++i) m.bins[i].start_ns = static_cast<std::int64_t>(i) * bin_width_ns;

  for (const auto& s : sessions) {
    auto& c = m.bins[static_cast<std::size_t>(s.trace.started_ns / bin_width_ns)]
                  .by_origin[static_cast<std::size_t>(s.origin)];
    ++c.initiated;
    if (s.trace.outcome == Outcome::authorized) {
      ++c.authorized;
    } else if (s.trace.outcome == Outcome::denied && s.trace.denial_layer) {
      ++c.denied[layer_index(*s.trace.denial_layer)];
      c.dropped += s.packets;
    }
    c.anomalies += s.anomalies;
    if (s.app_access) ++c.app_accesses;
  }
  return m;
}

LatencySummary authorized_latency(std::span<const SessionRecord> sessions) {
  LatencySummary out;
  for (const auto& s : sessions) {
    if (s.trace.outcome != Outcome::authorized) continue;
    out.total_ns += s.trace.completed_ns() - s.trace.started_ns;
    ++out.count;
  }
  return out;
}

namespace {

struct PendingSession {
  SessionRecord record;
  SessionPacket packet;
};

std::uint32_t packet_count(const std::string& payload) {
  return static_cast<std::uint32_t>(std::max<std::size_t>(1, (payload.size() + kPacketBytes - 1) / kPacketBytes));
}

SessionPacket client_packet(const SessionRequest& r, const LanDecl& lan, const RepositorySet& repos,
                            std::mt19937_64& rng) {
  const std::uint32_t span = lan.payload_max - lan.payload_min + 1;
  const std::size_t len = lan.payload_min + rng() % span;
  SessionPacket p = new_session(r.source, derived_fw_token(r.source.vm_id),
                                clean_filler(repos, len, rng), r.nonce);
  // The client answers whatever the metadata form asks, from its own profile.
  const Profile& profile = repos.meta_db.profiles.at(r.source.tenant_id);
  Profile answers;
  for (const auto& field : repos.challenge(r.source.tenant_id, r.nonce)) {
    answers[field] = profile.at(field);
  }
  return p.with_metadata(std::move(answers))
      .with_key_proof(key_proof(derived_vault_key(r.source.vm_id), p.session_id().str()));
}

std::vector<PendingSession> generate_sessions(const Scenario& s, const RepositorySet& repos,
                                              const TierGraph& graph) {
  const std::int64_t end_ns = to_ns(s.duration);
  const VmId& app = graph.application_vm();
  auto control_ids = [&](const VmIdentity& src, const VmId& target) {
    std::vector<ControlNode> path =
        graph.contains(src.vm_id) ? graph.required_controls(src.vm_id, target)
                                  : graph.controls_between_tiers(src.tier, graph.tier(target));
    std::vector<std::string> ids;
    for (const auto& c : path) ids.push_back(c.control_id);
    return ids;
  };

  std::vector<PendingSession> out;
  for (std::size_t i = 0; i < s.lans.size(); ++i) {
    const auto& lan = s.lans[i];
    auto rng = stream_rng(s.seed, i);
    const auto path = control_ids({VmId("lan-client"), lan.tenant, 1}, app);
    for (const auto& r : generate_workload(lan, i, 0, end_ns, rng)) {
      SessionRecord rec;
      rec.origin = Origin::tenant;
      rec.source_label = lan.tenant.str();
      rec.source = r.source;
      rec.target = app;
      rec.required_controls = path;
      rec.trace.started_ns = r.arrival_ns;
      out.push_back({std::move(rec), client_packet(r, lan, repos, rng)});
    }
  }

  for (std::size_t j = 0; j < s.attackers.size(); ++j) {
    const auto& a = s.attackers[j];
    const std::uint64_t stream = s.lans.size() + j;
    auto rng = stream_rng(s.seed, stream);
    const double rate = attacker_intensity(s, a);
    const auto path = control_ids(a.source_vm, a.target);
    ForgeOptions opts;
    opts.anomaly_threshold = s.parameters.anomaly_threshold;
    opts.impersonate = impersonation_target(s, a);
    std::uint64_t seq = 0;
    double t = 0.0;
    for (;;) {
      t += exponential_draw(rng, rate);
      const std::int64_t at = to_ns(t);
      if (at >= end_ns) break;
      opts.nonce = (stream << 40) | seq++;
      SessionRecord rec;
      rec.origin = Origin::attacker;
      rec.source_label = a.id;
      rec.archetype = a.archetype;
      rec.source = a.source_vm;
      rec.target = a.target;
      rec.required_controls = path;
      rec.trace.started_ns = at;
      out.push_back({std::move(rec), forge_session(a, repos, rng, opts)});
    }
  }

  std::sort(out.begin(), out.end(), [](const PendingSession& x, const PendingSession& y) {
    return std::tie(x.record.trace.started_ns, x.packet.session_id()) <
           std::tie(y.record.trace.started_ns, y.packet.session_id());
  });
  return out;
}

// Runs the inspection pipeline for every session. Sessions from one source VM
// are evaluated in arrival order so anomaly escalation sees a stable history;
// distinct sources are independent and may run on different workers.
void decide(std::vector<PendingSession>& sessions, const RepositorySet& repos,
            const PipelineConfig& base, const SimulationOptions& options) {
  std::map<VmId, std::vector<std::size_t>> by_source;
  for (std::size_t i = 0; i < sessions.size(); ++i) {
    by_source[sessions[i].record.source.vm_id].push_back(i);
  }
  std::vector<const std::vector<std::size_t>*> groups;
  groups.reserve(by_source.size());
  for (const auto& [vm, idx] : by_source) groups.push_back(&idx);

  auto run_group = [&](const std::vector<std::size_t>& idx) {
    InspectionContext ctx;
    for (std::size_t i : idx) {
      PendingSession& ps = sessions[i];
      PipelineConfig cfg = base;
      cfg.start_ns = ps.record.trace.started_ns;
      SessionOutcome o = run_pipeline(ps.packet, repos, cfg, ctx);
      ps.record.initial_evidence = ps.packet.evidence().size();
      std::uint32_t anomalies = 0;
      for (std::size_t e = ps.record.initial_evidence; e < o.packet.evidence().size(); ++e) {
        if (o.packet.evidence()[e].kind == EvidenceKind::anomaly_report) ++anomalies;
      }
      ctx.prior_anomalies += anomalies;
      ps.record.anomalies = anomalies;
      ps.record.trace = std::move(o.trace);
      ps.record.evidence = o.packet.evidence();
      ps.record.packets = packet_count(ps.packet.payload());
      ps.record.destination = "metadata/" + ps.packet.vm().tenant_id.str();
    }
  };

  if (options.mode == ExecutionMode::sequential) {
    for (const auto* g : groups) run_group(*g);
    return;
  }
  unsigned workers = options.threads ? options.threads : std::max(2u, std::thread::hardware_concurrency());
  std::atomic<std::size_t> next{0};
  std::vector<std::jthread> pool;
  for (unsigned w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (std::size_t g = next++; g < groups.size(); g = next++) run_group(*groups[g]);
    });
  }
}

struct QueuedEvent {
  std::int64_t time_ns;
  const std::string* session_id;
  int order;  // 0 arrival, 1 + layer index for completions, 7 app access
  std::size_t session;

  bool operator>(const QueuedEvent& o) const {
    return std::tie(time_ns, *session_id, order) > std::tie(o.time_ns, *o.session_id, o.order);
  }
};

constexpr int kAppOrder = 7;

// Replays every decided session through the layer stations, assigning the
// simulated completion time of each verdict, and logs the event stream.
void replay(std::vector<SessionRecord>& records, const Scenario& s, const TierGraph& graph,
            const SimulationOptions& options, std::vector<EventLogEntry>& log) {
  const bool concurrent = s.parameters.layer_evaluation == LayerEvaluation::concurrent;
  const bool single_server = s.parameters.queueing == Queueing::single_server;
  std::array<std::int64_t, kInspectionLayerCount> latency{};
  std::array<bool, kInspectionLayerCount> enabled{};
  for (auto l : kInspectionLayers) {
    latency[layer_index(l)] = layer_latency(l, s);
    const auto& d = s.parameters.disabled_layers;
    enabled[layer_index(l)] = std::find(d.begin(), d.end(), l) == d.end();
  }
  std::array<std::int64_t, kInspectionLayerCount> station_free{};

  std::map<std::string, const ControlNode*> control_by_id;
  for (const auto& c : graph.controls()) control_by_id[c.control_id] = &c;

  struct Progress {
    std::array<bool, kInspectionLayerCount> done{};
    std::size_t committed = 0;
    bool finished = false;
  };
  std::vector<Progress> progress(records.size());
  std::priority_queue<QueuedEvent, std::vector<QueuedEvent>, std::greater<>> queue;

  auto push = [&](std::int64_t t, std::size_t i, int order) {
    queue.push({t, &records[i].trace.session_id.str(), order, i});
  };
  auto dispatch = [&](std::size_t i, std::size_t layer, std::int64_t t) {
    std::int64_t start = t;
    if (single_server && enabled[layer]) {
      start = std::max(t, station_free[layer]);
      station_free[layer] = start + latency[layer];
    }
    push(start + latency[layer], i, 1 + static_cast<int>(layer));
  };
  auto emit = [&](EventLogEntry e) {
    if (options.record_events) log.push_back(std::move(e));
  };

  for (std::size_t i = 0; i < records.size(); ++i) push(records[i].trace.started_ns, i, 0);

  while (!queue.empty()) {
    const QueuedEvent ev = queue.top();
    queue.pop();
    SessionRecord& rec = records[ev.session];
    Progress& pr = progress[ev.session];
    const std::size_t verdicts = rec.trace.verdicts.size();

    if (ev.order == 0) {
      emit({ev.time_ns, EventKind::session_arrival, ev.session, {}, {}, {}});
      if (concurrent) {
        for (std::size_t l = 0; l < kInspectionLayerCount; ++l) dispatch(ev.session, l, ev.time_ns);
      } else if (verdicts > 0) {
        dispatch(ev.session, 0, ev.time_ns);
      }
      continue;
    }

    if (ev.order == kAppOrder) {
      rec.app_access = true;
      emit({ev.time_ns, EventKind::app_access, ev.session, LayerId::APP, {}, rec.controls_passed});
      continue;
    }

    const std::size_t layer = static_cast<std::size_t>(ev.order - 1);
    pr.done[layer] = true;
    if (pr.finished) continue;  // speculative work after a deny

    // Commit every verdict whose layer and predecessors are complete.
    while (pr.committed < verdicts && pr.done[pr.committed]) {
      const std::size_t k = pr.committed++;
      const LayerVerdict& v = rec.trace.verdicts[k];
      rec.trace.timestamps_ns[k] = ev.time_ns;

      std::vector<std::string> passed_now;
      if (v.flag == Flag::permit) {
        for (const auto& id : rec.required_controls) {
          if (std::find(rec.controls_passed.begin(), rec.controls_passed.end(), id) !=
              rec.controls_passed.end()) {
            continue;
          }
          const ControlNode* c = control_by_id.at(id);
          bool satisfied = std::all_of(c->gate_layers.begin(), c->gate_layers.end(), [&](LayerId g) {
            return layer_index(g) <= k && rec.trace.verdicts[layer_index(g)].flag == Flag::permit;
          });
          if (satisfied) {
            rec.controls_passed.push_back(id);
            passed_now.push_back(id);
          }
        }
      }
      emit({ev.time_ns, EventKind::layer_complete, ev.session, kInspectionLayers[k], v.flag,
            std::move(passed_now)});

      if (v.flag == Flag::deny) {
        pr.finished = true;
        break;
      }
      if (k + 1 == kInspectionLayerCount) {
        pr.finished = true;
        if (rec.trace.outcome == Outcome::authorized &&
            rec.controls_passed.size() == rec.required_controls.size()) {
          push(ev.time_ns, ev.session, kAppOrder);
        }
        break;
      }
      if (!concurrent) dispatch(ev.session, k + 1, ev.time_ns);
    }
  }
}

}  // namespace

SimulationResult run(const Scenario& s, const SimulationOptions& options) {
  auto diagnostics = validate_scenario(s);
  if (has_errors(diagnostics)) throw ScenarioError(std::move(diagnostics));

  const RepositorySet repos = load_repositories(s);
  const TierGraph graph = TierGraph::build(s.hierarchy);
  const PipelineConfig config = pipeline_config(s);

  std::vector<PendingSession> pending = generate_sessions(s, repos, graph);
  decide(pending, repos, config, options);

  SimulationResult result;
  result.sessions.reserve(pending.size());
  for (auto& p : pending) result.sessions.push_back(std::move(p.record));
  pending.clear();

  replay(result.sessions, s, graph, options, result.events);
  result.metrics = bin_metrics(result.sessions, to_ns(s.bin_width), to_ns(s.duration));
  return result;
}

}  // namespace tierguard
