// Copyright 2026 The Tierguard Authors
//
// SPDX-License-Identifier: Apache-2.0

#include "tierguard/pipeline.hpp"

#include <algorithm>
#include <array>
#include <future>

namespace tierguard {

std::vector<LayerDescriptor> PipelineConfig::default_layers() {
  std::vector<LayerDescriptor> out;
  for (auto layer : kInspectionLayers) out.push_back({layer, true, 0});
  return out;
}

const LayerDescriptor& PipelineConfig::descriptor(LayerId layer) const {
  return layers.at(layer_index(layer));
}

LayerVerdict inspect_firewall(const SessionPacket& packet, const RepositoryQueries& repos) {
  const VmId& vm = packet.vm().vm_id;
  if (repos.fw(vm, packet.credentials()) == Flag::permit) {
    return {LayerId::FW, Flag::permit, "firewall entry matched"};
  }
  if (!repos.fw_registered(vm)) return {LayerId::FW, Flag::deny, "no firewall entry"};
  return {LayerId::FW, Flag::deny, "credential mismatch"};
}

std::pair<LayerVerdict, std::vector<std::string>> inspect_metadata(
    const SessionPacket& packet, const RepositoryQueries& repos) {
  const TenantId& tenant = packet.vm().tenant_id;
  std::vector<std::string> challenged;
  try {
    challenged = repos.challenge(tenant, packet.nonce());
  } catch (const UnknownTenant&) {
    return {{LayerId::META, Flag::deny, "unknown tenant"}, {}};
  }
  Flag f = repos.meta(tenant, packet.metadata_responses(), challenged);
  return {{LayerId::META, f, f == Flag::permit ? "metadata matched" : "metadata mismatch"},
          std::move(challenged)};
}

LayerVerdict inspect_vault(const SessionPacket& packet, const RepositoryQueries& repos) {
  if (!packet.key_proof()) return {LayerId::VAULT, Flag::deny, "no key proof"};
  Flag f = repos.vault(packet.vm().vm_id, packet.key_proof(), packet.session_id());
  return {LayerId::VAULT, f, f == Flag::permit ? "key proof verified" : "key proof rejected"};
}

std::pair<LayerVerdict, SessionPacket> inspect_ips(const SessionPacket& packet,
                                                   const RepositoryQueries& repos,
                                                   const PipelineConfig& config,
                                                   const InspectionContext& ctx) {
  if (auto hit = repos.ips(packet.payload())) {
    auto out = append_evidence(packet, {LayerId::IPS, EvidenceKind::detection_record,
                                        "ips signature " + *hit});
    return {{LayerId::IPS, Flag::deny, "exploit signature " + *hit}, std::move(out)};
  }
  if (packet.payload().size() > config.anomaly_threshold) {
    auto out = append_evidence(
        packet, {LayerId::IPS, EvidenceKind::anomaly_report,
                 "payload of " + std::to_string(packet.payload().size()) +
                     " bytes exceeds anomaly threshold " +
                     std::to_string(config.anomaly_threshold)});
    if (config.anomaly_escalation && ctx.prior_anomalies + 1 >= *config.anomaly_escalation) {
      return {{LayerId::IPS, Flag::deny, "anomaly escalation"}, std::move(out)};
    }
    return {{LayerId::IPS, Flag::permit, "anomaly reported"}, std::move(out)};
  }
  return {{LayerId::IPS, Flag::permit, "no exploit signature"}, packet};
}

std::pair<LayerVerdict, SessionPacket> inspect_antimalware(const SessionPacket& packet,
                                                           const RepositoryQueries& repos) {
  if (auto hit = repos.antimalware(packet.payload())) {
    auto out = append_evidence(packet, {LayerId::ANTIMAL, EvidenceKind::detection_record,
                                        "malware signature " + *hit});
    return {{LayerId::ANTIMAL, Flag::deny, "malware signature " + *hit}, std::move(out)};
  }
  return {{LayerId::ANTIMAL, Flag::permit, "no malware signature"}, packet};
}

namespace {

// What one layer decides about the untouched input packet. Every layer reads
// only fields that no earlier layer modifies, so results can be computed in
// any order and committed afterwards.
struct LayerResult {
  LayerVerdict verdict;
  std::vector<std::string> challenged;
  std::vector<EvidenceEntry> added_evidence;
};

LayerResult evaluate_layer(LayerId layer, const SessionPacket& in, const RepositoryQueries& repos,
                           const PipelineConfig& config, const InspectionContext& ctx) {
  if (!config.descriptor(layer).enabled) {
    return {{layer, Flag::permit, "layer disabled"}, {}, {}};
  }
  auto added_since = [&](const SessionPacket& out) {
    return std::vector<EvidenceEntry>(out.evidence().begin() + in.evidence().size(),
                                      out.evidence().end());
  };
  switch (layer) {
    case LayerId::FW: return {inspect_firewall(in, repos), {}, {}};
    case LayerId::META: {
      auto [v, fields] = inspect_metadata(in, repos);
      return {std::move(v), std::move(fields), {}};
    }
    case LayerId::VAULT: return {inspect_vault(in, repos), {}, {}};
    case LayerId::IPS: {
      auto [v, out] = inspect_ips(in, repos, config, ctx);
      return {std::move(v), {}, added_since(out)};
    }
    case LayerId::ANTIMAL: {
      auto [v, out] = inspect_antimalware(in, repos);
      return {std::move(v), {}, added_since(out)};
    }
    case LayerId::APP: break;
  }
  throw Error("APP is not an inspection layer");
}

void check_config(const PipelineConfig& config) {
  if (config.layers.size() != kInspectionLayerCount) {
    throw Error("pipeline must declare exactly the five inspection layers");
  }
  for (std::size_t i = 0; i < kInspectionLayerCount; ++i) {
    if (config.layers[i].layer != kInspectionLayers[i]) {
      throw Error("pipeline layers must follow FW, META, VAULT, IPS, ANTIMAL");
    }
    if (config.layers[i].latency_ns < 0) throw Error("negative layer latency");
  }
}

std::int64_t effective_latency(const LayerDescriptor& d) { return d.enabled ? d.latency_ns : 0; }

}  // namespace

SessionOutcome run_pipeline(const SessionPacket& packet, const RepositoryQueries& repos,
                            const PipelineConfig& config, const InspectionContext& ctx) {
  check_config(config);

  std::array<std::optional<LayerResult>, kInspectionLayerCount> results;
  if (config.evaluation == LayerEvaluation::concurrent) {
    std::array<std::future<LayerResult>, kInspectionLayerCount> pending;
    for (std::size_t i = 0; i < kInspectionLayerCount; ++i) {
      pending[i] = std::async(std::launch::async, [&, i] {
        return evaluate_layer(kInspectionLayers[i], packet, repos, config, ctx);
      });
    }
    for (std::size_t i = 0; i < kInspectionLayerCount; ++i) results[i] = pending[i].get();
  }

  SessionOutcome outcome{{}, Flag::deny, packet};
  outcome.trace.session_id = packet.session_id();
  outcome.trace.started_ns = config.start_ns;

  std::int64_t elapsed = 0;
  for (std::size_t i = 0; i < kInspectionLayerCount; ++i) {
    const LayerId layer = kInspectionLayers[i];
    if (!results[i]) results[i] = evaluate_layer(layer, packet, repos, config, ctx);
    LayerResult& r = *results[i];

    const std::int64_t lat = effective_latency(config.descriptor(layer));
    // Concurrent layers all start on arrival; a verdict commits once it and
    // every earlier layer has finished.
    elapsed = config.evaluation == LayerEvaluation::concurrent ? std::max(elapsed, lat)
                                                               : elapsed + lat;

    if (layer == LayerId::META) outcome.trace.challenged_fields = r.challenged;
    for (auto& e : r.added_evidence) outcome.packet = append_evidence(outcome.packet, e);
    const Flag flag = r.verdict.flag;
    outcome.trace = record_verdict(std::move(outcome.trace), std::move(r.verdict),
                                   config.start_ns + elapsed);
    if (flag == Flag::deny) break;
  }
  outcome.final_flag = to_flag(outcome.trace.outcome == Outcome::authorized);
  return outcome;
}

Flag oracle_decision(const MembershipVector& v) {
  return to_flag(v.fw == 1 && v.meta == 1 && v.vault == 1 && v.ips == 0 && v.antimal == 0);
}

}  // namespace tierguard
