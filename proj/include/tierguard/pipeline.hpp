// Copyright 2026 The Tierguard Authors
//
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "tierguard/core.hpp"
#include "tierguard/repositories.hpp"

namespace tierguard {

/// One stage of the inspection stack. Disabled stages still emit a permit
/// verdict (with zero latency) so traces keep their five-layer shape.
struct LayerDescriptor {
  LayerId layer = LayerId::FW;
  bool enabled = true;
  std::int64_t latency_ns = 0;

  friend bool operator==(const LayerDescriptor&, const LayerDescriptor&) = default;
};

enum class LayerEvaluation : std::uint8_t { sequential, concurrent };

struct PipelineConfig {
  std::vector<LayerDescriptor> layers = default_layers();
  /// Payloads longer than this many bytes raise an anomaly report at IPS.
  std::size_t anomaly_threshold = 4096;
  /// When set, the N-th anomaly from the same source VM is denied at IPS.
  std::optional<std::uint32_t> anomaly_escalation;
  LayerEvaluation evaluation = LayerEvaluation::sequential;
  std::int64_t start_ns = 0;

  static std::vector<LayerDescriptor> default_layers();
  const LayerDescriptor& descriptor(LayerId layer) const;
};

/// State the pipeline needs from outside a single packet.
struct InspectionContext {
  std::uint32_t prior_anomalies = 0;
};

/// Membership of the session contents in each store; 1 = present.
struct MembershipVector {
  int fw = 0;
  int meta = 0;
  int vault = 0;
  int ips = 0;
  int antimal = 0;

  friend bool operator==(const MembershipVector&, const MembershipVector&) = default;
};

struct SessionOutcome {
  SessionTrace trace;
  Flag final_flag = Flag::deny;
  SessionPacket packet;
};

LayerVerdict inspect_firewall(const SessionPacket& packet, const RepositoryQueries& repos);

/// Returns the verdict and the fields that were challenged.
std::pair<LayerVerdict, std::vector<std::string>> inspect_metadata(
    const SessionPacket& packet, const RepositoryQueries& repos);

LayerVerdict inspect_vault(const SessionPacket& packet, const RepositoryQueries& repos);

std::pair<LayerVerdict, SessionPacket> inspect_ips(const SessionPacket& packet,
                                                   const RepositoryQueries& repos,
                                                   const PipelineConfig& config = {},
                                                   const InspectionContext& ctx = {});

std::pair<LayerVerdict, SessionPacket> inspect_antimalware(const SessionPacket& packet,
                                                           const RepositoryQueries& repos);

/// FW -> META -> VAULT -> IPS -> ANTIMAL, stopping at the first deny.
/// Throws Error if `config.layers` is not the canonical five in order.
SessionOutcome run_pipeline(const SessionPacket& packet, const RepositoryQueries& repos,
                            const PipelineConfig& config = {},
                            const InspectionContext& ctx = {});

/// Reference permit rule: in FW, META and VAULT, and in neither IPS nor ANTIMAL.
Flag oracle_decision(const MembershipVector& v);

}  // namespace tierguard
