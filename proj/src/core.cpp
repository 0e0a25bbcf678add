// Copyright 2026 The Tierguard Authors
//
// SPDX-License-Identifier: Apache-2.0

#include "tierguard/core.hpp"

#include <string>

namespace tierguard {

std::string_view to_string(LayerId layer) noexcept {
  switch (layer) {
    case LayerId::FW: return "FW";
    case LayerId::META: return "META";
    case LayerId::VAULT: return "VAULT";
    case LayerId::IPS: return "IPS";
    case LayerId::ANTIMAL: return "ANTIMAL";
    case LayerId::APP: return "APP";
  }
  return "?";
}

std::optional<LayerId> parse_layer(std::string_view name) noexcept {
  for (auto layer : {LayerId::FW, LayerId::META, LayerId::VAULT, LayerId::IPS, LayerId::ANTIMAL,
                     LayerId::APP}) {
    if (to_string(layer) == name) return layer;
  }
  return std::nullopt;
}

std::string_view to_string(EvidenceKind kind) noexcept {
  switch (kind) {
    case EvidenceKind::exploit_payload: return "exploit_payload";
    case EvidenceKind::anomaly_report: return "anomaly_report";
    case EvidenceKind::detection_record: return "detection_record";
  }
  return "?";
}

std::string_view to_string(Outcome outcome) noexcept {
  switch (outcome) {
    case Outcome::pending: return "pending";
    case Outcome::authorized: return "authorized";
    case Outcome::denied: return "denied";
  }
  return "?";
}

SessionId derive_session_id(const VmId& vm_id, std::uint64_t nonce) {
  auto d = digest_fields({"session", vm_id.str(), std::to_string(nonce)});
  // 128 bits is plenty for uniqueness within a run and keeps traces readable.
  return SessionId(to_hex(d).substr(0, 32));
}

SessionPacket new_session(VmIdentity vm, std::string credentials, std::string payload,
                          std::uint64_t nonce) {
  if (vm.vm_id.empty()) throw Error("session requires a non-empty vm_id");
  if (vm.tenant_id.empty()) throw Error("session requires a non-empty tenant_id");
  SessionPacket p;
  p.session_id_ = derive_session_id(vm.vm_id, nonce);
  p.vm_ = std::move(vm);
  p.credentials_ = std::move(credentials);
  p.payload_ = std::move(payload);
  p.nonce_ = nonce;
  return p;
}

SessionPacket SessionPacket::with_metadata(Metadata responses) const {
  SessionPacket p = *this;
  p.metadata_ = std::move(responses);
  return p;
}

SessionPacket SessionPacket::with_key_proof(std::optional<Digest> proof) const {
  SessionPacket p = *this;
  p.key_proof_ = proof;
  return p;
}

SessionPacket append_evidence(const SessionPacket& packet, EvidenceEntry entry) {
  if (!is_inspection_layer(entry.layer)) {
    throw Error("evidence must be attributed to an inspection layer");
  }
  SessionPacket p = packet;
  p.evidence_.push_back(std::move(entry));
  return p;
}

SessionTrace record_verdict(SessionTrace trace, LayerVerdict verdict, std::int64_t at_ns) {
  if (trace.is_final()) {
    throw SequencingError("trace " + trace.session_id.str() + " is already " +
                          std::string(to_string(trace.outcome)));
  }
  if (!is_inspection_layer(verdict.layer)) {
    throw SequencingError("APP is not an inspection layer");
  }
  const std::size_t expected = trace.verdicts.size();
  if (layer_index(verdict.layer) != expected) {
    throw SequencingError("expected verdict for " +
                          std::string(to_string(kInspectionLayers[expected])) + ", got " +
                          std::string(to_string(verdict.layer)));
  }
  const LayerId layer = verdict.layer;
  const Flag flag = verdict.flag;
  trace.verdicts.push_back(std::move(verdict));
  trace.timestamps_ns.push_back(at_ns);
  if (flag == Flag::deny) {
    trace.outcome = Outcome::denied;
    trace.denial_layer = layer;
  } else if (layer == LayerId::ANTIMAL) {
    trace.outcome = Outcome::authorized;
  }
  return trace;
}

std::optional<std::string> check_trace(const SessionTrace& t) {
  if (t.verdicts.size() > kInspectionLayerCount) return "more verdicts than inspection layers";
  if (t.timestamps_ns.size() != t.verdicts.size()) return "timestamp count mismatch";
  for (std::size_t i = 0; i < t.verdicts.size(); ++i) {
    if (t.verdicts[i].layer != kInspectionLayers[i]) return "verdict layers are not a prefix";
    bool last = i + 1 == t.verdicts.size();
    if (t.verdicts[i].flag == Flag::deny && !last) return "verdict recorded after a deny";
  }
  for (std::size_t i = 1; i < t.timestamps_ns.size(); ++i) {
    if (t.timestamps_ns[i] < t.timestamps_ns[i - 1]) return "timestamps decrease";
  }
  bool all_permit = t.verdicts.size() == kInspectionLayerCount;
  for (const auto& v : t.verdicts) all_permit = all_permit && v.flag == Flag::permit;
  if ((t.outcome == Outcome::authorized) != all_permit) return "authorized iff all five permit";
  if (t.outcome == Outcome::denied) {
    if (!t.denial_layer || t.verdicts.empty() || t.verdicts.back().flag != Flag::deny ||
        t.verdicts.back().layer != *t.denial_layer) {
      return "denial layer must equal the final deny verdict";
    }
  } else if (t.denial_layer) {
    return "denial layer set on a non-denied trace";
  }
  if (t.outcome == Outcome::pending && !t.verdicts.empty() &&
      t.verdicts.back().flag == Flag::deny) {
    return "deny verdict without denied outcome";
  }
  return std::nullopt;
}

}  // namespace tierguard
