// Copyright 2026 The Tierguard Authors
//
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <array>
#include <compare>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "tierguard/digest.hpp"

namespace tierguard {

/// Thin wrapper that keeps identifiers of different kinds from mixing.
template <typename Tag>
class Id {
 public:
  Id() = default;
  explicit Id(std::string value) : value_(std::move(value)) {}

  const std::string& str() const noexcept { return value_; }
  bool empty() const noexcept { return value_.empty(); }

  friend auto operator<=>(const Id&, const Id&) = default;
  friend bool operator==(const Id&, const Id&) = default;

 private:
  std::string value_;
};

using VmId = Id<struct VmIdTag>;
using TenantId = Id<struct TenantIdTag>;
using SessionId = Id<struct SessionIdTag>;

/// Inspection layers in the order a session must traverse them.
enum class LayerId : std::uint8_t { FW = 0, META, VAULT, IPS, ANTIMAL, APP };

inline constexpr std::size_t kInspectionLayerCount = 5;
inline constexpr std::array<LayerId, kInspectionLayerCount> kInspectionLayers = {
    LayerId::FW, LayerId::META, LayerId::VAULT, LayerId::IPS, LayerId::ANTIMAL};

constexpr std::size_t layer_index(LayerId layer) noexcept {
  return static_cast<std::size_t>(layer);
}
constexpr bool is_inspection_layer(LayerId layer) noexcept {
  return layer != LayerId::APP;
}

std::string_view to_string(LayerId layer) noexcept;
std::optional<LayerId> parse_layer(std::string_view name) noexcept;

struct VmIdentity {
  VmId vm_id;
  TenantId tenant_id;
  int tier = 1;

  friend bool operator==(const VmIdentity&, const VmIdentity&) = default;
};

enum class EvidenceKind : std::uint8_t { exploit_payload, anomaly_report, detection_record };

std::string_view to_string(EvidenceKind kind) noexcept;

struct EvidenceEntry {
  LayerId layer = LayerId::FW;
  EvidenceKind kind = EvidenceKind::detection_record;
  std::string detail;

  friend bool operator==(const EvidenceEntry&, const EvidenceEntry&) = default;
};

/// Permit/deny encoded exactly as 1/0.
enum class Flag : std::uint8_t { deny = 0, permit = 1 };

constexpr int to_int(Flag f) noexcept { return static_cast<int>(f); }
constexpr Flag to_flag(bool permit) noexcept { return permit ? Flag::permit : Flag::deny; }

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Raised when a verdict is recorded out of layer order or after finalization.
class SequencingError : public Error {
 public:
  using Error::Error;
};

/// Immutable session descriptor. Every "mutation" returns a derived packet;
/// the evidence list of a derived packet always has the source's list as prefix.
class SessionPacket {
 public:
  using Metadata = std::map<std::string, std::string>;

  const SessionId& session_id() const noexcept { return session_id_; }
  const VmIdentity& vm() const noexcept { return vm_; }
  const std::string& credentials() const noexcept { return credentials_; }
  const Metadata& metadata_responses() const noexcept { return metadata_; }
  const std::optional<Digest>& key_proof() const noexcept { return key_proof_; }
  const std::string& payload() const noexcept { return payload_; }
  const std::vector<EvidenceEntry>& evidence() const noexcept { return evidence_; }
  std::uint64_t nonce() const noexcept { return nonce_; }

  [[nodiscard]] SessionPacket with_metadata(Metadata responses) const;
  [[nodiscard]] SessionPacket with_key_proof(std::optional<Digest> proof) const;

  friend bool operator==(const SessionPacket&, const SessionPacket&) = default;

 private:
  friend SessionPacket new_session(VmIdentity, std::string, std::string, std::uint64_t);
  friend SessionPacket append_evidence(const SessionPacket&, EvidenceEntry);

  SessionPacket() = default;

  SessionId session_id_;
  VmIdentity vm_;
  std::string credentials_;
  Metadata metadata_;
  std::optional<Digest> key_proof_;
  std::string payload_;
  std::vector<EvidenceEntry> evidence_;
  std::uint64_t nonce_ = 0;
};

/// Deterministic session identifier: hex digest of (vm_id, nonce).
SessionId derive_session_id(const VmId& vm_id, std::uint64_t nonce);

/// Throws Error when vm_id or tenant_id is empty.
SessionPacket new_session(VmIdentity vm, std::string credentials, std::string payload,
                          std::uint64_t nonce);

/// Throws Error if entry.layer is APP.
SessionPacket append_evidence(const SessionPacket& packet, EvidenceEntry entry);

struct LayerVerdict {
  LayerId layer = LayerId::FW;
  Flag flag = Flag::deny;
  std::string reason;

  friend bool operator==(const LayerVerdict&, const LayerVerdict&) = default;
};

enum class Outcome : std::uint8_t { pending, authorized, denied };

std::string_view to_string(Outcome outcome) noexcept;

/// Ordered per-layer verdicts for one session. Simulated times are integer
/// nanoseconds so latency arithmetic stays exact.
struct SessionTrace {
  SessionId session_id;
  std::vector<LayerVerdict> verdicts;
  std::vector<std::int64_t> timestamps_ns;
  Outcome outcome = Outcome::pending;
  std::optional<LayerId> denial_layer;
  std::vector<std::string> challenged_fields;
  std::int64_t started_ns = 0;

  bool is_final() const noexcept { return outcome != Outcome::pending; }
  std::int64_t completed_ns() const noexcept {
    return timestamps_ns.empty() ? started_ns : timestamps_ns.back();
  }

  friend bool operator==(const SessionTrace&, const SessionTrace&) = default;
};

/// Appends a verdict. The next layer must be exactly the successor of the last
/// recorded one (FW first) and the trace must not be final.
SessionTrace record_verdict(SessionTrace trace, LayerVerdict verdict, std::int64_t at_ns = 0);

/// Re-checks every SessionTrace invariant; returns a description of the first
/// violation, or nullopt.
std::optional<std::string> check_trace(const SessionTrace& trace);

}  // namespace tierguard

template <typename Tag>
struct std::hash<tierguard::Id<Tag>> {
  std::size_t operator()(const tierguard::Id<Tag>& id) const noexcept {
    return std::hash<std::string>{}(id.str());
  }
};
