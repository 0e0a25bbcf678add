// Copyright 2026 The Tierguard Authors
//
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <random>
#include <span>
#include <string>
#include <vector>

#include "tierguard/scenario.hpp"

namespace tierguard {

enum class Origin : std::uint8_t { tenant = 0, attacker = 1 };

std::string_view to_string(Origin o) noexcept;

/// Evaluation of independent sessions: one thread, or a worker pool. Output
/// is byte-identical either way.
enum class ExecutionMode : std::uint8_t { sequential, parallel };

/// Bytes per simulated IP packet when counting drops.
inline constexpr std::size_t kPacketBytes = 1500;

/// One session arrival produced by a workload generator.
struct SessionRequest {
  std::int64_t arrival_ns = 0;
  std::uint32_t client = 0;
  VmIdentity source;
  std::uint64_t nonce = 0;
};

/// Memoryless arrivals for every client of a LAN over [begin_ns, end_ns), in
/// time order. Nonces are `stream << 40 | sequence` so they never repeat
/// across streams of one run.
std::vector<SessionRequest> generate_workload(const LanDecl& lan, std::uint64_t stream,
                                              std::int64_t begin_ns, std::int64_t end_ns,
                                              std::mt19937_64& rng);

/// Exponential variate built from raw generator output so draws do not depend
/// on the standard library's distribution implementations.
double exponential_draw(std::mt19937_64& rng, double rate);

/// Independent generator per workload stream.
std::mt19937_64 stream_rng(std::uint64_t seed, std::uint64_t stream);

/// Configured service time of a layer in nanoseconds; 0 if disabled.
std::int64_t layer_latency(LayerId layer, const Scenario& scenario);

struct SessionRecord {
  SessionTrace trace;
  Origin origin = Origin::tenant;
  /// Tenant id for LAN sessions, attacker id otherwise.
  std::string source_label;
  std::optional<Archetype> archetype;
  VmIdentity source;
  VmId target;
  /// First hop assigned to the session: the claimed tenant's metadata server.
  std::string destination;
  std::vector<EvidenceEntry> evidence;
  std::size_t initial_evidence = 0;
  std::uint32_t packets = 1;
  std::uint32_t anomalies = 0;
  std::vector<std::string> required_controls;
  std::vector<std::string> controls_passed;
  bool app_access = false;
};

struct Counters {
  std::uint64_t initiated = 0;
  std::uint64_t authorized = 0;
  std::array<std::uint64_t, kInspectionLayerCount> denied{};
  std::uint64_t dropped = 0;
  std::uint64_t anomalies = 0;
  std::uint64_t app_accesses = 0;

  std::uint64_t denied_total() const noexcept;
  Counters& operator+=(const Counters& o) noexcept;
  friend bool operator==(const Counters&, const Counters&) = default;
};

struct MetricsBin {
  std::int64_t start_ns = 0;
  std::array<Counters, 2> by_origin{};

  const Counters& at(Origin o) const noexcept { return by_origin[static_cast<std::size_t>(o)]; }
  friend bool operator==(const MetricsBin&, const MetricsBin&) = default;
};

struct Metrics {
  std::int64_t bin_width_ns = 0;
  std::vector<MetricsBin> bins;

  Counters total(Origin o) const noexcept;
  friend bool operator==(const Metrics&, const Metrics&) = default;
};

/// Aggregates sessions into bins by arrival time. With a horizon the series
/// spans ceil(horizon / width) bins; otherwise it ends at the last arrival.
Metrics bin_metrics(std::span<const SessionRecord> sessions, std::int64_t bin_width_ns,
                    std::optional<std::int64_t> horizon_ns = std::nullopt);

enum class EventKind : std::uint8_t { session_arrival, layer_complete, app_access };

std::string_view to_string(EventKind k) noexcept;

struct EventLogEntry {
  std::int64_t time_ns = 0;
  EventKind kind = EventKind::session_arrival;
  std::size_t session = 0;
  std::optional<LayerId> layer;
  std::optional<Flag> flag;
  std::vector<std::string> controls_passed;
};

struct SimulationOptions {
  ExecutionMode mode = ExecutionMode::sequential;
  /// Worker count for parallel mode; 0 picks max(2, hardware threads).
  unsigned threads = 0;
  bool record_events = true;
};

struct SimulationResult {
  Metrics metrics;
  std::vector<SessionRecord> sessions;
  std::vector<EventLogEntry> events;
};

/// Validates, generates workloads, inspects every session and replays the
/// timing through the layer stations. Throws ScenarioError on invalid input.
SimulationResult run(const Scenario& scenario, const SimulationOptions& options = {});

/// Sum and count of end-to-end latency over authorized sessions.
struct LatencySummary {
  std::int64_t total_ns = 0;
  std::uint64_t count = 0;

  double mean_seconds() const noexcept {
    return count ? to_seconds(total_ns) / static_cast<double>(count) : 0.0;
  }
};

LatencySummary authorized_latency(std::span<const SessionRecord> sessions);

}  // namespace tierguard
