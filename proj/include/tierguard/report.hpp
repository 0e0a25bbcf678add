// Copyright 2026 The Tierguard Authors
//
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <string>
#include <string_view>

#include <json.hpp>

#include "tierguard/scenario.hpp"
#include "tierguard/sim.hpp"

namespace tierguard {

/// Frozen column order of the CSV metrics series.
inline constexpr std::string_view kCsvHeader =
    "bin_start,origin,initiated,authorized,denied_fw,denied_meta,denied_vault,denied_ips,"
    "denied_antimal,dropped,anomalies,app_accesses";

/// Cloud service model a control sits in: firewalls are infrastructure,
/// the four content inspections are platform services.
std::string_view service_model(LayerId layer) noexcept;

nlohmann::json counters_to_json(const Counters& c);
nlohmann::json metrics_to_json(const Metrics& m);
std::string metrics_to_csv(const Metrics& m);

/// One JSON object per line inside a JSON array.
std::string traces_to_json(const SimulationResult& result);

nlohmann::json build_report(const Scenario& scenario, const SimulationResult& result);

/// Human-readable digest of a report document.
std::string format_report(const nlohmann::json& report);

}  // namespace tierguard
