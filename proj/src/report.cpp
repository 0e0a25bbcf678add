// Copyright 2026 The Tierguard Authors
//
// SPDX-License-Identifier: Apache-2.0

#include "tierguard/report.hpp"

#include <sstream>

#include "tierguard/scenario_io.hpp"

namespace tierguard {

using nlohmann::json;

namespace {

constexpr std::array<Origin, 2> kOrigins = {Origin::tenant, Origin::attacker};

std::string lower(std::string_view s) {
  std::string out(s);
  for (char& c : out) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return out;
}

json layer_names(const std::vector<LayerId>& layers) {
  json arr = json::array();
  for (auto l : layers) arr.push_back(std::string(to_string(l)));
  return arr;
}

json session_to_json(const SessionRecord& r) {
  json verdicts = json::array();
  for (std::size_t i = 0; i < r.trace.verdicts.size(); ++i) {
    const auto& v = r.trace.verdicts[i];
    verdicts.push_back({{"layer", std::string(to_string(v.layer))},
                        {"flag", to_int(v.flag)},
                        {"reason", v.reason},
                        {"at_ns", r.trace.timestamps_ns[i]}});
  }
  json evidence = json::array();
  for (const auto& e : r.evidence) {
    evidence.push_back({{"layer", std::string(to_string(e.layer))},
                        {"kind", std::string(to_string(e.kind))},
                        {"detail", e.detail}});
  }
  json j = {{"session_id", r.trace.session_id.str()},
            {"origin", std::string(to_string(r.origin))},
            {"source", r.source_label},
            {"source_vm", r.source.vm_id.str()},
            {"tenant", r.source.tenant_id.str()},
            {"target", r.target.str()},
            {"destination", r.destination},
            {"started_ns", r.trace.started_ns},
            {"outcome", std::string(to_string(r.trace.outcome))},
            {"denial_layer", r.trace.denial_layer ? json(std::string(to_string(*r.trace.denial_layer)))
                                                  : json(nullptr)},
            {"challenged_fields", r.trace.challenged_fields},
            {"verdicts", std::move(verdicts)},
            {"evidence", std::move(evidence)},
            {"initial_evidence", r.initial_evidence},
            {"packets", r.packets},
            {"anomalies", r.anomalies},
            {"required_controls", r.required_controls},
            {"controls_passed", r.controls_passed},
            {"app_access", r.app_access}};
  j["archetype"] = r.archetype ? json(std::string(to_string(*r.archetype))) : json(nullptr);
  return j;
}

}  // namespace

std::string_view service_model(LayerId layer) noexcept {
  return layer == LayerId::FW ? "IaaS" : "PaaS";
}

json counters_to_json(const Counters& c) {
  json j = {{"initiated", c.initiated},
            {"authorized", c.authorized},
            {"dropped", c.dropped},
            {"anomalies", c.anomalies},
            {"app_accesses", c.app_accesses},
            {"denied_total", c.denied_total()}};
  json denied = json::object();
  for (auto l : kInspectionLayers) denied[std::string(to_string(l))] = c.denied[layer_index(l)];
  j["denied"] = std::move(denied);
  return j;
}

json metrics_to_json(const Metrics& m) {
  json series = json::array();
  for (std::size_t b = 0; b < m.bins.size(); ++b) {
    for (auto o : kOrigins) {
      json row = counters_to_json(m.bins[b].at(o));
      row["bin"] = b;
      row["bin_start"] = to_seconds(m.bins[b].start_ns);
      row["origin"] = std::string(to_string(o));
      series.push_back(std::move(row));
    }
  }
  json totals = json::object();
  for (auto o : kOrigins) totals[std::string(to_string(o))] = counters_to_json(m.total(o));
  return {{"bin_width", to_seconds(m.bin_width_ns)}, {"series", std::move(series)}, {"totals", std::move(totals)}};
}

std::string metrics_to_csv(const Metrics& m) {
  std::ostringstream out;
  out << kCsvHeader << '\n';
  for (const auto& bin : m.bins) {
    for (auto o : kOrigins) {
      const Counters& c = bin.at(o);
      // Same number rendering as the JSON series.
      out << json(to_seconds(bin.start_ns)).dump() << ',' << to_string(o) << ',' << c.initiated << ','
          << c.authorized;
      for (auto d : c.denied) out << ',' << d;
      out << ',' << c.dropped << ',' << c.anomalies << ',' << c.app_accesses << '\n';
    }
  }
  return out.str();
}

std::string traces_to_json(const SimulationResult& result) {
  std::string out = "[\n";
  for (std::size_t i = 0; i < result.sessions.size(); ++i) {
    out += session_to_json(result.sessions[i]).dump();
    out += i + 1 < result.sessions.size() ? ",\n" : "\n";
  }
  out += "]\n";
  return out;
}

json build_report(const Scenario& s, const SimulationResult& result) {
  json nist = json::array();
  for (auto l : kInspectionLayers) {
    nist.push_back({{"control", std::string(to_string(l))},
                    {"service_model", std::string(service_model(l))},
                    {"nist_layer", l == LayerId::FW ? 4 : 5}});
  }

  json controls = json::array();
  for (const auto& c : s.hierarchy.controls) {
    json tags = json::array();
    for (auto l : c.gate_layers) tags.push_back(std::string(service_model(l)));
    controls.push_back({{"id", c.control_id},
                        {"from_tier", c.from_tier},
                        {"to_tier", c.to_tier},
                        {"gate_layers", layer_names(c.gate_layers)},
                        {"service_models", std::move(tags)}});
  }

  json summary = json::object();
  auto latency = authorized_latency(result.sessions);
  for (auto o : kOrigins) {
    Counters c = result.metrics.total(o);
    json entry = counters_to_json(c);
    json denied_by_layer = json::object();
    for (auto l : kInspectionLayers) denied_by_layer[lower(to_string(l))] = c.denied[layer_index(l)];
    entry["denied"] = std::move(denied_by_layer);
    summary[std::string(to_string(o))] = std::move(entry);
  }
  summary["authorized_latency"] = {{"count", latency.count},
                                   {"total_ns", latency.total_ns},
                                   {"mean_seconds", latency.mean_seconds()}};
  summary["sessions"] = result.sessions.size();

  json series = metrics_to_json(result.metrics);
  return {{"config", scenario_to_json(s)},
          {"nist_mapping", std::move(nist)},
          {"hierarchy_controls", std::move(controls)},
          {"summary", std::move(summary)},
          {"bin_width", series["bin_width"]},
          {"series", std::move(series["series"])}};
}

std::string format_report(const json& report) {
  std::ostringstream out;
  const json& cfg = report.at("config").at("meta");
  out << "scenario " << cfg.at("name").get<std::string>() << " (seed " << cfg.at("seed").dump()
      << ", " << cfg.at("duration").dump() << " s)\n";
  const json& summary = report.at("summary");
  for (const char* origin : {"tenant", "attacker"}) {
    const json& c = summary.at(origin);
    out << origin << ": initiated " << c.at("initiated").dump() << ", authorized "
        << c.at("authorized").dump() << ", denied";
    for (const auto& [layer, n] : c.at("denied").items()) out << ' ' << layer << '=' << n.dump();
    out << ", dropped " << c.at("dropped").dump() << ", anomalies " << c.at("anomalies").dump() << '\n';
  }
  out << "mean authorized latency " << summary.at("authorized_latency").at("mean_seconds").dump()
      << " s\n";
  out << "controls:";
  for (const auto& m : report.at("nist_mapping")) {
    out << ' ' << m.at("control").get<std::string>() << '=' << m.at("service_model").get<std::string>();
  }
  out << '\n';
  return out.str();
}

}  // namespace tierguard
