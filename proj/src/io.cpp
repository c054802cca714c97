#include "octopus/io.hpp"

#include <cmath>
#include <iomanip>
#include <json.hpp>
#include <sstream>

#include "octopus/error.hpp"

namespace octopus {

using nlohmann::json;

namespace {

[[noreturn]] void parse_error(const std::string& what) {
  throw Error(ErrorCode::ParseError, what);
}

json parse_json(std::string_view text, const char* what) {
  try {
    return json::parse(text.begin(), text.end());
  } catch (const json::parse_error& e) {
    parse_error(std::string(what) + ": " + e.what());
  }
}

template <typename T>
T get_field(const json& obj, const char* key, const char* what) {
  if (!obj.is_object() || !obj.contains(key)) {
    parse_error(std::string(what) + ": missing field '" + key + "'");
  }
  try {
    return obj.at(key).get<T>();
  } catch (const json::exception&) {
    parse_error(std::string(what) + ": field '" + key + "' has the wrong type");
  }
}

// JSON numbers (integral or decimal) and "p/q" strings.
Gb gb_from_json(const json& value) {
  if (value.is_number_integer()) return Gb(value.get<std::int64_t>());
  if (value.is_number_unsigned()) return Gb(value.get<std::uint64_t>());
  if (value.is_number_float()) return parse_gb(value.dump());
  if (value.is_string()) return parse_gb(value.get<std::string>());
  parse_error("expected a number of GB");
}

double positive_number(const json& obj, const char* key, double fallback,
                       const char* what) {
  if (!obj.contains(key)) return fallback;
  const json& v = obj.at(key);
  if (!v.is_number() || !(v.get<double>() > 0.0)) {
    parse_error(std::string(what) + ": '" + key + "' must be a positive number");
  }
  return v.get<double>();
}

std::string format_money(double dollars) {
  return std::to_string(std::llround(dollars));
}

std::string csv_field(const std::string& text) {
  if (text.find_first_of(",\"\n") == std::string::npos) return text;
  std::string out = "\"";
  for (char c : text) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

}  // namespace

RunConfig parse_config(std::string_view text) {
  const json doc = parse_json(text, "config");
  if (!doc.is_object()) parse_error("config: top level must be an object");
  RunConfig config;

  if (doc.contains("skus")) {
    const json& list = doc.at("skus");
    if (!list.is_array()) parse_error("config: 'skus' must be an array");
    config.skus.clear();
    for (const json& item : list) {
      MhdSku sku;
      sku.name = get_field<std::string>(item, "name", "config sku");
      // A SKU named like a built-in starts from the built-in values.
      if (const MhdSku* base = find_sku(builtin_skus(), sku.name)) sku = *base;
      if (item.contains("cxl_ports")) sku.cxl_ports = get_field<int>(item, "cxl_ports", "config sku");
      if (item.contains("ddr5_channels")) {
        sku.ddr5_channels = get_field<int>(item, "ddr5_channels", "config sku");
      }
      sku.die_area_mm2 = positive_number(item, "die_area_mm2", sku.die_area_mm2, "config sku");
      if (item.contains("unused_area_mm2")) {
        sku.unused_area_mm2 = get_field<double>(item, "unused_area_mm2", "config sku");
      }
      sku.capacity_gb = positive_number(item, "capacity_gb", sku.capacity_gb, "config sku");
      sku.latency_ns = positive_number(item, "latency_ns", sku.latency_ns, "config sku");
      sku.unit_cost = positive_number(item, "unit_cost", sku.unit_cost, "config sku");
      if (item.contains("good_dies")) sku.printed_good_dies = get_field<long>(item, "good_dies", "config sku");
      if (!sku.valid() || sku.capacity_gb <= 0.0 || sku.unit_cost <= 0.0) {
        parse_error("config: SKU '" + sku.name + "' is incomplete or inconsistent");
      }
      config.skus.push_back(std::move(sku));
    }
  }
  if (doc.contains("yield")) {
    const json& y = doc.at("yield");
    config.yield.wafer_diameter_mm =
        positive_number(y, "wafer_diameter_mm", config.yield.wafer_diameter_mm, "config yield");
    config.yield.defect_density_per_mm2 = positive_number(
        y, "defect_density_per_mm2", config.yield.defect_density_per_mm2, "config yield");
  }
  if (doc.contains("page_size")) {
    auto size = parse_page_size(get_field<std::string>(doc, "page_size", "config"));
    if (!size) parse_error("config: page_size must be 4KiB, 2MiB or 1GiB");
    config.page_size = *size;
  }
  if (doc.contains("quantization_gb")) {
    config.quantization_gb = gb_from_json(doc.at("quantization_gb"));
    if (config.quantization_gb <= 0) parse_error("config: quantization_gb must be positive");
  }
  if (doc.contains("search_budget")) {
    const json& b = doc.at("search_budget");
    if (!b.is_number_integer() || b.get<std::int64_t>() <= 0) {
      parse_error("config: search_budget must be a positive integer");
    }
    config.search_budget = b.get<std::uint64_t>();
  }
  if (doc.contains("mhd_capacity_gb")) {
    config.mhd_capacity_gb = gb_from_json(doc.at("mhd_capacity_gb"));
    if (*config.mhd_capacity_gb <= 0) parse_error("config: mhd_capacity_gb must be positive");
  }
  if (doc.contains("share_resolution_gb")) {
    config.share_resolution_gb = gb_from_json(doc.at("share_resolution_gb"));
    if (*config.share_resolution_gb <= 0) {
      parse_error("config: share_resolution_gb must be positive");
    }
  }
  return config;
}

std::string topology_to_json(const PodTopology& topology) {
  std::ostringstream out;
  out << "{\n";
  out << "  \"kind\": " << json(std::string(to_string(topology.kind()))).dump() << ",\n";
  if (const auto& p = topology.params()) {
    out << "  \"params\": {\"v\": " << p->v << ", \"b\": " << p->b << ", \"r\": " << p->r
        << ", \"k\": " << p->k << ", \"lambda\": " << p->lambda << "},\n";
  } else {
    out << "  \"params\": null,\n";
  }
  out << "  \"hosts\": [";
  for (std::size_t h = 0; h < topology.host_count(); ++h) {
    out << (h ? ", " : "") << '"' << host_name(HostId{h}) << '"';
  }
  out << "],\n  \"mhds\": [";
  for (std::size_t m = 0; m < topology.mhd_count(); ++m) {
    out << (m ? ", " : "") << '"' << mhd_name(MhdId{m}) << '"';
  }
  out << "],\n  \"edges\": [";
  const auto& edges = topology.edges();
  for (std::size_t i = 0; i < edges.size(); ++i) {
    out << (i ? ",\n" : "\n") << "    [\"" << host_name(edges[i].host) << "\", \""
        << mhd_name(edges[i].mhd) << "\"]";
  }
  out << (edges.empty() ? "" : "\n  ") << "],\n";
  out << "  \"multiplicity\": " << topology.multiplicity() << "\n";
  out << "}\n";
  return out.str();
}

namespace {

std::size_t expect_names(const json& list, char prefix, const char* field) {
  if (!list.is_array()) parse_error(std::string("topology: '") + field + "' must be an array");
  for (std::size_t i = 0; i < list.size(); ++i) {
    const std::string want = std::string(1, prefix) + std::to_string(i + 1);
    if (!list[i].is_string() || list[i].get<std::string>() != want) {
      parse_error(std::string("topology: '") + field + "' entry " + std::to_string(i) +
                  " must be \"" + want + "\"");
    }
  }
  return list.size();
}

}  // namespace

PodTopology topology_from_json(std::string_view text) {
  const json doc = parse_json(text, "topology");
  if (!doc.is_object()) parse_error("topology: top level must be an object");

  const auto kind = parse_topology_kind(get_field<std::string>(doc, "kind", "topology"));
  if (!kind) parse_error("topology: kind must be symmetric, regular or dense");

  std::optional<BibdParams> params;
  if (doc.contains("params") && !doc.at("params").is_null()) {
    const json& p = doc.at("params");
    params = BibdParams{get_field<int>(p, "v", "topology params"),
                        get_field<int>(p, "b", "topology params"),
                        get_field<int>(p, "r", "topology params"),
                        get_field<int>(p, "k", "topology params"),
                        get_field<int>(p, "lambda", "topology params")};
  }
  if (!params && *kind != TopologyKind::Symmetric) {
    parse_error("topology: octopus topologies need params");
  }
  if (params && *kind == TopologyKind::Symmetric) {
    parse_error("topology: symmetric topologies carry no params");
  }

  if (!doc.contains("hosts") || !doc.contains("mhds") || !doc.contains("edges")) {
    parse_error("topology: hosts, mhds and edges are required");
  }
  const std::size_t hosts = expect_names(doc.at("hosts"), 'H', "hosts");
  const std::size_t mhds = expect_names(doc.at("mhds"), 'P', "mhds");

  const json& edge_list = doc.at("edges");
  if (!edge_list.is_array()) parse_error("topology: 'edges' must be an array");
  std::vector<Edge> edges;
  // Resolves names against the declared lists.
  const PodTopology names(*kind, hosts, mhds, {}, std::nullopt);
  for (const json& e : edge_list) {
    if (!e.is_array() || e.size() != 2 || !e[0].is_string() || !e[1].is_string()) {
      parse_error("topology: every edge must be [\"H<i>\", \"P<j>\"]");
    }
    Edge edge;
    const std::string h = e[0].get<std::string>();
    const std::string m = e[1].get<std::string>();
    auto host = names.find_host(h);
    auto mhd = names.find_mhd(m);
    if (!host || !mhd) parse_error("topology: edge [" + h + ", " + m + "] names an unknown node");
    edge.host = *host;
    edge.mhd = *mhd;
    edges.push_back(edge);
  }
  int multiplicity = 1;
  if (doc.contains("multiplicity")) {
    multiplicity = get_field<int>(doc, "multiplicity", "topology");
    if (multiplicity < 1) parse_error("topology: multiplicity must be >= 1");
  }
  try {
    return PodTopology(*kind, hosts, mhds, std::move(edges), params, multiplicity);
  } catch (const Error& e) {
    parse_error(std::string("topology: ") + e.what());
  }
}

std::string topology_to_dot(const PodTopology& topology) {
  std::ostringstream out;
  out << "graph pod {\n";
  out << "  // " << to_string(topology.kind()) << " pod: " << topology.host_count()
      << " hosts, " << topology.mhd_count() << " MHDs\n";
  out << "  node [style=filled];\n";
  out << "  { rank=same;";
  for (std::size_t h = 0; h < topology.host_count(); ++h) {
    out << ' ' << host_name(HostId{h}) << " [shape=box, fillcolor=lightblue];";
  }
  out << " }\n  { rank=same;";
  for (std::size_t m = 0; m < topology.mhd_count(); ++m) {
    out << ' ' << mhd_name(MhdId{m}) << " [shape=ellipse, fillcolor=orange];";
  }
  out << " }\n";
  for (const Edge& e : topology.edges()) {
    out << "  " << host_name(e.host) << " -- " << mhd_name(e.mhd);
    if (topology.multiplicity() > 1) out << " [label=\"x" << topology.multiplicity() << "\"]";
    out << ";\n";
  }
  out << "}\n";
  return out.str();
}

std::string validation_to_text(const PodTopology& topology, const ValidationReport& report) {
  std::ostringstream out;
  auto status = [](bool ok) { return ok ? "PASS" : "FAIL"; };
  out << "kind: " << to_string(topology.kind()) << ", hosts: " << topology.host_count()
      << ", mhds: " << topology.mhd_count() << "\n";
  out << status(report.host_degree_violations.empty()) << " host degree = "
      << report.expected_host_degree << "\n";
  for (HostId h : report.host_degree_violations) {
    out << "  " << host_name(h) << " has degree " << topology.mhds_of(h).size() << "\n";
  }
  out << status(report.mhd_degree_violations.empty()) << " mhd degree = "
      << report.expected_mhd_degree << "\n";
  for (MhdId m : report.mhd_degree_violations) {
    out << "  " << mhd_name(m) << " has degree " << topology.hosts_of(m).size() << "\n";
  }
  out << status(report.lambda_ok()) << " pair coverage lambda = " << report.expected_lambda
      << "\n";
  for (const PairViolation& v : report.pair_violations) {
    out << "  " << host_name(v.a) << "-" << host_name(v.b) << " share " << v.shared
        << " MHDs\n";
  }
  out << status(report.two_hop_ok()) << " two-hop reachability\n";
  for (const auto& [a, b] : report.unreachable_pairs) {
    out << "  " << host_name(a) << "-" << host_name(b) << " unreachable\n";
  }
  out << status(report.edge_count_ok) << " edge-count identities\n";
  out << (report.passed() ? "VALID" : "INVALID") << "\n";
  return out.str();
}

std::vector<TraceEvent> parse_trace(std::string_view text, const PodTopology& topology,
                                    std::optional<AllocationPolicy> policy_override) {
  std::vector<TraceEvent> events;
  std::size_t line_no = 0;
  std::size_t start = 0;
  while (start < text.size()) {
    std::size_t end = text.find('\n', start);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = text.substr(start, end - start);
    start = end + 1;
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (line.find_first_not_of(" \t") == std::string_view::npos) continue;

    auto fail = [&](const std::string& what) {
      throw Error(ErrorCode::MalformedTrace, "line " + std::to_string(line_no) + ": " + what);
    };
    json obj;
    try {
      obj = json::parse(line.begin(), line.end());
    } catch (const json::parse_error&) {
      fail("not a JSON object");
    }
    if (!obj.is_object() || !obj.contains("op") || !obj.at("op").is_string()) {
      fail("expected an object with an \"op\" field");
    }
    TraceEvent event;
    event.line = line_no;
    const std::string op = obj.at("op").get<std::string>();
    if (op == "alloc") {
      event.op = TraceOp::Alloc;
      if (!obj.contains("host") || !obj.at("host").is_string()) fail("alloc needs \"host\"");
      const std::string host = obj.at("host").get<std::string>();
      event.host = topology.find_host(host);
      if (!event.host) fail("unknown host " + host);
      if (!obj.contains("gb")) fail("alloc needs \"gb\"");
      try {
        event.gb = gb_from_json(obj.at("gb"));
      } catch (const Error&) {
        fail("\"gb\" must be a number or \"p/q\" string");
      }
      if (event.gb <= 0) fail("\"gb\" must be positive");
      if (obj.contains("policy")) {
        if (!obj.at("policy").is_string()) fail("\"policy\" must be a string");
        auto policy = parse_policy(obj.at("policy").get<std::string>());
        if (!policy) fail("unknown policy " + obj.at("policy").get<std::string>());
        event.policy = *policy;
      }
      if (policy_override) event.policy = *policy_override;
    } else if (op == "free") {
      event.op = TraceOp::Free;
      if (!obj.contains("id") || !obj.at("id").is_string()) fail("free needs \"id\"");
      auto id = parse_allocation_id(obj.at("id").get<std::string>());
      if (!id) fail("bad allocation id " + obj.at("id").get<std::string>());
      event.id = *id;
    } else {
      fail("unknown op " + op);
    }
    events.push_back(std::move(event));
  }
  return events;
}

namespace {

nlohmann::ordered_json plan_to_json(const AllocationPlan& plan, const Gb& granularity) {
  auto shares = nlohmann::ordered_json::array();
  const auto quantized = quantize(plan, granularity);
  for (std::size_t i = 0; i < plan.shares.size(); ++i) {
    nlohmann::ordered_json share;
    share["mhd"] = mhd_name(plan.shares[i].mhd);
    share["gb"] = to_string(plan.shares[i].gb);
    share["gb_quantized"] = to_string(Gb(quantized[i].units) * granularity);
    shares.push_back(std::move(share));
  }
  return shares;
}

}  // namespace

std::string trace_report_to_json(const TraceReport& report, const Gb& granularity) {
  nlohmann::ordered_json doc;
  doc["summary"] = {
      {"events", report.events.size()},
      {"insufficient_capacity", report.insufficient_count},
      {"stranded", report.stranding_count},
  };
  auto events = nlohmann::ordered_json::array();
  for (const EventOutcome& o : report.events) {
    nlohmann::ordered_json e;
    e["index"] = o.index;
    e["line"] = o.line;
    e["op"] = o.op == TraceOp::Alloc ? "alloc" : "free";
    e["id"] = to_string(o.id);
    e["host"] = o.host ? host_name(*o.host) : "";
    e["status"] = std::string(to_string(o.status));
    e["request_gb"] = to_string(o.request);
    if (o.plan) e["shares"] = plan_to_json(*o.plan, granularity);
    if (o.op == TraceOp::Alloc) {
      e["host_free_gb"] = to_string(o.host_free);
      e["pod_free_gb"] = to_string(o.pod_free);
      e["stranded"] = o.stranded;
    }
    if (!o.message.empty()) e["message"] = o.message;
    events.push_back(std::move(e));
  }
  doc["events"] = std::move(events);
  auto peaks = nlohmann::ordered_json::array();
  for (std::size_t m = 0; m < report.peak_used.size(); ++m) {
    nlohmann::ordered_json p;
    p["mhd"] = mhd_name(MhdId{m});
    p["capacity_gb"] = to_string(report.capacity[m]);
    p["peak_used_gb"] = to_string(report.peak_used[m]);
    p["peak_utilization"] = to_string(report.peak_utilization(MhdId{m}));
    peaks.push_back(std::move(p));
  }
  doc["peak_utilization"] = std::move(peaks);
  return doc.dump(2) + "\n";
}

std::string queue_plan_to_json(const QueuePlan& plan) {
  nlohmann::ordered_json doc;
  doc["pairs"] = plan.regions.size();
  auto regions = nlohmann::ordered_json::array();
  for (const PairRegion& r : plan.regions) {
    regions.push_back({{"hosts", {host_name(r.a), host_name(r.b)}},
                       {"mhd", mhd_name(r.mhd)},
                       {"gb", to_string(r.gb)}});
  }
  doc["regions"] = std::move(regions);
  auto per_mhd = nlohmann::ordered_json::array();
  for (std::size_t m = 0; m < plan.per_mhd.size(); ++m) {
    per_mhd.push_back({{"mhd", mhd_name(MhdId{m})},
                       {"regions", plan.per_mhd[m].regions},
                       {"gb", to_string(plan.per_mhd[m].gb)}});
  }
  doc["per_mhd"] = std::move(per_mhd);
  return doc.dump(2) + "\n";
}

std::vector<SweepConfig> parse_sweep_configs(std::string_view text) {
  const json doc = parse_json(text, "sweep configs");
  const json* list = &doc;
  if (doc.is_object()) {
    if (!doc.contains("configs")) parse_error("sweep configs: missing 'configs'");
    list = &doc.at("configs");
  }
  if (!list->is_array()) parse_error("sweep configs: expected an array of configs");
  std::vector<SweepConfig> configs;
  for (std::size_t i = 0; i < list->size(); ++i) {
    const json& item = (*list)[i];
    SweepConfig c;
    c.id = item.contains("id") ? get_field<std::string>(item, "id", "sweep config")
                               : std::to_string(i + 1);
    auto kind = parse_topology_kind(get_field<std::string>(item, "kind", "sweep config"));
    if (!kind) parse_error("sweep config " + c.id + ": unknown kind");
    c.kind = *kind;
    c.host_ports = get_field<int>(item, "X", "sweep config");
    c.mhd_ports = get_field<int>(item, "N", "sweep config");
    c.sku = get_field<std::string>(item, "sku", "sweep config");
    if (item.contains("lambda")) c.lambda = get_field<int>(item, "lambda", "sweep config");
    if (item.contains("multiplicity")) {
      c.multiplicity = get_field<int>(item, "multiplicity", "sweep config");
    }
    configs.push_back(std::move(c));
  }
  return configs;
}

std::string sweep_to_csv(const std::vector<SweepRow>& rows) {
  std::ostringstream out;
  out << "config,kind,N,X,pod_size,mhd_count,sku,cost_per_host,note\n";
  for (const SweepRow& r : rows) {
    out << csv_field(r.config_id) << ',' << to_string(r.kind) << ',' << r.mhd_ports << ','
        << r.host_ports << ',';
    if (r.skipped()) {
      out << ",," << csv_field(r.sku) << ",," << csv_field("skipped: " + *r.skip_reason);
    } else {
      out << r.pod_size << ',' << r.mhd_count << ',' << csv_field(r.sku) << ','
          << format_money(r.cost_per_host) << ',';
    }
    out << '\n';
  }
  return out.str();
}

std::string curve_to_csv(const std::vector<CurveSeries>& series) {
  std::ostringstream out;
  out << "kind,X,pod_size\n";
  for (const CurveSeries& s : series) {
    for (const CurvePoint& p : s.points) {
      out << to_string(s.kind) << ',' << p.host_ports << ',' << p.pod_size << '\n';
    }
  }
  return out.str();
}

std::string cost_table(const std::vector<MhdSku>& skus, const YieldModel& model,
                       bool analytic, TableFormat format, std::string_view reference) {
  const DieSource source = analytic ? DieSource::Analytic : DieSource::Printed;
  const MhdSku* ref = find_sku(skus, reference);
  const MhdSku* anchor = find_sku(skus, "XLarge");

  std::vector<std::vector<std::string>> cells;
  cells.push_back({"sku", "cxl_ports", "ddr5_channels", "die_area_mm2", "unused_area_mm2",
                   "good_dies", "relative_cost_pct", "unit_cost", "latency_ns"});
  auto fmt = [](double v) {
    std::ostringstream s;
    s << v;
    return s.str();
  };
  for (const MhdSku& sku : skus) {
    std::string dies = "";
    std::string relative = "";
    std::string cost = format_money(sku.unit_cost);
    if (analytic || sku.printed_good_dies) {
      dies = std::to_string(good_dies(sku, model, source));
      if (ref && (analytic || ref->printed_good_dies)) {
        relative = std::to_string(
            std::llround(100.0 * relative_cost(sku, *ref, model, source)));
      }
    }
    if (analytic) {
      cost = anchor ? format_money(estimate_unit_cost(sku, *anchor, kXLargeAnchorCost, model,
                                                      DieSource::Analytic))
                    : "";
    }
    const std::string latency =
        (sku.latency_is_lower_bound ? ">" : "") + fmt(sku.latency_ns);
    cells.push_back({sku.name, std::to_string(sku.cxl_ports), std::to_string(sku.ddr5_channels),
                     fmt(sku.die_area_mm2), fmt(sku.unused_area_mm2), dies, relative, cost,
                     latency});
  }

  std::ostringstream out;
  if (format == TableFormat::Csv) {
    for (const auto& row : cells) {
      for (std::size_t i = 0; i < row.size(); ++i) out << (i ? "," : "") << csv_field(row[i]);
      out << '\n';
    }
    return out.str();
  }
  std::vector<std::size_t> width(cells.front().size(), 0);
  for (const auto& row : cells) {
    for (std::size_t i = 0; i < row.size(); ++i) width[i] = std::max(width[i], row[i].size());
  }
  for (const auto& row : cells) {
    for (std::size_t i = 0; i < row.size(); ++i) {
      out << (i ? "  " : "") << std::left << std::setw(static_cast<int>(width[i])) << row[i];
    }
    out << '\n';
  }
  std::string text = out.str();
  // Trim padding at line ends.
  std::string trimmed;
  std::istringstream lines(text);
  for (std::string line; std::getline(lines, line);) {
    line.erase(line.find_last_not_of(' ') + 1);
    trimmed += line + '\n';
  }
  return trimmed;
}

}  // namespace octopus
