#include "mobilab/config.hpp"

#include <charconv>
#include <cstdio>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>

#include "mobilab/errors.hpp"

namespace mobilab {

ExperimentPlan LabConfig::plan() const {
    ExperimentPlan p = experiment;
    p.base = scenario;
    p.traffic = traffic;
    p.sim = sim;
    return p;
}

namespace {

std::string_view trim(std::string_view s) {
    const char* ws = " \t\r\n";
    auto b = s.find_first_not_of(ws);
    if (b == std::string_view::npos) return {};
    auto e = s.find_last_not_of(ws);
    return s.substr(b, e - b + 1);
}

template <typename T>
T parse_number(std::string_view text) {
    T value{};
    auto [end, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
    if (ec != std::errc() || end != text.data() + text.size())
        throw ConfigError("'" + std::string(text) + "' is not a valid number");
    return value;
}

std::vector<std::string_view> split_list(std::string_view text) {
    std::vector<std::string_view> out;
    while (!text.empty()) {
        auto comma = text.find(',');
        out.push_back(trim(text.substr(0, comma)));
        if (comma == std::string_view::npos) break;
        text.remove_prefix(comma + 1);
    }
    return out;
}

using Setter = std::function<void(LabConfig&, std::string_view)>;

template <typename T>
Setter number(T ScenarioConfig::*field) {
    return [field](LabConfig& c, std::string_view v) { c.scenario.*field = parse_number<T>(v); };
}
template <typename T>
Setter number(T SimParams::*field) {
    return [field](LabConfig& c, std::string_view v) { c.sim.*field = parse_number<T>(v); };
}
template <typename T>
Setter number(T TrafficConfig::*field) {
    return [field](LabConfig& c, std::string_view v) { c.traffic.*field = parse_number<T>(v); };
}

const std::map<std::string, std::map<std::string, Setter>, std::less<>>& key_table() {
    static const std::map<std::string, std::map<std::string, Setter>, std::less<>> table = {
        {"scenario",
         {
             {"model",
              [](LabConfig& c, std::string_view v) {
                  auto m = parse_model(v);
                  if (!m) throw ConfigError("unknown model '" + std::string(v) + "'");
                  c.scenario.model = *m;
              }},
             {"node_count", number(&ScenarioConfig::node_count)},
             {"area_width", number(&ScenarioConfig::area_width)},
             {"area_height", number(&ScenarioConfig::area_height)},
             {"min_speed", number(&ScenarioConfig::min_speed)},
             {"max_speed", number(&ScenarioConfig::max_speed)},
             {"max_pause", number(&ScenarioConfig::max_pause)},
             {"duration", number(&ScenarioConfig::duration)},
             {"radio_range_metrics", number(&ScenarioConfig::radio_range)},
             {"sample_interval", number(&ScenarioConfig::sample_interval)},
             {"group_size", number(&ScenarioConfig::group_size)},
             {"gm_alpha", number(&ScenarioConfig::gm_alpha)},
             {"gm_update_interval", number(&ScenarioConfig::gm_update_interval)},
             {"gm_speed_sigma", number(&ScenarioConfig::gm_speed_sigma)},
             {"gm_direction_sigma", number(&ScenarioConfig::gm_direction_sigma)},
             {"rpgm_max_deviation", number(&ScenarioConfig::rpgm_max_deviation)},
             {"ncmm_roam_radius", number(&ScenarioConfig::ncmm_roam_radius)},
             {"group_drift_speed", number(&ScenarioConfig::group_drift_speed)},
             {"seed", number(&ScenarioConfig::seed)},
         }},
        {"routing",
         {
             {"transmission_range_routing", number(&SimParams::routing_radio_range)},
             {"data_rate", number(&SimParams::data_rate)},
             {"per_hop_processing", number(&SimParams::per_hop_processing)},
             {"rreq_ttl_max", number(&SimParams::rreq_ttl_max)},
             {"route_lifetime", number(&SimParams::route_lifetime)},
             {"discovery_timeout", number(&SimParams::discovery_timeout)},
             {"max_buffered_per_flow", number(&SimParams::max_buffered_per_flow)},
             {"rreq_retries", number(&SimParams::rreq_retries)},
             {"broadcast_jitter_max", number(&SimParams::broadcast_jitter_max)},
             {"rreq_holddown", number(&SimParams::rreq_holddown)},
             {"max_connections", number(&TrafficConfig::connections)},
             {"packet_size", number(&TrafficConfig::packet_size)},
             {"sending_rate", number(&TrafficConfig::rate)},
             {"flow_start_spread", number(&TrafficConfig::start_spread)},
             {"simulation_time", number(&TrafficConfig::duration)},
         }},
        {"experiment",
         {
             {"models",
              [](LabConfig& c, std::string_view v) {
                  c.experiment.models.clear();
                  for (std::string_view name : split_list(v)) {
                      auto m = parse_model(name);
                      if (!m) throw ConfigError("unknown model '" + std::string(name) + "'");
                      c.experiment.models.push_back(*m);
                  }
              }},
             {"speed_points",
              [](LabConfig& c, std::string_view v) {
                  c.experiment.speed_points.clear();
                  for (std::string_view s : split_list(v))
                      c.experiment.speed_points.push_back(parse_number<double>(s));
              }},
             {"seeds",
              [](LabConfig& c, std::string_view v) { c.experiment.seeds = parse_number<int>(v); }},
             {"outputs",
              [](LabConfig& c, std::string_view v) {
                  if (v == "metrics") c.experiment.outputs = Outputs::Metrics;
                  else if (v == "performance") c.experiment.outputs = Outputs::Performance;
                  else if (v == "both") c.experiment.outputs = Outputs::Both;
                  else throw ConfigError("outputs must be metrics, performance or both");
              }},
             {"parallelism",
              [](LabConfig& c, std::string_view v) {
                  c.experiment.parallelism = parse_number<unsigned>(v);
              }},
         }},
    };
    return table;
}

}  // namespace

LabConfig parse_config(std::string_view text, std::string_view origin) {
    LabConfig config;
    const auto& table = key_table();
    const std::map<std::string, Setter>* section = nullptr;
    std::string section_name;
    std::size_t line_no = 0;

    auto fail = [&](const std::string& what) -> ConfigError {
        return ConfigError(std::string(origin) + ":" + std::to_string(line_no) + ": " + what);
    };

    std::istringstream in{std::string(text)};
    std::string raw;
    while (std::getline(in, raw)) {
        ++line_no;
        std::string_view line = raw;
        if (auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        if (line.front() == '[') {
            if (line.back() != ']') throw fail("unterminated section header");
            section_name = std::string(trim(line.substr(1, line.size() - 2)));
            auto it = table.find(section_name);
            if (it == table.end()) throw fail("unknown section [" + section_name + "]");
            section = &it->second;
            continue;
        }
        auto eq = line.find('=');
        if (eq == std::string_view::npos) throw fail("expected 'key = value'");
        std::string key(trim(line.substr(0, eq)));
        std::string_view value = trim(line.substr(eq + 1));
        if (section == nullptr) throw fail("key '" + key + "' appears before any section");
        auto it = section->find(key);
        if (it == section->end()) throw fail("unknown key '" + key + "' in [" + section_name + "]");
        if (value.empty()) throw fail("key '" + key + "' has no value");
        try {
            it->second(config, value);
        } catch (const ConfigError& e) {
            throw fail("key '" + key + "': " + e.what());
        }
    }
    return config;
}

LabConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file '" + path + "'");
    std::stringstream buf;
    buf << in.rdbuf();
    return parse_config(buf.str(), path);
}

namespace {

std::string num(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

}  // namespace

std::string render_config(const LabConfig& c) {
    std::ostringstream out;
    const ScenarioConfig& s = c.scenario;
    out << "[scenario]\n"
        << "model = " << to_string(s.model) << "\n"
        << "node_count = " << s.node_count << "\n"
        << "area_width = " << num(s.area_width) << "\n"
        << "area_height = " << num(s.area_height) << "\n"
        << "min_speed = " << num(s.min_speed) << "\n"
        << "max_speed = " << num(s.max_speed) << "\n"
        << "max_pause = " << num(s.max_pause) << "\n"
        << "duration = " << num(s.duration) << "\n"
        << "radio_range_metrics = " << num(s.radio_range) << "\n"
        << "sample_interval = " << num(s.sample_interval) << "\n"
        << "group_size = " << s.group_size << "\n"
        << "gm_alpha = " << num(s.gm_alpha) << "\n"
        << "gm_update_interval = " << num(s.gm_update_interval) << "\n"
        << "gm_speed_sigma = " << num(s.gm_speed_sigma) << "\n"
        << "gm_direction_sigma = " << num(s.gm_direction_sigma) << "\n"
        << "rpgm_max_deviation = " << num(s.rpgm_max_deviation) << "\n"
        << "ncmm_roam_radius = " << num(s.ncmm_roam_radius) << "\n"
        << "group_drift_speed = " << num(s.group_drift_speed) << "\n"
        << "seed = " << s.seed << "\n\n";
    const SimParams& p = c.sim;
    const TrafficConfig& t = c.traffic;
    out << "[routing]\n"
        << "transmission_range_routing = " << num(p.routing_radio_range) << "\n"
        << "data_rate = " << num(p.data_rate) << "\n"
        << "per_hop_processing = " << num(p.per_hop_processing) << "\n"
        << "rreq_ttl_max = " << p.rreq_ttl_max << "\n"
        << "route_lifetime = " << num(p.route_lifetime) << "\n"
        << "discovery_timeout = " << num(p.discovery_timeout) << "\n"
        << "max_buffered_per_flow = " << p.max_buffered_per_flow << "\n"
        << "rreq_retries = " << p.rreq_retries << "\n"
        << "broadcast_jitter_max = " << num(p.broadcast_jitter_max) << "\n"
        << "rreq_holddown = " << num(p.rreq_holddown) << "\n"
        << "max_connections = " << t.connections << "\n"
        << "packet_size = " << t.packet_size << "\n"
        << "sending_rate = " << num(t.rate) << "\n"
        << "flow_start_spread = " << num(t.start_spread) << "\n"
        << "simulation_time = " << num(t.duration) << "\n\n";
    const ExperimentPlan& e = c.experiment;
    out << "[experiment]\nmodels = ";
    for (std::size_t i = 0; i < e.models.size(); ++i) out << (i ? ", " : "") << to_string(e.models[i]);
    out << "\nspeed_points = ";
    for (std::size_t i = 0; i < e.speed_points.size(); ++i) out << (i ? ", " : "") << num(e.speed_points[i]);
    out << "\nseeds = " << e.seeds << "\noutputs = "
        << (e.outputs == Outputs::Metrics ? "metrics"
                                          : e.outputs == Outputs::Performance ? "performance" : "both")
        << "\nparallelism = " << e.parallelism << "\n";
    return out.str();
}

}  // namespace mobilab
