/*
 * Copyright 2026 The sdfmeas Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 * http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include "sdfmeas/dut.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <set>
#include <sstream>

#include <boost/property_tree/ptree.hpp>
#include <boost/property_tree/xml_parser.hpp>
#include <json.hpp>

namespace sdfmeas {

using Json = nlohmann::ordered_json;
namespace pt = boost::property_tree;

const Mapping* DutDescription::find_mapping(std::string_view id) const {
  for (const auto& m : mappings) {
    if (m.id == id) return &m;
  }
  return nullptr;
}

ValidationReport validate_dut(const DutDescription& dut) {
  ValidationReport r;
  if (dut.graphs.empty()) r.add("no graph defined");
  std::set<std::string> graph_ids, actor_ids, channel_ids;
  for (const auto& g : dut.graphs) {
    if (!graph_ids.insert(g.id).second) r.add("duplicate graph id '" + g.id + "'");
    for (const auto& a : g.actors) {
      if (!actor_ids.insert(a.id).second) r.add("actor id '" + a.id + "' is used more than once");
    }
    for (const auto& c : g.channels) {
      if (!channel_ids.insert(c.id).second) r.add("channel id '" + c.id + "' is used more than once");
    }
    r.append(validate_graph(g), "graph " + g.id + ": ");
  }
  r.append(validate_platform(dut.platform), "platform: ");
  if (dut.mappings.empty()) r.add("no mapping defined");
  std::set<std::string> mapping_ids;
  for (const auto& m : dut.mappings) {
    if (!mapping_ids.insert(m.id).second) r.add("duplicate mapping id '" + m.id + "'");
    r.append(validate_mapping(m, dut.graphs, dut.platform), "mapping " + m.id + ": ");
  }
  r.append(validate_cost_model(dut.cost_model), "cost_model: ");
  r.append(validate_power_model(dut.power_model), "power_model: ");
  r.append(validate_sampler(dut.sampler, dut.platform.clock_hz), "sampler: ");
  if (dut.repetitions < 1) r.add("repetitions must be >= 1");
  if (dut.control_cost < 0) r.add("control_cost must be >= 0");
  return r;
}

namespace {

// ---------------------------------------------------------------- decoding

/// Object view that tracks consumed keys so unknown keys can be rejected.
/// Scalars may be JSON numbers/booleans or strings (XML attributes).
class Node {
 public:
  Node(const Json& j, std::string where) : j_(j), where_(std::move(where)) {
    if (!j_.is_object()) fail("expected an element/object");
  }

  [[noreturn]] void fail(const std::string& msg) const { throw ParseError(where_ + ": " + msg); }
  const std::string& where() const { return where_; }

  bool has(const std::string& key) {
    used_.insert(key);
    return j_.contains(key);
  }

  std::string str(const std::string& key) {
    if (!has(key)) fail("missing attribute '" + key + "'");
    const auto& v = j_.at(key);
    if (!v.is_string()) fail("attribute '" + key + "' must be a string");
    return v.get<std::string>();
  }

  std::string str_or(const std::string& key, std::string def) { return has(key) ? str(key) : def; }

  std::int64_t integer(const std::string& key) {
    if (!has(key)) fail("missing attribute '" + key + "'");
    const auto& v = j_.at(key);
    if (v.is_number_integer()) return v.get<std::int64_t>();
    if (v.is_number_float()) {
      const double d = v.get<double>();
      if (d == static_cast<double>(static_cast<std::int64_t>(d))) return static_cast<std::int64_t>(d);
    }
    if (v.is_string()) {
      const auto s = v.get<std::string>();
      std::int64_t out = 0;
      const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
      if (ec == std::errc{} && ptr == s.data() + s.size() && !s.empty()) return out;
    }
    fail("attribute '" + key + "' is not an integer");
  }

  std::int64_t int_or(const std::string& key, std::int64_t def) { return has(key) ? integer(key) : def; }

  double number(const std::string& key) {
    if (!has(key)) fail("missing attribute '" + key + "'");
    const auto& v = j_.at(key);
    if (v.is_number()) return v.get<double>();
    if (v.is_string()) {
      const auto s = v.get<std::string>();
      double out = 0;
      const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
      if (ec == std::errc{} && ptr == s.data() + s.size() && !s.empty()) return out;
    }
    fail("attribute '" + key + "' is not a number");
  }

  double number_or(const std::string& key, double def) { return has(key) ? number(key) : def; }

  bool flag_or(const std::string& key, bool def) {
    if (!has(key)) return def;
    const auto& v = j_.at(key);
    if (v.is_boolean()) return v.get<bool>();
    if (v.is_string() && (v == "true" || v == "false")) return v == "true";
    fail("attribute '" + key + "' must be true or false");
  }

  /// Children stored under a plural key, each named by its id (if any).
  std::vector<Node> list(const std::string& key, const std::string& tag) {
    std::vector<Node> out;
    if (!has(key)) return out;
    const auto& v = j_.at(key);
    if (!v.is_array()) fail("'" + key + "' must be a list");
    for (std::size_t i = 0; i < v.size(); ++i) {
      std::string label = tag + "[" + std::to_string(i) + "]";
      if (v[i].is_object() && v[i].contains("id") && v[i]["id"].is_string()) {
        label = tag + "[" + v[i]["id"].get<std::string>() + "]";
      }
      out.emplace_back(v[i], where_ + "/" + label);
    }
    return out;
  }

  std::optional<Node> child(const std::string& key) {
    if (!has(key)) return std::nullopt;
    return Node(j_.at(key), where_ + "/" + key);
  }

  void finish() const {
    for (const auto& [key, value] : j_.items()) {
      if (!used_.count(key)) fail("unknown attribute or element '" + key + "'");
    }
  }

 private:
  const Json& j_;
  std::string where_;
  std::set<std::string, std::less<>> used_;
};

template <typename T, typename F>
T parse_enum(Node& n, const std::string& key, T def, F&& from) {
  if (!n.has(key)) return def;
  const auto text = n.str(key);
  try {
    return from(text);
  } catch (const std::exception&) {
    n.fail("invalid value '" + text + "' for '" + key + "'");
  }
}

CostMode cost_mode_from(const std::string& s) {
  if (s == "fixed") return CostMode::FixedAvg;
  if (s == "triangular") return CostMode::Triangular;
  throw std::invalid_argument(s);
}

Arbitration arbitration_from(const std::string& s) {
  if (s == "round_robin") return Arbitration::RoundRobin;
  if (s == "fixed_priority") return Arbitration::FixedPriority;
  throw std::invalid_argument(s);
}

TriggerDelayMode delay_mode_from(const std::string& s) {
  if (s == "uniform") return TriggerDelayMode::Uniform;
  if (s == "fixed") return TriggerDelayMode::Fixed;
  throw std::invalid_argument(s);
}

Actor decode_actor(Node n) {
  Actor a;
  a.id = n.str("id");
  a.name = n.str_or("name", "");
  if (n.has("cycles")) {
    a.compute = CostSpec::fixed(n.integer("cycles"));
  } else {
    if (!n.has("avg")) n.fail("actor needs 'cycles' or 'avg'");
    a.compute.avg = n.integer("avg");
    a.compute.best = n.int_or("best", a.compute.avg);
    a.compute.worst = n.int_or("worst", a.compute.avg);
    a.compute.mode = parse_enum(n, "mode", CostMode::FixedAvg, cost_mode_from);
  }
  n.finish();
  return a;
}

Channel decode_channel(Node n) {
  Channel c;
  c.id = n.str("id");
  c.src_actor = n.str("src");
  c.dst_actor = n.str("dst");
  c.produce_rate = n.int_or("produce", 1);
  c.consume_rate = n.int_or("consume", 1);
  c.initial_tokens = n.int_or("initial_tokens", 0);
  c.token_size = n.int_or("token_size", 1);
  c.capacity = n.int_or("capacity", default_capacity(c));
  n.finish();
  return c;
}

SdfGraph decode_graph(Node n) {
  SdfGraph g;
  g.id = n.str("id");
  for (auto& a : n.list("actors", "actor")) g.actors.push_back(decode_actor(std::move(a)));
  for (auto& c : n.list("channels", "channel")) g.channels.push_back(decode_channel(std::move(c)));
  n.finish();
  return g;
}

Platform decode_platform(Node n) {
  const Platform fallback = quad_core_platform();
  Platform p;
  p.clock_hz = n.number_or("clock_hz", fallback.clock_hz);
  p.trigger_link_delay = n.int_or("trigger_link_delay", fallback.trigger_link_delay);
  if (auto b = n.child("bus")) {
    p.bus.arbitration = parse_enum(*b, "arbitration", p.bus.arbitration, arbitration_from);
    p.bus.words_per_grant = b->int_or("words_per_grant", p.bus.words_per_grant);
    p.bus.cycles_per_word = b->int_or("cycles_per_word", p.bus.cycles_per_word);
    p.bus.grant_overhead = b->int_or("grant_overhead", p.bus.grant_overhead);
    b->finish();
  }
  auto tiles = n.list("tiles", "tile");
  if (tiles.empty()) p.tiles = fallback.tiles;
  for (auto& t : tiles) {
    Tile tile;
    tile.id = t.str("id");
    tile.private_memory.id = t.str_or("memory", tile.id + "_mem");
    tile.private_memory.kind = MemoryKind::Private;
    tile.private_memory.size_words = t.int_or("memory_words", 1 << 16);
    tile.exclusive_peripheral_link = t.flag_or("exclusive_link", true);
    t.finish();
    p.tiles.push_back(std::move(tile));
  }
  auto shared = n.list("shared_memories", "shared_memory");
  if (shared.empty()) p.shared_memories = fallback.shared_memories;
  for (auto& s : shared) {
    p.shared_memories.push_back({s.str("id"), MemoryKind::Shared, s.int_or("size_words", 1 << 20)});
    s.finish();
  }
  n.finish();
  return p;
}

Mapping decode_mapping(Node n, const Platform& platform) {
  Mapping m;
  m.id = n.str("id");
  std::vector<std::pair<std::string, std::string>> places;
  for (auto& p : n.list("places", "place")) {
    places.emplace_back(p.str("actor"), p.str("tile"));
    if (!m.actor_to_tile.emplace(places.back()).second) p.fail("actor placed twice");
    p.finish();
  }
  for (auto& r : n.list("routes", "route")) {
    if (!m.channel_to_region.emplace(r.str("channel"), r.str("region")).second) r.fail("channel routed twice");
    r.finish();
  }
  for (auto& s : n.list("schedules", "schedule")) {
    StaticOrderSchedule sched;
    sched.tile_id = s.str("tile");
    for (auto& f : s.list("fires", "fire")) {
      sched.order.push_back(f.str("actor"));
      f.finish();
    }
    s.finish();
    m.schedules.push_back(std::move(sched));
  }
  n.finish();

  // Placement and schedules imply each other when only one is given.
  if (places.empty()) {
    for (const auto& s : m.schedules) {
      for (const auto& a : s.order) m.actor_to_tile.emplace(a, s.tile_id);
    }
  } else if (m.schedules.empty()) {
    for (const auto& tile : platform.tiles) {
      StaticOrderSchedule sched{tile.id, {}};
      for (const auto& [actor, tile_id] : places) {
        if (tile_id == tile.id) sched.order.push_back(actor);
      }
      if (!sched.order.empty()) m.schedules.push_back(std::move(sched));
    }
  }
  return m;
}

DutDescription decode(const Json& root) {
  Node n(root, "dut");
  DutDescription d;
  const auto seed = n.int_or("seed", 1);
  if (seed < 0) n.fail("seed must be >= 0");
  d.seed = static_cast<std::uint64_t>(seed);
  d.granularity = parse_enum(n, "granularity", Granularity::Phase,
                             [](const std::string& s) { return parse_granularity(s); });
  d.repetitions = static_cast<int>(n.int_or("repetitions", d.repetitions));
  d.control_cost = n.int_or("control_cost", d.control_cost);

  for (auto& g : n.list("graphs", "graph")) d.graphs.push_back(decode_graph(std::move(g)));
  if (auto p = n.child("platform")) {
    d.platform = decode_platform(std::move(*p));
  } else {
    d.platform = quad_core_platform();
  }
  for (auto& m : n.list("mappings", "mapping")) d.mappings.push_back(decode_mapping(std::move(m), d.platform));

  if (auto c = n.child("cost_model")) {
    auto& cm = d.cost_model;
    cm.poll_interval = c->int_or("poll_interval", cm.poll_interval);
    cm.poll_bus_words = c->int_or("poll_bus_words", cm.poll_bus_words);
    cm.read_overhead_per_token = c->int_or("read_overhead_per_token", cm.read_overhead_per_token);
    cm.write_overhead_per_token = c->int_or("write_overhead_per_token", cm.write_overhead_per_token);
    c->finish();
  }
  if (auto c = n.child("power_model")) {
    auto& pm = d.power_model;
    pm.static_watts = c->number_or("static_watts", pm.static_watts);
    pm.active_watts = c->number_or("active_watts", pm.active_watts);
    pm.polling_watts = c->number_or("polling_watts", pm.polling_watts);
    pm.bus_watts = c->number_or("bus_watts", pm.bus_watts);
    pm.idle_watts = c->number_or("idle_watts", pm.idle_watts);
    c->finish();
  }
  if (auto c = n.child("sampler")) {
    auto& s = d.sampler;
    s.sample_rate_hz = c->number_or("sample_rate_hz", s.sample_rate_hz);
    s.adc_bits = static_cast<int>(c->int_or("adc_bits", s.adc_bits));
    s.lsb_tolerance = c->number_or("lsb_tolerance", s.lsb_tolerance);
    s.full_scale_watts = c->number_or("full_scale_watts", s.full_scale_watts);
    s.trigger_delay_cycles = c->int_or("trigger_delay_cycles", s.trigger_delay_cycles);
    s.delay_mode = parse_enum(*c, "delay_mode", s.delay_mode, delay_mode_from);
    s.min_block_cycles = c->int_or("min_block_cycles", s.min_block_cycles);
    const auto rs = c->int_or("rng_seed", static_cast<std::int64_t>(s.rng_seed));
    if (rs < 0) c->fail("rng_seed must be >= 0");
    s.rng_seed = static_cast<std::uint64_t>(rs);
    c->finish();
  }
  n.finish();

  // Channels without a route live in the first shared memory.
  if (!d.platform.shared_memories.empty()) {
    for (auto& m : d.mappings) {
      for (const auto& g : d.graphs) {
        for (const auto& c : g.channels) m.channel_to_region.emplace(c.id, d.platform.shared_memories.front().id);
      }
    }
  }
  return d;
}

// ---------------------------------------------------------------- encoding

std::string_view name_of(CostMode m) { return m == CostMode::Triangular ? "triangular" : "fixed"; }
std::string_view name_of(Arbitration a) {
  return a == Arbitration::FixedPriority ? "fixed_priority" : "round_robin";
}
std::string_view name_of(TriggerDelayMode m) { return m == TriggerDelayMode::Fixed ? "fixed" : "uniform"; }

Json encode(const DutDescription& d) {
  Json root = Json::object();
  root["seed"] = d.seed;
  root["granularity"] = std::string(to_string(d.granularity));
  root["repetitions"] = d.repetitions;
  root["control_cost"] = d.control_cost;

  root["graphs"] = Json::array();
  for (const auto& g : d.graphs) {
    Json jg = {{"id", g.id}, {"actors", Json::array()}, {"channels", Json::array()}};
    for (const auto& a : g.actors) {
      Json ja = {{"id", a.id}};
      if (!a.name.empty()) ja["name"] = a.name;
      ja["best"] = a.compute.best;
      ja["avg"] = a.compute.avg;
      ja["worst"] = a.compute.worst;
      ja["mode"] = std::string(name_of(a.compute.mode));
      jg["actors"].push_back(std::move(ja));
    }
    for (const auto& c : g.channels) {
      jg["channels"].push_back({{"id", c.id},
                                {"src", c.src_actor},
                                {"dst", c.dst_actor},
                                {"produce", c.produce_rate},
                                {"consume", c.consume_rate},
                                {"initial_tokens", c.initial_tokens},
                                {"capacity", c.capacity},
                                {"token_size", c.token_size}});
    }
    root["graphs"].push_back(std::move(jg));
  }

  const auto& p = d.platform;
  Json jp = {{"clock_hz", p.clock_hz}, {"trigger_link_delay", p.trigger_link_delay}};
  jp["bus"] = {{"arbitration", std::string(name_of(p.bus.arbitration))},
               {"words_per_grant", p.bus.words_per_grant},
               {"cycles_per_word", p.bus.cycles_per_word},
               {"grant_overhead", p.bus.grant_overhead}};
  jp["tiles"] = Json::array();
  for (const auto& t : p.tiles) {
    jp["tiles"].push_back({{"id", t.id},
                           {"memory", t.private_memory.id},
                           {"memory_words", t.private_memory.size_words},
                           {"exclusive_link", t.exclusive_peripheral_link}});
  }
  jp["shared_memories"] = Json::array();
  for (const auto& s : p.shared_memories) jp["shared_memories"].push_back({{"id", s.id}, {"size_words", s.size_words}});
  root["platform"] = std::move(jp);

  root["mappings"] = Json::array();
  for (const auto& m : d.mappings) {
    Json jm = {{"id", m.id}, {"places", Json::array()}, {"routes", Json::array()}, {"schedules", Json::array()}};
    for (const auto& [actor, tile] : m.actor_to_tile) jm["places"].push_back({{"actor", actor}, {"tile", tile}});
    for (const auto& [channel, region] : m.channel_to_region) {
      jm["routes"].push_back({{"channel", channel}, {"region", region}});
    }
    for (const auto& s : m.schedules) {
      Json js = {{"tile", s.tile_id}, {"fires", Json::array()}};
      for (const auto& a : s.order) js["fires"].push_back({{"actor", a}});
      jm["schedules"].push_back(std::move(js));
    }
    root["mappings"].push_back(std::move(jm));
  }

  const auto& c = d.cost_model;
  root["cost_model"] = {{"poll_interval", c.poll_interval},
                        {"poll_bus_words", c.poll_bus_words},
                        {"read_overhead_per_token", c.read_overhead_per_token},
                        {"write_overhead_per_token", c.write_overhead_per_token}};
  const auto& pm = d.power_model;
  root["power_model"] = {{"static_watts", pm.static_watts},
                         {"active_watts", pm.active_watts},
                         {"polling_watts", pm.polling_watts},
                         {"bus_watts", pm.bus_watts},
                         {"idle_watts", pm.idle_watts}};
  const auto& s = d.sampler;
  root["sampler"] = {{"sample_rate_hz", s.sample_rate_hz},
                     {"adc_bits", s.adc_bits},
                     {"lsb_tolerance", s.lsb_tolerance},
                     {"full_scale_watts", s.full_scale_watts},
                     {"trigger_delay_cycles", s.trigger_delay_cycles},
                     {"delay_mode", std::string(name_of(s.delay_mode))},
                     {"min_block_cycles", s.min_block_cycles},
                     {"rng_seed", s.rng_seed}};
  return root;
}

// ------------------------------------------------------- XML <-> JSON tree

const std::map<std::string, std::string, std::less<>>& plural_of() {
  static const std::map<std::string, std::string, std::less<>> m = {
      {"graph", "graphs"},   {"actor", "actors"},   {"channel", "channels"},
      {"tile", "tiles"},     {"shared_memory", "shared_memories"},
      {"mapping", "mappings"}, {"place", "places"}, {"route", "routes"},
      {"schedule", "schedules"}, {"fire", "fires"}};
  return m;
}

const std::set<std::string, std::less<>>& singletons() {
  static const std::set<std::string, std::less<>> s = {"platform", "bus", "cost_model", "power_model", "sampler"};
  return s;
}

bool blank(const std::string& s) {
  return std::all_of(s.begin(), s.end(), [](unsigned char c) { return std::isspace(c); });
}

Json element_to_json(const pt::ptree& node, const std::string& where) {
  Json out = Json::object();
  if (!blank(node.data())) throw ParseError(where + ": unexpected text content");
  for (const auto& [tag, child] : node) {
    if (tag == "<xmlattr>") {
      for (const auto& [attr, value] : child) out[attr] = value.data();
    } else if (tag == "<xmlcomment>") {
      continue;
    } else if (auto it = plural_of().find(tag); it != plural_of().end()) {
      out[it->second].push_back(element_to_json(child, where + "/" + tag));
    } else if (singletons().count(tag)) {
      if (out.contains(tag)) throw ParseError(where + ": element <" + tag + "> given twice");
      out[tag] = element_to_json(child, where + "/" + tag);
    } else {
      throw ParseError(where + ": unknown element <" + tag + ">");
    }
  }
  return out;
}

std::string scalar_text(const Json& v) {
  if (v.is_string()) return v.get<std::string>();
  if (v.is_boolean()) return v.get<bool>() ? "true" : "false";
  if (v.is_number_unsigned()) return std::to_string(v.get<std::uint64_t>());
  if (v.is_number_integer()) return std::to_string(v.get<std::int64_t>());
  return format_double(v.get<double>());
}

pt::ptree json_to_element(const Json& obj) {
  pt::ptree node;
  for (const auto& [key, value] : obj.items()) {
    if (value.is_array()) {
      std::string tag;
      for (const auto& [singular, plural] : plural_of()) {
        if (plural == key) tag = singular;
      }
      for (const auto& item : value) node.add_child(tag, json_to_element(item));
    } else if (value.is_object()) {
      node.add_child(key, json_to_element(value));
    } else {
      node.put("<xmlattr>." + key, scalar_text(value));
    }
  }
  return node;
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw IoError("cannot open '" + path.string() + "'");
  std::ostringstream ss;
  ss << is.rdbuf();
  return ss.str();
}

std::string lower_extension(const std::filesystem::path& path) {
  auto ext = path.extension().string();
  std::transform(ext.begin(), ext.end(), ext.begin(), [](unsigned char c) { return std::tolower(c); });
  return ext;
}

}  // namespace

DutDescription parse_dut_json(std::string_view text) {
  Json root;
  try {
    root = Json::parse(text.begin(), text.end());
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError(std::string("JSON: ") + e.what());
  }
  return decode(root);
}

DutDescription parse_dut_xml(std::string_view text) {
  pt::ptree tree;
  std::istringstream is{std::string(text)};
  try {
    pt::read_xml(is, tree, pt::xml_parser::no_comments);
  } catch (const pt::xml_parser_error& e) {
    throw ParseError("XML line " + std::to_string(e.line()) + ": " + e.message());
  }
  if (tree.size() != 1 || tree.begin()->first != "dut") throw ParseError("XML: root element must be <dut>");
  return decode(element_to_json(tree.begin()->second, "dut"));
}

std::string dut_to_json(const DutDescription& dut) { return encode(dut).dump(2) + "\n"; }

std::string dut_to_xml(const DutDescription& dut) {
  pt::ptree tree;
  tree.add_child("dut", json_to_element(encode(dut)));
  std::ostringstream os;
  pt::write_xml(os, tree, pt::xml_writer_make_settings<std::string>(' ', 2));
  return os.str();
}

DutDescription load_dut(const std::filesystem::path& path) {
  const auto text = read_file(path);
  const auto ext = lower_extension(path);
  DutDescription dut;
  if (ext == ".xml") {
    dut = parse_dut_xml(text);
  } else if (ext == ".json") {
    dut = parse_dut_json(text);
  } else {
    throw ParseError("'" + path.string() + "': expected a .xml or .json file");
  }
  if (auto r = validate_dut(dut); !r.ok()) throw ValidationError(r);
  return dut;
}

void save_dut(const std::filesystem::path& path, const DutDescription& dut) {
  const auto ext = lower_extension(path);
  const auto text = ext == ".xml" ? dut_to_xml(dut) : dut_to_json(dut);
  std::ofstream os(path, std::ios::binary);
  if (!os) throw IoError("cannot open '" + path.string() + "' for writing");
  os << text;
  if (!os.flush()) throw IoError("failed writing '" + path.string() + "'");
}

}  // namespace sdfmeas
