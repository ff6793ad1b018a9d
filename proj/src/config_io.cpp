#include "chainmail/config_io.hpp"

#include <fstream>
#include <sstream>

#include "chainmail/frontend.hpp"
#include "chainmail/overloaded.hpp"

namespace chainmail {

using nlohmann::json;

json value_to_json(const Value& v) {
  return std::visit(overloaded{
                        [](const NullValue&) { return json(nullptr); },
                        [](const Address& a) { return json{{"addr", a.index}}; },
                        [](const AddressSet& s) {
                          json members = json::array();
                          for (const auto& a : s) members.push_back(a.index);
                          return json{{"set", members}};
                        },
                        [](const NatValue& n) { return json(n.n); },
                        [](bool b) { return json(b); },
                    },
                    v);
}

Value value_from_json(const json& j) {
  if (j.is_null()) return NullValue{};
  if (j.is_boolean()) return j.get<bool>();
  if (j.is_number_unsigned() || j.is_number_integer()) {
    if (j.get<std::int64_t>() < 0) throw ChainmailError("negative numbers are not values");
    return NatValue{j.get<std::uint64_t>()};
  }
  if (j.is_object() && j.contains("addr")) return Address{j.at("addr").get<std::uint64_t>()};
  if (j.is_object() && j.contains("set")) {
    AddressSet s;
    for (const auto& a : j.at("set")) s.insert(Address{a.get<std::uint64_t>()});
    return s;
  }
  throw ChainmailError("not a value: " + j.dump());
}

namespace {

json vars_to_json(const std::map<Identifier, Value>& vars) {
  json out = json::object();
  for (const auto& [name, v] : vars) out[name] = value_to_json(v);
  return out;
}

std::map<Identifier, Value> vars_from_json(const json& j) {
  std::map<Identifier, Value> out;
  for (const auto& [name, v] : j.items()) out[name] = value_from_json(v);
  return out;
}

}  // namespace

json config_to_json(const Config& c) {
  json stack = json::array();
  for (const auto& f : c.stack) {
    stack.push_back({{"marker", f.contn.marker ? json(*f.contn.marker) : json(nullptr)},
                     {"code", print_stmts(f.contn.statements())},
                     {"vars", vars_to_json(f.vars)}});
  }
  json heap = json::array();
  if (c.heap) {
    for (const auto& [addr, obj] : *c.heap) {
      heap.push_back({{"addr", addr.index}, {"class", obj.class_id}, {"fields", vars_to_json(obj.fields)}});
    }
  }
  return {{"stack", stack}, {"heap", heap}, {"next_address", c.next_address}};
}

Config config_from_json(const json& j) {
  std::vector<Frame> stack;
  for (const auto& f : j.at("stack")) {
    Frame frame;
    frame.contn = Continuation::of(parse_stmts(f.value("code", std::string{}), "<config>"));
    if (f.contains("marker") && !f.at("marker").is_null()) {
      frame.contn.marker = f.at("marker").get<std::string>();
    }
    frame.vars = vars_from_json(f.value("vars", json::object()));
    stack.push_back(std::move(frame));
  }
  if (stack.empty()) throw ChainmailError("a configuration needs at least one frame");
  Heap heap;
  for (const auto& o : j.at("heap")) {
    Address a{o.at("addr").get<std::uint64_t>()};
    ObjectRecord rec{o.at("class").get<std::string>(), vars_from_json(o.value("fields", json::object()))};
    if (!heap.emplace(a, std::move(rec)).second) {
      throw ChainmailError("address " + std::to_string(a.index) + " appears twice in the heap");
    }
  }
  Config c = make_config(std::move(stack), std::move(heap));
  if (j.contains("next_address")) {
    c.next_address = std::max(c.next_address, j.at("next_address").get<std::uint64_t>());
  }
  return c;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ChainmailError("cannot read '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

Config load_config(const std::string& path) {
  try {
    return config_from_json(json::parse(read_file(path)));
  } catch (const json::exception& e) {
    throw ChainmailError(path + ": " + e.what());
  }
}

std::string trace_to_jsonl(const Trace& t) {
  std::string out;
  for (std::size_t i = 0; i < t.externals.size(); ++i) {
    const auto& e = t.externals[i];
    json line = {{"position", i},
                 {"micro_steps", e.micro_steps},
                 {"burst_length", e.burst.size()},
                 {"config", config_to_json(e.config)}};
    out += line.dump() + "\n";
  }
  json summary = {{"visible_states", t.externals.size()},
                  {"micro_steps", t.total_steps},
                  {"truncated", t.truncated},
                  {"stop", t.stop}};
  out += summary.dump() + "\n";
  return out;
}

}  // namespace chainmail
