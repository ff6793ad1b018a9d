#pragma once

#include <json.hpp>
#include <string>

#include "chainmail/interpreter.hpp"
#include "chainmail/runtime.hpp"

namespace chainmail {

/// null, {"addr": n}, {"set": [n, ...]}, a number (nat) or a Boolean.
nlohmann::json value_to_json(const Value& v);
Value value_from_json(const nlohmann::json& j);

/// {"stack": [{"marker": x|null, "code": "s; s", "vars": {...}}], "heap": [{"addr", "class", "fields"}],
///  "next_address": n}. Frames are listed bottom first.
nlohmann::json config_to_json(const Config& c);
/// `next_address` is optional on input and defaults to one past the largest address.
Config config_from_json(const nlohmann::json& j);

Config load_config(const std::string& path);

/// One JSON object per visible state, then a closing summary line.
std::string trace_to_jsonl(const Trace& t);

std::string read_file(const std::string& path);

}  // namespace chainmail
