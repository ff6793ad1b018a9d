#pragma once

#include <string>

#include "chainmail/checker.hpp"
#include "chainmail/config_io.hpp"
#include "chainmail/frontend.hpp"

namespace test_support {

inline std::string corpus(const std::string& rel) { return std::string(CORPUS_DIR) + "/" + rel; }

inline chainmail::ModuleDef module_file(const std::string& rel) {
  if (rel.empty()) return {};
  return chainmail::parse_module(chainmail::read_file(corpus(rel)), rel);
}

inline chainmail::Program program(const std::string& internal, const std::string& external = "") {
  return chainmail::Program::make(module_file(internal), module_file(external));
}

inline chainmail::StmtList driver_file(const std::string& rel) {
  return chainmail::parse_stmts(chainmail::read_file(corpus(rel)), rel);
}

inline chainmail::Spec spec_file(const std::string& rel) {
  return chainmail::parse_spec(chainmail::read_file(corpus(rel)), rel);
}

/// Decides `text` at a configuration file, as the first state of the run starting there.
inline bool judge(const chainmail::Program& p, const std::string& config, const std::string& text,
                  chainmail::Caveats* caveats = nullptr) {
  using namespace chainmail;
  Trace t = record_trace(p, load_config(corpus(config)), Bounds{}, false);
  return sat(EvalContext::at(p, t, 0, caveats), *parse_assertion(text));
}

}  // namespace test_support
