#pragma once

#include <cstdint>
#include <optional>
#include <string_view>

#include "chainmail/ast.hpp"
#include "chainmail/runtime.hpp"

namespace chainmail {

enum class UndefinedReason {
  FuelExhausted,
  Unbound,
  BadReceiver,
  NoSuchGhost,
  StuckArith,
  NonBoolean,
};

std::string_view to_string(UndefinedReason r);

class EvalResult {
 public:
  static EvalResult defined(Value v) { return EvalResult(std::move(v)); }
  static EvalResult undefined(UndefinedReason r) { return EvalResult(r); }

  bool is_defined() const { return value_.has_value(); }
  const Value& value() const { return *value_; }
  UndefinedReason reason() const { return reason_; }

  /// True only for a defined `true`.
  bool is_true() const;

 private:
  explicit EvalResult(Value v) : value_(std::move(v)) {}
  explicit EvalResult(UndefinedReason r) : reason_(r) {}

  std::optional<Value> value_;
  UndefinedReason reason_ = UndefinedReason::Unbound;
};

/// Evaluates a pure expression; ghosts are looked up in `m`. Each ghost call
/// consumes one unit of `fuel` for the extent of its body.
EvalResult eval_expr(const ModuleDef& m, const Config& c, const Expr& e, std::uint32_t fuel);

}  // namespace chainmail
