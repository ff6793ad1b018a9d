#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "chainmail/ast.hpp"
#include "chainmail/interpreter.hpp"
#include "chainmail/runtime.hpp"

namespace chainmail {

struct Assertion;
using AssertionPtr = std::shared_ptr<const Assertion>;

namespace assertion {
struct ExprHolds {
  ExprPtr e;
};
struct Equals {
  ExprPtr lhs, rhs;
};
struct HasClass {
  ExprPtr e;
  ClassId cls;
};
struct InSet {
  ExprPtr e;
  Identifier set;
};
struct Not {
  AssertionPtr a;
};
struct And {
  AssertionPtr lhs, rhs;
};
struct Or {
  AssertionPtr lhs, rhs;
};
struct Implies {
  AssertionPtr lhs, rhs;
};
/// `forall x. A`, or `forall x:C. A` meaning `forall x. (x : C -> A)`.
struct ForallObj {
  Identifier var;
  std::optional<ClassId> cls;
  AssertionPtr body;
};
/// `exists x. A`, or `exists x:C. A` meaning `exists x. (x : C and A)`.
struct ExistsObj {
  Identifier var;
  std::optional<ClassId> cls;
  AssertionPtr body;
};
struct ForallSet {
  Identifier var;
  AssertionPtr body;
};
struct ExistsSet {
  Identifier var;
  AssertionPtr body;
};
/// `exists v = e. A`: some value v with e = v and A; v is necessarily e's current value.
struct ExistsValue {
  Identifier var;
  ExprPtr value;
  AssertionPtr body;
};
struct Access {
  ExprPtr holder, target;
};
/// A null argument slot is the wildcard `_`.
struct Calls {
  ExprPtr caller;
  Identifier method;
  ExprPtr receiver;
  std::vector<ExprPtr> args;
};
struct Next {
  AssertionPtr a;
};
struct Will {
  AssertionPtr a;
};
struct Prev {
  AssertionPtr a;
};
struct Was {
  AssertionPtr a;
};
/// `in S: A`
struct Space {
  Identifier set;
  AssertionPtr body;
};
struct External {
  ExprPtr e;
};
struct Internal {
  ExprPtr e;
};
struct Changes {
  ExprPtr e;
};
}  // namespace assertion

struct Assertion {
  using Node =
      std::variant<assertion::ExprHolds, assertion::Equals, assertion::HasClass, assertion::InSet,
                   assertion::Not, assertion::And, assertion::Or, assertion::Implies,
                   assertion::ForallObj, assertion::ExistsObj, assertion::ForallSet,
                   assertion::ExistsSet, assertion::ExistsValue, assertion::Access,
                   assertion::Calls, assertion::Next, assertion::Will, assertion::Prev,
                   assertion::Was, assertion::Space, assertion::External, assertion::Internal,
                   assertion::Changes>;
  Node node;
  SourceSpan span;
};

AssertionPtr make_assertion(Assertion::Node node, SourceSpan span = {});

/// Structural equality, ignoring spans.
bool same_assertion(const Assertion& a, const Assertion& b);
bool same_assertion(const AssertionPtr& a, const AssertionPtr& b);

/// Free variables (including set names used by `in S` and `e in S`).
std::set<Identifier> free_variables(const Assertion& a);
std::set<Identifier> free_variables(const Expr& e);
/// Free and bound names.
std::set<Identifier> all_variables(const Assertion& a);

/// Renames free occurrences of `from` to `to` (bound names are left alone).
AssertionPtr rename_free(const AssertionPtr& a, const Identifier& from, const Identifier& to);
ExprPtr rename_free(const ExprPtr& e, const Identifier& from, const Identifier& to);

/// Renames nested binders so that no binder shadows an enclosing one.
AssertionPtr alpha_normalize(const AssertionPtr& a);

/// `changes(e)` as `exists v = e. next not (e = v)`, with v fresh for e.
AssertionPtr desugar_changes(const ExprPtr& e);

struct NamedAssertion {
  std::string name;
  AssertionPtr assertion;
};

/// Named invariants, each expected at every visible configuration of a run.
struct Spec {
  std::string name;
  std::vector<NamedAssertion> assertions;
};

/// Thrown when a set quantifier would enumerate more than the configured cap.
class BoundsExceeded : public ChainmailError {
 public:
  using ChainmailError::ChainmailError;
};

/// Past configurations, most recent first; persistent so futures can extend it cheaply.
struct HistoryNode {
  Config config;
  std::shared_ptr<const HistoryNode> prev;
};
using History = std::shared_ptr<const HistoryNode>;

History push_history(History h, Config c);
History history_of(const Trace& t, std::size_t position);

/// Notes about budget exhaustion met while deciding an assertion.
struct Caveats {
  std::set<std::string> notes;
};

struct EvalContext {
  const Program* program = nullptr;
  Config config;
  History history;
  Bounds bounds;
  Caveats* caveats = nullptr;

  static EvalContext at(const Program& p, const Trace& t, std::size_t position, Caveats* caveats);
  EvalContext with_config(Config c) const;
};

bool sat(const EvalContext& ctx, const Assertion& a);

/// The name a quantifier over `var` binds in the top frame of `c` (renamed apart from the
/// frame when it clashes) and the body renamed to match.
std::pair<Identifier, AssertionPtr> binder_for(const Config& c, const Identifier& var,
                                               const AssertionPtr& body);
/// Objects of the heap, optionally only those of class `cls`, in address order.
std::vector<Address> heap_objects(const Config& c, const std::optional<ClassId>& cls);
bool sat_class(const EvalContext& ctx, const Expr& e, const ClassId& c);
bool sat_in_set(const EvalContext& ctx, const Expr& e, const Identifier& s);
bool sat_access(const EvalContext& ctx, const Expr& x, const Expr& y);
bool sat_calls(const EvalContext& ctx, const assertion::Calls& c);
bool sat_viewpoint(const EvalContext& ctx, const Expr& x, bool want_external);
bool sat_space(const EvalContext& ctx, const Assertion& a, const Identifier& s);

/// Deterministic frame-bounded future of the top frame: successive external configurations.
struct Future {
  std::vector<Config> states;
  bool exhausted = false;
  std::string stop;
};
Future future_of(const EvalContext& ctx, std::size_t max_states);

}  // namespace chainmail
