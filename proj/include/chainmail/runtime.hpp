#pragma once

#include <compare>
#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <variant>
#include <vector>

#include "chainmail/ast.hpp"

namespace chainmail {

struct Address {
  std::uint64_t index = 0;
  auto operator<=>(const Address&) const = default;
};

using AddressSet = std::set<Address>;

struct NullValue {
  bool operator==(const NullValue&) const = default;
};

struct NatValue {
  std::uint64_t n = 0;
  bool operator==(const NatValue&) const = default;
};

/// Null, an address, a set of addresses (only for set-quantified variables),
/// a natural number or a Boolean.
using Value = std::variant<NullValue, Address, AddressSet, NatValue, bool>;

std::string to_string(const Value& v);
std::optional<Address> as_address(const Value& v);

/// Remaining code of a frame: an optional call marker `x := •` followed by statements.
struct Continuation {
  std::optional<Identifier> marker;
  StmtListPtr code;
  std::size_t pc = 0;

  static Continuation of(StmtList stmts);
  static Continuation of(StmtListPtr stmts);

  std::size_t remaining() const { return code ? code->size() - pc : 0; }
  bool empty() const { return !marker && remaining() == 0; }
  const Stmt* head() const { return marker || remaining() == 0 ? nullptr : &(*code)[pc]; }
  Continuation advanced() const;
  StmtList statements() const;
  std::set<Identifier> variables() const;
  Continuation renamed(const std::map<Identifier, Identifier>& renaming) const;

  bool operator==(const Continuation& other) const;
};

struct Frame {
  Continuation contn;
  std::map<Identifier, Value> vars;

  bool operator==(const Frame&) const = default;
};

struct ObjectRecord {
  ClassId class_id;
  std::map<Identifier, Value> fields;

  bool operator==(const ObjectRecord&) const = default;
};

using Heap = std::map<Address, ObjectRecord>;

/// Immutable snapshot: frames (top is back()) and a shared heap.
struct Config {
  std::vector<Frame> stack;
  std::shared_ptr<const Heap> heap;
  /// First address never handed out; restriction keeps it so fresh addresses stay fresh.
  std::uint64_t next_address = 0;

  const Frame& top() const { return stack.back(); }
  const ObjectRecord* object(Address a) const;
  bool operator==(const Config& other) const;
};

Config make_config(std::vector<Frame> stack, Heap heap);

/// Resource limits shared by execution, ghost evaluation and quantification.
struct Bounds {
  std::uint64_t max_steps = 100000;
  std::uint64_t max_micro = 10000;
  std::uint32_t fuel = 1000;
  std::uint32_t set_cap = 12;
};

std::optional<Value> interp_var(const Config& c, const Identifier& x);
std::optional<Value> interp_path(const Config& c, const Identifier& x, const Identifier& f);
std::optional<ClassId> class_of(const Config& c, const Identifier& x);
std::optional<ClassId> class_of_address(const Config& c, Address a);

/// Keeps the stack; the heap keeps only addresses in S (dangling references allowed).
Config restrict(const Config& c, const AddressSet& s);

/// `name$k` for the smallest k >= 1 not in `taken`.
Identifier fresh_name(const Identifier& base, const std::set<Identifier>& taken);

/// Merges `past`'s top-frame bindings into `future`. The future frame's variables
/// (other than `this`) are renamed apart first, so the past's names win.
Config adapt(const Config& past, const Config& future);

/// Same stack with one extra binding in the top frame.
Config bind_top(const Config& c, const Identifier& x, Value v);

/// Debug validator: every address reachable from the stack or heap is allocated.
std::vector<std::string> dangling_references(const Config& c);

}  // namespace chainmail
