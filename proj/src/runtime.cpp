#include "chainmail/runtime.hpp"

#include "chainmail/overloaded.hpp"

#include <algorithm>

namespace chainmail {

std::string to_string(const Value& v) {
  return std::visit(overloaded{
                        [](const NullValue&) { return std::string("null"); },
                        [](const Address& a) { return "@" + std::to_string(a.index); },
                        [](const AddressSet& s) {
                          std::string out = "{";
                          bool first = true;
                          for (const auto& a : s) {
                            if (!first) out += ", ";
                            first = false;
                            out += "@" + std::to_string(a.index);
                          }
                          return out + "}";
                        },
                        [](const NatValue& n) { return std::to_string(n.n); },
                        [](bool b) { return std::string(b ? "true" : "false"); },
                    },
                    v);
}

std::optional<Address> as_address(const Value& v) {
  if (const auto* a = std::get_if<Address>(&v)) return *a;
  return std::nullopt;
}

Continuation Continuation::of(StmtList stmts) {
  return of(std::make_shared<const StmtList>(std::move(stmts)));
}

Continuation Continuation::of(StmtListPtr stmts) {
  Continuation c;
  c.code = stmts ? std::move(stmts) : std::make_shared<const StmtList>();
  return c;
}

Continuation Continuation::advanced() const {
  Continuation c = *this;
  if (c.marker) {
    c.marker.reset();
  } else if (c.pc < (code ? code->size() : 0)) {
    ++c.pc;
  }
  return c;
}

StmtList Continuation::statements() const {
  if (!code) return {};
  return StmtList(code->begin() + static_cast<std::ptrdiff_t>(pc), code->end());
}

std::set<Identifier> Continuation::variables() const {
  std::set<Identifier> out;
  if (marker) out.insert(*marker);
  if (code) {
    for (std::size_t i = pc; i < code->size(); ++i) {
      for (auto& v : stmt_variables((*code)[i])) out.insert(std::move(v));
    }
  }
  return out;
}

Continuation Continuation::renamed(const std::map<Identifier, Identifier>& renaming) const {
  StmtList out;
  if (code) {
    out.reserve(code->size() - pc);
    for (std::size_t i = pc; i < code->size(); ++i) out.push_back(rename_stmt((*code)[i], renaming));
  }
  Continuation c = Continuation::of(std::move(out));
  if (marker) {
    auto it = renaming.find(*marker);
    c.marker = it == renaming.end() ? *marker : it->second;
  }
  return c;
}

bool Continuation::operator==(const Continuation& other) const {
  if (marker != other.marker || remaining() != other.remaining()) return false;
  for (std::size_t i = 0; i < remaining(); ++i) {
    if (!((*code)[pc + i] == (*other.code)[other.pc + i])) return false;
  }
  return true;
}

const ObjectRecord* Config::object(Address a) const {
  if (!heap) return nullptr;
  auto it = heap->find(a);
  return it == heap->end() ? nullptr : &it->second;
}

bool Config::operator==(const Config& other) const {
  if (stack != other.stack) return false;
  if (heap == other.heap) return true;
  if (!heap || !other.heap) return false;
  return *heap == *other.heap;
}

Config make_config(std::vector<Frame> stack, Heap heap) {
  Config c;
  c.stack = std::move(stack);
  c.next_address = heap.empty() ? 0 : heap.rbegin()->first.index + 1;
  c.heap = std::make_shared<const Heap>(std::move(heap));
  return c;
}

std::optional<Value> interp_var(const Config& c, const Identifier& x) {
  if (c.stack.empty()) return std::nullopt;
  const auto& vars = c.top().vars;
  auto it = vars.find(x);
  if (it == vars.end()) return std::nullopt;
  return it->second;
}

std::optional<Value> interp_path(const Config& c, const Identifier& x, const Identifier& f) {
  auto v = interp_var(c, x);
  if (!v) return std::nullopt;
  auto a = as_address(*v);
  if (!a) return std::nullopt;
  const ObjectRecord* obj = c.object(*a);
  if (!obj) return std::nullopt;
  auto it = obj->fields.find(f);
  if (it == obj->fields.end()) return std::nullopt;
  return it->second;
}

std::optional<ClassId> class_of_address(const Config& c, Address a) {
  const ObjectRecord* obj = c.object(a);
  if (!obj) return std::nullopt;
  return obj->class_id;
}

std::optional<ClassId> class_of(const Config& c, const Identifier& x) {
  auto v = interp_var(c, x);
  if (!v) return std::nullopt;
  auto a = as_address(*v);
  if (!a) return std::nullopt;
  return class_of_address(c, *a);
}

Config restrict(const Config& c, const AddressSet& s) {
  Heap kept;
  if (c.heap) {
    for (const auto& a : s) {
      auto it = c.heap->find(a);
      if (it != c.heap->end()) kept.emplace_hint(kept.end(), *it);
    }
  }
  Config out;
  out.stack = c.stack;
  out.heap = std::make_shared<const Heap>(std::move(kept));
  out.next_address = c.next_address;
  return out;
}

Identifier fresh_name(const Identifier& base, const std::set<Identifier>& taken) {
  for (std::uint64_t k = 1;; ++k) {
    Identifier candidate = base + "$" + std::to_string(k);
    if (!taken.count(candidate)) return candidate;
  }
}

Config adapt(const Config& past, const Config& future) {
  const Frame& now = past.top();
  const Frame& later = future.top();

  std::set<Identifier> later_vars = later.contn.variables();
  for (const auto& [name, _] : later.vars) later_vars.insert(name);
  later_vars.erase(kThis);

  std::set<Identifier> taken = later_vars;
  for (const auto& [name, _] : now.vars) taken.insert(name);
  taken.insert(kThis);

  std::map<Identifier, Identifier> renaming;
  for (const auto& name : later_vars) {
    Identifier fresh = fresh_name(name, taken);
    taken.insert(fresh);
    renaming.emplace(name, std::move(fresh));
  }

  Frame merged;
  merged.contn = later.contn.renamed(renaming);
  for (const auto& [name, value] : later.vars) {
    auto it = renaming.find(name);
    merged.vars[it == renaming.end() ? name : it->second] = value;
  }
  for (const auto& [name, value] : now.vars) {
    if (name != kThis) merged.vars[name] = value;
  }

  Config out;
  out.stack.assign(future.stack.begin(), future.stack.end() - 1);
  out.stack.push_back(std::move(merged));
  out.heap = future.heap;
  out.next_address = future.next_address;
  return out;
}

Config bind_top(const Config& c, const Identifier& x, Value v) {
  Config out = c;
  out.stack.back().vars[x] = std::move(v);
  return out;
}

std::vector<std::string> dangling_references(const Config& c) {
  std::vector<std::string> out;
  auto check = [&](const Value& v, const std::string& where) {
    std::visit(overloaded{
                   [&](const Address& a) {
                     if (!c.object(a)) out.push_back(where + " -> " + to_string(v));
                   },
                   [&](const AddressSet& s) {
                     for (const auto& a : s) {
                       if (!c.object(a)) out.push_back(where + " -> " + to_string(Value{a}));
                     }
                   },
                   [](const auto&) {},
               },
               v);
  };
  for (std::size_t i = 0; i < c.stack.size(); ++i) {
    for (const auto& [name, v] : c.stack[i].vars) {
      check(v, "frame " + std::to_string(i) + " var " + name);
    }
  }
  if (c.heap) {
    for (const auto& [addr, obj] : *c.heap) {
      for (const auto& [f, v] : obj.fields) check(v, to_string(Value{addr}) + "." + f);
    }
  }
  return out;
}

}  // namespace chainmail
