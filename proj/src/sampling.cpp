#include "chainmail/sampling.hpp"

#include "chainmail/frontend.hpp"

namespace chainmail {

namespace {

constexpr const char* kNodeSource = R"(
class Node {
  field next
  ghost acyclic() { if this.next = null then true else this.next.acyclic }
  ghost last() { if this.next = null then this else this.next.last }
}
)";

constexpr const char* kCellSource = R"(
class Cell {
  field val
  field next
  method get() { v := this.val; return v }
  method set(v) { this.val := v; return v }
  method link(c) { this.next := c; return c }
  method bump() { v := this.val; w := v.plus(1); this.val := w; return w }
  ghost acyclic() { if this.next = null then true else this.next.acyclic }
  ghost last() { if this.next = null then this else this.next.last }
}
)";

constexpr const char* kAgentSource = R"(
class Agent {
  field peer
  field item
  method hold(x) { this.item := x; return x }
  method poke(c) { r := c.bump(); return r }
}
)";

std::size_t pick(std::mt19937_64& rng, std::size_t n) {
  return std::uniform_int_distribution<std::size_t>(0, n - 1)(rng);
}

bool chance(std::mt19937_64& rng, double p) { return std::bernoulli_distribution(p)(rng); }

template <class T>
const T& pick_from(std::mt19937_64& rng, const std::vector<T>& xs) {
  return xs[pick(rng, xs.size())];
}

Bounds sample_bounds() {
  Bounds b;
  b.max_steps = 2000;
  b.max_micro = 500;
  b.fuel = 40;
  b.set_cap = 12;
  return b;
}

const Program& cell_program() {
  static const Program p = Program::make(parse_module(kCellSource), parse_module(kAgentSource));
  return p;
}

AddressSet random_subset(std::mt19937_64& rng, const Config& c) {
  AddressSet s;
  for (const auto& [a, _] : *c.heap) {
    if (chance(rng, 0.5)) s.insert(a);
  }
  return s;
}

std::size_t method_arity(const ModuleDef& m, const Identifier& method) {
  for (const auto& [_, cls] : m.classes) {
    auto it = cls->methods.find(method);
    if (it != cls->methods.end()) return it->second.params.size();
  }
  return 0;
}

class AssertionGen {
 public:
  AssertionGen(std::mt19937_64& rng, const Sample& s) : rng_(rng), s_(s), vars_(s.variables), sets_(s.set_variables) {}

  AssertionPtr gen(int depth) {
    using namespace assertion;
    if (depth <= 0 || chance(rng_, 0.3)) return atom();
    switch (pick(rng_, 10)) {
      case 0: return make_assertion(Not{gen(depth - 1)});
      case 1: return make_assertion(And{gen(depth - 1), gen(depth - 1)});
      case 2: return make_assertion(Or{gen(depth - 1), gen(depth - 1)});
      case 3: return make_assertion(Implies{gen(depth - 1), gen(depth - 1)});
      case 4:
      case 5: {
        Identifier q = "q" + std::to_string(++counter_);
        std::optional<ClassId> cls;
        if (chance(rng_, 0.3)) cls = pick_from(rng_, s_.classes);
        vars_.push_back(q);
        AssertionPtr body = gen(depth - 1);
        vars_.pop_back();
        return chance(rng_, 0.5) ? make_assertion(ForallObj{q, cls, body})
                                 : make_assertion(ExistsObj{q, cls, body});
      }
      case 6: {
        if (used_set_) return atom();
        used_set_ = true;
        Identifier t = "T" + std::to_string(++counter_);
        sets_.push_back(t);
        AssertionPtr body = gen(depth - 1);
        sets_.pop_back();
        return chance(rng_, 0.5) ? make_assertion(ForallSet{t, body}) : make_assertion(ExistsSet{t, body});
      }
      case 7: {
        if (used_time_) return atom();
        used_time_ = true;
        AssertionPtr body = gen(depth - 1);
        switch (pick(rng_, 4)) {
          case 0: return make_assertion(Next{body});
          case 1: return make_assertion(Will{body});
          case 2: return make_assertion(Prev{body});
          default: return make_assertion(Was{body});
        }
      }
      case 8:
        if (!sets_.empty()) return make_assertion(Space{pick_from(rng_, sets_), gen(depth - 1)});
        return atom();
      default: return atom();
    }
  }

 private:
  ExprPtr var() { return make_expr(expr::Var{pick_from(rng_, vars_)}); }

  ExprPtr term() {
    switch (pick(rng_, 5)) {
      case 0: return make_expr(expr::NullLit{});
      case 1: return make_expr(expr::NatLit{pick(rng_, 4)});
      case 2:
        if (!s_.fields.empty()) return make_expr(expr::Field{var(), pick_from(rng_, s_.fields)});
        return var();
      default: return var();
    }
  }

  AssertionPtr atom() {
    using namespace assertion;
    switch (pick(rng_, 9)) {
      case 0: return make_assertion(Equals{term(), term()});
      case 1: return make_assertion(HasClass{var(), pick_from(rng_, s_.classes)});
      case 2:
        if (!sets_.empty()) return make_assertion(InSet{var(), pick_from(rng_, sets_)});
        return make_assertion(Access{var(), var()});
      case 3: return make_assertion(Access{var(), var()});
      case 4: {
        if (s_.methods.empty()) return make_assertion(Equals{term(), term()});
        Calls c;
        c.method = pick_from(rng_, s_.methods);
        c.caller = chance(rng_, 0.5) ? var() : nullptr;
        c.receiver = chance(rng_, 0.5) ? var() : nullptr;
        std::size_t n = method_arity(s_.program->linked, c.method);
        for (std::size_t i = 0; i < n; ++i) c.args.push_back(chance(rng_, 0.5) ? term() : nullptr);
        return make_assertion(std::move(c));
      }
      case 5:
        return chance(rng_, 0.5) ? make_assertion(External{var()}) : make_assertion(Internal{var()});
      case 6: {
        if (!s_.ghosts.empty() && chance(rng_, 0.6)) {
          return make_assertion(ExprHolds{make_expr(expr::Field{var(), pick_from(rng_, s_.ghosts)})});
        }
        return make_assertion(ExprHolds{make_expr(expr::Geq{term(), term()})});
      }
      case 7: return make_assertion(ExprHolds{make_expr(expr::BoolLit{chance(rng_, 0.5)})});
      default: {
        if (used_time_) return make_assertion(Access{var(), var()});
        used_time_ = true;
        return make_assertion(Changes{term()});
      }
    }
  }

  std::mt19937_64& rng_;
  const Sample& s_;
  std::vector<Identifier> vars_;
  std::vector<Identifier> sets_;
  int counter_ = 0;
  bool used_set_ = false;
  bool used_time_ = false;
};

// ---- random modules ---------------------------------------------------------

Atom random_atom(std::mt19937_64& rng, const std::vector<Identifier>& vars) {
  switch (pick(rng, 4)) {
    case 0: return Atom::null();
    case 1: return Atom::natural(pick(rng, 5));
    default: return Atom::var(pick_from(rng, vars));
  }
}

Stmt random_stmt(std::mt19937_64& rng, const std::vector<Identifier>& vars,
                 const std::vector<Identifier>& fields, const std::vector<Identifier>& methods,
                 const std::vector<ClassId>& classes) {
  const Identifier& x = pick_from(rng, vars);
  const Identifier& y = pick_from(rng, vars);
  switch (pick(rng, 5)) {
    case 0:
      if (!fields.empty()) return Stmt{stmt::FieldRead{x, y, pick_from(rng, fields)}, {}};
      [[fallthrough]];
    case 1:
      if (!fields.empty()) return Stmt{stmt::FieldWrite{y, pick_from(rng, fields), random_atom(rng, vars)}, {}};
      [[fallthrough]];
    case 2:
      if (!methods.empty()) {
        std::vector<Atom> args;
        for (std::size_t i = pick(rng, 3); i > 0; --i) args.push_back(random_atom(rng, vars));
        return Stmt{stmt::Call{x, y, pick_from(rng, methods), std::move(args)}, {}};
      }
      [[fallthrough]];
    case 3:
      if (!classes.empty()) {
        std::vector<Atom> args;
        for (std::size_t i = pick(rng, 3); i > 0; --i) args.push_back(random_atom(rng, vars));
        return Stmt{stmt::New{x, pick_from(rng, classes), std::move(args)}, {}};
      }
      [[fallthrough]];
    default: return Stmt{stmt::Return{random_atom(rng, vars)}, {}};
  }
}

ExprPtr random_expr(std::mt19937_64& rng, const std::vector<Identifier>& vars,
                    const std::vector<Identifier>& names, int depth) {
  if (depth <= 0) {
    switch (pick(rng, 4)) {
      case 0: return make_expr(expr::NullLit{});
      case 1: return make_expr(expr::NatLit{pick(rng, 5)});
      case 2: return make_expr(expr::BoolLit{chance(rng, 0.5)});
      default: return make_expr(expr::Var{pick_from(rng, vars)});
    }
  }
  switch (pick(rng, 5)) {
    case 0:
      return make_expr(expr::If{random_expr(rng, vars, names, depth - 1), random_expr(rng, vars, names, depth - 1),
                                random_expr(rng, vars, names, depth - 1)});
    case 1:
      return make_expr(expr::Eq{random_expr(rng, vars, names, depth - 1), random_expr(rng, vars, names, depth - 1)});
    case 2:
      return make_expr(expr::Plus{random_expr(rng, vars, names, depth - 1), random_expr(rng, vars, names, depth - 1)});
    case 3:
      if (!names.empty()) {
        return make_expr(expr::Field{random_expr(rng, vars, names, depth - 1), pick_from(rng, names)});
      }
      [[fallthrough]];
    default: return random_expr(rng, vars, names, 0);
  }
}

Value random_value(std::mt19937_64& rng, const std::vector<Address>& addrs) {
  switch (pick(rng, 4)) {
    case 0: return NullValue{};
    case 1: return NatValue{pick(rng, 5)};
    default: return pick_from(rng, addrs);
  }
}

}  // namespace

ModuleDef node_module() { return parse_module(kNodeSource, "<node module>"); }

Config node_fixture() {
  Frame f;
  f.vars[kThis] = Address{0};
  f.vars["acyc"] = Address{1};
  f.vars["cyc"] = Address{2};
  f.contn = Continuation::of(StmtList{});
  Heap heap;
  heap.emplace(Address{0}, ObjectRecord{kObjectClass, {}});
  heap.emplace(Address{1}, ObjectRecord{"Node", {{"next", NullValue{}}}});
  heap.emplace(Address{2}, ObjectRecord{"Node", {{"next", Address{2}}}});
  return make_config({std::move(f)}, std::move(heap));
}

Sample node_sample() {
  static const auto program = std::make_shared<const Program>(Program::make(node_module(), ModuleDef{}));
  static const auto trace = [] {
    auto t = std::make_shared<Trace>();
    t->bounds = sample_bounds();
    t->externals.push_back(TraceEntry{node_fixture(), 0, {}});
    t->stop = "fixture";
    return std::shared_ptr<const Trace>(t);
  }();
  Sample s;
  s.label = "node fixture (acyc, cyc)";
  s.program = program;
  s.trace = trace;
  s.variables = {"this", "acyc", "cyc"};
  s.classes = {"Node", kObjectClass};
  s.fields = {"next"};
  s.ghosts = {"acyclic", "last"};
  return s;
}

Sample random_run_sample(std::mt19937_64& rng) {
  static const auto program = std::make_shared<const Program>(cell_program());
  std::vector<Identifier> cells, agents;
  StmtList driver;
  const std::size_t length = 3 + pick(rng, 8);
  for (std::size_t i = 0; i < length; ++i) {
    bool room = cells.size() + agents.size() < 6;
    if (room && (cells.empty() || chance(rng, 0.35))) {
      if (cells.empty() || chance(rng, 0.7)) {
        Identifier x = "c" + std::to_string(cells.size());
        Atom val = chance(rng, 0.15) ? Atom::null() : Atom::natural(pick(rng, 4));
        Atom next = cells.empty() || chance(rng, 0.5) ? Atom::null() : Atom::var(pick_from(rng, cells));
        driver.push_back(Stmt{stmt::New{x, "Cell", {val, next}}, {}});
        cells.push_back(x);
      } else {
        Identifier x = "a" + std::to_string(agents.size());
        Atom peer = agents.empty() ? Atom::null() : Atom::var(pick_from(rng, agents));
        driver.push_back(Stmt{stmt::New{x, "Agent", {peer}}, {}});
        agents.push_back(x);
      }
      continue;
    }
    const Identifier& c = pick_from(rng, cells);
    if (!agents.empty() && chance(rng, 0.3)) {
      const Identifier& a = pick_from(rng, agents);
      if (chance(rng, 0.5)) driver.push_back(Stmt{stmt::Call{"r", a, "hold", {Atom::var(c)}}, {}});
      else driver.push_back(Stmt{stmt::Call{"r", a, "poke", {Atom::var(c)}}, {}});
      continue;
    }
    switch (pick(rng, 4)) {
      case 0: driver.push_back(Stmt{stmt::Call{"r", c, "set", {Atom::natural(pick(rng, 4))}}, {}}); break;
      case 1: driver.push_back(Stmt{stmt::Call{"r", c, "link", {Atom::var(pick_from(rng, cells))}}, {}}); break;
      case 2: driver.push_back(Stmt{stmt::Call{"r", c, "bump", {}}, {}}); break;
      default: driver.push_back(Stmt{stmt::Call{"r", c, "get", {}}, {}}); break;
    }
  }

  auto trace = std::make_shared<Trace>(record_trace(*program, driver, sample_bounds(), false));
  Sample s;
  s.program = program;
  s.position = pick(rng, trace->externals.size());
  Config& here = trace->externals[s.position].config;
  here = bind_top(here, "S0", random_subset(rng, here));
  here = bind_top(here, "S1", random_subset(rng, here));
  for (const auto& [name, _] : here.top().vars) {
    if (name != "S0" && name != "S1") s.variables.push_back(name);
  }
  s.trace = std::move(trace);
  s.label = "random run: " + print_stmts(driver) + " @" + std::to_string(s.position);
  s.set_variables = {"S0", "S1"};
  s.classes = {"Cell", "Agent", kObjectClass};
  s.fields = {"val", "next", "item", "peer"};
  s.ghosts = {"acyclic", "last"};
  s.methods = {"get", "set", "link", "bump", "hold", "poke"};
  return s;
}

Sampler default_sampler() {
  return [](std::mt19937_64& rng) {
    if (chance(rng, 0.25)) return node_sample();
    return random_run_sample(rng);
  };
}

AssertionPtr random_assertion(std::mt19937_64& rng, const Sample& s, int depth) {
  return AssertionGen(rng, s).gen(depth);
}

ModuleDef random_module(std::mt19937_64& rng, const std::string& prefix, int max_classes) {
  ModuleDef m;
  const int n = 1 + static_cast<int>(pick(rng, static_cast<std::size_t>(max_classes)));
  std::vector<ClassId> classes;
  for (int k = 0; k < n; ++k) classes.push_back(prefix + std::to_string(k));
  for (const auto& name : classes) {
    std::vector<Identifier> fields;
    for (std::size_t i = pick(rng, 4); i > 0; --i) fields.push_back("f" + std::to_string(fields.size()));
    std::vector<Identifier> method_names = {"m0", "m1", "m2"};
    std::vector<MethodDecl> methods;
    for (std::size_t i = pick(rng, 3); i > 0; --i) {
      MethodDecl md;
      md.name = "m" + std::to_string(methods.size());
      for (std::size_t p = pick(rng, 3); p > 0; --p) md.params.push_back("p" + std::to_string(md.params.size()));
      std::vector<Identifier> vars = {kThis, "l0", "l1"};
      vars.insert(vars.end(), md.params.begin(), md.params.end());
      StmtList body;
      for (std::size_t s = pick(rng, 4); s > 0; --s) {
        body.push_back(random_stmt(rng, vars, fields, method_names, classes));
      }
      body.push_back(Stmt{stmt::Return{random_atom(rng, vars)}, {}});
      md.body = std::make_shared<const StmtList>(std::move(body));
      methods.push_back(std::move(md));
    }
    std::vector<GhostDecl> ghosts;
    for (std::size_t i = pick(rng, 3); i > 0; --i) {
      GhostDecl g;
      g.name = "g" + std::to_string(ghosts.size());
      if (chance(rng, 0.5)) g.params.push_back("p0");
      std::vector<Identifier> vars = {kThis};
      vars.insert(vars.end(), g.params.begin(), g.params.end());
      g.body = random_expr(rng, vars, fields, 2);
      ghosts.push_back(std::move(g));
    }
    m.add(make_class(name, std::move(fields), std::move(methods), std::move(ghosts)));
  }
  return m;
}

std::pair<ModuleDef, Config> random_step_instance(std::mt19937_64& rng) {
  ModuleDef m = random_module(rng, "C", 3);
  std::vector<ClassId> classes;
  std::vector<Identifier> fields = {"f0", "f1", "f2"};
  for (const auto& [id, _] : m.classes) classes.push_back(id);

  Heap heap;
  heap.emplace(Address{0}, ObjectRecord{kObjectClass, {}});
  std::vector<Address> addrs = {Address{0}};
  for (std::size_t i = 1 + pick(rng, 4); i > 0; --i) {
    Address a{addrs.size()};
    addrs.push_back(a);
    heap.emplace(a, ObjectRecord{pick_from(rng, classes), {}});
  }
  for (auto& [a, obj] : heap) {
    if (const ClassDesc* cls = m.find(obj.class_id)) {
      for (const auto& f : cls->fields) obj.fields[f] = random_value(rng, addrs);
    }
  }

  Frame f;
  f.vars[kThis] = pick_from(rng, addrs);
  std::vector<Identifier> vars = {kThis, "v0", "v1", "v2"};
  for (std::size_t i = 1; i < vars.size(); ++i) f.vars[vars[i]] = random_value(rng, addrs);
  f.contn = Continuation::of(StmtList{random_stmt(rng, vars, fields, {"m0", "m1", "m2"}, classes)});
  return {std::move(m), make_config({std::move(f)}, std::move(heap))};
}

}  // namespace chainmail
