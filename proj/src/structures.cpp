#include "epos/structures.hpp"

#include <algorithm>
#include <set>

#include "epos/error.hpp"

namespace epos {

namespace {

constexpr std::uint64_t kDenseLimit = 1u << 22;

std::uint64_t encode(std::span<const Element> tuple, std::size_t domain_size) {
  std::uint64_t code = 0;
  for (Element e : tuple) code = code * domain_size + e;
  return code;
}

// Calls visit(tuple) for every tuple of the space in lexicographic order
// until it returns false.
template <typename Visit>
void for_each_tuple(std::size_t domain_size, int arity, Visit&& visit) {
  Tuple t(static_cast<std::size_t>(arity), 0);
  if (domain_size == 0 && arity > 0) return;
  while (true) {
    if (!visit(std::as_const(t))) return;
    int i = arity - 1;
    while (i >= 0 && ++t[i] == domain_size) t[i--] = 0;
    if (i < 0) return;
  }
}

}  // namespace

std::optional<std::uint64_t> tuple_space(std::uint64_t domain_size, int arity, std::uint64_t cap) {
  std::uint64_t n = 1;
  for (int i = 0; i < arity; ++i) {
    if (domain_size != 0 && n > cap / domain_size) return std::nullopt;
    n *= domain_size;
  }
  if (n > cap) return std::nullopt;
  return n;
}

// ---------------------------------------------------------------------------
// Relation

Relation Relation::from_tuples(int arity, std::size_t domain_size, std::vector<Tuple> tuples) {
  Relation r;
  r.arity_ = arity;
  r.domain_size_ = domain_size;
  for (const auto& t : tuples) {
    if (t.size() != static_cast<std::size_t>(arity))
      throw PreconditionError("tuple of length " + std::to_string(t.size()) +
                              " in relation of arity " + std::to_string(arity));
    for (Element e : t)
      if (e >= domain_size)
        throw PreconditionError("element " + std::to_string(e) + " outside domain of size " +
                                std::to_string(domain_size));
  }
  std::sort(tuples.begin(), tuples.end());
  tuples.erase(std::unique(tuples.begin(), tuples.end()), tuples.end());
  r.tuples_ = std::move(tuples);
  if (auto space = tuple_space(domain_size, arity, kDenseLimit)) {
    r.dense_.assign(*space, false);
    for (const auto& t : r.tuples_) r.dense_[encode(t, domain_size)] = true;
  }
  return r;
}

Relation Relation::from_rule(int arity, std::size_t domain_size, Rule rule) {
  if (tuple_space(domain_size, arity, kDenseLimit)) {
    std::vector<Tuple> tuples;
    for_each_tuple(domain_size, arity, [&](const Tuple& t) {
      if (rule(t)) tuples.push_back(t);
      return true;
    });
    return from_tuples(arity, domain_size, std::move(tuples));
  }
  Relation r;
  r.arity_ = arity;
  r.domain_size_ = domain_size;
  r.rule_ = std::move(rule);
  return r;
}

bool Relation::contains(std::span<const Element> tuple) const {
  if (tuple.size() != static_cast<std::size_t>(arity_)) return false;
  for (Element e : tuple)
    if (e >= domain_size_) return false;
  if (rule_) return rule_(tuple);
  if (!dense_.empty()) return dense_[encode(tuple, domain_size_)];
  return std::binary_search(tuples_.begin(), tuples_.end(), Tuple(tuple.begin(), tuple.end()));
}

std::vector<Tuple> Relation::tuples(std::uint64_t max_space) const {
  if (!rule_) return tuples_;
  if (!tuple_space(domain_size_, arity_, max_space))
    throw LimitError("max-space", "relation extension too large to enumerate");
  std::vector<Tuple> out;
  for_each_tuple(domain_size_, arity_, [&](const Tuple& t) {
    if (rule_(t)) out.push_back(t);
    return true;
  });
  return out;
}

std::size_t Relation::size(std::uint64_t max_space) const {
  return rule_ ? tuples(max_space).size() : tuples_.size();
}

bool Relation::empty(std::uint64_t max_space) const {
  if (!rule_) return tuples_.empty();
  if (!tuple_space(domain_size_, arity_, max_space))
    throw LimitError("max-space", "relation extension too large to enumerate");
  bool found = false;
  for_each_tuple(domain_size_, arity_, [&](const Tuple& t) {
    found = rule_(t);
    return !found;
  });
  return !found;
}

// ---------------------------------------------------------------------------
// Function

Function Function::from_table(int arity, std::size_t domain_size, std::vector<Element> table) {
  auto space = tuple_space(domain_size, arity);
  if (!space || table.size() != *space)
    throw PreconditionError("function table has " + std::to_string(table.size()) +
                            " entries, expected domain_size^arity");
  for (Element e : table)
    if (e >= domain_size)
      throw PreconditionError("function value " + std::to_string(e) + " outside domain");
  Function f;
  f.arity_ = arity;
  f.domain_size_ = domain_size;
  f.table_ = std::move(table);
  return f;
}

Function Function::from_rule(int arity, std::size_t domain_size, Rule rule) {
  if (auto space = tuple_space(domain_size, arity, 1u << 20)) {
    std::vector<Element> table;
    table.reserve(*space);
    for_each_tuple(domain_size, arity, [&](const Tuple& t) {
      table.push_back(rule(t));
      return true;
    });
    return from_table(arity, domain_size, std::move(table));
  }
  Function f;
  f.arity_ = arity;
  f.domain_size_ = domain_size;
  f.rule_ = std::move(rule);
  return f;
}

Element Function::apply(std::span<const Element> args) const {
  if (rule_) return rule_(args);
  return table_[encode(args, domain_size_)];
}

// ---------------------------------------------------------------------------
// FiniteStructure

FiniteStructure::FiniteStructure(std::string name, Signature sig, std::size_t domain_size)
    : name_(std::move(name)), sig_(std::move(sig)), domain_size_(domain_size) {
  if (domain_size_ == 0) throw PreconditionError("domain size must be positive");
  const auto& syms = sig_.symbols();
  relations_.resize(syms.size());
  functions_.resize(syms.size());
  function_set_.assign(syms.size(), false);
  for (std::size_t i = 0; i < syms.size(); ++i)
    if (syms[i].kind == SymbolKind::Relation)
      relations_[i] = Relation::from_tuples(syms[i].arity, domain_size_, {});
}

std::size_t FiniteStructure::slot(std::string_view name, SymbolKind kind) const {
  const Symbol* s = sig_.find(name);
  if (s == nullptr || s->kind != kind)
    throw SignatureError(std::string(kind == SymbolKind::Relation ? "relation" : "function") +
                         " '" + std::string(name) + "' not in structure '" + name_ + "'");
  return static_cast<std::size_t>(s - sig_.symbols().data());
}

void FiniteStructure::set_relation(const std::string& name, Relation rel) {
  std::size_t i = slot(name, SymbolKind::Relation);
  if (rel.arity() != sig_.symbols()[i].arity)
    throw SignatureError("arity mismatch for relation '" + name + "'");
  relations_[i] = std::move(rel);
}

void FiniteStructure::set_relation(const std::string& name, std::vector<Tuple> tuples) {
  std::size_t i = slot(name, SymbolKind::Relation);
  relations_[i] = Relation::from_tuples(sig_.symbols()[i].arity, domain_size_, std::move(tuples));
}

void FiniteStructure::set_function(const std::string& name, Function fn) {
  std::size_t i = slot(name, SymbolKind::Function);
  if (fn.arity() != sig_.symbols()[i].arity)
    throw SignatureError("arity mismatch for function '" + name + "'");
  functions_[i] = std::move(fn);
  function_set_[i] = true;
}

const Relation& FiniteStructure::relation(std::string_view name) const {
  return relations_[slot(name, SymbolKind::Relation)];
}

const Function& FiniteStructure::function(std::string_view name) const {
  std::size_t i = slot(name, SymbolKind::Function);
  if (!function_set_[i])
    throw PreconditionError("function '" + std::string(name) + "' has no table");
  return functions_[i];
}

void FiniteStructure::validate() const {
  const auto& syms = sig_.symbols();
  for (std::size_t i = 0; i < syms.size(); ++i) {
    if (syms[i].kind == SymbolKind::Function && !function_set_[i])
      throw PreconditionError("function '" + syms[i].name + "' has no table");
  }
}

// ---------------------------------------------------------------------------
// Evaluation

Element eval_term(const FiniteStructure& s, const Term& t, const Assignment& a) {
  if (t.is_variable()) {
    auto it = a.find(t.name);
    if (it == a.end()) throw PreconditionError("unbound variable '" + t.name + "'");
    if (it->second >= s.domain_size())
      throw PreconditionError("variable '" + t.name + "' assigned outside the domain");
    return it->second;
  }
  const Function& f = s.function(t.name);
  if (static_cast<std::size_t>(f.arity()) != t.args.size())
    throw SignatureError("arity mismatch for function '" + t.name + "'");
  Tuple args;
  args.reserve(t.args.size());
  for (const auto& arg : t.args) args.push_back(eval_term(s, arg, a));
  return f.apply(args);
}

bool eval_atom(const FiniteStructure& s, const Atom& at, const Assignment& a) {
  const Relation& r = s.relation(at.relation);
  if (static_cast<std::size_t>(r.arity()) != at.args.size())
    throw SignatureError("arity mismatch for relation '" + at.relation + "'");
  Tuple values;
  values.reserve(at.args.size());
  for (const auto& t : at.args) values.push_back(eval_term(s, t, a));
  return r.contains(values);
}

bool atom_satisfiable(const FiniteStructure& s, const Atom& at) {
  check_signature(at, s.signature());
  const auto vars = variables_of(at);
  if (!tuple_space(s.domain_size(), static_cast<int>(vars.size()), 1ull << 32))
    throw LimitError("max-space", "too many assignments for atom " + to_string(at));
  Assignment a;
  for (const auto& v : vars) a[v] = 0;
  bool found = false;
  for_each_tuple(s.domain_size(), static_cast<int>(vars.size()), [&](const Tuple& t) {
    for (std::size_t i = 0; i < vars.size(); ++i) a[vars[i]] = t[i];
    found = eval_atom(s, at, a);
    return !found;
  });
  return found;
}

bool atom_satisfiable(const AtomOracle& o, const Atom& at) {
  check_signature(at, o.signature);
  return o.rule(at);
}

// ---------------------------------------------------------------------------
// Built-in structures

FiniteStructure powerset_algebra(int k) {
  if (k < 1 || k > kMaxPowersetBase)
    throw PreconditionError("powerset base size must be in 1.." +
                            std::to_string(kMaxPowersetBase));
  const std::size_t n = std::size_t{1} << k;
  const Element full = static_cast<Element>(n - 1);
  Signature sig;
  sig.add_relation("NEQ", 2)
      .add_function("meet", 2)
      .add_function("join", 2)
      .add_function("c", 1)
      .add_function("zero", 0)
      .add_function("one", 0);
  FiniteStructure s("powerset:" + std::to_string(k), sig, n);
  s.set_relation("NEQ", Relation::from_rule(2, n, [](std::span<const Element> t) {
                   return t[0] != t[1];
                 }));
  s.set_function("meet", Function::from_rule(2, n, [](std::span<const Element> t) {
                   return t[0] & t[1];
                 }));
  s.set_function("join", Function::from_rule(2, n, [](std::span<const Element> t) {
                   return t[0] | t[1];
                 }));
  s.set_function("c", Function::from_rule(1, n, [full](std::span<const Element> t) {
                   return full & ~t[0];
                 }));
  s.set_function("zero", Function::from_table(0, n, {0}));
  s.set_function("one", Function::from_table(0, n, {full}));
  return s;
}

AtomOracle nat_neq_oracle(bool with_equality) {
  AtomOracle o;
  o.name = with_equality ? "nat_neq_eq" : "nat_neq";
  o.signature.add_relation("NEQ", 2);
  if (with_equality) o.signature.add_relation("EQ", 2);
  o.rule = [](const Atom& at) {
    if (at.relation == "EQ") return true;
    return at.args[0].name != at.args[1].name;
  };
  o.locally_refutable = !with_equality;
  return o;
}

}  // namespace epos
