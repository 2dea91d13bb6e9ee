#include "epos/evaluator.hpp"

#include <algorithm>
#include <map>

#include "epos/error.hpp"

namespace epos {

namespace {

// Formulas are compiled once against a structure: variables become slots in
// a flat environment and symbols become pointers to their interpretations.

struct CompiledTerm {
  int slot = -1;
  const Function* fn = nullptr;
  std::vector<CompiledTerm> args;
};

struct CompiledNode {
  Formula::Kind kind;
  int slot = -1;  // Exists
  int lhs = -1;   // Exists body / And / Or
  int rhs = -1;
  const Relation* rel = nullptr;
  std::vector<CompiledTerm> args;
};

class CompiledFormula {
 public:
  CompiledFormula(const FiniteStructure& s, const Formula& f,
                  const std::vector<std::string>& fixed)
      : s_(s) {
    std::vector<std::pair<std::string, int>> scope;
    for (const auto& v : fixed) scope.emplace_back(v, num_slots_++);
    root_ = compile(f, scope);
  }

  int num_slots() const { return num_slots_; }

  bool eval(std::vector<Element>& env) const { return eval(root_, env); }

 private:
  int compile(const Formula& f, std::vector<std::pair<std::string, int>>& scope) {
    CompiledNode node;
    node.kind = f.kind();
    switch (f.kind()) {
      case Formula::Kind::Exists:
        node.slot = num_slots_++;
        scope.emplace_back(f.var(), node.slot);
        node.lhs = compile(f.body(), scope);
        scope.pop_back();
        break;
      case Formula::Kind::And:
      case Formula::Kind::Or:
        node.lhs = compile(f.lhs(), scope);
        node.rhs = compile(f.rhs(), scope);
        break;
      case Formula::Kind::Atom: {
        const Atom& a = f.atom();
        check_signature(a, s_.signature());
        node.rel = &s_.relation(a.relation);
        for (const auto& t : a.args) node.args.push_back(compile(t, scope));
        break;
      }
    }
    nodes_.push_back(std::move(node));
    return static_cast<int>(nodes_.size()) - 1;
  }

  CompiledTerm compile(const Term& t, const std::vector<std::pair<std::string, int>>& scope) {
    CompiledTerm out;
    if (t.is_variable()) {
      for (auto it = scope.rbegin(); it != scope.rend(); ++it)
        if (it->first == t.name) {
          out.slot = it->second;
          return out;
        }
      throw PreconditionError("free variable '" + t.name + "' in evaluated formula");
    }
    out.fn = &s_.function(t.name);
    for (const auto& a : t.args) out.args.push_back(compile(a, scope));
    return out;
  }

  Element eval_term(const CompiledTerm& t, const std::vector<Element>& env) const {
    if (t.slot >= 0) return env[t.slot];
    Element buf[8];
    std::vector<Element> big;
    std::span<Element> args;
    if (t.args.size() <= 8) {
      args = std::span<Element>(buf, t.args.size());
    } else {
      big.resize(t.args.size());
      args = big;
    }
    for (std::size_t i = 0; i < t.args.size(); ++i) args[i] = eval_term(t.args[i], env);
    return t.fn->apply(args);
  }

  bool eval(int idx, std::vector<Element>& env) const {
    const CompiledNode& n = nodes_[idx];
    switch (n.kind) {
      case Formula::Kind::Exists:
        for (Element v = 0; v < s_.domain_size(); ++v) {
          env[n.slot] = v;
          if (eval(n.lhs, env)) return true;
        }
        return false;
      case Formula::Kind::And:
        return eval(n.lhs, env) && eval(n.rhs, env);
      case Formula::Kind::Or:
        return eval(n.lhs, env) || eval(n.rhs, env);
      case Formula::Kind::Atom: {
        Element buf[16];
        std::vector<Element> big;
        std::span<Element> vals;
        if (n.args.size() <= 16) {
          vals = std::span<Element>(buf, n.args.size());
        } else {
          big.resize(n.args.size());
          vals = big;
        }
        for (std::size_t i = 0; i < n.args.size(); ++i) vals[i] = eval_term(n.args[i], env);
        return n.rel->contains(vals);
      }
    }
    return false;
  }

  const FiniteStructure& s_;
  std::vector<CompiledNode> nodes_;
  int root_ = -1;
  int num_slots_ = 0;
};

void check_var_limit(std::size_t count, const Limits& limits) {
  if (count > static_cast<std::size_t>(limits.max_vars))
    throw LimitError("max-vars", std::to_string(count) + " variables exceed the limit of " +
                                     std::to_string(limits.max_vars));
}

}  // namespace

bool brute_force_eval(const FiniteStructure& s, const Formula& sentence, const Limits& limits) {
  return brute_force_eval(s, sentence, Assignment{}, limits);
}

bool brute_force_eval(const FiniteStructure& s, const Formula& f, const Assignment& fixed,
                      const Limits& limits) {
  check_signature(f, s.signature());
  check_var_limit(count_binders(f) + fixed.size(), limits);
  std::vector<std::string> names;
  for (const auto& [name, value] : fixed) {
    if (value >= s.domain_size())
      throw PreconditionError("variable '" + name + "' assigned outside the domain");
    names.push_back(name);
  }
  CompiledFormula cf(s, f, names);
  std::vector<Element> env(static_cast<std::size_t>(cf.num_slots()), 0);
  std::size_t i = 0;
  for (const auto& [name, value] : fixed) env[i++] = value;
  return cf.eval(env);
}

// ---------------------------------------------------------------------------
// CSP search

namespace {

class PPSolver {
 public:
  PPSolver(const FiniteStructure& s, const PPSentence& p) : s_(s), p_(p) {
    for (const auto& a : p.atoms) check_signature(a, s.signature());

    std::map<std::string, int> occurrences;
    for (const auto& v : p.variables) occurrences[v] = 0;
    for (const auto& a : p.atoms)
      for (const auto& v : variables_of(a)) {
        if (occurrences.count(v) == 0)
          throw PreconditionError("variable '" + v + "' of an atom is not quantified");
        ++occurrences[v];
      }
    order_.assign(p.variables.begin(), p.variables.end());
    std::sort(order_.begin(), order_.end());
    order_.erase(std::unique(order_.begin(), order_.end()), order_.end());
    std::stable_sort(order_.begin(), order_.end(), [&](const auto& a, const auto& b) {
      return occurrences[a] > occurrences[b];
    });
    std::map<std::string, int> position;
    for (std::size_t i = 0; i < order_.size(); ++i) position[order_[i]] = static_cast<int>(i);

    checks_.resize(order_.size());
    for (std::size_t i = 0; i < p.atoms.size(); ++i) {
      int level = -1;
      for (const auto& v : variables_of(p.atoms[i])) level = std::max(level, position[v]);
      if (level < 0) ground_.push_back(i);
      else checks_[level].push_back(i);
    }
  }

  std::optional<Assignment> solve() {
    Assignment a;
    for (std::size_t i : ground_)
      if (!eval_atom(s_, p_.atoms[i], a)) return std::nullopt;
    for (const auto& v : order_) a[v] = 0;
    if (!search(0, a)) return std::nullopt;
    return a;
  }

 private:
  bool search(std::size_t level, Assignment& a) {
    if (level == order_.size()) return true;
    Element& slot = a[order_[level]];
    for (Element v = 0; v < s_.domain_size(); ++v) {
      slot = v;
      bool ok = true;
      for (std::size_t i : checks_[level])
        if (!eval_atom(s_, p_.atoms[i], a)) {
          ok = false;
          break;
        }
      if (ok && search(level + 1, a)) return true;
    }
    slot = 0;
    return false;
  }

  const FiniteStructure& s_;
  const PPSentence& p_;
  std::vector<std::string> order_;
  std::vector<std::vector<std::size_t>> checks_;
  std::vector<std::size_t> ground_;
};

}  // namespace

std::optional<Assignment> solve_pp(const FiniteStructure& s, const PPSentence& p) {
  if (p.atoms.empty()) {
    Assignment a;
    for (const auto& v : p.variables) a[v] = 0;
    return a;
  }
  return PPSolver(s, p).solve();
}

// ---------------------------------------------------------------------------
// Branches

std::string choice_string(const std::vector<Choice>& choices) {
  std::string out;
  for (Choice c : choices) out += c == Choice::Left ? 'L' : 'R';
  return out;
}

namespace {

Formula resolve_rec(const Formula& f, const std::vector<Choice>& choices, std::size_t& idx) {
  switch (f.kind()) {
    case Formula::Kind::Exists:
      return Formula::exists(f.var(), resolve_rec(f.body(), choices, idx));
    case Formula::Kind::And: {
      Formula l = resolve_rec(f.lhs(), choices, idx);
      Formula r = resolve_rec(f.rhs(), choices, idx);
      return Formula::conj(l, r);
    }
    case Formula::Kind::Or: {
      Choice c = choices.at(idx++);
      if (c == Choice::Left) {
        Formula l = resolve_rec(f.lhs(), choices, idx);
        idx += count_or_nodes(f.rhs());
        return l;
      }
      idx += count_or_nodes(f.lhs());
      return resolve_rec(f.rhs(), choices, idx);
    }
    case Formula::Kind::Atom:
      return f;
  }
  return f;
}

std::size_t branch_count(const Formula& f, const Limits& limits) {
  std::size_t ors = count_or_nodes(f);
  if (ors >= 63 || (std::size_t{1} << ors) > limits.max_branches)
    throw LimitError("max-branches", std::to_string(ors) + " disjunctions give more than " +
                                         std::to_string(limits.max_branches) + " branches");
  return std::size_t{1} << ors;
}

std::vector<Choice> choices_for(std::size_t mask, std::size_t ors) {
  std::vector<Choice> c(ors);
  for (std::size_t i = 0; i < ors; ++i)
    c[i] = (mask >> (ors - 1 - i)) & 1 ? Choice::Right : Choice::Left;
  return c;
}

}  // namespace

Formula resolve_branch(const Formula& f, const std::vector<Choice>& choices) {
  if (choices.size() != count_or_nodes(f))
    throw PreconditionError("choice vector length does not match the number of disjunctions");
  std::size_t idx = 0;
  return resolve_rec(f, choices, idx);
}

BranchSet enumerate_branches(const Formula& sentence, const Limits& limits) {
  const std::size_t n = branch_count(sentence, limits);
  const std::size_t ors = count_or_nodes(sentence);
  BranchSet out;
  out.reserve(n);
  for (std::size_t mask = 0; mask < n; ++mask) {
    auto choices = choices_for(mask, ors);
    PPSentence pp = to_prenex_pp(resolve_branch(sentence, choices));
    out.push_back(Branch{std::move(choices), std::move(pp)});
  }
  return out;
}

bool eval_via_branches(const FiniteStructure& s, const Formula& sentence, const Limits& limits) {
  check_signature(sentence, s.signature());
  if (!is_sentence(sentence)) throw PreconditionError("formula has free variables");
  const std::size_t n = branch_count(sentence, limits);
  const std::size_t ors = count_or_nodes(sentence);
  for (std::size_t mask = 0; mask < n; ++mask) {
    PPSentence pp = to_prenex_pp(resolve_branch(sentence, choices_for(mask, ors)));
    if (solve_pp(s, pp)) return true;
  }
  return false;
}

std::set<Tuple> defined_relation(const FiniteStructure& s, const Formula& f,
                                 const std::vector<std::string>& vars, const Limits& limits) {
  for (const auto& v : free_variables(f))
    if (std::find(vars.begin(), vars.end(), v) == vars.end())
      throw PreconditionError("free variable '" + v + "' not in the tuple");
  std::vector<std::string> sorted = vars;
  std::sort(sorted.begin(), sorted.end());
  if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end())
    throw PreconditionError("repeated variable in the tuple");
  check_signature(f, s.signature());
  check_var_limit(vars.size() + count_binders(f), limits);
  auto space = tuple_space(s.domain_size(), static_cast<int>(vars.size()), 1u << 24);
  if (!space) throw LimitError("max-vars", "tuple space too large for defined_relation");

  CompiledFormula cf(s, f, vars);
  std::vector<Element> env(static_cast<std::size_t>(cf.num_slots()), 0);
  std::set<Tuple> out;
  Tuple t(vars.size(), 0);
  for (std::uint64_t code = 0; code < *space; ++code) {
    std::uint64_t rest = code;
    for (std::size_t k = vars.size(); k-- > 0;) {
      t[k] = static_cast<Element>(rest % s.domain_size());
      rest /= s.domain_size();
    }
    std::copy(t.begin(), t.end(), env.begin());
    if (cf.eval(env)) out.insert(t);
  }
  return out;
}

}  // namespace epos
