#ifndef EPOS_STRUCTURES_HPP
#define EPOS_STRUCTURES_HPP

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "epos/syntax.hpp"

namespace epos {

/// Domain elements are the dense integers 0..n-1.
using Element = std::uint32_t;
using Tuple = std::vector<Element>;
using Assignment = std::map<std::string, Element>;

/// Number of tuples of the given arity over an n-element domain, or nullopt
/// when that exceeds `cap`.
std::optional<std::uint64_t> tuple_space(std::uint64_t domain_size, int arity,
                                         std::uint64_t cap = UINT64_MAX);

/// Relation extension. Either an explicit tuple set, or a membership rule
/// (used where the extension is too large to store, e.g. disequality on a
/// big powerset).
class Relation {
 public:
  using Rule = std::function<bool(std::span<const Element>)>;

  Relation() = default;
  static Relation from_tuples(int arity, std::size_t domain_size, std::vector<Tuple> tuples);
  static Relation from_rule(int arity, std::size_t domain_size, Rule rule);

  int arity() const { return arity_; }
  bool contains(std::span<const Element> tuple) const;
  bool is_explicit() const { return !rule_; }

  /// Sorted, duplicate-free extension. Rule-backed relations are enumerated;
  /// throws LimitError when the tuple space exceeds `max_space`.
  std::vector<Tuple> tuples(std::uint64_t max_space = 1u << 24) const;
  std::size_t size(std::uint64_t max_space = 1u << 24) const;
  bool empty(std::uint64_t max_space = 1u << 24) const;

 private:
  int arity_ = 0;
  std::size_t domain_size_ = 0;
  std::vector<Tuple> tuples_;
  std::vector<bool> dense_;  // mixed-radix membership, when small enough
  Rule rule_;
};

/// Total function. A table indexed by the mixed-radix encoding of the
/// arguments (first argument most significant), or a rule.
class Function {
 public:
  using Rule = std::function<Element(std::span<const Element>)>;

  Function() = default;
  static Function from_table(int arity, std::size_t domain_size, std::vector<Element> table);
  static Function from_rule(int arity, std::size_t domain_size, Rule rule);

  int arity() const { return arity_; }
  Element apply(std::span<const Element> args) const;
  /// Empty span for rule-backed functions.
  std::span<const Element> table() const { return table_; }

 private:
  int arity_ = 0;
  std::size_t domain_size_ = 0;
  std::vector<Element> table_;
  Rule rule_;
};

class FiniteStructure {
 public:
  FiniteStructure() = default;
  /// Relations start empty; every function must be set before use.
  FiniteStructure(std::string name, Signature sig, std::size_t domain_size);

  const std::string& name() const { return name_; }
  const Signature& signature() const { return sig_; }
  std::size_t domain_size() const { return domain_size_; }
  bool is_relational() const { return !sig_.has_functions(); }

  void set_relation(const std::string& name, Relation rel);
  void set_relation(const std::string& name, std::vector<Tuple> tuples);
  void set_function(const std::string& name, Function fn);

  const Relation& relation(std::string_view name) const;
  const Function& function(std::string_view name) const;

  /// Checks tuple ranges and function totality; throws PreconditionError.
  void validate() const;

 private:
  std::size_t slot(std::string_view name, SymbolKind kind) const;

  std::string name_;
  Signature sig_;
  std::size_t domain_size_ = 0;
  std::vector<Relation> relations_;  // indexed like sig_.symbols()
  std::vector<Function> functions_;
  std::vector<bool> function_set_;
};

/// Satisfiability of single atoms over a structure that is only known
/// symbolically (an infinite domain). The rule must not depend on variable
/// names beyond their identification pattern.
struct AtomOracle {
  std::string name;
  Signature signature;
  std::function<bool(const Atom&)> rule;
  bool locally_refutable = false;
};

Element eval_term(const FiniteStructure& s, const Term& t, const Assignment& a);
bool eval_atom(const FiniteStructure& s, const Atom& at, const Assignment& a);

/// Exhaustive over the atom's own variables.
bool atom_satisfiable(const FiniteStructure& s, const Atom& at);
bool atom_satisfiable(const AtomOracle& o, const Atom& at);

inline constexpr int kMaxPowersetBase = 16;

/// Subsets of a k-element set as bitmasks, with NEQ, meet, join, c, zero, one.
FiniteStructure powerset_algebra(int k);

/// (N; NEQ), or (N; NEQ, EQ) when `with_equality`.
AtomOracle nat_neq_oracle(bool with_equality);

}  // namespace epos

#endif  // EPOS_STRUCTURES_HPP
