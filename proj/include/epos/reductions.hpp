#ifndef EPOS_REDUCTIONS_HPP
#define EPOS_REDUCTIONS_HPP

#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include "epos/classifier.hpp"
#include "epos/limits.hpp"
#include "epos/structures.hpp"
#include "epos/syntax.hpp"

namespace epos {

// ---------------------------------------------------------------------------
// Propositional formulas in negation normal form

/// Literals over variables 1..n combined with and/or. Negation exists only
/// on literals, so every value is in negation normal form.
class PropFormula {
 public:
  enum class Kind { Literal, And, Or };

  static PropFormula literal(int var, bool positive = true);
  static PropFormula conj(PropFormula lhs, PropFormula rhs);
  static PropFormula disj(PropFormula lhs, PropFormula rhs);

  Kind kind() const;
  int var() const;
  bool positive() const;
  const PropFormula& lhs() const;
  const PropFormula& rhs() const;

  int max_var() const;
  bool eval(const std::vector<bool>& values) const;  // values[v] for v >= 1

 private:
  struct Node;
  explicit PropFormula(std::shared_ptr<const Node> node) : node_(std::move(node)) {}

  std::shared_ptr<const Node> node_;
};

/// Grammar: or := and ('|' and)* ; and := unit ('&' unit)* ;
/// unit := '(' or ')' | ['-' | '~'] INT. Negating a parenthesised formula
/// is rejected as not being in negation normal form.
PropFormula parse_prop(std::string_view text);
std::string to_string(const PropFormula& p);

/// Conjunction of clauses, each a disjunction of its literals.
PropFormula cnf_to_prop(const CNF& cnf);

/// Exhaustive checks, for verification of small instances (<= 24 variables).
bool cnf_satisfiable(const CNF& cnf);
bool prop_satisfiable(const PropFormula& p);

// ---------------------------------------------------------------------------
// Hardness gadget

struct GadgetInstance {
  Formula formula;
  /// blocks[i - 1] holds the fresh variables standing for Boolean variable i.
  std::vector<std::vector<std::string>> blocks;
};

/// Encodes each Boolean variable v by a block of fresh variables that must
/// satisfy psi0 or psi1 (psi1 meaning "v is true"); positive literals
/// become psi1 over the block and negative ones psi0. The result is true in
/// `s` iff `prop` is satisfiable. `num_vars` (if larger) adds blocks for
/// variables that do not occur.
GadgetInstance boolean_embed(const FiniteStructure& s, const PropFormula& prop,
                             const WitnessPair& w, int num_vars = 0);

struct GadgetOptions {
  /// Clauses with fewer than three literals get their last literal repeated.
  bool pad_short_clauses = true;
};

/// The 3-SAT gadget: boolean_embed applied to the (padded) clause list.
GadgetInstance threesat_to_expos(const FiniteStructure& s, const CNF& cnf, const WitnessPair& w,
                                 const GadgetOptions& options = {});

// ---------------------------------------------------------------------------
// Product reduction

/// Replaces all relations by their Cartesian product, in declaration order.
FiniteStructure product_structure(const FiniteStructure& s, const Limits& limits = {});

/// Name of the single relation of product_structure(s).
std::string product_relation_name(const FiniteStructure& s);

/// Rewrites each atom R_i(t) into E p... . R(p.., t, p..) with fresh
/// padding variables per atom occurrence, so that the result holds in
/// product_structure(s) iff `f` holds in `s`.
Formula product_rewrite(const Formula& f, const FiniteStructure& s);

// ---------------------------------------------------------------------------
// Boolean-algebra reductions

/// E v1..vn. NEQ(t, zero) where t is the CNF with clauses joined by meet,
/// literals by join and negation as c.
Formula sat_to_ba_expos(const CNF& cnf);

/// NEQ(lhs, rhs) as NEQ(join(meet(lhs, c(rhs)), meet(c(lhs), rhs)), zero).
Atom normalize_diseq(const Term& lhs, const Term& rhs);

}  // namespace epos

#endif  // EPOS_REDUCTIONS_HPP
