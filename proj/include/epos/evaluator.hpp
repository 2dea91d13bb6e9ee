#ifndef EPOS_EVALUATOR_HPP
#define EPOS_EVALUATOR_HPP

#include <optional>
#include <set>
#include <string>
#include <vector>

#include "epos/limits.hpp"
#include "epos/structures.hpp"
#include "epos/syntax.hpp"

namespace epos {

/// Direct recursive semantics: the reference answer every other decision
/// path is checked against.
bool brute_force_eval(const FiniteStructure& s, const Formula& sentence,
                      const Limits& limits = {});

/// Truth of `f` with its free variables fixed by `fixed`.
bool brute_force_eval(const FiniteStructure& s, const Formula& f, const Assignment& fixed,
                      const Limits& limits = {});

/// Backtracking CSP search with consistency checks as soon as an atom's
/// variables are all assigned. Variables are tried by decreasing number of
/// occurrences (ties by name), values in ascending order. Variables that
/// occur in no atom get 0.
std::optional<Assignment> solve_pp(const FiniteStructure& s, const PPSentence& p);

enum class Choice { Left, Right };

struct Branch {
  /// One entry per Or node of the source, in pre-order.
  std::vector<Choice> choices;
  PPSentence sentence;
};

using BranchSet = std::vector<Branch>;

std::string choice_string(const std::vector<Choice>& choices);

/// Resolves every disjunction both ways: 2^(#Or) branches, choice vectors in
/// lexicographic order with Left first.
BranchSet enumerate_branches(const Formula& sentence, const Limits& limits = {});

/// The branch for one choice vector.
Formula resolve_branch(const Formula& f, const std::vector<Choice>& choices);

/// True iff some branch is satisfiable under solve_pp.
bool eval_via_branches(const FiniteStructure& s, const Formula& sentence,
                       const Limits& limits = {});

/// Tuples over `vars` satisfying `f`; free variables of `f` must be among
/// `vars`.
std::set<Tuple> defined_relation(const FiniteStructure& s, const Formula& f,
                                 const std::vector<std::string>& vars, const Limits& limits = {});

}  // namespace epos

#endif  // EPOS_EVALUATOR_HPP
