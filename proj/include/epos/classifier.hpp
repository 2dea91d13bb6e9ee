#ifndef EPOS_CLASSIFIER_HPP
#define EPOS_CLASSIFIER_HPP

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "epos/limits.hpp"
#include "epos/structures.hpp"
#include "epos/syntax.hpp"

namespace epos {

/// Bounds for the search for an unsatisfiable conjunction of satisfiable
/// atoms.
struct SearchBounds {
  int max_atoms = 3;
  int max_vars = 3;
  int max_term_depth = 1;
  /// Combinations examined before giving up.
  std::size_t max_steps = 50'000'000;
};

/// Two formulas over a shared variable tuple that each define a non-empty
/// relation while their conjunction defines the empty one.
struct WitnessPair {
  Formula psi0;
  Formula psi1;
  std::vector<std::string> vars;

  std::size_t arity() const { return vars.size(); }
};

enum class Verdict { LocallyRefutable, NotLocallyRefutable, UnknownAtBound };

std::string to_string(Verdict v);

struct ClassificationResult {
  Verdict verdict = Verdict::UnknownAtBound;
  /// LocallyRefutable on a relational structure: every a-valid element.
  std::vector<Element> a_valid;
  /// NotLocallyRefutable: an unsatisfiable conjunction of satisfiable atoms,
  /// minimal under removal of conjuncts, and the pair derived from it. Absent
  /// only if the structure is not a-valid but no witness fits the limits.
  std::optional<std::vector<Atom>> conjunction;
  std::optional<WitnessPair> witness;
  /// "search" or "pigeonhole": where the conjunction came from.
  std::string evidence_source;
  /// UnknownAtBound: the bounds that were exhausted.
  SearchBounds bounds;
};

/// Elements a such that every non-empty relation contains (a,...,a).
/// Rejects structures with function symbols.
std::vector<Element> a_valid_witnesses(const FiniteStructure& s);

/// Exact for relational structures (a-validity). With function symbols the
/// answer comes from the bounded witness search and may be UnknownAtBound.
ClassificationResult classify(const FiniteStructure& s, const SearchBounds& bounds = {},
                              const Limits& limits = {});

/// Smallest conjunction within the bounds whose atoms are each satisfiable
/// but which is unsatisfiable as a whole: fewest atoms first, then fewest
/// variables, then enumeration order. Atoms are ordered by term depth,
/// relation name and argument pattern; only conjunctions whose variables
/// are the first m search variables (x, y, z, u, v, w, x7, ...) are
/// visited. Throws LimitError when `max_steps` or the assignment space is
/// exceeded.
std::optional<std::vector<Atom>> find_unsat_conjunction(const FiniteStructure& s,
                                                        const SearchBounds& bounds);

/// Names used for the i-th search variable.
std::string search_variable(int i);

bool conjunction_satisfiable(const FiniteStructure& s, const std::vector<Atom>& atoms);

/// Shrinks an unsatisfiable conjunction by deletion until every remaining
/// conjunct is needed.
std::vector<Atom> minimize_unsat_conjunction(const FiniteStructure& s, std::vector<Atom> atoms);

/// psi0 = first conjunct, psi1 = the rest. Throws PreconditionError unless
/// the conjunction is unsatisfiable, each conjunct is satisfiable and
/// dropping any conjunct makes it satisfiable.
WitnessPair derive_witness_pair(const FiniteStructure& s, const std::vector<Atom>& conjunction,
                                const Limits& limits = {});

/// Non-empty / non-empty / empty-intersection check via defined_relation.
bool verify_witness_pair(const FiniteStructure& s, const WitnessPair& w,
                         const Limits& limits = {});

struct PigeonholeSpec {
  /// Per domain element a_i: the relation R_i missing (a_i,...,a_i).
  std::vector<std::string> relations;
  std::vector<int> arities;
  int r = 0;  // sum of arities
  int n = 0;  // domain size
  std::vector<std::string> variables;  // x1 .. x_{r*n}
  std::size_t groups = 0;              // injective r-tuples of variables
};

struct PigeonholeSentence {
  Formula sentence;
  PigeonholeSpec spec;
};

/// Sentence that is false in a non-a-valid structure although every atom in
/// it is satisfiable: over all injective r-tuples y of x1..x_{rn}, the
/// conjunction R_1(y_1..y_{r_1}) & ... & R_n(..y_r). R_i is the non-empty
/// relation of least arity (then declaration order) without (a_i,...,a_i).
PigeonholeSentence pigeonhole_sentence(const FiniteStructure& s, const Limits& limits = {});

}  // namespace epos

#endif  // EPOS_CLASSIFIER_HPP
