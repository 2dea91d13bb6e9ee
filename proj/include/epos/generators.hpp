#ifndef EPOS_GENERATORS_HPP
#define EPOS_GENERATORS_HPP

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "epos/reductions.hpp"
#include "epos/structures.hpp"
#include "epos/syntax.hpp"

// Seeded random instances for the property checks and `epos gen`. The same
// seed and options always give the same output.
namespace epos::gen {

using Rng = std::mt19937_64;

enum class Validity { Any, AValid, NotAValid };

struct StructureOptions {
  int min_domain = 1;
  int max_domain = 3;
  int min_relations = 1;
  int max_relations = 2;
  int max_arity = 3;
  /// Every relation gets at least one tuple.
  bool nonempty = true;
  /// Without `nonempty`, each relation is left empty with this probability
  /// (before validity is arranged; AValid plants nothing in empty relations).
  double empty_probability = 0.0;
  Validity validity = Validity::Any;
};

/// Relations are named R1, R2, ...; the structure is named "random".
/// AValid plants a diagonal tuple for a random element into every relation;
/// NotAValid removes, for each element, its diagonal tuple from some
/// relation (and needs a domain where that leaves the relation non-empty).
FiniteStructure random_structure(Rng& rng, const StructureOptions& options);

struct SentenceOptions {
  int max_bound_vars = 6;
  int max_atoms = 8;
  int max_or = 3;
  /// Terms are variables when 0; otherwise function terms up to this depth
  /// over the signature's functions.
  int max_term_depth = 0;
};

/// A sentence over the relations of `sig`. Binders sit at the smallest
/// subtree that covers their variable or at the root, chosen at random.
Formula random_sentence(Rng& rng, const Signature& sig, const SentenceOptions& options);

/// Clause lengths in [min_len, max_len]; variables 1..num_vars, all used
/// or not, at random.
CNF random_cnf(Rng& rng, int max_vars, int max_clauses, int min_len = 1, int max_len = 3);

/// NNF formula with `leaves` literals over variables 1..num_vars.
PropFormula random_prop(Rng& rng, int num_vars, int leaves);

/// Term of depth at most `max_depth` over the functions of `sig` and `vars`.
Term random_term(Rng& rng, const Signature& sig, const std::vector<std::string>& vars,
                 int max_depth);

/// Uniform integer in [lo, hi].
int uniform(Rng& rng, int lo, int hi);

}  // namespace epos::gen

#endif  // EPOS_GENERATORS_HPP
