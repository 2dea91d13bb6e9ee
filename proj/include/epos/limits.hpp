#ifndef EPOS_LIMITS_HPP
#define EPOS_LIMITS_HPP

#include <cstddef>
#include <string_view>

namespace epos {

/// Hard limits. Exceeding one raises LimitError naming it; nothing is
/// silently truncated.
struct Limits {
  /// Bound variables for brute-force evaluation and defined_relation.
  int max_vars = 24;
  /// Branches produced by the disjunction expansion.
  std::size_t max_branches = std::size_t{1} << 20;
  /// Conjuncts in a generated pigeonhole sentence.
  std::size_t max_conjuncts = 20000;
  /// Total arity of a product relation.
  int max_product_arity = 24;
  /// Tuples in a product relation.
  std::size_t max_product_tuples = std::size_t{1} << 22;
};

/// Applies comma-separated key=value overrides, e.g.
/// "max_vars=12,max_branches=4096". Unknown keys and bad values throw
/// PreconditionError.
Limits apply_overrides(Limits base, std::string_view spec);

}  // namespace epos

#endif  // EPOS_LIMITS_HPP
