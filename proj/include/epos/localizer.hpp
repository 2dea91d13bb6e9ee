#ifndef EPOS_LOCALIZER_HPP
#define EPOS_LOCALIZER_HPP

#include <memory>
#include <string>

#include "epos/structures.hpp"
#include "epos/syntax.hpp"

namespace epos {

/// Quantifier-free positive Boolean formula over true/false.
class BoolFormula {
 public:
  enum class Kind { True, False, And, Or };

  static BoolFormula constant(bool value);
  static BoolFormula conj(BoolFormula lhs, BoolFormula rhs);
  static BoolFormula disj(BoolFormula lhs, BoolFormula rhs);

  Kind kind() const;
  const BoolFormula& lhs() const;
  const BoolFormula& rhs() const;

  bool operator==(const BoolFormula& other) const;

 private:
  struct Node;
  explicit BoolFormula(std::shared_ptr<const Node> node) : node_(std::move(node)) {}

  std::shared_ptr<const Node> node_;
};

std::string to_string(const BoolFormula& b);
bool eval_bool(const BoolFormula& b);

/// Drops quantifiers, keeps the connective skeleton and replaces each atom
/// by whether it is satisfiable on its own. Atoms that agree up to an
/// injective renaming of variables are decided once per call.
BoolFormula localize(const FiniteStructure& s, const Formula& f);
BoolFormula localize(const AtomOracle& o, const Formula& f);

/// Key under which atom decisions are shared: variables renamed by first
/// occurrence.
std::string atom_pattern(const Atom& a);

/// Decides a sentence by evaluating its localizer. Only sound on locally
/// refutable structures, so it throws NotLocallyRefutableError unless the
/// structure is relational and a-valid for some a (or the oracle declares
/// itself locally refutable).
bool decide_fast_path(const FiniteStructure& s, const Formula& sentence);
bool decide_fast_path(const AtomOracle& o, const Formula& sentence);

}  // namespace epos

#endif  // EPOS_LOCALIZER_HPP
