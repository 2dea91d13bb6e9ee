#ifndef EPOS_SYNTAX_HPP
#define EPOS_SYNTAX_HPP

#include <map>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace epos {

// ---------------------------------------------------------------------------
// Signatures
// ---------------------------------------------------------------------------

enum class SymbolKind { Relation, Function };

struct Symbol {
  std::string name;
  SymbolKind kind;
  int arity;
};

/// Relation and function symbols in declaration order. Names are unique
/// across both kinds; a function of arity 0 is a constant.
class Signature {
 public:
  Signature() = default;

  Signature& add_relation(std::string name, int arity);
  Signature& add_function(std::string name, int arity);

  const Symbol* find(std::string_view name) const;
  std::optional<int> relation_arity(std::string_view name) const;
  std::optional<int> function_arity(std::string_view name) const;

  /// Declaration order across both kinds.
  const std::vector<Symbol>& symbols() const { return symbols_; }
  std::vector<Symbol> relations() const;
  std::vector<Symbol> functions() const;
  bool has_functions() const;

  bool operator==(const Signature& other) const;

 private:
  Signature& add(std::string name, SymbolKind kind, int arity);

  std::vector<Symbol> symbols_;
  std::map<std::string, std::size_t, std::less<>> index_;
};

// ---------------------------------------------------------------------------
// Terms and atoms
// ---------------------------------------------------------------------------

struct Term {
  enum class Kind { Variable, Apply };

  Kind kind = Kind::Variable;
  std::string name;
  std::vector<Term> args;

  static Term var(std::string name);
  static Term apply(std::string function, std::vector<Term> args = {});

  bool is_variable() const { return kind == Kind::Variable; }
  /// Variables have depth 0; f(t1..tn) has 1 + max depth of its arguments, so
  /// constants have depth 1.
  int depth() const;

  bool operator==(const Term& other) const;
};

struct Atom {
  std::string relation;
  std::vector<Term> args;

  int depth() const;
  bool operator==(const Atom& other) const;
};

std::string to_string(const Term& t);
std::string to_string(const Atom& a);

/// Variables of a term/atom in first-occurrence order.
std::vector<std::string> variables_of(const Term& t);
std::vector<std::string> variables_of(const Atom& a);

// ---------------------------------------------------------------------------
// Formulas
// ---------------------------------------------------------------------------

/// Immutable existential positive formula. Copies share structure.
class Formula {
 public:
  enum class Kind { Exists, And, Or, Atom };

  static Formula exists(std::string var, Formula body);
  static Formula conj(Formula lhs, Formula rhs);
  static Formula disj(Formula lhs, Formula rhs);
  static Formula atom(Atom a);

  Kind kind() const;
  bool is_atom() const { return kind() == Kind::Atom; }

  /// Bound variable of an Exists node.
  const std::string& var() const;
  /// Body of an Exists node.
  const Formula& body() const;
  const Formula& lhs() const;
  const Formula& rhs() const;
  const Atom& atom() const;

  bool operator==(const Formula& other) const;

 private:
  struct Node;
  explicit Formula(std::shared_ptr<const Node> node) : node_(std::move(node)) {}

  std::shared_ptr<const Node> node_;
};

/// Left-associated conjunction/disjunction of a non-empty list.
Formula conjoin(const std::vector<Formula>& parts);
Formula disjoin(const std::vector<Formula>& parts);
/// Wraps `body` in Exists nodes, first variable outermost.
Formula exists_all(const std::vector<std::string>& vars, Formula body);

/// Flattens nested And nodes into their operands, left to right.
std::vector<Formula> top_level_conjuncts(const Formula& f);

std::size_t count_or_nodes(const Formula& f);
std::size_t count_atoms(const Formula& f);
std::size_t count_binders(const Formula& f);
/// Every variable name occurring in the formula, bound or free.
std::vector<std::string> all_variable_names(const Formula& f);
/// Atoms in left-to-right order.
std::vector<Atom> atoms_of(const Formula& f);

std::vector<std::string> free_variables(const Formula& f);
bool is_sentence(const Formula& f);

/// Capture-avoiding replacement of free variables by variables. Bound
/// variables that would capture a replacement are renamed.
Formula rename_free(const Formula& f,
                    const std::map<std::string, std::string>& renaming);

/// Throws SignatureError if a symbol is undeclared or used at the wrong arity.
void check_signature(const Formula& f, const Signature& sig);
void check_signature(const Atom& a, const Signature& sig);
void check_signature(const Term& t, const Signature& sig);

// ---------------------------------------------------------------------------
// Primitive positive sentences
// ---------------------------------------------------------------------------

struct PPSentence {
  std::vector<std::string> variables;
  std::vector<Atom> atoms;

  bool operator==(const PPSentence& other) const = default;
};

/// Renders as an Exists chain over the conjunction; requires at least one
/// atom.
Formula to_formula(const PPSentence& p);
std::string to_string(const PPSentence& p);

/// Pulls every quantifier of an Or-free formula to the front. Sibling
/// binders that reuse a name are renamed to name_k with the smallest k that
/// is fresh. Free variables, if any, are existentially closed and listed
/// first.
PPSentence to_prenex_pp(const Formula& f);

// ---------------------------------------------------------------------------
// Text formats
// ---------------------------------------------------------------------------

Formula parse_formula(std::string_view text, const Signature& sig);
Term parse_term(std::string_view text, const Signature& sig);
std::string print_formula(const Formula& f);

struct CNF {
  int num_vars = 0;
  std::vector<std::vector<int>> clauses;

  bool operator==(const CNF& other) const = default;
};

CNF parse_dimacs(std::string_view text);
std::string print_dimacs(const CNF& cnf);

}  // namespace epos

#endif  // EPOS_SYNTAX_HPP
