#include "epos/localizer.hpp"

#include <map>
#include <optional>

#include "epos/classifier.hpp"
#include "epos/error.hpp"

namespace epos {

struct BoolFormula::Node {
  Kind kind;
  std::optional<BoolFormula> lhs;
  std::optional<BoolFormula> rhs;
};

BoolFormula BoolFormula::constant(bool value) {
  static const BoolFormula t(std::make_shared<const Node>(Node{Kind::True, {}, {}}));
  static const BoolFormula f(std::make_shared<const Node>(Node{Kind::False, {}, {}}));
  return value ? t : f;
}

BoolFormula BoolFormula::conj(BoolFormula lhs, BoolFormula rhs) {
  return BoolFormula(std::make_shared<const Node>(Node{Kind::And, std::move(lhs), std::move(rhs)}));
}

BoolFormula BoolFormula::disj(BoolFormula lhs, BoolFormula rhs) {
  return BoolFormula(std::make_shared<const Node>(Node{Kind::Or, std::move(lhs), std::move(rhs)}));
}

BoolFormula::Kind BoolFormula::kind() const { return node_->kind; }
const BoolFormula& BoolFormula::lhs() const { return *node_->lhs; }
const BoolFormula& BoolFormula::rhs() const { return *node_->rhs; }

bool BoolFormula::operator==(const BoolFormula& other) const {
  if (node_ == other.node_) return true;
  if (kind() != other.kind()) return false;
  if (kind() == Kind::True || kind() == Kind::False) return true;
  return lhs() == other.lhs() && rhs() == other.rhs();
}

std::string to_string(const BoolFormula& b) {
  switch (b.kind()) {
    case BoolFormula::Kind::True:
      return "true";
    case BoolFormula::Kind::False:
      return "false";
    case BoolFormula::Kind::And:
      return "And(" + to_string(b.lhs()) + ", " + to_string(b.rhs()) + ")";
    case BoolFormula::Kind::Or:
      return "Or(" + to_string(b.lhs()) + ", " + to_string(b.rhs()) + ")";
  }
  return {};
}

bool eval_bool(const BoolFormula& b) {
  switch (b.kind()) {
    case BoolFormula::Kind::True:
      return true;
    case BoolFormula::Kind::False:
      return false;
    case BoolFormula::Kind::And:
      return eval_bool(b.lhs()) && eval_bool(b.rhs());
    case BoolFormula::Kind::Or:
      return eval_bool(b.lhs()) || eval_bool(b.rhs());
  }
  return false;
}

namespace {

void pattern_term(const Term& t, std::map<std::string, int>& ids, std::string& out) {
  if (t.is_variable()) {
    auto [it, inserted] = ids.emplace(t.name, static_cast<int>(ids.size()));
    out += "$" + std::to_string(it->second);
    return;
  }
  out += t.name;
  if (t.args.empty()) return;
  out += '(';
  for (std::size_t i = 0; i < t.args.size(); ++i) {
    if (i) out += ',';
    pattern_term(t.args[i], ids, out);
  }
  out += ')';
}

template <typename Decide>
BoolFormula localize_rec(const Formula& f, std::map<std::string, bool>& memo, Decide& decide) {
  switch (f.kind()) {
    case Formula::Kind::Exists:
      return localize_rec(f.body(), memo, decide);
    case Formula::Kind::And:
      return BoolFormula::conj(localize_rec(f.lhs(), memo, decide),
                               localize_rec(f.rhs(), memo, decide));
    case Formula::Kind::Or:
      return BoolFormula::disj(localize_rec(f.lhs(), memo, decide),
                               localize_rec(f.rhs(), memo, decide));
    case Formula::Kind::Atom: {
      const std::string key = atom_pattern(f.atom());
      auto it = memo.find(key);
      if (it == memo.end()) it = memo.emplace(key, decide(f.atom())).first;
      return BoolFormula::constant(it->second);
    }
  }
  return BoolFormula::constant(false);
}

}  // namespace

std::string atom_pattern(const Atom& a) {
  std::map<std::string, int> ids;
  std::string out = a.relation + "(";
  for (std::size_t i = 0; i < a.args.size(); ++i) {
    if (i) out += ',';
    pattern_term(a.args[i], ids, out);
  }
  return out + ")";
}

BoolFormula localize(const FiniteStructure& s, const Formula& f) {
  check_signature(f, s.signature());
  std::map<std::string, bool> memo;
  auto decide = [&](const Atom& a) { return atom_satisfiable(s, a); };
  return localize_rec(f, memo, decide);
}

BoolFormula localize(const AtomOracle& o, const Formula& f) {
  check_signature(f, o.signature);
  std::map<std::string, bool> memo;
  auto decide = [&](const Atom& a) { return o.rule(a); };
  return localize_rec(f, memo, decide);
}

bool decide_fast_path(const FiniteStructure& s, const Formula& sentence) {
  if (!s.is_relational())
    throw NotLocallyRefutableError("structure '" + s.name() +
                                   "' has function symbols; local refutability is not verified");
  if (a_valid_witnesses(s).empty())
    throw NotLocallyRefutableError("structure '" + s.name() +
                                   "' is not a-valid, hence not locally refutable");
  if (!is_sentence(sentence)) throw PreconditionError("formula has free variables");
  return eval_bool(localize(s, sentence));
}

bool decide_fast_path(const AtomOracle& o, const Formula& sentence) {
  if (!o.locally_refutable)
    throw NotLocallyRefutableError("structure '" + o.name + "' is not locally refutable");
  if (!is_sentence(sentence)) throw PreconditionError("formula has free variables");
  return eval_bool(localize(o, sentence));
}

}  // namespace epos
