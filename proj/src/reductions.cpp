#include "epos/reductions.hpp"

#include <algorithm>
#include <cctype>
#include <map>
#include <optional>
#include <set>

#include "epos/boolean_algebra.hpp"
#include "epos/error.hpp"

namespace epos {

// ---------------------------------------------------------------------------
// PropFormula

struct PropFormula::Node {
  Kind kind;
  int var = 0;
  bool positive = true;
  std::optional<PropFormula> lhs;
  std::optional<PropFormula> rhs;
};

PropFormula PropFormula::literal(int var, bool positive) {
  if (var < 1) throw PreconditionError("propositional variables are numbered from 1");
  return PropFormula(std::make_shared<const Node>(Node{Kind::Literal, var, positive, {}, {}}));
}

PropFormula PropFormula::conj(PropFormula lhs, PropFormula rhs) {
  return PropFormula(
      std::make_shared<const Node>(Node{Kind::And, 0, true, std::move(lhs), std::move(rhs)}));
}

PropFormula PropFormula::disj(PropFormula lhs, PropFormula rhs) {
  return PropFormula(
      std::make_shared<const Node>(Node{Kind::Or, 0, true, std::move(lhs), std::move(rhs)}));
}

PropFormula::Kind PropFormula::kind() const { return node_->kind; }
int PropFormula::var() const { return node_->var; }
bool PropFormula::positive() const { return node_->positive; }
const PropFormula& PropFormula::lhs() const { return *node_->lhs; }
const PropFormula& PropFormula::rhs() const { return *node_->rhs; }

int PropFormula::max_var() const {
  if (kind() == Kind::Literal) return var();
  return std::max(lhs().max_var(), rhs().max_var());
}

bool PropFormula::eval(const std::vector<bool>& values) const {
  switch (kind()) {
    case Kind::Literal:
      return values.at(static_cast<std::size_t>(var())) == positive();
    case Kind::And:
      return lhs().eval(values) && rhs().eval(values);
    case Kind::Or:
      return lhs().eval(values) || rhs().eval(values);
  }
  return false;
}

namespace {

class PropParser {
 public:
  explicit PropParser(std::string_view text) : text_(text) {}

  PropFormula parse() {
    PropFormula p = or_expr();
    if (peek() != '\0') throw ParseError("unexpected trailing input", pos_);
    return p;
  }

 private:
  char peek() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    return pos_ < text_.size() ? text_[pos_] : '\0';
  }

  PropFormula or_expr() {
    PropFormula p = and_expr();
    while (peek() == '|') {
      ++pos_;
      p = PropFormula::disj(p, and_expr());
    }
    return p;
  }

  PropFormula and_expr() {
    PropFormula p = unit();
    while (peek() == '&') {
      ++pos_;
      p = PropFormula::conj(p, unit());
    }
    return p;
  }

  PropFormula unit() {
    char c = peek();
    if (c == '(') {
      ++pos_;
      PropFormula p = or_expr();
      if (peek() != ')') throw ParseError("expected ')'", pos_);
      ++pos_;
      return p;
    }
    bool positive = true;
    if (c == '-' || c == '~') {
      positive = false;
      ++pos_;
      if (peek() == '(' || peek() == '-' || peek() == '~')
        throw ParseError("negation applies to variables only (negation normal form)", pos_);
    }
    peek();
    std::size_t start = pos_;
    while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    if (start == pos_) throw ParseError("expected variable number", pos_);
    if (pos_ - start > 6) throw ParseError("variable number too large", start);
    int v = std::stoi(std::string(text_.substr(start, pos_ - start)));
    if (v < 1) throw ParseError("variables are numbered from 1", start);
    return PropFormula::literal(v, positive);
  }

  std::string_view text_;
  std::size_t pos_ = 0;
};

}  // namespace

PropFormula parse_prop(std::string_view text) { return PropParser(text).parse(); }

std::string to_string(const PropFormula& p) {
  switch (p.kind()) {
    case PropFormula::Kind::Literal:
      return (p.positive() ? "" : "-") + std::to_string(p.var());
    case PropFormula::Kind::And: {
      auto side = [](const PropFormula& q, bool right) {
        bool paren = q.kind() == PropFormula::Kind::Or ||
                     (right && q.kind() == PropFormula::Kind::And);
        return paren ? "(" + to_string(q) + ")" : to_string(q);
      };
      return side(p.lhs(), false) + " & " + side(p.rhs(), true);
    }
    case PropFormula::Kind::Or: {
      auto right = p.rhs().kind() == PropFormula::Kind::Or ? "(" + to_string(p.rhs()) + ")"
                                                            : to_string(p.rhs());
      return to_string(p.lhs()) + " | " + right;
    }
  }
  return {};
}

PropFormula cnf_to_prop(const CNF& cnf) {
  if (cnf.clauses.empty()) throw PreconditionError("CNF without clauses has no NNF formula");
  std::optional<PropFormula> acc;
  for (const auto& clause : cnf.clauses) {
    if (clause.empty()) throw PreconditionError("empty clause");
    std::optional<PropFormula> c;
    for (int lit : clause) {
      PropFormula l = PropFormula::literal(std::abs(lit), lit > 0);
      c = c ? PropFormula::disj(*c, l) : l;
    }
    acc = acc ? PropFormula::conj(*acc, *c) : *c;
  }
  return *acc;
}

bool cnf_satisfiable(const CNF& cnf) {
  if (cnf.num_vars > 24) throw LimitError("max-vars", "CNF too large for exhaustive check");
  const std::uint64_t total = std::uint64_t{1} << cnf.num_vars;
  for (std::uint64_t m = 0; m < total; ++m) {
    bool all = true;
    for (const auto& clause : cnf.clauses) {
      bool sat = false;
      for (int lit : clause) {
        bool value = (m >> (std::abs(lit) - 1)) & 1;
        if (value == (lit > 0)) {
          sat = true;
          break;
        }
      }
      if (!sat) {
        all = false;
        break;
      }
    }
    if (all) return true;
  }
  return false;
}

bool prop_satisfiable(const PropFormula& p) {
  const int n = p.max_var();
  if (n > 24) throw LimitError("max-vars", "formula too large for exhaustive check");
  std::vector<bool> values(static_cast<std::size_t>(n) + 1);
  for (std::uint64_t m = 0; m < (std::uint64_t{1} << n); ++m) {
    for (int v = 1; v <= n; ++v) values[static_cast<std::size_t>(v)] = (m >> (v - 1)) & 1;
    if (p.eval(values)) return true;
  }
  return false;
}

// ---------------------------------------------------------------------------
// Gadgets

namespace {

// Smallest prefix (base, base_, base__, ...) for which no generated name
// collides with `avoid`.
template <typename MakeNames>
std::string collision_free_prefix(const std::string& base, const std::set<std::string>& avoid,
                                  MakeNames&& names_for) {
  std::string prefix = base;
  while (true) {
    bool clash = false;
    for (const auto& n : names_for(prefix))
      if (avoid.count(n) != 0) {
        clash = true;
        break;
      }
    if (!clash) return prefix;
    prefix += "_";
  }
}

Formula embed_rec(const PropFormula& p, const std::vector<Formula>& pos,
                  const std::vector<Formula>& neg) {
  switch (p.kind()) {
    case PropFormula::Kind::Literal:
      return p.positive() ? pos[p.var() - 1] : neg[p.var() - 1];
    case PropFormula::Kind::And:
      return Formula::conj(embed_rec(p.lhs(), pos, neg), embed_rec(p.rhs(), pos, neg));
    case PropFormula::Kind::Or:
      return Formula::disj(embed_rec(p.lhs(), pos, neg), embed_rec(p.rhs(), pos, neg));
  }
  throw PreconditionError("unknown propositional node");
}

}  // namespace

namespace {

// `prop` may be null: only the per-variable conjuncts are emitted.
GadgetInstance embed_impl(const FiniteStructure& s, const PropFormula* prop, const WitnessPair& w,
                          int num_vars) {
  if (w.vars.empty()) throw PreconditionError("witness pair has no variables");
  if (!verify_witness_pair(s, w)) throw PreconditionError("witness pair does not verify");
  const int n = std::max(num_vars, prop ? prop->max_var() : 0);
  if (n < 1) throw PreconditionError("no propositional variables");
  const std::size_t d = w.vars.size();

  std::set<std::string> avoid;
  for (const auto& v : all_variable_names(w.psi0)) avoid.insert(v);
  for (const auto& v : all_variable_names(w.psi1)) avoid.insert(v);
  avoid.insert(w.vars.begin(), w.vars.end());
  for (const auto& sym : s.signature().symbols()) avoid.insert(sym.name);
  auto block_name = [](const std::string& prefix, int i, std::size_t j) {
    return prefix + std::to_string(i) + "_b" + std::to_string(j);
  };
  const std::string prefix = collision_free_prefix("v", avoid, [&](const std::string& pre) {
    std::vector<std::string> out;
    for (int i = 1; i <= n; ++i)
      for (std::size_t j = 1; j <= d; ++j) out.push_back(block_name(pre, i, j));
    return out;
  });

  std::vector<std::vector<std::string>> blocks;
  std::vector<Formula> pos, neg, parts;
  std::vector<std::string> quantified;
  for (int i = 1; i <= n; ++i) {
    std::vector<std::string> block;
    std::map<std::string, std::string> renaming;
    for (std::size_t j = 1; j <= d; ++j) {
      block.push_back(block_name(prefix, i, j));
      renaming[w.vars[j - 1]] = block.back();
    }
    neg.push_back(rename_free(w.psi0, renaming));
    pos.push_back(rename_free(w.psi1, renaming));
    parts.push_back(Formula::disj(neg.back(), pos.back()));
    quantified.insert(quantified.end(), block.begin(), block.end());
    blocks.push_back(std::move(block));
  }
  if (prop) {
    // Each top-level conjunct of the skeleton becomes its own conjunct.
    std::vector<const PropFormula*> stack{prop}, flat;
    while (!stack.empty()) {
      const PropFormula* q = stack.back();
      stack.pop_back();
      if (q->kind() == PropFormula::Kind::And) {
        stack.push_back(&q->rhs());
        stack.push_back(&q->lhs());
      } else {
        flat.push_back(q);
      }
    }
    for (const PropFormula* q : flat) parts.push_back(embed_rec(*q, pos, neg));
  }
  return GadgetInstance{exists_all(quantified, conjoin(parts)), std::move(blocks)};
}

}  // namespace

GadgetInstance boolean_embed(const FiniteStructure& s, const PropFormula& prop,
                             const WitnessPair& w, int num_vars) {
  return embed_impl(s, &prop, w, num_vars);
}

GadgetInstance threesat_to_expos(const FiniteStructure& s, const CNF& cnf, const WitnessPair& w,
                                 const GadgetOptions& options) {
  if (cnf.num_vars < 1) throw PreconditionError("CNF has no variables");
  CNF padded = cnf;
  for (auto& clause : padded.clauses) {
    if (clause.empty()) throw PreconditionError("empty clause");
    if (clause.size() > 3)
      throw PreconditionError("clause with " + std::to_string(clause.size()) +
                              " literals; the gadget takes exactly three");
    if (clause.size() < 3 && !options.pad_short_clauses)
      throw PreconditionError("clause with fewer than three literals and padding disabled");
    while (clause.size() < 3) clause.push_back(clause.back());
  }
  if (padded.clauses.empty()) return embed_impl(s, nullptr, w, cnf.num_vars);
  const PropFormula prop = cnf_to_prop(padded);
  return embed_impl(s, &prop, w, cnf.num_vars);
}

// ---------------------------------------------------------------------------
// Product reduction

std::string product_relation_name(const FiniteStructure& s) {
  std::string name;
  for (const auto& sym : s.signature().relations()) {
    if (!name.empty()) name += "_x_";
    name += sym.name;
  }
  return name;
}

FiniteStructure product_structure(const FiniteStructure& s, const Limits& limits) {
  if (!s.is_relational()) throw PreconditionError("product reduction needs a relational structure");
  const auto rels = s.signature().relations();
  if (rels.empty()) throw PreconditionError("structure has no relations");
  int arity = 0;
  std::size_t count = 1;
  std::vector<std::vector<Tuple>> exts;
  for (const auto& sym : rels) {
    exts.push_back(s.relation(sym.name).tuples());
    if (exts.back().empty())
      throw PreconditionError("relation '" + sym.name + "' is empty");
    arity += sym.arity;
    if (arity > limits.max_product_arity)
      throw LimitError("max-product-arity", "product relation arity exceeds the limit");
    if (count > limits.max_product_tuples / exts.back().size())
      throw LimitError("max-product-tuples", "product relation has too many tuples");
    count *= exts.back().size();
  }

  std::vector<Tuple> tuples;
  tuples.reserve(count);
  std::vector<std::size_t> idx(exts.size(), 0);
  while (true) {
    Tuple t;
    t.reserve(static_cast<std::size_t>(arity));
    for (std::size_t i = 0; i < exts.size(); ++i)
      t.insert(t.end(), exts[i][idx[i]].begin(), exts[i][idx[i]].end());
    tuples.push_back(std::move(t));
    std::size_t i = exts.size();
    while (i-- > 0) {
      if (++idx[i] < exts[i].size()) break;
      idx[i] = 0;
    }
    if (i == static_cast<std::size_t>(-1)) break;
  }

  const std::string name = product_relation_name(s);
  Signature sig;
  sig.add_relation(name, arity);
  FiniteStructure out(s.name() + "_product", sig, s.domain_size());
  out.set_relation(name, std::move(tuples));
  return out;
}

namespace {

struct ProductLayout {
  std::string name;
  std::map<std::string, std::pair<int, int>> block;  // relation -> (offset, arity)
  int arity = 0;
};

Formula product_rec(const Formula& f, const ProductLayout& layout, const std::string& prefix,
                    int& ordinal) {
  switch (f.kind()) {
    case Formula::Kind::Exists:
      return Formula::exists(f.var(), product_rec(f.body(), layout, prefix, ordinal));
    case Formula::Kind::And: {
      Formula l = product_rec(f.lhs(), layout, prefix, ordinal);
      return Formula::conj(l, product_rec(f.rhs(), layout, prefix, ordinal));
    }
    case Formula::Kind::Or: {
      Formula l = product_rec(f.lhs(), layout, prefix, ordinal);
      return Formula::disj(l, product_rec(f.rhs(), layout, prefix, ordinal));
    }
    case Formula::Kind::Atom: {
      const int k = ++ordinal;
      const Atom& a = f.atom();
      auto it = layout.block.find(a.relation);
      if (it == layout.block.end())
        throw SignatureError("relation '" + a.relation + "' not in structure");
      const auto [offset, arity] = it->second;
      Atom out{layout.name, {}};
      std::vector<std::string> padding;
      for (int pos = 0; pos < layout.arity; ++pos) {
        if (pos >= offset && pos < offset + arity) {
          out.args.push_back(a.args[static_cast<std::size_t>(pos - offset)]);
        } else {
          padding.push_back(prefix + std::to_string(k) + "_" + std::to_string(pos + 1));
          out.args.push_back(Term::var(padding.back()));
        }
      }
      return exists_all(padding, Formula::atom(std::move(out)));
    }
  }
  return f;
}

}  // namespace

Formula product_rewrite(const Formula& f, const FiniteStructure& s) {
  if (!s.is_relational()) throw PreconditionError("product reduction needs a relational structure");
  check_signature(f, s.signature());
  ProductLayout layout;
  layout.name = product_relation_name(s);
  for (const auto& sym : s.signature().relations()) {
    layout.block[sym.name] = {layout.arity, sym.arity};
    layout.arity += sym.arity;
  }
  std::set<std::string> avoid;
  for (const auto& v : all_variable_names(f)) avoid.insert(v);
  const std::size_t atoms = count_atoms(f);
  auto padding_names = [&](const std::string& prefix) {
    std::vector<std::string> out;
    for (std::size_t k = 1; k <= atoms; ++k)
      for (int pos = 1; pos <= layout.arity; ++pos)
        out.push_back(prefix + std::to_string(k) + "_" + std::to_string(pos));
    return out;
  };
  const std::string prefix = collision_free_prefix("p", avoid, padding_names);
  int ordinal = 0;
  return product_rec(f, layout, prefix, ordinal);
}

// ---------------------------------------------------------------------------
// Boolean-algebra reductions

Formula sat_to_ba_expos(const CNF& cnf) {
  if (cnf.clauses.empty() || cnf.num_vars < 1) throw PreconditionError("CNF is empty");
  auto var = [](int i) { return Term::var("v" + std::to_string(i)); };
  std::optional<Term> t;
  for (const auto& clause : cnf.clauses) {
    if (clause.empty()) throw PreconditionError("empty clause");
    std::optional<Term> c;
    for (int lit : clause) {
      Term l = lit > 0 ? var(lit) : Term::apply(ba::kComplement, {var(-lit)});
      c = c ? Term::apply(ba::kJoin, {*c, l}) : l;
    }
    t = t ? Term::apply(ba::kMeet, {*t, *c}) : *c;
  }
  std::vector<std::string> vars;
  for (int i = 1; i <= cnf.num_vars; ++i) vars.push_back("v" + std::to_string(i));
  Atom a{ba::kNeq, {*t, Term::apply(ba::kZero)}};
  return exists_all(vars, Formula::atom(std::move(a)));
}

Atom normalize_diseq(const Term& lhs, const Term& rhs) {
  const Signature sig = ba::signature();
  check_signature(lhs, sig);
  check_signature(rhs, sig);
  auto c = [](const Term& t) { return Term::apply(ba::kComplement, {t}); };
  Term diff = Term::apply(ba::kJoin, {Term::apply(ba::kMeet, {lhs, c(rhs)}),
                                      Term::apply(ba::kMeet, {c(lhs), rhs})});
  return Atom{ba::kNeq, {std::move(diff), Term::apply(ba::kZero)}};
}

}  // namespace epos
