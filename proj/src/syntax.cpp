#include "epos/syntax.hpp"

#include <algorithm>
#include <cctype>
#include <set>
#include <sstream>

#include "epos/error.hpp"

namespace epos {

// ---------------------------------------------------------------------------
// Signature

Signature& Signature::add(std::string name, SymbolKind kind, int arity) {
  if (arity < 0) throw SignatureError("negative arity for symbol '" + name + "'");
  if (name.empty()) throw SignatureError("empty symbol name");
  if (index_.count(name) != 0) throw SignatureError("duplicate symbol '" + name + "'");
  index_.emplace(name, symbols_.size());
  symbols_.push_back(Symbol{std::move(name), kind, arity});
  return *this;
}

Signature& Signature::add_relation(std::string name, int arity) {
  return add(std::move(name), SymbolKind::Relation, arity);
}

Signature& Signature::add_function(std::string name, int arity) {
  return add(std::move(name), SymbolKind::Function, arity);
}

const Symbol* Signature::find(std::string_view name) const {
  auto it = index_.find(name);
  return it == index_.end() ? nullptr : &symbols_[it->second];
}

std::optional<int> Signature::relation_arity(std::string_view name) const {
  const Symbol* s = find(name);
  if (s == nullptr || s->kind != SymbolKind::Relation) return std::nullopt;
  return s->arity;
}

std::optional<int> Signature::function_arity(std::string_view name) const {
  const Symbol* s = find(name);
  if (s == nullptr || s->kind != SymbolKind::Function) return std::nullopt;
  return s->arity;
}

std::vector<Symbol> Signature::relations() const {
  std::vector<Symbol> out;
  for (const auto& s : symbols_)
    if (s.kind == SymbolKind::Relation) out.push_back(s);
  return out;
}

std::vector<Symbol> Signature::functions() const {
  std::vector<Symbol> out;
  for (const auto& s : symbols_)
    if (s.kind == SymbolKind::Function) out.push_back(s);
  return out;
}

bool Signature::has_functions() const {
  return std::any_of(symbols_.begin(), symbols_.end(),
                     [](const Symbol& s) { return s.kind == SymbolKind::Function; });
}

bool Signature::operator==(const Signature& other) const {
  if (symbols_.size() != other.symbols_.size()) return false;
  for (std::size_t i = 0; i < symbols_.size(); ++i) {
    const auto& a = symbols_[i];
    const auto& b = other.symbols_[i];
    if (a.name != b.name || a.kind != b.kind || a.arity != b.arity) return false;
  }
  return true;
}

// ---------------------------------------------------------------------------
// Terms and atoms

Term Term::var(std::string name) { return Term{Kind::Variable, std::move(name), {}}; }

Term Term::apply(std::string function, std::vector<Term> args) {
  return Term{Kind::Apply, std::move(function), std::move(args)};
}

int Term::depth() const {
  if (is_variable()) return 0;
  int d = 0;
  for (const auto& a : args) d = std::max(d, a.depth());
  return d + 1;
}

bool Term::operator==(const Term& other) const {
  return kind == other.kind && name == other.name && args == other.args;
}

int Atom::depth() const {
  int d = 0;
  for (const auto& a : args) d = std::max(d, a.depth());
  return d;
}

bool Atom::operator==(const Atom& other) const {
  return relation == other.relation && args == other.args;
}

namespace {

void append_args(std::string& out, const std::vector<Term>& args) {
  out += '(';
  for (std::size_t i = 0; i < args.size(); ++i) {
    if (i != 0) out += ',';
    out += to_string(args[i]);
  }
  out += ')';
}

void collect_vars(const Term& t, std::vector<std::string>& out) {
  if (t.is_variable()) {
    if (std::find(out.begin(), out.end(), t.name) == out.end()) out.push_back(t.name);
    return;
  }
  for (const auto& a : t.args) collect_vars(a, out);
}

}  // namespace

std::string to_string(const Term& t) {
  if (t.is_variable() || t.args.empty()) return t.name;
  std::string out = t.name;
  append_args(out, t.args);
  return out;
}

std::string to_string(const Atom& a) {
  std::string out = a.relation;
  append_args(out, a.args);
  return out;
}

std::vector<std::string> variables_of(const Term& t) {
  std::vector<std::string> out;
  collect_vars(t, out);
  return out;
}

std::vector<std::string> variables_of(const Atom& a) {
  std::vector<std::string> out;
  for (const auto& t : a.args) collect_vars(t, out);
  return out;
}

// ---------------------------------------------------------------------------
// Formula

struct Formula::Node {
  Kind kind;
  std::string var;
  std::optional<Formula> lhs;
  std::optional<Formula> rhs;
  epos::Atom atom;
};

Formula Formula::exists(std::string var, Formula body) {
  return Formula(std::make_shared<const Node>(
      Node{Kind::Exists, std::move(var), std::move(body), std::nullopt, {}}));
}

Formula Formula::conj(Formula lhs, Formula rhs) {
  return Formula(std::make_shared<const Node>(
      Node{Kind::And, {}, std::move(lhs), std::move(rhs), {}}));
}

Formula Formula::disj(Formula lhs, Formula rhs) {
  return Formula(std::make_shared<const Node>(
      Node{Kind::Or, {}, std::move(lhs), std::move(rhs), {}}));
}

Formula Formula::atom(epos::Atom a) {
  return Formula(std::make_shared<const Node>(
      Node{Kind::Atom, {}, std::nullopt, std::nullopt, std::move(a)}));
}

Formula::Kind Formula::kind() const { return node_->kind; }
const std::string& Formula::var() const { return node_->var; }
const Formula& Formula::body() const { return *node_->lhs; }
const Formula& Formula::lhs() const { return *node_->lhs; }
const Formula& Formula::rhs() const { return *node_->rhs; }
const Atom& Formula::atom() const { return node_->atom; }

bool Formula::operator==(const Formula& other) const {
  if (node_ == other.node_) return true;
  if (kind() != other.kind()) return false;
  switch (kind()) {
    case Kind::Exists:
      return var() == other.var() && body() == other.body();
    case Kind::And:
    case Kind::Or:
      return lhs() == other.lhs() && rhs() == other.rhs();
    case Kind::Atom:
      return atom() == other.atom();
  }
  return false;
}

Formula conjoin(const std::vector<Formula>& parts) {
  if (parts.empty()) throw PreconditionError("conjoin: empty conjunction");
  Formula acc = parts.front();
  for (std::size_t i = 1; i < parts.size(); ++i) acc = Formula::conj(acc, parts[i]);
  return acc;
}

Formula disjoin(const std::vector<Formula>& parts) {
  if (parts.empty()) throw PreconditionError("disjoin: empty disjunction");
  Formula acc = parts.front();
  for (std::size_t i = 1; i < parts.size(); ++i) acc = Formula::disj(acc, parts[i]);
  return acc;
}

Formula exists_all(const std::vector<std::string>& vars, Formula body) {
  for (auto it = vars.rbegin(); it != vars.rend(); ++it) body = Formula::exists(*it, body);
  return body;
}

namespace {

void flatten_and(const Formula& f, std::vector<Formula>& out) {
  if (f.kind() == Formula::Kind::And) {
    flatten_and(f.lhs(), out);
    flatten_and(f.rhs(), out);
  } else {
    out.push_back(f);
  }
}

template <typename Visit>
void walk(const Formula& f, Visit&& visit) {
  visit(f);
  switch (f.kind()) {
    case Formula::Kind::Exists:
      walk(f.body(), visit);
      break;
    case Formula::Kind::And:
    case Formula::Kind::Or:
      walk(f.lhs(), visit);
      walk(f.rhs(), visit);
      break;
    case Formula::Kind::Atom:
      break;
  }
}

void free_vars_rec(const Formula& f, std::vector<std::string>& bound,
                   std::vector<std::string>& out) {
  switch (f.kind()) {
    case Formula::Kind::Exists:
      bound.push_back(f.var());
      free_vars_rec(f.body(), bound, out);
      bound.pop_back();
      break;
    case Formula::Kind::And:
    case Formula::Kind::Or:
      free_vars_rec(f.lhs(), bound, out);
      free_vars_rec(f.rhs(), bound, out);
      break;
    case Formula::Kind::Atom:
      for (const auto& v : variables_of(f.atom())) {
        if (std::find(bound.begin(), bound.end(), v) != bound.end()) continue;
        if (std::find(out.begin(), out.end(), v) == out.end()) out.push_back(v);
      }
      break;
  }
}

}  // namespace

std::vector<Formula> top_level_conjuncts(const Formula& f) {
  std::vector<Formula> out;
  flatten_and(f, out);
  return out;
}

std::size_t count_or_nodes(const Formula& f) {
  std::size_t n = 0;
  walk(f, [&](const Formula& g) { n += g.kind() == Formula::Kind::Or; });
  return n;
}

std::size_t count_atoms(const Formula& f) {
  std::size_t n = 0;
  walk(f, [&](const Formula& g) { n += g.is_atom(); });
  return n;
}

std::size_t count_binders(const Formula& f) {
  std::size_t n = 0;
  walk(f, [&](const Formula& g) { n += g.kind() == Formula::Kind::Exists; });
  return n;
}

std::vector<std::string> all_variable_names(const Formula& f) {
  std::vector<std::string> out;
  auto add = [&](const std::string& v) {
    if (std::find(out.begin(), out.end(), v) == out.end()) out.push_back(v);
  };
  walk(f, [&](const Formula& g) {
    if (g.kind() == Formula::Kind::Exists) add(g.var());
    if (g.is_atom())
      for (const auto& v : variables_of(g.atom())) add(v);
  });
  return out;
}

std::vector<Atom> atoms_of(const Formula& f) {
  std::vector<Atom> out;
  walk(f, [&](const Formula& g) {
    if (g.is_atom()) out.push_back(g.atom());
  });
  return out;
}

std::vector<std::string> free_variables(const Formula& f) {
  std::vector<std::string> bound;
  std::vector<std::string> out;
  free_vars_rec(f, bound, out);
  return out;
}

bool is_sentence(const Formula& f) { return free_variables(f).empty(); }

namespace {

Term rename_term(const Term& t, const std::map<std::string, std::string>& m) {
  if (t.is_variable()) {
    auto it = m.find(t.name);
    return it == m.end() ? t : Term::var(it->second);
  }
  std::vector<Term> args;
  args.reserve(t.args.size());
  for (const auto& a : t.args) args.push_back(rename_term(a, m));
  return Term::apply(t.name, std::move(args));
}

Atom rename_atom(const Atom& a, const std::map<std::string, std::string>& m) {
  Atom out{a.relation, {}};
  out.args.reserve(a.args.size());
  for (const auto& t : a.args) out.args.push_back(rename_term(t, m));
  return out;
}

std::string fresh_name(const std::string& base, const std::set<std::string>& avoid) {
  for (int k = 1;; ++k) {
    std::string candidate = base + "_" + std::to_string(k);
    if (avoid.count(candidate) == 0) return candidate;
  }
}

Formula rename_rec(const Formula& f, std::map<std::string, std::string> m,
                   std::set<std::string>& avoid) {
  switch (f.kind()) {
    case Formula::Kind::Exists: {
      std::string v = f.var();
      m.erase(v);
      bool captures = false;
      for (const auto& [from, to] : m) captures |= (to == v);
      if (captures) {
        std::string fresh = fresh_name(v, avoid);
        avoid.insert(fresh);
        m[v] = fresh;
        v = fresh;
      }
      return Formula::exists(v, rename_rec(f.body(), std::move(m), avoid));
    }
    case Formula::Kind::And:
      return Formula::conj(rename_rec(f.lhs(), m, avoid), rename_rec(f.rhs(), m, avoid));
    case Formula::Kind::Or:
      return Formula::disj(rename_rec(f.lhs(), m, avoid), rename_rec(f.rhs(), m, avoid));
    case Formula::Kind::Atom:
      return Formula::atom(rename_atom(f.atom(), m));
  }
  return f;
}

}  // namespace

Formula rename_free(const Formula& f, const std::map<std::string, std::string>& renaming) {
  std::set<std::string> avoid;
  for (const auto& v : all_variable_names(f)) avoid.insert(v);
  for (const auto& [from, to] : renaming) {
    avoid.insert(from);
    avoid.insert(to);
  }
  return rename_rec(f, renaming, avoid);
}

void check_signature(const Term& t, const Signature& sig) {
  if (t.is_variable()) return;
  auto arity = sig.function_arity(t.name);
  if (!arity) throw SignatureError("undeclared function symbol '" + t.name + "'");
  if (static_cast<std::size_t>(*arity) != t.args.size())
    throw SignatureError("function '" + t.name + "' expects " + std::to_string(*arity) +
                         " arguments, got " + std::to_string(t.args.size()));
  for (const auto& a : t.args) check_signature(a, sig);
}

void check_signature(const Atom& a, const Signature& sig) {
  auto arity = sig.relation_arity(a.relation);
  if (!arity) throw SignatureError("undeclared relation symbol '" + a.relation + "'");
  if (static_cast<std::size_t>(*arity) != a.args.size())
    throw SignatureError("relation '" + a.relation + "' expects " + std::to_string(*arity) +
                         " arguments, got " + std::to_string(a.args.size()));
  for (const auto& t : a.args) check_signature(t, sig);
}

void check_signature(const Formula& f, const Signature& sig) {
  walk(f, [&](const Formula& g) {
    if (g.is_atom()) check_signature(g.atom(), sig);
  });
}

// ---------------------------------------------------------------------------
// Prenex form

Formula to_formula(const PPSentence& p) {
  if (p.atoms.empty()) throw PreconditionError("PP sentence without atoms has no formula form");
  std::vector<Formula> parts;
  parts.reserve(p.atoms.size());
  for (const auto& a : p.atoms) parts.push_back(Formula::atom(a));
  return exists_all(p.variables, conjoin(parts));
}

std::string to_string(const PPSentence& p) {
  std::string out;
  for (const auto& v : p.variables) out += "E " + v + ". ";
  if (p.atoms.empty()) return out + "true";
  for (std::size_t i = 0; i < p.atoms.size(); ++i) {
    if (i != 0) out += " & ";
    out += to_string(p.atoms[i]);
  }
  return out;
}

namespace {

struct PrenexState {
  std::set<std::string> originals;
  std::set<std::string> used;
  PPSentence out;
};

void prenex_rec(const Formula& f, std::map<std::string, std::string>& env, PrenexState& st) {
  switch (f.kind()) {
    case Formula::Kind::Exists: {
      std::string name = f.var();
      if (st.used.count(name) != 0) {
        std::set<std::string> avoid = st.used;
        avoid.insert(st.originals.begin(), st.originals.end());
        name = fresh_name(f.var(), avoid);
      }
      st.used.insert(name);
      st.out.variables.push_back(name);
      auto saved = env.find(f.var()) == env.end()
                       ? std::optional<std::string>{}
                       : std::optional<std::string>{env[f.var()]};
      env[f.var()] = name;
      prenex_rec(f.body(), env, st);
      if (saved) env[f.var()] = *saved; else env.erase(f.var());
      break;
    }
    case Formula::Kind::And:
      prenex_rec(f.lhs(), env, st);
      prenex_rec(f.rhs(), env, st);
      break;
    case Formula::Kind::Or:
      throw PreconditionError("to_prenex_pp: formula contains a disjunction");
    case Formula::Kind::Atom:
      st.out.atoms.push_back(rename_atom(f.atom(), env));
      break;
  }
}

}  // namespace

PPSentence to_prenex_pp(const Formula& f) {
  if (count_or_nodes(f) != 0)
    throw PreconditionError("to_prenex_pp: formula contains a disjunction");
  PrenexState st;
  for (const auto& v : all_variable_names(f)) st.originals.insert(v);
  for (const auto& v : free_variables(f)) {
    st.used.insert(v);
    st.out.variables.push_back(v);
  }
  std::map<std::string, std::string> env;
  prenex_rec(f, env, st);
  return st.out;
}

// ---------------------------------------------------------------------------
// Formula parser

namespace {

bool ident_start(char c) { return std::isalpha(static_cast<unsigned char>(c)) || c == '_'; }
bool ident_char(char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_'; }

class FormulaParser {
 public:
  FormulaParser(std::string_view text, const Signature& sig) : text_(text), sig_(sig) {}

  Formula parse_all() {
    Formula f = formula();
    skip_ws();
    if (pos_ != text_.size()) fail("unexpected trailing input");
    return f;
  }

  Term parse_term_all() {
    Term t = term();
    skip_ws();
    if (pos_ != text_.size()) fail("unexpected trailing input");
    return t;
  }

 private:
  [[noreturn]] void fail(const std::string& msg) const { throw ParseError(msg, pos_); }

  void skip_ws() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }

  char peek() {
    skip_ws();
    return pos_ < text_.size() ? text_[pos_] : '\0';
  }

  void expect(char c) {
    if (peek() != c) fail(std::string("expected '") + c + "'");
    ++pos_;
  }

  std::string ident() {
    skip_ws();
    if (pos_ >= text_.size() || !ident_start(text_[pos_])) fail("expected identifier");
    std::size_t start = pos_;
    while (pos_ < text_.size() && ident_char(text_[pos_])) ++pos_;
    return std::string(text_.substr(start, pos_ - start));
  }

  // 'E' IDENT '.' -- distinguished from a relation named E by the lookahead.
  bool at_quantifier() {
    skip_ws();
    std::size_t p = pos_;
    if (p >= text_.size() || text_[p] != 'E') return false;
    ++p;
    if (p < text_.size() && ident_char(text_[p])) return false;
    while (p < text_.size() && std::isspace(static_cast<unsigned char>(text_[p]))) ++p;
    if (p >= text_.size() || !ident_start(text_[p])) return false;
    while (p < text_.size() && ident_char(text_[p])) ++p;
    while (p < text_.size() && std::isspace(static_cast<unsigned char>(text_[p]))) ++p;
    return p < text_.size() && text_[p] == '.';
  }

  Formula quantifier() {
    ident();  // 'E'
    std::string v = ident();
    if (sig_.find(v) != nullptr) fail("cannot quantify over symbol '" + v + "'");
    expect('.');
    return Formula::exists(v, formula());
  }

  Formula formula() {
    if (at_quantifier()) return quantifier();
    return or_expr();
  }

  Formula or_expr() {
    Formula f = and_expr();
    while (peek() == '|') {
      ++pos_;
      f = Formula::disj(f, and_expr());
    }
    return f;
  }

  Formula and_expr() {
    Formula f = unit();
    while (peek() == '&') {
      ++pos_;
      f = Formula::conj(f, unit());
    }
    return f;
  }

  Formula unit() {
    if (peek() == '(') {
      ++pos_;
      Formula f = formula();
      expect(')');
      return f;
    }
    if (at_quantifier()) return quantifier();
    return Formula::atom(atom());
  }

  Atom atom() {
    std::size_t start = pos_;
    std::string name = ident();
    if (peek() != '(') throw ParseError("expected '(' after relation name '" + name + "'", pos_);
    auto arity = sig_.relation_arity(name);
    if (!arity) {
      pos_ = start;
      skip_ws();
      throw SignatureError("undeclared relation symbol '" + name + "' at " + std::to_string(pos_));
    }
    Atom a{name, {}};
    expect('(');
    a.args.push_back(term());
    while (peek() == ',') {
      ++pos_;
      a.args.push_back(term());
    }
    expect(')');
    if (a.args.size() != static_cast<std::size_t>(*arity))
      throw SignatureError("relation '" + name + "' expects " + std::to_string(*arity) +
                           " arguments, got " + std::to_string(a.args.size()));
    return a;
  }

  Term term() {
    std::string name = ident();
    if (peek() == '(') {
      auto arity = sig_.function_arity(name);
      if (!arity) throw SignatureError("undeclared function symbol '" + name + "'");
      ++pos_;
      std::vector<Term> args;
      args.push_back(term());
      while (peek() == ',') {
        ++pos_;
        args.push_back(term());
      }
      expect(')');
      if (args.size() != static_cast<std::size_t>(*arity))
        throw SignatureError("function '" + name + "' expects " + std::to_string(*arity) +
                             " arguments, got " + std::to_string(args.size()));
      return Term::apply(name, std::move(args));
    }
    if (auto arity = sig_.function_arity(name)) {
      if (*arity != 0)
        throw SignatureError("function '" + name + "' expects " + std::to_string(*arity) +
                             " arguments, got 0");
      return Term::apply(name);
    }
    if (sig_.relation_arity(name))
      throw SignatureError("relation symbol '" + name + "' used as a term");
    return Term::var(name);
  }

  std::string_view text_;
  const Signature& sig_;
  std::size_t pos_ = 0;
};

bool needs_parens(const Formula& child, Formula::Kind parent, bool right) {
  const auto k = child.kind();
  if (k == Formula::Kind::Atom) return false;
  if (k == Formula::Kind::Exists) return true;
  if (parent == Formula::Kind::And) return k == Formula::Kind::Or || right;
  // parent is Or
  return right && k == Formula::Kind::Or;
}

void print_rec(const Formula& f, std::string& out) {
  switch (f.kind()) {
    case Formula::Kind::Exists:
      out += "E " + f.var() + ". ";
      print_rec(f.body(), out);
      return;
    case Formula::Kind::And:
    case Formula::Kind::Or: {
      const auto k = f.kind();
      auto side = [&](const Formula& child, bool right) {
        bool p = needs_parens(child, k, right);
        if (p) out += '(';
        print_rec(child, out);
        if (p) out += ')';
      };
      side(f.lhs(), false);
      out += k == Formula::Kind::And ? " & " : " | ";
      side(f.rhs(), true);
      return;
    }
    case Formula::Kind::Atom:
      out += to_string(f.atom());
      return;
  }
}

}  // namespace

Formula parse_formula(std::string_view text, const Signature& sig) {
  return FormulaParser(text, sig).parse_all();
}

Term parse_term(std::string_view text, const Signature& sig) {
  return FormulaParser(text, sig).parse_term_all();
}

std::string print_formula(const Formula& f) {
  std::string out;
  print_rec(f, out);
  return out;
}

// ---------------------------------------------------------------------------
// DIMACS

CNF parse_dimacs(std::string_view text) {
  CNF cnf;
  bool have_header = false;
  std::vector<int> clause;
  std::size_t line_no = 0;
  std::istringstream in{std::string(text)};
  std::string line;
  while (std::getline(in, line)) {
    ++line_no;
    std::istringstream ls(line);
    std::string tok;
    if (!(ls >> tok)) continue;
    if (tok == "c" || tok[0] == 'c') continue;
    if (tok == "%") break;  // SATLIB trailer
    if (tok == "p") {
      if (have_header) throw ParseError("duplicate DIMACS header", line_no);
      std::string fmt;
      long long vars = -1, clauses = -1;
      if (!(ls >> fmt >> vars >> clauses) || fmt != "cnf" || vars < 0 || clauses < 0)
        throw ParseError("malformed DIMACS header", line_no);
      std::string extra;
      if (ls >> extra) throw ParseError("malformed DIMACS header", line_no);
      cnf.num_vars = static_cast<int>(vars);
      have_header = true;
      continue;
    }
    if (!have_header) throw ParseError("clause before DIMACS header", line_no);
    do {
      long long lit = 0;
      try {
        std::size_t used = 0;
        lit = std::stoll(tok, &used);
        if (used != tok.size()) throw std::invalid_argument(tok);
      } catch (const std::exception&) {
        throw ParseError("invalid literal '" + tok + "'", line_no);
      }
      if (lit == 0) {
        if (clause.empty()) throw ParseError("empty clause", line_no);
        cnf.clauses.push_back(std::move(clause));
        clause.clear();
      } else {
        if (std::llabs(lit) > cnf.num_vars)
          throw ParseError("literal " + tok + " out of range", line_no);
        clause.push_back(static_cast<int>(lit));
      }
    } while (ls >> tok);
  }
  if (!have_header) throw ParseError("missing DIMACS header", line_no);
  if (!clause.empty()) throw ParseError("clause missing terminating 0", line_no);
  return cnf;
}

std::string print_dimacs(const CNF& cnf) {
  std::string out = "p cnf " + std::to_string(cnf.num_vars) + " " +
                    std::to_string(cnf.clauses.size()) + "\n";
  for (const auto& c : cnf.clauses) {
    for (int lit : c) out += std::to_string(lit) + " ";
    out += "0\n";
  }
  return out;
}

}  // namespace epos
