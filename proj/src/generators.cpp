#include "epos/generators.hpp"

#include <algorithm>
#include <optional>
#include <set>

#include "epos/classifier.hpp"
#include "epos/error.hpp"

namespace epos::gen {

int uniform(Rng& rng, int lo, int hi) {
  return std::uniform_int_distribution<int>(lo, hi)(rng);
}

namespace {

bool coin(Rng& rng, double p = 0.5) { return std::bernoulli_distribution(p)(rng); }

std::vector<Tuple> all_tuples(int n, int arity) {
  std::vector<Tuple> out;
  Tuple t(static_cast<std::size_t>(arity), 0);
  while (true) {
    out.push_back(t);
    int i = arity - 1;
    while (i >= 0 && ++t[static_cast<std::size_t>(i)] == static_cast<Element>(n))
      t[static_cast<std::size_t>(i--)] = 0;
    if (i < 0) return out;
  }
}

bool is_diagonal(const Tuple& t) {
  return std::all_of(t.begin(), t.end(), [&](Element e) { return e == t.front(); });
}

FiniteStructure build(const std::vector<int>& arities, int n,
                      const std::vector<std::vector<Tuple>>& exts) {
  Signature sig;
  for (std::size_t i = 0; i < arities.size(); ++i)
    sig.add_relation("R" + std::to_string(i + 1), arities[i]);
  FiniteStructure s("random", sig, static_cast<std::size_t>(n));
  for (std::size_t i = 0; i < arities.size(); ++i)
    s.set_relation("R" + std::to_string(i + 1), exts[i]);
  return s;
}

}  // namespace

FiniteStructure random_structure(Rng& rng, const StructureOptions& o) {
  if (o.min_domain < 1 || o.min_domain > o.max_domain || o.min_relations < 1 ||
      o.min_relations > o.max_relations || o.max_arity < 1)
    throw PreconditionError("inconsistent structure generator options");
  if (o.validity == Validity::NotAValid && o.max_domain < 2 && o.nonempty)
    throw PreconditionError("a one-element structure with non-empty relations is a-valid");

  for (int attempt = 0; attempt < 10000; ++attempt) {
    int n = uniform(rng, o.min_domain, o.max_domain);
    if (o.validity == Validity::NotAValid && o.nonempty) n = std::max(n, 2);
    const int m = uniform(rng, o.min_relations, o.max_relations);
    std::vector<int> arities;
    std::vector<std::vector<Tuple>> exts;
    for (int i = 0; i < m; ++i) {
      arities.push_back(uniform(rng, 1, o.max_arity));
      const double density = std::uniform_real_distribution<double>(0.1, 0.7)(rng);
      std::vector<Tuple> ext;
      for (auto& t : all_tuples(n, arities.back()))
        if (coin(rng, density)) ext.push_back(std::move(t));
      if (!o.nonempty && o.empty_probability > 0 && coin(rng, o.empty_probability)) ext.clear();
      exts.push_back(std::move(ext));
    }

    if (o.validity == Validity::AValid) {
      const auto a = static_cast<Element>(uniform(rng, 0, n - 1));
      for (std::size_t i = 0; i < exts.size(); ++i)
        if (o.nonempty || !exts[i].empty())
          exts[i].push_back(Tuple(static_cast<std::size_t>(arities[i]), a));
    } else if (o.validity == Validity::NotAValid) {
      // Each element loses its diagonal tuple in one relation.
      for (int a = 0; a < n; ++a) {
        auto& ext = exts[static_cast<std::size_t>(uniform(rng, 0, m - 1))];
        ext.erase(std::remove_if(ext.begin(), ext.end(),
                                 [&](const Tuple& t) {
                                   return is_diagonal(t) && t.front() == static_cast<Element>(a);
                                 }),
                  ext.end());
      }
    }

    if (o.nonempty) {
      for (std::size_t i = 0; i < exts.size(); ++i) {
        if (!exts[i].empty()) continue;
        auto space = all_tuples(n, arities[i]);
        if (o.validity == Validity::NotAValid)
          space.erase(std::remove_if(space.begin(), space.end(), is_diagonal), space.end());
        if (space.empty()) break;
        exts[i].push_back(space[static_cast<std::size_t>(
            uniform(rng, 0, static_cast<int>(space.size()) - 1))]);
      }
      if (std::any_of(exts.begin(), exts.end(), [](const auto& e) { return e.empty(); }))
        continue;
    }

    FiniteStructure s = build(arities, n, exts);
    if (o.validity == Validity::NotAValid && !a_valid_witnesses(s).empty()) continue;
    return s;
  }
  throw PreconditionError("could not generate a structure with the requested properties");
}

namespace {

struct TreeNode {
  int lhs = -1, rhs = -1;
  bool is_or = false;
  std::optional<Atom> atom;
  std::vector<std::string> binders;
};

int build_shape(Rng& rng, std::vector<TreeNode>& nodes, int leaves) {
  const int id = static_cast<int>(nodes.size());
  nodes.emplace_back();
  if (leaves > 1) {
    const int left = uniform(rng, 1, leaves - 1);
    const int l = build_shape(rng, nodes, left);
    const int r = build_shape(rng, nodes, leaves - left);
    nodes[static_cast<std::size_t>(id)].lhs = l;
    nodes[static_cast<std::size_t>(id)].rhs = r;
  }
  return id;
}

void collect_term_vars(const Term& t, std::set<std::string>& out) {
  if (t.is_variable()) {
    out.insert(t.name);
    return;
  }
  for (const auto& a : t.args) collect_term_vars(a, out);
}

void node_vars(const std::vector<TreeNode>& nodes, int id, std::vector<std::set<std::string>>& out) {
  const auto& nd = nodes[static_cast<std::size_t>(id)];
  auto& mine = out[static_cast<std::size_t>(id)];
  if (nd.atom) {
    for (const auto& t : nd.atom->args) collect_term_vars(t, mine);
    return;
  }
  node_vars(nodes, nd.lhs, out);
  node_vars(nodes, nd.rhs, out);
  mine = out[static_cast<std::size_t>(nd.lhs)];
  mine.insert(out[static_cast<std::size_t>(nd.rhs)].begin(),
              out[static_cast<std::size_t>(nd.rhs)].end());
}

Formula to_formula(const std::vector<TreeNode>& nodes, int id) {
  const auto& nd = nodes[static_cast<std::size_t>(id)];
  std::optional<Formula> f;
  if (nd.atom) {
    f = Formula::atom(*nd.atom);
  } else {
    Formula l = to_formula(nodes, nd.lhs);
    Formula r = to_formula(nodes, nd.rhs);
    f = nd.is_or ? Formula::disj(l, r) : Formula::conj(l, r);
  }
  return exists_all(nd.binders, *f);
}

}  // namespace

Term random_term(Rng& rng, const Signature& sig, const std::vector<std::string>& vars,
                 int max_depth) {
  const auto fns = sig.functions();
  std::vector<const Symbol*> usable;
  for (const auto& f : fns)
    if (max_depth >= 1) usable.push_back(&f);
  if (usable.empty() || (!vars.empty() && coin(rng, 0.4))) {
    if (vars.empty()) throw PreconditionError("no variables and no usable function symbols");
    return Term::var(vars[static_cast<std::size_t>(uniform(rng, 0, static_cast<int>(vars.size()) - 1))]);
  }
  const Symbol& f = *usable[static_cast<std::size_t>(uniform(rng, 0, static_cast<int>(usable.size()) - 1))];
  std::vector<Term> args;
  for (int i = 0; i < f.arity; ++i) args.push_back(random_term(rng, sig, vars, max_depth - 1));
  return Term::apply(f.name, std::move(args));
}

Formula random_sentence(Rng& rng, const Signature& sig, const SentenceOptions& o) {
  const auto rels = sig.relations();
  if (rels.empty()) throw PreconditionError("signature has no relations");
  if (o.max_bound_vars < 1 || o.max_atoms < 1 || o.max_or < 0)
    throw PreconditionError("inconsistent sentence generator options");

  const int k = uniform(rng, 1, o.max_bound_vars);
  const int m = uniform(rng, 1, o.max_atoms);
  const int ors = uniform(rng, 0, std::min(o.max_or, m - 1));

  std::string prefix = "x";
  while (sig.find(prefix + "1") != nullptr) prefix += "_";
  std::vector<std::string> vars;
  for (int i = 1; i <= k; ++i) vars.push_back(prefix + std::to_string(i));

  std::vector<TreeNode> nodes;
  build_shape(rng, nodes, m);
  std::vector<int> internal;
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    if (nodes[i].lhs >= 0) {
      internal.push_back(static_cast<int>(i));
      continue;
    }
    const Symbol& r = rels[static_cast<std::size_t>(uniform(rng, 0, static_cast<int>(rels.size()) - 1))];
    Atom a{r.name, {}};
    for (int j = 0; j < r.arity; ++j) a.args.push_back(random_term(rng, sig, vars, o.max_term_depth));
    nodes[i].atom = std::move(a);
  }
  std::shuffle(internal.begin(), internal.end(), rng);
  for (int i = 0; i < ors; ++i) nodes[static_cast<std::size_t>(internal[static_cast<std::size_t>(i)])].is_or = true;

  std::vector<std::set<std::string>> occ(nodes.size());
  node_vars(nodes, 0, occ);
  std::vector<std::string> order = vars;
  std::shuffle(order.begin(), order.end(), rng);
  for (const auto& v : order) {
    int at = 0;
    if (occ[0].count(v) == 0) {
      if (!coin(rng, 0.3)) continue;  // vacuous binder, sometimes
    } else if (coin(rng)) {
      // Descend to the smallest subtree that covers every occurrence.
      while (nodes[static_cast<std::size_t>(at)].lhs >= 0) {
        const auto& nd = nodes[static_cast<std::size_t>(at)];
        const bool in_l = occ[static_cast<std::size_t>(nd.lhs)].count(v) != 0;
        const bool in_r = occ[static_cast<std::size_t>(nd.rhs)].count(v) != 0;
        if (in_l && in_r) break;
        at = in_l ? nd.lhs : nd.rhs;
      }
    }
    nodes[static_cast<std::size_t>(at)].binders.push_back(v);
  }
  return to_formula(nodes, 0);
}

CNF random_cnf(Rng& rng, int max_vars, int max_clauses, int min_len, int max_len) {
  if (max_vars < 1 || max_clauses < 1 || min_len < 1 || min_len > max_len)
    throw PreconditionError("inconsistent CNF generator options");
  CNF cnf;
  cnf.num_vars = uniform(rng, 1, max_vars);
  const int clauses = uniform(rng, 1, max_clauses);
  for (int c = 0; c < clauses; ++c) {
    std::vector<int> clause;
    const int len = uniform(rng, min_len, max_len);
    for (int l = 0; l < len; ++l) {
      const int v = uniform(rng, 1, cnf.num_vars);
      clause.push_back(coin(rng) ? v : -v);
    }
    cnf.clauses.push_back(std::move(clause));
  }
  return cnf;
}

PropFormula random_prop(Rng& rng, int num_vars, int leaves) {
  if (num_vars < 1 || leaves < 1) throw PreconditionError("inconsistent formula generator options");
  if (leaves == 1) return PropFormula::literal(uniform(rng, 1, num_vars), coin(rng));
  const int left = uniform(rng, 1, leaves - 1);
  PropFormula l = random_prop(rng, num_vars, left);
  PropFormula r = random_prop(rng, num_vars, leaves - left);
  return coin(rng) ? PropFormula::conj(l, r) : PropFormula::disj(l, r);
}

}  // namespace epos::gen
