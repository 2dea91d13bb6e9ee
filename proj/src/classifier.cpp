#include "epos/classifier.hpp"

#include <algorithm>
#include <boost/dynamic_bitset.hpp>
#include <map>

#include "epos/error.hpp"
#include "epos/evaluator.hpp"

namespace epos {

using Bits = boost::dynamic_bitset<std::uint64_t>;

std::string to_string(Verdict v) {
  switch (v) {
    case Verdict::LocallyRefutable:
      return "locally-refutable";
    case Verdict::NotLocallyRefutable:
      return "not-locally-refutable";
    case Verdict::UnknownAtBound:
      return "unknown-at-bound";
  }
  return {};
}

std::vector<Element> a_valid_witnesses(const FiniteStructure& s) {
  if (!s.is_relational())
    throw PreconditionError("a-validity is defined for relational structures only");
  std::vector<Element> out;
  const auto rels = s.signature().relations();
  for (Element a = 0; a < s.domain_size(); ++a) {
    bool ok = true;
    for (const auto& sym : rels) {
      const Relation& r = s.relation(sym.name);
      if (r.empty()) continue;
      Tuple diag(static_cast<std::size_t>(sym.arity), a);
      if (!r.contains(diag)) {
        ok = false;
        break;
      }
    }
    if (ok) out.push_back(a);
  }
  return out;
}

std::string search_variable(int i) {
  static const char* const kNames[] = {"x", "y", "z", "u", "v", "w"};
  if (i < 6) return kNames[i];
  return "x" + std::to_string(i + 1);
}

namespace {

std::vector<std::string> search_variables(const Signature& sig, int m) {
  std::vector<std::string> out;
  for (int i = 0; static_cast<int>(out.size()) < m; ++i) {
    std::string name = search_variable(i);
    if (sig.find(name) == nullptr && name != "E") out.push_back(name);
  }
  return out;
}

// Satisfying assignments of each atom over a fixed variable list, as bitsets
// indexed by the mixed-radix encoding of the assignment.
class AssignmentSpace {
 public:
  AssignmentSpace(const FiniteStructure& s, std::vector<std::string> vars)
      : s_(s), vars_(std::move(vars)) {
    auto space = tuple_space(s.domain_size(), static_cast<int>(vars_.size()), 1u << 20);
    if (!space) throw LimitError("max-space", "assignment space too large for witness search");
    size_ = static_cast<std::size_t>(*space);
  }

  Bits satisfying(const Atom& a) const {
    Bits bits(size_);
    const auto own = variables_of(a);
    std::vector<std::size_t> index;
    for (const auto& v : own) {
      auto it = std::find(vars_.begin(), vars_.end(), v);
      if (it == vars_.end()) throw PreconditionError("atom variable '" + v + "' not in the search space");
      index.push_back(static_cast<std::size_t>(it - vars_.begin()));
    }
    // Evaluate once per assignment of the atom's own variables, then spread.
    std::vector<std::size_t> stride(vars_.size(), 1);
    for (std::size_t k = vars_.size(); k-- > 1;) stride[k - 1] = stride[k] * s_.domain_size();
    Assignment asg;
    Tuple local(own.size(), 0);
    std::vector<std::size_t> offsets;
    while (true) {
      for (std::size_t i = 0; i < own.size(); ++i) asg[own[i]] = local[i];
      if (eval_atom(s_, a, asg)) {
        // Every full assignment agreeing with `local` on the atom's variables.
        std::vector<std::size_t> full(vars_.size(), 0);
        std::vector<bool> fixed(vars_.size(), false);
        for (std::size_t i = 0; i < own.size(); ++i) {
          full[index[i]] = local[i];
          fixed[index[i]] = true;
        }
        while (true) {
          std::size_t code = 0;
          for (std::size_t k = 0; k < vars_.size(); ++k) code += full[k] * stride[k];
          bits.set(code);
          std::size_t k = vars_.size();
          while (k-- > 0) {
            if (fixed[k]) continue;
            if (++full[k] < s_.domain_size()) break;
            full[k] = 0;
          }
          if (k == static_cast<std::size_t>(-1)) break;
        }
      }
      std::size_t i = own.size();
      while (i-- > 0) {
        if (++local[i] < s_.domain_size()) break;
        local[i] = 0;
      }
      if (i == static_cast<std::size_t>(-1)) break;
    }
    return bits;
  }

  std::size_t size() const { return size_; }

 private:
  const FiniteStructure& s_;
  std::vector<std::string> vars_;
  std::size_t size_ = 0;
};

// Calls visit(indices) for each tuple in [0, count)^arity, lexicographically.
template <typename Visit>
void for_each_index_tuple(std::size_t count, int arity, Visit&& visit) {
  if (count == 0 && arity > 0) return;
  std::vector<std::size_t> t(static_cast<std::size_t>(arity), 0);
  while (true) {
    visit(std::as_const(t));
    int i = arity - 1;
    while (i >= 0 && ++t[i] == count) t[i--] = 0;
    if (i < 0) return;
  }
}

constexpr std::size_t kMaxSearchTerms = 20000;
constexpr std::size_t kMaxSearchAtoms = 200000;

struct Candidate {
  Atom atom;
  Bits bits;
  unsigned var_mask = 0;
};

std::vector<Candidate> candidate_atoms(const FiniteStructure& s, const SearchBounds& b,
                                       const std::vector<std::string>& vars,
                                       const AssignmentSpace& space) {
  const Signature& sig = s.signature();
  std::vector<Term> terms;
  std::vector<int> depth;
  for (const auto& v : vars) {
    terms.push_back(Term::var(v));
    depth.push_back(0);
  }
  for (int d = 1; d <= b.max_term_depth; ++d) {
    const std::size_t older = terms.size();
    for (const auto& f : sig.functions()) {
      if (f.arity == 0) {
        if (d == 1) {
          terms.push_back(Term::apply(f.name));
          depth.push_back(1);
        }
        continue;
      }
      if (!tuple_space(older, f.arity, kMaxSearchTerms))
        throw LimitError("max-term-depth", "too many terms in witness search");
      for_each_index_tuple(older, f.arity, [&](const std::vector<std::size_t>& idx) {
        int dmax = 0;
        for (auto i : idx) dmax = std::max(dmax, depth[i]);
        if (dmax != d - 1) return;
        std::vector<Term> args;
        for (auto i : idx) args.push_back(terms[i]);
        terms.push_back(Term::apply(f.name, std::move(args)));
        depth.push_back(d);
      });
      if (terms.size() > kMaxSearchTerms)
        throw LimitError("max-term-depth", "too many terms in witness search");
    }
  }

  auto rels = sig.relations();
  std::stable_sort(rels.begin(), rels.end(),
                   [](const Symbol& a, const Symbol& c) { return a.name < c.name; });

  std::vector<Candidate> out;
  std::map<Bits, bool> seen;
  const int top = std::max(0, b.max_term_depth);
  for (int d = 0; d <= top; ++d) {
    for (const auto& rel : rels) {
      if (!tuple_space(terms.size(), rel.arity, kMaxSearchAtoms))
        throw LimitError("max-atoms", "too many candidate atoms in witness search");
      for_each_index_tuple(terms.size(), rel.arity, [&](const std::vector<std::size_t>& idx) {
        int dmax = 0;
        for (auto i : idx) dmax = std::max(dmax, depth[i]);
        if (dmax != d) return;
        Atom a{rel.name, {}};
        for (auto i : idx) a.args.push_back(terms[i]);
        Bits bits = space.satisfying(a);
        // Unsatisfiable atoms and tautologies never occur in a minimal
        // witness; atoms with identical solution sets are interchangeable.
        if (bits.none() || bits.all()) return;
        if (!seen.emplace(bits, true).second) return;
        unsigned mask = 0;
        for (const auto& v : variables_of(a))
          mask |= 1u << (std::find(vars.begin(), vars.end(), v) - vars.begin());
        out.push_back(Candidate{std::move(a), std::move(bits), mask});
      });
      if (out.size() > kMaxSearchAtoms)
        throw LimitError("max-atoms", "too many candidate atoms in witness search");
    }
  }
  return out;
}

class ConjunctionSearch {
 public:
  ConjunctionSearch(const std::vector<Candidate>& cands, std::size_t space, std::size_t max_steps)
      : cands_(cands), space_(space), max_steps_(max_steps) {}

  /// Conjunctions of `size` atoms over exactly the first `num_vars` variables.
  std::optional<std::vector<std::size_t>> run(int size, int num_vars) {
    size_ = size;
    want_mask_ = (1u << num_vars) - 1;
    acc_.assign(static_cast<std::size_t>(size) + 1, Bits(space_));
    acc_[0].set();
    chosen_.clear();
    if (dfs(0, 0)) return chosen_;
    return std::nullopt;
  }

 private:
  bool dfs(std::size_t start, unsigned mask) {
    const std::size_t level = chosen_.size();
    if (level == static_cast<std::size_t>(size_)) {
      return acc_[level].none() && mask == want_mask_ && minimal();
    }
    for (std::size_t i = start; i < cands_.size(); ++i) {
      if ((cands_[i].var_mask & ~want_mask_) != 0) continue;
      if (++steps_ > max_steps_)
        throw LimitError("max-steps", "witness search exceeded its step budget");
      acc_[level + 1] = acc_[level];
      acc_[level + 1] &= cands_[i].bits;
      // An unsatisfiable proper subset means the superset is not minimal.
      if (acc_[level + 1].none() && level + 1 < static_cast<std::size_t>(size_)) continue;
      chosen_.push_back(i);
      if (dfs(i + 1, mask | cands_[i].var_mask)) return true;
      chosen_.pop_back();
    }
    return false;
  }

  bool minimal() const {
    for (std::size_t skip = 0; skip < chosen_.size(); ++skip) {
      Bits b(space_);
      b.set();
      for (std::size_t j = 0; j < chosen_.size(); ++j)
        if (j != skip) b &= cands_[chosen_[j]].bits;
      if (b.none()) return false;
    }
    return true;
  }

  const std::vector<Candidate>& cands_;
  std::size_t space_;
  std::size_t max_steps_;
  std::size_t steps_ = 0;
  int size_ = 0;
  unsigned want_mask_ = 0;
  std::vector<Bits> acc_;
  std::vector<std::size_t> chosen_;
};

std::vector<std::string> variables_of(const std::vector<Atom>& atoms) {
  std::vector<std::string> out;
  for (const auto& a : atoms)
    for (const auto& v : epos::variables_of(a))
      if (std::find(out.begin(), out.end(), v) == out.end()) out.push_back(v);
  return out;
}

}  // namespace

std::optional<std::vector<Atom>> find_unsat_conjunction(const FiniteStructure& s,
                                                        const SearchBounds& bounds) {
  if (bounds.max_atoms < 1 || bounds.max_vars < 1 || bounds.max_term_depth < 0)
    throw PreconditionError("search bounds must be positive");
  if (bounds.max_vars > 30) throw LimitError("max-vars", "too many search variables");
  const auto vars = search_variables(s.signature(), bounds.max_vars);
  AssignmentSpace space(s, vars);
  const auto cands = candidate_atoms(s, bounds, vars, space);
  ConjunctionSearch search(cands, space.size(), bounds.max_steps);
  for (int size = 2; size <= bounds.max_atoms; ++size) {
    for (int m = 0; m <= bounds.max_vars; ++m) {
      if (auto found = search.run(size, m)) {
        std::vector<Atom> out;
        for (auto i : *found) out.push_back(cands[i].atom);
        return out;
      }
    }
  }
  return std::nullopt;
}

bool conjunction_satisfiable(const FiniteStructure& s, const std::vector<Atom>& atoms) {
  return solve_pp(s, PPSentence{variables_of(atoms), atoms}).has_value();
}

std::vector<Atom> minimize_unsat_conjunction(const FiniteStructure& s, std::vector<Atom> atoms) {
  const auto vars = variables_of(atoms);
  if (tuple_space(s.domain_size(), static_cast<int>(vars.size()), 1u << 20)) {
    AssignmentSpace space(s, vars);
    std::vector<Bits> bits;
    Bits acc(space.size());
    acc.set();
    std::size_t cut = 0;
    // Shortest unsatisfiable prefix first, then deletion.
    for (; cut < atoms.size() && acc.any(); ++cut) {
      bits.push_back(space.satisfying(atoms[cut]));
      acc &= bits.back();
    }
    if (acc.any()) throw PreconditionError("conjunction is satisfiable");
    atoms.resize(cut);
    for (std::size_t i = atoms.size(); i-- > 0;) {
      Bits rest(space.size());
      rest.set();
      for (std::size_t j = 0; j < atoms.size(); ++j)
        if (j != i) rest &= bits[j];
      if (rest.none()) {
        atoms.erase(atoms.begin() + static_cast<std::ptrdiff_t>(i));
        bits.erase(bits.begin() + static_cast<std::ptrdiff_t>(i));
      }
    }
    return atoms;
  }
  if (conjunction_satisfiable(s, atoms)) throw PreconditionError("conjunction is satisfiable");
  for (std::size_t i = atoms.size(); i-- > 0;) {
    std::vector<Atom> rest = atoms;
    rest.erase(rest.begin() + static_cast<std::ptrdiff_t>(i));
    if (!rest.empty() && !conjunction_satisfiable(s, rest)) atoms = std::move(rest);
  }
  return atoms;
}

WitnessPair derive_witness_pair(const FiniteStructure& s, const std::vector<Atom>& conjunction,
                                const Limits& limits) {
  if (conjunction.size() < 2)
    throw PreconditionError("a witness conjunction needs at least two conjuncts");
  for (const auto& a : conjunction)
    if (!atom_satisfiable(s, a))
      throw PreconditionError("conjunct " + to_string(a) + " is unsatisfiable");
  if (conjunction_satisfiable(s, conjunction))
    throw PreconditionError("conjunction is satisfiable");
  for (std::size_t i = 0; i < conjunction.size(); ++i) {
    std::vector<Atom> rest = conjunction;
    rest.erase(rest.begin() + static_cast<std::ptrdiff_t>(i));
    if (!conjunction_satisfiable(s, rest))
      throw PreconditionError("conjunction is not minimal: dropping " +
                              to_string(conjunction[i]) + " keeps it unsatisfiable");
  }
  std::vector<Formula> rest;
  for (std::size_t i = 1; i < conjunction.size(); ++i) rest.push_back(Formula::atom(conjunction[i]));
  WitnessPair w{Formula::atom(conjunction.front()), conjoin(rest), variables_of(conjunction)};
  if (!verify_witness_pair(s, w, limits))
    throw PreconditionError("derived witness pair failed verification");
  return w;
}

bool verify_witness_pair(const FiniteStructure& s, const WitnessPair& w, const Limits& limits) {
  const auto r0 = defined_relation(s, w.psi0, w.vars, limits);
  const auto r1 = defined_relation(s, w.psi1, w.vars, limits);
  const auto both = defined_relation(s, Formula::conj(w.psi0, w.psi1), w.vars, limits);
  return !r0.empty() && !r1.empty() && both.empty();
}

ClassificationResult classify(const FiniteStructure& s, const SearchBounds& bounds,
                              const Limits& limits) {
  ClassificationResult out;
  out.bounds = bounds;

  auto attach = [&](std::vector<Atom> conj, const char* source) {
    out.witness = derive_witness_pair(s, conj, limits);
    out.conjunction = std::move(conj);
    out.evidence_source = source;
  };

  if (s.is_relational()) {
    out.a_valid = a_valid_witnesses(s);
    if (!out.a_valid.empty()) {
      out.verdict = Verdict::LocallyRefutable;
      return out;
    }
    out.verdict = Verdict::NotLocallyRefutable;
    SearchBounds relational = bounds;
    relational.max_term_depth = 0;
    std::optional<std::vector<Atom>> conj;
    try {
      conj = find_unsat_conjunction(s, relational);
    } catch (const LimitError&) {
    }
    if (conj) {
      attach(std::move(*conj), "search");
      return out;
    }
    try {
      auto ph = pigeonhole_sentence(s, limits);
      attach(minimize_unsat_conjunction(s, atoms_of(ph.sentence)), "pigeonhole");
    } catch (const LimitError&) {
    }
    return out;
  }

  try {
    if (auto conj = find_unsat_conjunction(s, bounds)) {
      out.verdict = Verdict::NotLocallyRefutable;
      attach(std::move(*conj), "search");
      return out;
    }
  } catch (const LimitError&) {
  }
  out.verdict = Verdict::UnknownAtBound;
  return out;
}

PigeonholeSentence pigeonhole_sentence(const FiniteStructure& s, const Limits& limits) {
  if (!a_valid_witnesses(s).empty())
    throw PreconditionError("structure '" + s.name() + "' is a-valid");
  PigeonholeSpec spec;
  spec.n = static_cast<int>(s.domain_size());
  const auto rels = s.signature().relations();
  for (Element a = 0; a < s.domain_size(); ++a) {
    const Symbol* best = nullptr;
    for (const auto& sym : rels) {
      const Relation& r = s.relation(sym.name);
      if (r.empty() || r.contains(Tuple(static_cast<std::size_t>(sym.arity), a))) continue;
      if (best == nullptr || sym.arity < best->arity) best = &sym;
    }
    spec.relations.push_back(best->name);
    spec.arities.push_back(best->arity);
    spec.r += best->arity;
  }

  const long long nvars = static_cast<long long>(spec.r) * spec.n;
  if (nvars > limits.max_vars)
    throw LimitError("max-vars", "pigeonhole sentence needs " + std::to_string(nvars) +
                                     " variables");
  // Injective r-tuples out of r*n variables.
  std::size_t groups = 1;
  for (long long i = 0; i < spec.r; ++i) {
    groups *= static_cast<std::size_t>(nvars - i);
    if (groups * static_cast<std::size_t>(spec.n) > limits.max_conjuncts)
      throw LimitError("max-conjuncts", "pigeonhole sentence has too many conjuncts");
  }
  spec.groups = groups;
  for (long long i = 1; i <= nvars; ++i) spec.variables.push_back("x" + std::to_string(i));

  std::vector<Formula> group_formulas;
  group_formulas.reserve(groups);
  std::vector<std::size_t> pick;
  std::vector<bool> used(static_cast<std::size_t>(nvars), false);
  auto emit = [&]() {
    std::vector<Formula> parts;
    std::size_t offset = 0;
    for (std::size_t i = 0; i < spec.relations.size(); ++i) {
      Atom a{spec.relations[i], {}};
      for (int k = 0; k < spec.arities[i]; ++k)
        a.args.push_back(Term::var(spec.variables[pick[offset++]]));
      parts.push_back(Formula::atom(std::move(a)));
    }
    group_formulas.push_back(conjoin(parts));
  };
  auto rec = [&](auto&& self) -> void {
    if (pick.size() == static_cast<std::size_t>(spec.r)) {
      emit();
      return;
    }
    for (std::size_t v = 0; v < used.size(); ++v) {
      if (used[v]) continue;
      used[v] = true;
      pick.push_back(v);
      self(self);
      pick.pop_back();
      used[v] = false;
    }
  };
  rec(rec);
  return PigeonholeSentence{exists_all(spec.variables, conjoin(group_formulas)), std::move(spec)};
}

}  // namespace epos
