#include "epos/cli.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <variant>

#include "epos/boolean_algebra.hpp"
#include "epos/classifier.hpp"
#include "epos/error.hpp"
#include "epos/evaluator.hpp"
#include "epos/generators.hpp"
#include "epos/limits.hpp"
#include "epos/localizer.hpp"
#include "epos/reductions.hpp"
#include "epos/structure_io.hpp"

namespace epos::cli {
namespace {

struct Config {
  std::string structure;
  std::string formula;
  std::string formula_file;
  std::string cnf;
  std::string prop;
  std::string method = "auto";
  std::string format = "text";
  std::string out;
  std::string structure_out;
  std::string validity = "any";
  std::uint64_t seed = 1;
  bool verify = false;
  std::optional<int> max_vars;
  std::optional<std::size_t> max_branches;
  std::optional<int> max_atoms;
  std::optional<int> search_vars;
  std::optional<int> search_depth;
};

/// Failure that maps to an exit code without being a library error.
struct Exit {
  int code;
  std::string message;
};

using Source = std::variant<FiniteStructure, AtomOracle>;

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Exit{kExitUsage, "cannot read '" + path + "'"};
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out || !(out << text)) throw Exit{kExitUsage, "cannot write '" + path + "'"};
}

Source load_source(const std::string& spec) {
  if (spec.empty()) throw Exit{kExitUsage, "--structure is required"};
  if (spec == "nat_neq") return nat_neq_oracle(false);
  if (spec == "nat_neq_eq") return nat_neq_oracle(true);
  if (spec.rfind("powerset:", 0) == 0) {
    const std::string k = spec.substr(9);
    if (k.empty() || k.size() > 2 || !std::all_of(k.begin(), k.end(), ::isdigit))
      throw Exit{kExitUsage, "bad catalog name '" + spec + "'"};
    return powerset_algebra(std::stoi(k));
  }
  return parse_structure(read_file(spec));
}

FiniteStructure load_finite(const std::string& spec) {
  Source src = load_source(spec);
  if (auto* s = std::get_if<FiniteStructure>(&src)) return std::move(*s);
  throw Exit{kExitRefused, "'" + spec + "' has an infinite domain; this command needs a finite structure"};
}

const Signature& signature_of(const Source& src) {
  return std::visit(
      [](const auto& s) -> const Signature& {
        if constexpr (std::is_same_v<std::decay_t<decltype(s)>, FiniteStructure>)
          return s.signature();
        else
          return s.signature;
      },
      src);
}

std::optional<Formula> load_formula(const Config& cfg, const Signature& sig, bool required) {
  if (!cfg.formula.empty() && !cfg.formula_file.empty())
    throw Exit{kExitUsage, "give either --formula or --formula-file"};
  std::string text = cfg.formula;
  if (!cfg.formula_file.empty()) text = read_file(cfg.formula_file);
  if (text.empty()) {
    if (required) throw Exit{kExitUsage, "--formula or --formula-file is required"};
    return std::nullopt;
  }
  Formula f = parse_formula(text, sig);
  if (!is_sentence(f)) {
    std::string names;
    for (const auto& v : free_variables(f)) names += (names.empty() ? "" : ", ") + v;
    throw Exit{kExitUsage, "formula has free variables: " + names};
  }
  return f;
}

Limits make_limits(const Config& cfg) {
  Limits limits;
  if (const char* env = std::getenv("EPOS_LIMITS"); env != nullptr && *env != '\0')
    limits = apply_overrides(limits, env);
  if (cfg.max_vars) limits.max_vars = *cfg.max_vars;
  if (cfg.max_branches) limits.max_branches = *cfg.max_branches;
  return limits;
}

SearchBounds make_bounds(const Config& cfg) {
  SearchBounds b;
  if (cfg.max_atoms) b.max_atoms = *cfg.max_atoms;
  if (cfg.search_vars) b.max_vars = *cfg.search_vars;
  if (cfg.search_depth) b.max_term_depth = *cfg.search_depth;
  return b;
}

/// text: "key: value" lines; kv: "key=value" lines.
class Report {
 public:
  explicit Report(bool kv) : kv_(kv) {}

  void field(const std::string& key, const std::string& value) {
    out_ << key << (kv_ ? "=" : ": ") << value << '\n';
  }
  void line(const std::string& text) { out_ << text << '\n'; }
  bool kv() const { return kv_; }
  std::string str() const { return out_.str(); }

 private:
  bool kv_;
  std::ostringstream out_;
};

void emit(const Config& cfg, const std::string& text, std::ostream& out) {
  if (cfg.out.empty())
    out << text;
  else
    write_file(cfg.out, text);
}

std::string join_atoms(const std::vector<Atom>& atoms) {
  std::vector<Formula> parts;
  for (const auto& a : atoms) parts.push_back(Formula::atom(a));
  return print_formula(conjoin(parts));
}

std::string join_words(const std::vector<std::string>& words) {
  std::string s;
  for (const auto& w : words) s += (s.empty() ? "" : " ") + w;
  return s;
}

void verify_line(std::ostream& err, bool ok, const std::string& what) {
  err << "verify: " << (ok ? "ok" : "FAILED") << " (" << what << ")\n";
}

// ---------------------------------------------------------------------------

int cmd_eval(const Config& cfg, std::ostream& out, std::ostream& err) {
  const Source src = load_source(cfg.structure);
  const Formula f = *load_formula(cfg, signature_of(src), true);
  const Limits limits = make_limits(cfg);

  bool value = false;
  std::string method = cfg.method;
  if (const auto* o = std::get_if<AtomOracle>(&src)) {
    if (method == "brute" || method == "branch")
      throw Exit{kExitRefused, "'" + o->name + "' has an infinite domain; only the localizer applies"};
    method = "localizer";
    value = decide_fast_path(*o, f);
    if (cfg.verify) err << "verify: skipped (no finite oracle for '" << o->name << "')\n";
  } else {
    const auto& s = std::get<FiniteStructure>(src);
    if (method == "auto")
      method = s.is_relational() && !a_valid_witnesses(s).empty() ? "localizer" : "branch";
    if (method == "brute")
      value = brute_force_eval(s, f, limits);
    else if (method == "branch")
      value = eval_via_branches(s, f, limits);
    else
      value = decide_fast_path(s, f);
  }

  Report r(cfg.format == "kv");
  if (r.kv())
    r.field("result", value ? "true" : "false");
  else
    r.line(value ? "true" : "false");
  r.field("method", method);
  out << r.str();

  if (const auto* s = std::get_if<FiniteStructure>(&src); s && cfg.verify) {
    const bool reference = brute_force_eval(*s, f, limits);
    verify_line(err, reference == value,
                "brute force says " + std::string(reference ? "true" : "false"));
    if (reference != value) return kExitVerifyFailed;
  }
  return value ? kExitTrue : kExitFalse;
}

int cmd_classify(const Config& cfg, std::ostream& out, std::ostream& err) {
  const Source src = load_source(cfg.structure);
  Report r(cfg.format == "kv");
  auto verdict = [&](const std::string& v) {
    if (r.kv())
      r.field("verdict", v);
    else
      r.line(v);
  };

  if (const auto* o = std::get_if<AtomOracle>(&src)) {
    verdict(o->locally_refutable ? "locally-refutable" : "not-locally-refutable");
    r.field("evidence", "catalog");
    out << r.str();
    return kExitOk;
  }

  const auto& s = std::get<FiniteStructure>(src);
  const SearchBounds bounds = make_bounds(cfg);
  const Limits limits = make_limits(cfg);
  const ClassificationResult c = classify(s, bounds, limits);

  switch (c.verdict) {
    case Verdict::LocallyRefutable:
      if (r.kv()) {
        verdict(to_string(c.verdict));
        r.field("a", std::to_string(c.a_valid.front()));
      } else {
        r.line(to_string(c.verdict) + " a=" + std::to_string(c.a_valid.front()));
      }
      break;
    case Verdict::NotLocallyRefutable:
      verdict(to_string(c.verdict));
      if (c.conjunction) r.field("conjunction", join_atoms(*c.conjunction));
      if (c.witness) {
        r.field("psi0", print_formula(c.witness->psi0));
        r.field("psi1", print_formula(c.witness->psi1));
        r.field("vars", join_words(c.witness->vars));
      }
      r.field("evidence", c.evidence_source.empty() ? "a-validity" : c.evidence_source);
      break;
    case Verdict::UnknownAtBound:
      verdict(to_string(c.verdict));
      r.field("max-atoms", std::to_string(c.bounds.max_atoms));
      r.field("max-vars", std::to_string(c.bounds.max_vars));
      r.field("max-depth", std::to_string(c.bounds.max_term_depth));
      break;
  }
  out << r.str();

  if (cfg.verify && c.witness) {
    const bool ok = verify_witness_pair(s, *c.witness, limits);
    verify_line(err, ok, "witness pair: both sides non-empty, intersection empty");
    if (!ok) return kExitVerifyFailed;
  }
  return kExitOk;
}

WitnessPair witness_for(const FiniteStructure& s, const Config& cfg) {
  const ClassificationResult c = classify(s, make_bounds(cfg), make_limits(cfg));
  if (!c.witness)
    throw Exit{kExitRefused, "'" + s.name() + "' yields no witness pair (" + to_string(c.verdict) + ")"};
  return *c.witness;
}

int cmd_reduce(const std::string& kind, const Config& cfg, std::ostream& out, std::ostream& err) {
  const Limits limits = make_limits(cfg);
  if (kind == "3sat" || kind == "embed") {
    const FiniteStructure s = load_finite(cfg.structure);
    const WitnessPair w = witness_for(s, cfg);
    std::optional<GadgetInstance> g;
    bool satisfiable = false;
    if (kind == "3sat") {
      if (cfg.cnf.empty()) throw Exit{kExitUsage, "--cnf is required"};
      const CNF cnf = parse_dimacs(read_file(cfg.cnf));
      g = threesat_to_expos(s, cnf, w);
      if (cfg.verify) satisfiable = cnf_satisfiable(cnf);
    } else {
      if (cfg.prop.empty()) throw Exit{kExitUsage, "--prop is required"};
      const PropFormula p = parse_prop(cfg.prop);
      g = boolean_embed(s, p, w);
      if (cfg.verify) satisfiable = prop_satisfiable(p);
    }
    emit(cfg, print_formula(g->formula) + "\n", out);
    if (cfg.verify) {
      const bool truth = brute_force_eval(s, g->formula, limits);
      verify_line(err, truth == satisfiable,
                  std::string("gadget ") + (truth ? "true" : "false") + ", input " +
                      (satisfiable ? "satisfiable" : "unsatisfiable"));
      if (truth != satisfiable) return kExitVerifyFailed;
    }
    return kExitOk;
  }

  if (kind == "product") {
    const FiniteStructure s = load_finite(cfg.structure);
    const FiniteStructure p = product_structure(s, limits);
    const std::optional<Formula> f = load_formula(cfg, s.signature(), false);
    std::optional<Formula> rewritten;
    if (f) rewritten = product_rewrite(*f, s);

    const std::string structure_text = print_structure(p);
    if (cfg.structure_out.empty())
      out << structure_text;
    else
      write_file(cfg.structure_out, structure_text);
    if (rewritten) {
      const std::string text = print_formula(*rewritten) + "\n";
      if (!cfg.out.empty())
        write_file(cfg.out, text);
      else if (!cfg.structure_out.empty())
        out << text;
      else
        out << "# formula\n" << text;
    }
    if (cfg.verify) {
      if (!rewritten) {
        err << "verify: skipped (no formula given)\n";
        return kExitOk;
      }
      const bool before = brute_force_eval(s, *f, limits);
      const bool after = brute_force_eval(p, *rewritten, limits);
      verify_line(err, before == after,
                  std::string("source ") + (before ? "true" : "false") + ", product " +
                      (after ? "true" : "false"));
      if (before != after) return kExitVerifyFailed;
    }
    return kExitOk;
  }

  if (kind == "sat2ba") {
    if (cfg.cnf.empty()) throw Exit{kExitUsage, "--cnf is required"};
    const CNF cnf = parse_dimacs(read_file(cfg.cnf));
    const Formula f = sat_to_ba_expos(cnf);
    emit(cfg, print_formula(f) + "\n", out);
    if (cfg.verify) {
      const FiniteStructure s = load_finite(cfg.structure.empty() ? "powerset:2" : cfg.structure);
      const bool truth = brute_force_eval(s, f, limits);
      const bool sat = cnf_satisfiable(cnf);
      verify_line(err, truth == sat,
                  s.name() + " says " + (truth ? "true" : "false") + ", input " +
                      (sat ? "satisfiable" : "unsatisfiable"));
      if (truth != sat) return kExitVerifyFailed;
    }
    return kExitOk;
  }
  throw Exit{kExitUsage, "unknown reduction '" + kind + "'"};
}

int cmd_gen(const std::string& kind, const Config& cfg, std::ostream& out, std::ostream& err) {
  const Limits limits = make_limits(cfg);
  if (kind == "pigeonhole") {
    const FiniteStructure s = load_finite(cfg.structure);
    const PigeonholeSentence p = pigeonhole_sentence(s, limits);
    emit(cfg, print_formula(p.sentence) + "\n", out);
    err << "pigeonhole: " << p.spec.variables.size() << " variables, " << p.spec.groups
        << " groups, r=" << p.spec.r << ", n=" << p.spec.n << '\n';
    if (cfg.verify) {
      const bool truth = brute_force_eval(s, p.sentence, limits);
      const bool local = eval_bool(localize(s, p.sentence));
      const bool ok = !truth && local;
      verify_line(err, ok, std::string("brute force ") + (truth ? "true" : "false") +
                               ", localizer " + (local ? "true" : "false"));
      if (!ok) return kExitVerifyFailed;
    }
    return kExitOk;
  }

  gen::Rng rng(cfg.seed);
  if (kind == "random-structure") {
    gen::StructureOptions o;
    if (cfg.validity == "a-valid")
      o.validity = gen::Validity::AValid;
    else if (cfg.validity == "not-a-valid")
      o.validity = gen::Validity::NotAValid;
    const FiniteStructure s = gen::random_structure(rng, o);
    emit(cfg, print_structure(s), out);
    err << "random-structure: seed=" << cfg.seed << " validity=" << cfg.validity << '\n';
    return kExitOk;
  }
  if (kind == "random-formula") {
    Signature sig;
    if (cfg.structure.empty())
      sig.add_relation("R", 2);
    else
      sig = signature_of(load_source(cfg.structure));
    gen::SentenceOptions o;
    if (!sig.relations().empty() && sig.has_functions()) o.max_term_depth = 1;
    const Formula f = gen::random_sentence(rng, sig, o);
    emit(cfg, print_formula(f) + "\n", out);
    err << "random-formula: seed=" << cfg.seed << '\n';
    return kExitOk;
  }
  throw Exit{kExitUsage, "unknown generator '" + kind + "'"};
}

int cmd_branches(const Config& cfg, std::ostream& out, std::ostream&) {
  const Source src = load_source(cfg.structure);
  const Formula f = *load_formula(cfg, signature_of(src), true);
  const BranchSet branches = enumerate_branches(f, make_limits(cfg));

  Report r(cfg.format == "kv");
  if (r.kv())
    r.field("branches", std::to_string(branches.size()));
  else
    r.line(std::to_string(branches.size()) + (branches.size() == 1 ? " branch" : " branches"));
  for (std::size_t i = 0; i < branches.size(); ++i) {
    const std::string choice = branches[i].choices.empty() ? "-" : choice_string(branches[i].choices);
    std::string text = to_string(branches[i].sentence);
    for (std::size_t j = 0; j < i; ++j)
      if (branches[j].sentence == branches[i].sentence) {
        text += "  (duplicate of " + choice_string(branches[j].choices) + ")";
        break;
      }
    if (r.kv())
      r.field("branch." + choice, text);
    else
      r.line("[" + choice + "] " + text);
  }
  out << r.str();
  return kExitOk;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Existential positive sentences over finite structures", "epos"};
  app.require_subcommand(1);
  Config cfg;

  auto common = [&](CLI::App* cmd) {
    cmd->add_option("--structure", cfg.structure,
                    "structure file, powerset:K, nat_neq or nat_neq_eq");
    cmd->add_option("--format", cfg.format, "output format")
        ->check(CLI::IsMember({"text", "kv"}));
    cmd->add_option("--max-vars", cfg.max_vars, "bound-variable limit")->check(CLI::PositiveNumber);
    cmd->add_option("--max-branches", cfg.max_branches, "branch limit")->check(CLI::PositiveNumber);
    cmd->add_flag("--verify", cfg.verify, "cross-check the result; report on stderr");
  };
  auto formula_opts = [&](CLI::App* cmd) {
    cmd->add_option("--formula", cfg.formula, "sentence text");
    cmd->add_option("--formula-file", cfg.formula_file, "file holding the sentence");
  };
  auto search_opts = [&](CLI::App* cmd) {
    cmd->add_option("--max-atoms", cfg.max_atoms, "witness search: conjunction size")
        ->check(CLI::PositiveNumber);
    cmd->add_option("--search-vars", cfg.search_vars, "witness search: variables")
        ->check(CLI::PositiveNumber);
    cmd->add_option("--search-depth", cfg.search_depth, "witness search: term depth")
        ->check(CLI::NonNegativeNumber);
  };

  auto* eval = app.add_subcommand("eval", "decide a sentence");
  common(eval);
  formula_opts(eval);
  eval->add_option("--method", cfg.method, "decision procedure")
      ->check(CLI::IsMember({"brute", "localizer", "branch", "auto"}));

  auto* classify_cmd = app.add_subcommand("classify", "locally refutable or not");
  common(classify_cmd);
  search_opts(classify_cmd);

  std::string reduce_kind;
  auto* reduce = app.add_subcommand("reduce", "build a reduction");
  reduce->add_option("kind", reduce_kind, "3sat, embed, product or sat2ba")
      ->required()
      ->check(CLI::IsMember({"3sat", "embed", "product", "sat2ba"}));
  common(reduce);
  formula_opts(reduce);
  search_opts(reduce);
  reduce->add_option("--cnf", cfg.cnf, "DIMACS file");
  reduce->add_option("--prop", cfg.prop, "NNF formula over numbered variables, e.g. \"1 & (-2 | 3)\"");
  reduce->add_option("--out", cfg.out, "write the formula here");
  reduce->add_option("--structure-out", cfg.structure_out, "write the product structure here");

  std::string gen_kind;
  auto* gen_cmd = app.add_subcommand("gen", "generate instances");
  gen_cmd->add_option("kind", gen_kind, "pigeonhole, random-structure or random-formula")
      ->required()
      ->check(CLI::IsMember({"pigeonhole", "random-structure", "random-formula"}));
  common(gen_cmd);
  gen_cmd->add_option("--seed", cfg.seed, "random seed");
  gen_cmd->add_option("--validity", cfg.validity, "random-structure: a-validity")
      ->check(CLI::IsMember({"any", "a-valid", "not-a-valid"}));
  gen_cmd->add_option("--out", cfg.out, "write the output here");

  auto* branches = app.add_subcommand("branches", "list the disjunction-free branches");
  common(branches);
  formula_opts(branches);

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    std::ostringstream o, e2;
    const int code = app.exit(e, o, e2);
    out << o.str();
    err << e2.str();
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (*eval) return cmd_eval(cfg, out, err);
    if (*classify_cmd) return cmd_classify(cfg, out, err);
    if (*reduce) return cmd_reduce(reduce_kind, cfg, out, err);
    if (*gen_cmd) return cmd_gen(gen_kind, cfg, out, err);
    if (*branches) return cmd_branches(cfg, out, err);
  } catch (const Exit& e) {
    err << "error: " << e.message << '\n';
    return e.code;
  } catch (const LimitError& e) {
    err << "error: limit exceeded: " << e.what() << '\n';
    return kExitRefused;
  } catch (const NotLocallyRefutableError& e) {
    err << "error: refused: " << e.what() << '\n';
    return kExitRefused;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  }
  return kExitUsage;
}

}  // namespace epos::cli
