#include "epos/structure_io.hpp"

#include <algorithm>
#include <cctype>
#include <set>
#include <sstream>

#include "epos/error.hpp"

namespace epos {

namespace {

struct Token {
  std::string text;
  std::size_t line;
};

std::vector<Token> tokenize(std::string_view text) {
  std::vector<Token> out;
  std::size_t line = 1;
  std::size_t i = 0;
  while (i < text.size()) {
    char c = text[i];
    if (c == '\n') {
      ++line;
      ++i;
    } else if (std::isspace(static_cast<unsigned char>(c))) {
      ++i;
    } else if (c == '#') {
      while (i < text.size() && text[i] != '\n') ++i;
    } else if (c == '{' || c == '}' || c == ';') {
      out.push_back({std::string(1, c), line});
      ++i;
    } else if (c == '-' && i + 1 < text.size() && text[i + 1] == '>') {
      out.push_back({"->", line});
      i += 2;
    } else {
      std::size_t start = i;
      while (i < text.size() && !std::isspace(static_cast<unsigned char>(text[i])) &&
             text[i] != '{' && text[i] != '}' && text[i] != ';' && text[i] != '#' &&
             !(text[i] == '-' && i + 1 < text.size() && text[i + 1] == '>'))
        ++i;
      out.push_back({std::string(text.substr(start, i - start)), line});
    }
  }
  return out;
}

bool is_ident(const std::string& s) {
  if (s.empty() || !(std::isalpha(static_cast<unsigned char>(s[0])) || s[0] == '_')) return false;
  for (char c : s)
    if (!(std::isalnum(static_cast<unsigned char>(c)) || c == '_')) return false;
  return true;
}

class StructureParser {
 public:
  explicit StructureParser(std::string_view text) : toks_(tokenize(text)) {}

  FiniteStructure parse() {
    expect_word("structure");
    std::string name = ident();
    expect_word("domain");
    std::size_t n = integer();
    if (n == 0) fail("domain size must be positive");

    struct RelDecl {
      std::string name;
      int arity;
      std::vector<Tuple> tuples;
    };
    struct FunDecl {
      std::string name;
      int arity;
      std::vector<Element> table;
    };
    std::vector<RelDecl> rels;
    std::vector<FunDecl> funs;
    Signature sig;

    while (pos_ < toks_.size()) {
      std::string kw = next().text;
      if (kw == "rel") {
        RelDecl r{ident(), static_cast<int>(integer()), {}};
        if (r.arity == 0) fail("relations of arity 0 are not supported");
        add_symbol(sig, r.name, SymbolKind::Relation, r.arity);
        expect("{");
        while (!at("}")) {
          Tuple t;
          while (!at(";") && !at("}")) t.push_back(element(n));
          if (t.size() != static_cast<std::size_t>(r.arity))
            fail("tuple of length " + std::to_string(t.size()) + " in relation '" + r.name +
                 "' of arity " + std::to_string(r.arity));
          r.tuples.push_back(std::move(t));
          if (at(";")) ++pos_;
        }
        expect("}");
        rels.push_back(std::move(r));
      } else if (kw == "fun") {
        FunDecl f{ident(), static_cast<int>(integer()), {}};
        add_symbol(sig, f.name, SymbolKind::Function, f.arity);
        auto space = tuple_space(n, f.arity, 1u << 24);
        if (!space) fail("function table for '" + f.name + "' too large");
        f.table.assign(*space, 0);
        std::vector<bool> seen(*space, false);
        std::size_t count = 0;
        expect("{");
        while (!at("}")) {
          std::uint64_t code = 0;
          for (int k = 0; k < f.arity; ++k) code = code * n + element(n);
          expect("->");
          Element v = element(n);
          if (seen[code]) fail("duplicate entry in function '" + f.name + "'");
          seen[code] = true;
          f.table[code] = v;
          ++count;
          if (at(";")) ++pos_;
        }
        expect("}");
        if (count != *space)
          fail("function '" + f.name + "' is not total: " + std::to_string(count) + " of " +
               std::to_string(*space) + " entries");
        funs.push_back(std::move(f));
      } else if (kw == "const") {
        FunDecl f{ident(), 0, {}};
        add_symbol(sig, f.name, SymbolKind::Function, 0);
        f.table.push_back(element(n));
        funs.push_back(std::move(f));
      } else {
        --pos_;
        fail("expected 'rel', 'fun' or 'const', got '" + kw + "'");
      }
    }

    FiniteStructure s(name, sig, n);
    for (auto& r : rels) s.set_relation(r.name, std::move(r.tuples));
    for (auto& f : funs) s.set_function(f.name, Function::from_table(f.arity, n, std::move(f.table)));
    return s;
  }

 private:
  [[noreturn]] void fail(const std::string& msg) const {
    std::size_t line = toks_.empty() ? 1 : toks_[std::min(pos_, toks_.size() - 1)].line;
    throw ParseError(msg, line);
  }

  const Token& next() {
    if (pos_ >= toks_.size()) fail("unexpected end of input");
    return toks_[pos_++];
  }

  bool at(const char* s) const { return pos_ < toks_.size() && toks_[pos_].text == s; }

  void expect(const char* s) {
    if (!at(s)) fail(std::string("expected '") + s + "'");
    ++pos_;
  }

  void expect_word(const char* s) { expect(s); }

  std::string ident() {
    const Token& t = next();
    if (!is_ident(t.text)) {
      --pos_;
      fail("expected identifier, got '" + t.text + "'");
    }
    return t.text;
  }

  std::size_t integer() {
    const Token& t = next();
    if (t.text.empty() || t.text.size() > 9 ||
        !std::all_of(t.text.begin(), t.text.end(), [](char c) { return std::isdigit(static_cast<unsigned char>(c)); })) {
      --pos_;
      fail("expected non-negative integer, got '" + t.text + "'");
    }
    return std::stoul(t.text);
  }

  Element element(std::size_t n) {
    std::size_t v = integer();
    if (v >= n) {
      --pos_;
      fail("element " + std::to_string(v) + " outside domain of size " + std::to_string(n));
    }
    return static_cast<Element>(v);
  }

  void add_symbol(Signature& sig, const std::string& name, SymbolKind kind, int arity) {
    if (name == "E") fail("'E' is reserved for the quantifier");
    try {
      if (kind == SymbolKind::Relation) sig.add_relation(name, arity);
      else sig.add_function(name, arity);
    } catch (const SignatureError& e) {
      fail(e.what());
    }
  }

  std::vector<Token> toks_;
  std::size_t pos_ = 0;
};

std::string sanitize(const std::string& name) {
  std::string out = name;
  for (char& c : out)
    if (!(std::isalnum(static_cast<unsigned char>(c)) || c == '_')) c = '_';
  if (out.empty() || std::isdigit(static_cast<unsigned char>(out[0]))) out.insert(0, "s");
  return out;
}

}  // namespace

FiniteStructure parse_structure(std::string_view text) { return StructureParser(text).parse(); }

std::string print_structure(const FiniteStructure& s) {
  std::ostringstream out;
  const std::size_t n = s.domain_size();
  out << "structure " << sanitize(s.name()) << "\n";
  out << "domain " << n << "\n";
  for (const auto& sym : s.signature().symbols()) {
    if (sym.kind == SymbolKind::Relation) {
      out << "rel " << sym.name << " " << sym.arity << " {";
      const auto tuples = s.relation(sym.name).tuples();
      for (std::size_t i = 0; i < tuples.size(); ++i) {
        out << (i == 0 ? " " : " ; ");
        for (std::size_t j = 0; j < tuples[i].size(); ++j) out << (j ? " " : "") << tuples[i][j];
      }
      out << " }\n";
      continue;
    }
    const Function& f = s.function(sym.name);
    if (sym.arity == 0) {
      out << "const " << sym.name << " " << f.apply({}) << "\n";
      continue;
    }
    auto space = tuple_space(n, sym.arity, 1u << 24);
    if (!space) throw LimitError("max-space", "function table for '" + sym.name + "' too large to print");
    out << "fun " << sym.name << " " << sym.arity << " {";
    Tuple args(static_cast<std::size_t>(sym.arity), 0);
    for (std::uint64_t code = 0; code < *space; ++code) {
      std::uint64_t rest = code;
      for (int k = sym.arity - 1; k >= 0; --k) {
        args[k] = static_cast<Element>(rest % n);
        rest /= n;
      }
      out << (code == 0 ? " " : " ; ");
      for (std::size_t j = 0; j < args.size(); ++j) out << args[j] << " ";
      out << "-> " << f.apply(args);
    }
    out << " }\n";
  }
  return out.str();
}

}  // namespace epos
