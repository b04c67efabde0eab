#pragma once

#include <cctype>
#include <filesystem>
#include <fstream>
#include <algorithm>
#include <map>
#include <set>
#include <type_traits>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "ifusion/colimit.hpp"
#include "ifusion/eq.hpp"
#include "ifusion/error.hpp"
#include "ifusion/prop.hpp"
#include "ifusion/sexpr.hpp"
#include "ifusion/signature.hpp"
#include "ifusion/theory.hpp"

namespace ifusion {

struct NodeDecl {
  std::string id;
  std::string path;
  friend bool operator==(const NodeDecl&, const NodeDecl&) = default;
};

struct EdgeDecl {
  std::string id;
  std::string source;
  std::string target;
  std::string path;
  friend bool operator==(const EdgeDecl&, const EdgeDecl&) = default;
};

// A diagram as written: node theories and edge morphisms live in other files.
struct DiagramDecl {
  std::string name;
  std::vector<NodeDecl> nodes;
  std::vector<EdgeDecl> edges;
  SourceSpan span;

  friend bool operator==(const DiagramDecl& a, const DiagramDecl& b) {
    return a.name == b.name && a.nodes == b.nodes && a.edges == b.edges;
  }
};

// Everything declared in one file, in declaration order.
template <Institution I>
struct Workspace {
  std::string file;
  std::vector<Signature> signatures;
  std::vector<Theory<I>> theories;
  std::vector<SignatureMorphism> morphisms;
  std::vector<DiagramDecl> diagrams;

  const Signature* find_signature(const std::string& name) const {
    for (const auto& s : signatures) {
      if (s.name() == name) return &s;
    }
    return nullptr;
  }
  const Theory<I>* find_theory(const std::string& name) const {
    for (const auto& t : theories) {
      if (t.name() == name) return &t;
    }
    return nullptr;
  }
  const SignatureMorphism* find_morphism(const std::string& name) const {
    for (const auto& m : morphisms) {
      if (m.name() == name) return &m;
    }
    return nullptr;
  }
  const DiagramDecl* find_diagram(const std::string& name) const {
    for (const auto& d : diagrams) {
      if (d.name == name) return &d;
    }
    return nullptr;
  }

  const Signature& signature(const std::string& name) const {
    if (auto* s = find_signature(name)) return *s;
    fail(ErrorKind::kSemantic, "no signature named '" + name + "'");
  }
  const Theory<I>& theory(const std::string& name) const {
    if (auto* t = find_theory(name)) return *t;
    fail(ErrorKind::kSemantic, "no theory named '" + name + "'");
  }
  const SignatureMorphism& morphism(const std::string& name) const {
    if (auto* m = find_morphism(name)) return *m;
    fail(ErrorKind::kSemantic, "no morphism named '" + name + "'");
  }
  const DiagramDecl& diagram(const std::string& name) const {
    if (auto* d = find_diagram(name)) return *d;
    fail(ErrorKind::kSemantic, "no diagram named '" + name + "'");
  }

  // Axioms of every loaded theory, grouped by signature name.
  std::vector<typename I::Sentence> axioms_over(const Signature& sig) const {
    std::vector<typename I::Sentence> out;
    for (const auto& t : theories) {
      if (t.signature() == sig) out.insert(out.end(), t.axioms().begin(), t.axioms().end());
    }
    return out;
  }

  friend bool operator==(const Workspace& a, const Workspace& b) {
    return a.signatures == b.signatures && a.theories == b.theories &&
           a.morphisms == b.morphisms && a.diagrams == b.diagrams;
  }
};

using AnyWorkspace = std::variant<Workspace<Prop>, Workspace<Eq>>;

namespace detail {

struct Line {
  std::string text;  // comment stripped
  int number = 0;
  std::vector<std::pair<std::string, int>> words;  // (word, 1-based column)
};

inline Line split_line(std::string_view raw, int number) {
  Line line;
  line.number = number;
  const auto cut = raw.find_first_of("#;");
  line.text = std::string(raw.substr(0, cut));
  std::size_t i = 0;
  while (i < line.text.size()) {
    while (i < line.text.size() && std::isspace(static_cast<unsigned char>(line.text[i]))) ++i;
    if (i >= line.text.size()) break;
    const auto begin = i;
    while (i < line.text.size() && !std::isspace(static_cast<unsigned char>(line.text[i]))) ++i;
    line.words.emplace_back(line.text.substr(begin, i - begin), static_cast<int>(begin) + 1);
  }
  return line;
}

template <Institution I>
class WorkspaceParser {
 public:
  WorkspaceParser(std::string file) { ws_.file = std::move(file); }

  Workspace<I> parse(const std::vector<Line>& lines, std::size_t first) {
    for (std::size_t k = first; k < lines.size(); ++k) {
      if (!lines[k].words.empty()) handle(lines[k]);
    }
    finish_block();
    return std::move(ws_);
  }

 private:
  enum class Block { kNone, kSignature, kTheory, kMorphism, kDiagram };

  SourceSpan span(const Line& l, std::size_t word = 0) const {
    const auto& [w, col] = l.words[std::min(word, l.words.size() - 1)];
    return SourceSpan{ws_.file, l.number, col, col + static_cast<int>(w.size())};
  }

  [[noreturn]] void parse_error(const Line& l, const std::string& msg, std::size_t word = 0) const {
    fail(ErrorKind::kParse, msg, span(l, word));
  }
  [[noreturn]] void semantic_error(const Line& l, const std::string& msg,
                                   std::size_t word = 0) const {
    fail(ErrorKind::kSemantic, msg, span(l, word));
  }

  void expect_words(const Line& l, std::size_t n, const char* form) const {
    if (l.words.size() != n) parse_error(l, std::string("expected '") + form + "'");
  }

  void check_name(const Line& l, std::size_t word) const {
    if (!is_identifier(l.words[word].first)) {
      parse_error(l, "'" + l.words[word].first + "' is not a valid name", word);
    }
  }

  void handle(const Line& l) {
    const auto& kw = l.words[0].first;
    if (kw == "institution") parse_error(l, "duplicate 'institution' line");
    if (kw == "signature") return start_signature(l);
    if (kw == "theory") return start_theory(l);
    if (kw == "morphism") return start_morphism(l);
    if (kw == "diagram") return start_diagram(l);
    if (kw == "symbols") return add_symbols(l);
    if (kw == "op") return add_op(l);
    if (kw == "var") return add_vars(l);
    if (kw == "axiom") return add_axiom(l);
    if (kw == "map") return add_map(l);
    if (kw == "node") return add_node(l);
    if (kw == "edge") return add_edge(l);
    parse_error(l, "unknown keyword '" + kw + "'");
  }

  void require_block(const Line& l, Block b, const char* what) const {
    if (block_ != b) {
      parse_error(l, "'" + l.words[0].first + "' must appear inside a " + what + " block");
    }
  }

  void finish_block() {
    switch (block_) {
      case Block::kSignature:
        try {
          Signature sig(name_, symbols_);
          if constexpr (std::is_same_v<I, Prop>) Prop::check_signature(sig);
          ws_.signatures.push_back(std::move(sig));
        } catch (const Error& e) {
          fail(e.kind(), e.what(), header_);
        }
        break;
      case Block::kTheory:
        ws_.theories.emplace_back(name_, *theory_sig_, std::move(axioms_));
        break;
      case Block::kMorphism:
        try {
          ws_.morphisms.push_back(SignatureMorphism::make(*morph_source_, *morph_target_, map_, name_));
        } catch (const Error& e) {
          fail(e.kind(), e.what(), header_);
        }
        break;
      case Block::kDiagram:
        ws_.diagrams.push_back(std::move(diagram_));
        break;
      case Block::kNone:
        break;
    }
    block_ = Block::kNone;
    symbols_.clear();
    axioms_.clear();
    vars_.clear();
    map_.clear();
    diagram_ = DiagramDecl{};
  }

  void start_signature(const Line& l) {
    expect_words(l, 2, "signature NAME");
    check_name(l, 1);
    finish_block();
    if (ws_.find_signature(l.words[1].first)) {
      semantic_error(l, "duplicate signature '" + l.words[1].first + "'", 1);
    }
    block_ = Block::kSignature;
    name_ = l.words[1].first;
    header_ = span(l, 1);
  }

  void start_theory(const Line& l) {
    if (l.words.size() != 4 || l.words[2].first != "over") {
      parse_error(l, "expected 'theory NAME over SIGNATURE'");
    }
    check_name(l, 1);
    finish_block();
    if (ws_.find_theory(l.words[1].first)) {
      semantic_error(l, "duplicate theory '" + l.words[1].first + "'", 1);
    }
    theory_sig_ = ws_.find_signature(l.words[3].first);
    if (!theory_sig_) semantic_error(l, "unknown signature '" + l.words[3].first + "'", 3);
    block_ = Block::kTheory;
    name_ = l.words[1].first;
    header_ = span(l, 1);
  }

  void start_morphism(const Line& l) {
    if (l.words.size() != 6 || l.words[2].first != ":" || l.words[4].first != "->") {
      parse_error(l, "expected 'morphism NAME : SIG1 -> SIG2'");
    }
    check_name(l, 1);
    finish_block();
    if (ws_.find_morphism(l.words[1].first)) {
      semantic_error(l, "duplicate morphism '" + l.words[1].first + "'", 1);
    }
    morph_source_ = ws_.find_signature(l.words[3].first);
    if (!morph_source_) semantic_error(l, "unknown signature '" + l.words[3].first + "'", 3);
    morph_target_ = ws_.find_signature(l.words[5].first);
    if (!morph_target_) semantic_error(l, "unknown signature '" + l.words[5].first + "'", 5);
    block_ = Block::kMorphism;
    name_ = l.words[1].first;
    header_ = span(l, 1);
  }

  void start_diagram(const Line& l) {
    expect_words(l, 2, "diagram NAME");
    check_name(l, 1);
    finish_block();
    if (ws_.find_diagram(l.words[1].first)) {
      semantic_error(l, "duplicate diagram '" + l.words[1].first + "'", 1);
    }
    block_ = Block::kDiagram;
    diagram_.name = l.words[1].first;
    diagram_.span = span(l, 1);
  }

  void add_symbols(const Line& l) {
    require_block(l, Block::kSignature, "signature");
    if constexpr (!std::is_same_v<I, Prop>) {
      semantic_error(l, "'symbols' is only valid for propositional signatures");
    }
    for (std::size_t k = 1; k < l.words.size(); ++k) {
      check_name(l, k);
      if (prop::is_reserved(l.words[k].first)) {
        semantic_error(l, "'" + l.words[k].first + "' is reserved", k);
      }
      for (const auto& s : symbols_) {
        if (s.name == l.words[k].first) {
          semantic_error(l, "duplicate symbol '" + s.name + "'", k);
        }
      }
      symbols_.push_back(Symbol{l.words[k].first, 0});
    }
  }

  void add_op(const Line& l) {
    require_block(l, Block::kSignature, "signature");
    if constexpr (!std::is_same_v<I, Eq>) {
      semantic_error(l, "'op' is only valid for equational signatures");
    }
    if (l.words.size() != 4 || l.words[2].first != ":") parse_error(l, "expected 'op NAME : ARITY'");
    check_name(l, 1);
    const auto& a = l.words[3].first;
    if (a.empty() || a.size() > 3 ||
        !std::all_of(a.begin(), a.end(), [](char c) { return std::isdigit(static_cast<unsigned char>(c)); })) {
      parse_error(l, "arity must be a natural number", 3);
    }
    for (const auto& s : symbols_) {
      if (s.name == l.words[1].first) semantic_error(l, "duplicate symbol '" + s.name + "'", 1);
    }
    symbols_.push_back(Symbol{l.words[1].first, std::stoi(a)});
  }

  void add_vars(const Line& l) {
    require_block(l, Block::kTheory, "theory");
    if constexpr (!std::is_same_v<I, Eq>) {
      semantic_error(l, "'var' is only valid for equational theories");
    }
    for (std::size_t k = 1; k < l.words.size(); ++k) {
      check_name(l, k);
      if (theory_sig_->contains(l.words[k].first)) {
        semantic_error(l, "variable '" + l.words[k].first + "' clashes with an operation", k);
      }
      vars_.push_back(l.words[k].first);
    }
  }

  void add_axiom(const Line& l) {
    require_block(l, Block::kTheory, "theory");
    if (l.words.size() < 2) parse_error(l, "expected 'axiom S-EXPRESSION'");
    const int col = l.words[1].second;
    const SExpr e = parse_sexpr(std::string_view(l.text).substr(static_cast<std::size_t>(col - 1)),
                                SourceSpan{ws_.file, l.number, col, col});
    axioms_.push_back(I::parse(e, *theory_sig_, vars_));
  }

  void add_map(const Line& l) {
    require_block(l, Block::kMorphism, "morphism");
    if (l.words.size() != 4 || l.words[2].first != "->") parse_error(l, "expected 'map X -> Y'");
    const auto& from = l.words[1].first;
    const auto& to = l.words[3].first;
    if (!morph_source_->contains(from)) {
      semantic_error(l, "'" + from + "' is not in signature '" + morph_source_->name() + "'", 1);
    }
    if (!morph_target_->contains(to)) {
      semantic_error(l, "'" + to + "' is not in signature '" + morph_target_->name() + "'", 3);
    }
    if (map_.count(from)) semantic_error(l, "'" + from + "' is mapped twice", 1);
    const auto& a = (*morph_source_)[*morph_source_->find(from)];
    const auto& b = (*morph_target_)[*morph_target_->find(to)];
    if (a.arity != b.arity) {
      fail(ErrorKind::kArityMismatch,
           "arity mismatch: '" + from + "' has arity " + std::to_string(a.arity) + " but '" + to +
               "' has arity " + std::to_string(b.arity),
           span(l, 3));
    }
    map_.emplace(from, to);
  }

  void add_node(const Line& l) {
    require_block(l, Block::kDiagram, "diagram");
    if (l.words.size() != 4 || l.words[2].first != "=") parse_error(l, "expected 'node ID = PATH'");
    check_name(l, 1);
    for (const auto& n : diagram_.nodes) {
      if (n.id == l.words[1].first) semantic_error(l, "duplicate node '" + n.id + "'", 1);
    }
    diagram_.nodes.push_back(NodeDecl{l.words[1].first, l.words[3].first});
  }

  void add_edge(const Line& l) {
    require_block(l, Block::kDiagram, "diagram");
    if (l.words.size() != 8 || l.words[2].first != ":" || l.words[4].first != "->" ||
        l.words[6].first != "=") {
      parse_error(l, "expected 'edge ID : NODE1 -> NODE2 = PATH'");
    }
    check_name(l, 1);
    auto known = [&](const std::string& n) {
      for (const auto& d : diagram_.nodes) {
        if (d.id == n) return true;
      }
      return false;
    };
    if (!known(l.words[3].first)) semantic_error(l, "unknown node '" + l.words[3].first + "'", 3);
    if (!known(l.words[5].first)) semantic_error(l, "unknown node '" + l.words[5].first + "'", 5);
    for (const auto& e : diagram_.edges) {
      if (e.id == l.words[1].first) semantic_error(l, "duplicate edge '" + e.id + "'", 1);
    }
    diagram_.edges.push_back(
        EdgeDecl{l.words[1].first, l.words[3].first, l.words[5].first, l.words[7].first});
  }

  Workspace<I> ws_;
  Block block_ = Block::kNone;
  std::string name_;
  SourceSpan header_;
  std::vector<Symbol> symbols_;
  const Signature* theory_sig_ = nullptr;
  std::vector<std::string> vars_;
  std::vector<typename I::Sentence> axioms_;
  const Signature* morph_source_ = nullptr;
  const Signature* morph_target_ = nullptr;
  std::map<std::string, std::string> map_;
  DiagramDecl diagram_;
};

}  // namespace detail

// Parses one workspace file. The first non-blank line selects the institution.
inline AnyWorkspace parse_workspace(std::string_view text, const std::string& file = "<input>") {
  std::vector<detail::Line> lines;
  int number = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    auto nl = text.find('\n', pos);
    if (nl == std::string_view::npos) nl = text.size();
    lines.push_back(detail::split_line(text.substr(pos, nl - pos), ++number));
    pos = nl + 1;
  }
  std::size_t first = 0;
  while (first < lines.size() && lines[first].words.empty()) ++first;
  if (first == lines.size() || lines[first].words[0].first != "institution") {
    fail(ErrorKind::kParse, "file must start with 'institution prop|eq'",
         SourceSpan{file, first < lines.size() ? lines[first].number : 1, 1, 1});
  }
  const auto& head = lines[first];
  if (head.words.size() != 2) {
    fail(ErrorKind::kParse, "expected 'institution NAME'", SourceSpan{file, head.number, 1, 1});
  }
  const auto& inst = head.words[1].first;
  const SourceSpan inst_span{file, head.number, head.words[1].second,
                             head.words[1].second + static_cast<int>(inst.size())};
  if (inst == Prop::kName) return detail::WorkspaceParser<Prop>(file).parse(lines, first + 1);
  if (inst == Eq::kName) return detail::WorkspaceParser<Eq>(file).parse(lines, first + 1);
  fail(ErrorKind::kSemantic, "unknown institution '" + inst + "'", inst_span);
}

inline std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(ErrorKind::kParse, "cannot read '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline AnyWorkspace load_workspace(const std::string& path) {
  return parse_workspace(read_file(path), path);
}

inline std::string_view institution_name(const AnyWorkspace& ws) {
  return std::holds_alternative<Workspace<Prop>>(ws) ? Prop::kName : Eq::kName;
}

template <Institution I>
std::string print_signature(const Signature& sig) {
  std::string out = "signature " + sig.name() + "\n";
  if constexpr (std::is_same_v<I, Prop>) {
    out += "symbols";
    for (const auto& s : sig.symbols()) out += " " + s.name;
    out += "\n";
  } else {
    for (const auto& s : sig.symbols()) out += "op " + s.name + " : " + std::to_string(s.arity) + "\n";
  }
  return out;
}

template <Institution I>
std::string print_theory(const Theory<I>& t) {
  std::string out = "theory " + t.name() + " over " + t.signature().name() + "\n";
  if constexpr (std::is_same_v<I, Eq>) {
    std::set<std::string> vars;
    for (const auto& a : t.axioms()) vars.insert(a.vars().begin(), a.vars().end());
    if (!vars.empty()) {
      out += "var";
      for (const auto& v : vars) out += " " + v;
      out += "\n";
    }
  }
  for (const auto& a : t.axioms()) out += "axiom " + I::print(a) + "\n";
  return out;
}

inline std::string print_morphism(const SignatureMorphism& m) {
  std::string out = "morphism " + m.name() + " : " + m.source().name() + " -> " +
                    m.target().name() + "\n";
  for (const auto& [from, to] : m.as_map()) out += "map " + from + " -> " + to + "\n";
  return out;
}

inline std::string print_diagram(const DiagramDecl& d) {
  std::string out = "diagram " + d.name + "\n";
  for (const auto& n : d.nodes) out += "node " + n.id + " = " + n.path + "\n";
  for (const auto& e : d.edges) {
    out += "edge " + e.id + " : " + e.source + " -> " + e.target + " = " + e.path + "\n";
  }
  return out;
}

// Canonical text; parse(print(ws)) == ws.
template <Institution I>
std::string print_workspace(const Workspace<I>& ws) {
  std::string out = "institution " + std::string(I::kName) + "\n";
  for (const auto& s : ws.signatures) out += "\n" + print_signature<I>(s);
  for (const auto& t : ws.theories) out += "\n" + print_theory(t);
  for (const auto& m : ws.morphisms) out += "\n" + print_morphism(m);
  for (const auto& d : ws.diagrams) out += "\n" + print_diagram(d);
  return out;
}

inline std::string print_workspace(const AnyWorkspace& ws) {
  return std::visit([](const auto& w) { return print_workspace(w); }, ws);
}

namespace detail {

template <Institution I>
Workspace<I> load_same_institution(const std::filesystem::path& path, const SourceSpan& from) {
  auto any = load_workspace(path.string());
  if (auto* ws = std::get_if<Workspace<I>>(&any)) return std::move(*ws);
  fail(ErrorKind::kSemantic,
       "'" + path.string() + "' uses institution '" + std::string(institution_name(any)) +
           "', expected '" + std::string(I::kName) + "'",
       from);
}

}  // namespace detail

// Resolves node and edge files relative to the diagram's own file.
template <Institution I>
TheoryDiagram<I> resolve_diagram(const Workspace<I>& ws, const DiagramDecl& decl) {
  const auto base = std::filesystem::path(ws.file).parent_path();
  TheoryDiagram<I> d;
  d.name = decl.name;
  for (const auto& n : decl.nodes) {
    auto sub = detail::load_same_institution<I>(base / n.path, decl.span);
    if (sub.theories.size() != 1) {
      fail(ErrorKind::kSemantic,
           "node '" + n.id + "': '" + n.path + "' must declare exactly one theory", decl.span);
    }
    d.shape.nodes.push_back(n.id);
    d.theories.emplace(n.id, sub.theories.front());
  }
  for (const auto& e : decl.edges) {
    auto sub = detail::load_same_institution<I>(base / e.path, decl.span);
    if (sub.morphisms.size() != 1) {
      fail(ErrorKind::kSemantic,
           "edge '" + e.id + "': '" + e.path + "' must declare exactly one morphism", decl.span);
    }
    d.shape.edges.push_back(ShapeEdge{e.id, e.source, e.target});
    d.morphisms.emplace(e.id, sub.morphisms.front());
  }
  return d;
}

}  // namespace ifusion
