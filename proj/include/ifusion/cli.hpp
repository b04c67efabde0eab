#pragma once

#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <variant>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "ifusion/colimit.hpp"
#include "ifusion/error.hpp"
#include "ifusion/fca.hpp"
#include "ifusion/theory.hpp"
#include "ifusion/truth.hpp"
#include "ifusion/workspace.hpp"

namespace ifusion::cli {

// Exit codes: 0 success or yes, 1 no, 2 parse error, 3 semantic error,
// 4 resource limit.
inline constexpr int kOk = 0;
inline constexpr int kNegative = 1;
inline constexpr int kParseError = 2;

struct Settings {
  std::string config;
  int max_atoms = -1;
  int max_carrier = -1;
  int universe_depth = -1;

  // Config file first, then flag overrides.
  Bounds bounds() const {
    Bounds b;
    if (!config.empty()) {
      nlohmann::json j;
      try {
        j = nlohmann::json::parse(read_file(config));
      } catch (const nlohmann::json::exception& e) {
        fail(ErrorKind::kParse, config + ": " + e.what());
      }
      b.max_atoms = j.value("max_atoms", b.max_atoms);
      b.max_carrier = j.value("max_carrier", b.max_carrier);
      b.universe_depth = j.value("universe_depth", b.universe_depth);
    }
    if (max_atoms >= 0) b.max_atoms = max_atoms;
    if (max_carrier >= 0) b.max_carrier = max_carrier;
    if (universe_depth >= 0) b.universe_depth = universe_depth;
    if (b.max_carrier < 1) fail(ErrorKind::kSemantic, "max_carrier must be at least 1");
    return b;
  }
};

namespace detail {

inline void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) fail(ErrorKind::kSemantic, "cannot write '" + path + "'");
  out << text;
}

inline void collect_atoms(const SExpr& e, std::set<std::string>& out, bool head = false) {
  if (e.is_atom()) {
    if (!head) out.insert(e.atom);
    return;
  }
  for (std::size_t k = 0; k < e.items.size(); ++k) collect_atoms(e.items[k], out, k == 0);
}

// Command-line sentences: for equations, every name that is not an
// operation of the signature is a variable.
template <Institution I>
typename I::Sentence parse_sentence(const std::string& text, const Signature& sig) {
  const SExpr e = parse_sexpr(text, SourceSpan{"<argument>", 1, 1, 1});
  std::vector<std::string> vars;
  if constexpr (std::is_same_v<I, Eq>) {
    std::set<std::string> atoms;
    collect_atoms(e, atoms);
    for (const auto& a : atoms) {
      if (!sig.contains(a)) vars.push_back(a);
    }
  }
  return I::parse(e, sig, vars);
}

template <Institution I>
int entails(const Workspace<I>& ws, const std::string& theory, const std::string& formula,
            const Bounds& bounds, std::ostream& out) {
  const auto& t = ws.theory(theory);
  const auto s = parse_sentence<I>(formula, t.signature());
  const ModelSpace<I> space(t.signature(), bounds);
  if (auto m = countermodel(space, t, s)) {
    out << "not entailed\n";
    out << "countermodel: " << I::print_model(t.signature(), *m) << "\n";
    return kNegative;
  }
  out << "entailed\n";
  return kOk;
}

template <Institution I>
int close(const Workspace<I>& ws, const std::string& theory, const Bounds& bounds,
          std::ostream& out) {
  const auto& t = ws.theory(theory);
  const auto extras = ws.axioms_over(t.signature());
  const TheoryContext<I> ctx(t.signature(), bounds, extras);
  const auto closure = closure_in_universe(ctx, t);
  out << "# closure of " << t.name() << " in universe " << ctx.universe().generator() << " ("
      << closure.size() << " of " << ctx.universe().size() << " sentences)\n";
  for (const auto& s : closure) out << I::print(s) << "\n";
  return kOk;
}

template <Institution I>
int satcond(const Workspace<I>& ws, const std::string& morphism, const Bounds& bounds,
            std::ostream& out) {
  const auto& sigma = ws.morphism(morphism);
  const auto extras = ws.axioms_over(sigma.source());
  const auto universe =
      SentenceUniverse<I>::generate(sigma.source(), bounds.universe_depth, extras);
  const auto report = check_satisfaction_condition<I>(
      sigma, bounds, std::span<const typename I::Sentence>(universe.sentences()));
  out << "morphism " << sigma.name() << " : " << sigma.source().name() << " -> "
      << sigma.target().name() << "\n";
  out << "sentences: " << universe.size() << " (" << universe.generator() << ")\n";
  out << "checked: " << report.checked << "\n";
  out << report.violations.size() << " violations\n";
  std::size_t shown = 0;
  for (const auto& [m, s] : report.violations) {
    if (++shown > 10) break;
    out << "  " << I::print_model(sigma.target(), m) << " : " << I::print(s) << "\n";
  }
  return report.ok() ? kOk : kNegative;
}

template <Institution I>
int lattice(const Workspace<I>& ws, const std::string& target, const std::string& dot_out,
            const Bounds& bounds, std::ostream& out) {
  const Signature* sig = ws.find_signature(target);
  if (!sig) {
    if (const auto* t = ws.find_theory(target)) sig = &t->signature();
  }
  if (!sig) fail(ErrorKind::kSemantic, "no signature or theory named '" + target + "'");
  const auto extras = ws.axioms_over(*sig);
  const TheoryContext<I> ctx(*sig, bounds, extras);
  const auto cls = classification_of(ctx);
  const auto lat = concept_lattice(cls);
  const auto dot = to_dot(lat, cls, sig->name());
  if (dot_out.empty()) {
    out << dot;
  } else {
    write_file(dot_out, dot);
    out << lat.size() << " closed theories over " << sig->name() << " (" << ctx.space().size()
        << " models, universe " << ctx.universe().generator() << ", " << ctx.universe().size()
        << " sentences)\n";
  }
  return kOk;
}

inline std::string braces(const Extent& bits, const std::vector<std::string>& labels) {
  std::string out = "{";
  bool first = true;
  for (auto i = bits.find_first(); i != Extent::npos; i = bits.find_next(i)) {
    if (!first) out += ", ";
    out += labels[i];
    first = false;
  }
  return out + "}";
}

inline int fca(const std::string& csv, const std::string& dot_out, std::ostream& out) {
  const auto cls = parse_context_csv(read_file(csv), csv);
  const auto lat = concept_lattice(cls);
  out << lat.size() << " concepts\n";
  for (const auto& c : lat.concepts()) {
    out << to_bitstring(c.extent) << " " << braces(c.extent, cls.instances()) << " | "
        << braces(c.intent, cls.types()) << "\n";
  }
  const auto dot = to_dot(lat, cls, std::filesystem::path(csv).stem().string());
  if (!dot_out.empty()) write_file(dot_out, dot);
  return kOk;
}

// Node signatures keep their names unless two different signatures share one.
template <Institution I>
std::string print_cocone(const FusionResult<I>& f, const std::vector<std::string>& nodes) {
  const auto& apex = f.theory.signature();
  std::map<std::string, std::string> sig_name;  // node -> printed signature name
  std::map<std::string, const Signature*> used{{apex.name(), &apex}};
  std::string sigs;
  for (const auto& node : nodes) {
    const auto& sig = f.theory_legs.at(node).sigma.source();
    std::string name = sig.name();
    auto it = used.find(name);
    if (it != used.end() && !(*it->second == sig)) name = node + "_" + sig.name();
    if (!used.count(name)) {
      used.emplace(name, &sig);
      sigs += "\n" + print_signature<I>(Signature(name, sig.symbols()));
    }
    sig_name[node] = name;
  }
  std::string out = "institution " + std::string(I::kName) + "\n";
  out += sigs;
  out += "\n" + print_signature<I>(apex);
  for (const auto& node : nodes) {
    const auto& leg = f.theory_legs.at(node).sigma;
    out += "\nmorphism " + node + " : " + sig_name[node] + " -> " + apex.name() + "\n";
    for (const auto& [from, to] : leg.as_map()) out += "map " + from + " -> " + to + "\n";
  }
  return out;
}

template <Institution I>
std::string print_provenance(const FusionResult<I>& f) {
  std::string out;
  for (const auto& p : f.provenance) {
    out += "axiom " + I::print(p.axiom) + "\n";
    for (const auto& [node, src] : p.sources) out += "  from " + node + " " + I::print(src) + "\n";
  }
  return out;
}

template <Institution I>
int merge(const Workspace<I>& ws, const std::string& diagram, const std::string& stem,
          const Bounds& bounds, std::ostream& out, std::ostream& err) {
  const DiagramDecl* decl = diagram.empty() ? nullptr : ws.find_diagram(diagram);
  if (!decl) {
    if (ws.diagrams.size() != 1 || !diagram.empty()) {
      fail(ErrorKind::kSemantic, diagram.empty() ? "file must declare exactly one diagram"
                                                 : "no diagram named '" + diagram + "'");
    }
    decl = &ws.diagrams.front();
  }
  const auto d = resolve_diagram(ws, *decl);
  const auto report = validate_diagram(d, bounds);
  if (!report.ok()) {
    err << "invalid diagram '" << d.name << "':\n" << report.str();
    return 3;
  }
  const auto f = fuse(d, bounds);
  Workspace<I> fused;
  fused.signatures.push_back(f.theory.signature());
  fused.theories.push_back(f.theory);
  write_file(stem + ".thy", print_workspace(fused));
  write_file(stem + ".cocone", print_cocone(f, d.shape.nodes));
  write_file(stem + ".prov", print_provenance(f));
  out << "fused " << d.shape.nodes.size() << " theories over " << d.shape.edges.size()
      << " edges: " << f.theory.signature().size() << " symbols, " << f.theory.axioms().size()
      << " axioms\n";
  return kOk;
}

template <Institution I>
int check(const Workspace<I>& ws, const Bounds& bounds, std::ostream& out, std::ostream& err) {
  out << "institution " << I::kName << ": " << ws.signatures.size() << " signatures, "
      << ws.theories.size() << " theories, " << ws.morphisms.size() << " morphisms, "
      << ws.diagrams.size() << " diagrams\n";
  int rc = kOk;
  for (const auto& decl : ws.diagrams) {
    const auto report = validate_diagram(resolve_diagram(ws, decl), bounds);
    if (report.ok()) {
      out << "diagram " << decl.name << ": ok\n";
    } else {
      err << "diagram " << decl.name << ": invalid\n" << report.str();
      rc = 3;
    }
  }
  return rc;
}

}  // namespace detail

// Runs one command; `args` excludes the program name.
inline int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"ifuse: theory fusion and concept lattices over finite institutions", "ifuse"};
  app.require_subcommand(1);
  app.fallthrough();
  Settings settings;
  app.add_option("--config", settings.config, "JSON config file (max_atoms, max_carrier, universe_depth)");
  app.add_option("--max-atoms", settings.max_atoms, "Largest propositional signature");
  app.add_option("--max-carrier", settings.max_carrier, "Largest algebra carrier");
  app.add_option("--universe-depth", settings.universe_depth, "Depth of generated sentence universes");

  std::string file, name, formula, dot_out, stem;
  auto* c_check = app.add_subcommand("check", "Parse a file and validate its diagrams");
  c_check->add_option("file", file)->required();
  auto* c_print = app.add_subcommand("print", "Print a file in canonical form");
  c_print->add_option("file", file)->required();
  auto* c_entails = app.add_subcommand("entails", "Decide whether a theory entails a sentence");
  c_entails->add_option("file", file)->required();
  c_entails->add_option("theory", name)->required();
  c_entails->add_option("sentence", formula)->required();
  auto* c_close = app.add_subcommand("close", "List the closure of a theory within the universe");
  c_close->add_option("file", file)->required();
  c_close->add_option("theory", name)->required();
  auto* c_satcond = app.add_subcommand("satcond", "Check the satisfaction condition for a morphism");
  c_satcond->add_option("file", file)->required();
  c_satcond->add_option("morphism", name)->required();
  auto* c_lattice = app.add_subcommand("lattice", "Lattice of closed theories as DOT");
  c_lattice->add_option("file", file)->required();
  c_lattice->add_option("target", name)->required();
  c_lattice->add_option("-o,--output", dot_out, "DOT output path");
  auto* c_fca = app.add_subcommand("fca", "Concept lattice of a CSV cross table");
  c_fca->add_option("csv", file)->required();
  c_fca->add_option("-o,--output", dot_out, "DOT output path");
  auto* c_merge = app.add_subcommand("merge", "Fuse a diagram of theories");
  c_merge->add_option("diagram", file)->required();
  c_merge->add_option("out", stem, "Output stem: writes STEM.thy, STEM.cocone, STEM.prov")->required();
  c_merge->add_option("--name", name, "Diagram name when the file declares several");

  std::vector<const char*> argv{"ifuse"};
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e, out, err);
    return rc == 0 ? kOk : kParseError;
  }

  try {
    const Bounds bounds = settings.bounds();
    if (c_fca->parsed()) return detail::fca(file, dot_out, out);
    const AnyWorkspace ws = load_workspace(file);
    return std::visit(
        [&](const auto& w) -> int {
          if (c_check->parsed()) return detail::check(w, bounds, out, err);
          if (c_print->parsed()) {
            out << print_workspace(w);
            return kOk;
          }
          if (c_entails->parsed()) return detail::entails(w, name, formula, bounds, out);
          if (c_close->parsed()) return detail::close(w, name, bounds, out);
          if (c_satcond->parsed()) return detail::satcond(w, name, bounds, out);
          if (c_lattice->parsed()) return detail::lattice(w, name, dot_out, bounds, out);
          return detail::merge(w, name, stem, bounds, out, err);
        },
        ws);
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return e.exit_code();
  }
}

}  // namespace ifusion::cli
