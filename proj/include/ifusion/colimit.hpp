#pragma once

#include <algorithm>
#include <cstddef>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include <boost/pending/disjoint_sets.hpp>

#include "ifusion/error.hpp"
#include "ifusion/institution.hpp"
#include "ifusion/signature.hpp"
#include "ifusion/theory.hpp"

namespace ifusion {

struct ShapeEdge {
  std::string id;
  std::string source;
  std::string target;

  friend bool operator==(const ShapeEdge&, const ShapeEdge&) = default;
};

// Indexing graph of a diagram. Parallel edges and cycles are allowed.
struct ShapeGraph {
  std::vector<std::string> nodes;
  std::vector<ShapeEdge> edges;

  bool has_node(const std::string& n) const {
    return std::find(nodes.begin(), nodes.end(), n) != nodes.end();
  }

  // Problems with the graph itself; empty when well formed.
  std::vector<std::string> problems() const {
    std::vector<std::string> out;
    std::set<std::string> seen;
    for (const auto& n : nodes) {
      if (!seen.insert(n).second) out.push_back("duplicate node '" + n + "'");
    }
    std::set<std::string> seen_edges;
    for (const auto& e : edges) {
      if (!seen_edges.insert(e.id).second) out.push_back("duplicate edge '" + e.id + "'");
      if (!has_node(e.source)) {
        out.push_back("edge '" + e.id + "': unknown source node '" + e.source + "'");
      }
      if (!has_node(e.target)) {
        out.push_back("edge '" + e.id + "': unknown target node '" + e.target + "'");
      }
    }
    return out;
  }

  friend bool operator==(const ShapeGraph&, const ShapeGraph&) = default;
};

struct SignatureDiagram {
  ShapeGraph shape;
  std::map<std::string, Signature> signatures;
  std::map<std::string, SignatureMorphism> morphisms;
};

// Theories at the nodes, signature morphisms on the edges. An edge is a
// theory morphism between its endpoint theories when validate_diagram says so.
template <Institution I>
struct TheoryDiagram {
  std::string name;
  ShapeGraph shape;
  std::map<std::string, Theory<I>> theories;
  std::map<std::string, SignatureMorphism> morphisms;

  TheoryMorphism<I> edge_morphism(const ShapeEdge& e) const {
    return TheoryMorphism<I>{morphisms.at(e.id), theories.at(e.source), theories.at(e.target)};
  }
};

// Legs from every node into one apex.
struct Cocone {
  Signature apex;
  std::map<std::string, SignatureMorphism> legs;
};

// Edges e : m -> n for which leg_m != S_e ; leg_n.
inline std::vector<std::string> non_commuting_edges(const SignatureDiagram& d,
                                                    const std::map<std::string, SignatureMorphism>& legs) {
  std::vector<std::string> out;
  for (const auto& e : d.shape.edges) {
    const auto& lm = legs.at(e.source);
    const auto& ln = legs.at(e.target);
    const auto& se = d.morphisms.at(e.id);
    for (std::size_t i = 0; i < se.source().size(); ++i) {
      if (lm.image_index(i) != ln.image_index(se.image_index(i))) {
        out.push_back(e.id);
        break;
      }
    }
  }
  return out;
}

inline bool commutes(const SignatureDiagram& d, const Cocone& c) {
  return non_commuting_edges(d, c.legs).empty();
}

template <Institution I>
SignatureDiagram base_diagram(const TheoryDiagram<I>& d) {
  SignatureDiagram out;
  out.shape = d.shape;
  for (const auto& [node, t] : d.theories) out.signatures.emplace(node, t.signature());
  out.morphisms = d.morphisms;
  return out;
}

// One apex symbol and the node symbols glued into it.
struct SymbolClass {
  Symbol symbol;
  std::vector<std::pair<std::string, std::string>> members;  // (node, symbol)
};

struct SignatureColimit {
  Signature apex;
  Cocone cocone;
  std::vector<SymbolClass> classes;  // in apex symbol order
};

// Disjoint union of all node symbols, quotiented by x ~ S_e(x) for every
// edge. Each class is named after its least member symbol; names shared by
// several classes are qualified as node.symbol.
inline SignatureColimit colimit_signature(const SignatureDiagram& d,
                                          const std::string& apex_name) {
  if (auto p = d.shape.problems(); !p.empty()) fail(ErrorKind::kInvalidDiagram, p.front());

  std::vector<std::size_t> offset;
  std::vector<std::pair<std::string, std::size_t>> slots;  // (node, symbol index)
  for (const auto& node : d.shape.nodes) {
    offset.push_back(slots.size());
    const auto& sig = d.signatures.at(node);
    for (std::size_t i = 0; i < sig.size(); ++i) slots.emplace_back(node, i);
  }
  auto node_pos = [&](const std::string& n) {
    return static_cast<std::size_t>(
        std::find(d.shape.nodes.begin(), d.shape.nodes.end(), n) - d.shape.nodes.begin());
  };

  boost::disjoint_sets_with_storage<> uf(slots.size());
  for (std::size_t k = 0; k < slots.size(); ++k) uf.make_set(k);
  for (const auto& e : d.shape.edges) {
    const auto& m = d.morphisms.at(e.id);
    if (!(m.source() == d.signatures.at(e.source)) ||
        !(m.target() == d.signatures.at(e.target))) {
      fail(ErrorKind::kInvalidDiagram,
           "edge '" + e.id + "' does not connect the signatures of its endpoints");
    }
    const auto from = offset[node_pos(e.source)];
    const auto to = offset[node_pos(e.target)];
    for (std::size_t i = 0; i < m.source().size(); ++i) {
      uf.union_set(from + i, to + m.image_index(i));
    }
  }

  // Group slots by representative, in first-occurrence order.
  std::map<std::size_t, std::size_t> class_of_rep;
  std::vector<std::vector<std::size_t>> groups;
  std::vector<std::size_t> slot_class(slots.size());
  for (std::size_t k = 0; k < slots.size(); ++k) {
    const auto rep = uf.find_set(k);
    auto [it, inserted] = class_of_rep.emplace(rep, groups.size());
    if (inserted) groups.emplace_back();
    groups[it->second].push_back(k);
    slot_class[k] = it->second;
  }

  struct Draft {
    std::string plain;
    std::string qualified;
    int arity;
    std::vector<std::pair<std::string, std::string>> members;
  };
  std::vector<Draft> drafts;
  std::map<std::string, int> plain_uses;
  for (const auto& g : groups) {
    Draft dr;
    std::optional<int> arity;
    for (auto k : g) {
      const auto& [node, i] = slots[k];
      const auto& sym = d.signatures.at(node)[i];
      if (arity && *arity != sym.arity) {
        fail(ErrorKind::kArityConflict, "symbols of arity " + std::to_string(*arity) +
                                            " and " + std::to_string(sym.arity) +
                                            " are identified ('" + node + "." + sym.name + "')");
      }
      arity = sym.arity;
      dr.members.emplace_back(node, sym.name);
    }
    std::sort(dr.members.begin(), dr.members.end(), [&](const auto& a, const auto& b) {
      if (a.second != b.second) return a.second < b.second;
      return node_pos(a.first) < node_pos(b.first);
    });
    dr.plain = dr.members.front().second;
    dr.qualified = dr.members.front().first + "." + dr.members.front().second;
    dr.arity = *arity;
    ++plain_uses[dr.plain];
    drafts.push_back(std::move(dr));
  }

  std::vector<std::string> names;
  std::vector<Symbol> symbols;
  for (const auto& dr : drafts) {
    names.push_back(plain_uses[dr.plain] > 1 ? dr.qualified : dr.plain);
    symbols.push_back(Symbol{names.back(), dr.arity});
  }
  SignatureColimit out;
  out.apex = Signature(apex_name, symbols);
  out.cocone.apex = out.apex;
  for (std::size_t n = 0; n < d.shape.nodes.size(); ++n) {
    const auto& node = d.shape.nodes[n];
    const auto& sig = d.signatures.at(node);
    std::map<std::string, std::string> map;
    for (std::size_t i = 0; i < sig.size(); ++i) {
      map.emplace(sig[i].name, names[slot_class[offset[n] + i]]);
    }
    out.cocone.legs.emplace(node, SignatureMorphism::make(sig, out.apex, map, node));
  }
  for (std::size_t c = 0; c < drafts.size(); ++c) {
    out.classes.push_back(SymbolClass{symbols[c], drafts[c].members});
  }
  std::sort(out.classes.begin(), out.classes.end(),
            [](const SymbolClass& a, const SymbolClass& b) { return a.symbol.name < b.symbol.name; });
  return out;
}

struct DiagramIssue {
  std::string where;
  std::string message;
  std::vector<std::string> offending;  // printed axioms
};

struct DiagramReport {
  std::vector<DiagramIssue> issues;

  bool ok() const { return issues.empty(); }

  std::string str() const {
    std::string out;
    for (const auto& i : issues) {
      out += i.where + ": " + i.message + "\n";
      for (const auto& a : i.offending) out += "  " + a + "\n";
    }
    return out;
  }
};

// Endpoint matching and the theory-morphism condition on every edge.
template <Institution I>
DiagramReport validate_diagram(const TheoryDiagram<I>& d, const Bounds& bounds) {
  DiagramReport report;
  for (const auto& p : d.shape.problems()) report.issues.push_back({"shape", p, {}});
  for (const auto& n : d.shape.nodes) {
    if (!d.theories.count(n)) report.issues.push_back({"node " + n, "no theory", {}});
  }
  if (!report.ok()) return report;
  for (const auto& e : d.shape.edges) {
    const std::string where = "edge " + e.id;
    auto it = d.morphisms.find(e.id);
    if (it == d.morphisms.end()) {
      report.issues.push_back({where, "no morphism", {}});
      continue;
    }
    const auto& sigma = it->second;
    const auto& src = d.theories.at(e.source);
    const auto& tgt = d.theories.at(e.target);
    if (!(sigma.source() == src.signature())) {
      report.issues.push_back({where, "source signature '" + sigma.source().name() +
                                          "' does not match node '" + e.source + "'", {}});
      continue;
    }
    if (!(sigma.target() == tgt.signature())) {
      report.issues.push_back({where, "target signature '" + sigma.target().name() +
                                          "' does not match node '" + e.target + "'", {}});
      continue;
    }
    const ModelSpace<I> space(tgt.signature(), bounds);
    DiagramIssue issue{where, "not a theory morphism: translated axioms not entailed by '" +
                                  tgt.name() + "'", {}};
    for (const auto& a : src.axioms()) {
      const auto image = I::translate(sigma, a);
      if (!entails(space, tgt, image)) {
        issue.offending.push_back(I::print(a) + " |-> " + I::print(image));
      }
    }
    if (!issue.offending.empty()) report.issues.push_back(std::move(issue));
  }
  return report;
}

template <Institution I>
struct ProvenanceEntry {
  typename I::Sentence axiom;
  std::vector<std::pair<std::string, typename I::Sentence>> sources;  // (node, axiom)
};

template <Institution I>
struct FusionResult {
  Theory<I> theory;
  SignatureColimit signature_colimit;
  std::map<std::string, TheoryMorphism<I>> theory_legs;
  std::vector<ProvenanceEntry<I>> provenance;  // in fused axiom order

  const Cocone& signature_cocone() const { return signature_colimit.cocone; }

  // Base projection of the theory cocone.
  Cocone base_cocone() const {
    Cocone c{theory.signature(), {}};
    for (const auto& [node, leg] : theory_legs) c.legs.emplace(node, leg.sigma);
    return c;
  }
};

// Colimit of a diagram of theories: colimit signature, then the union of the
// direct images of every node theory along its leg.
template <Institution I>
FusionResult<I> fuse(const TheoryDiagram<I>& d, const Bounds& bounds) {
  if (auto report = validate_diagram(d, bounds); !report.ok()) {
    fail(ErrorKind::kInvalidDiagram, "invalid diagram '" + d.name + "':\n" + report.str());
  }
  FusionResult<I> out;
  out.signature_colimit = colimit_signature(base_diagram(d), d.name);
  const auto& apex = out.signature_colimit.apex;

  std::map<typename I::Sentence, std::vector<std::pair<std::string, typename I::Sentence>>> prov;
  for (const auto& node : d.shape.nodes) {
    const auto& leg = out.signature_colimit.cocone.legs.at(node);
    for (const auto& a : d.theories.at(node).axioms()) {
      prov[I::translate(leg, a)].emplace_back(node, a);
    }
  }
  std::vector<typename I::Sentence> axioms;
  for (auto& [axiom, sources] : prov) {
    axioms.push_back(axiom);
    out.provenance.push_back(ProvenanceEntry<I>{axiom, std::move(sources)});
  }
  out.theory = Theory<I>(d.name, apex, std::move(axioms));

  const ModelSpace<I> space(apex, bounds);
  for (const auto& node : d.shape.nodes) {
    const auto& leg = out.signature_colimit.cocone.legs.at(node);
    const auto& t = d.theories.at(node);
    if (!is_theory_morphism(leg, t, out.theory, space)) {
      fail(ErrorKind::kSemantic, "fusion leg '" + node + "' is not a theory morphism");
    }
    out.theory_legs.emplace(node, TheoryMorphism<I>{leg, t, out.theory});
  }
  return out;
}

// A cocone of theory morphisms into some other theory.
template <Institution I>
struct TheoryCocone {
  Theory<I> apex;
  std::map<std::string, SignatureMorphism> legs;
};

// The unique u : fused -> competitor apex with leg_k ; u = competitor_k.
// Fails with kNoMediator when the competitor identifies differently than the
// colimit does, i.e. when it does not commute.
template <Institution I>
SignatureMorphism mediating_morphism(const FusionResult<I>& f, const TheoryCocone<I>& competitor,
                                     const Bounds& bounds) {
  const ModelSpace<I> space(competitor.apex.signature(), bounds);
  for (const auto& [node, leg] : f.theory_legs) {
    auto it = competitor.legs.find(node);
    if (it == competitor.legs.end()) {
      fail(ErrorKind::kSemantic, "competitor has no leg for node '" + node + "'");
    }
    if (!is_theory_morphism(it->second, leg.source, competitor.apex, space)) {
      fail(ErrorKind::kSemantic, "competitor leg '" + node + "' is not a theory morphism");
    }
  }
  std::map<std::string, std::string> u;
  for (const auto& cls : f.signature_colimit.classes) {
    std::optional<std::string> image;
    for (const auto& [node, sym] : cls.members) {
      const auto& target = competitor.legs.at(node).image(sym);
      if (image && *image != target) {
        fail(ErrorKind::kNoMediator, "no mediating morphism: class '" + cls.symbol.name +
                                         "' goes to both '" + *image + "' and '" + target + "'");
      }
      image = target;
    }
    u.emplace(cls.symbol.name, *image);
  }
  auto mediator =
      SignatureMorphism::make(f.theory.signature(), competitor.apex.signature(), u, "u");
  if (!is_theory_morphism(mediator, f.theory, competitor.apex, space)) {
    fail(ErrorKind::kSemantic, "mediating morphism is not a theory morphism");
  }
  return mediator;
}

}  // namespace ifusion
