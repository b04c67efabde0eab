#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <map>
#include <sstream>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "ifusion/error.hpp"
#include "ifusion/institution.hpp"

namespace ifusion {

// A formal context: instances, types and the incidence relation, stored as
// one column per type (the set of instances having it).
class Classification {
 public:
  Classification() = default;
  Classification(std::vector<std::string> instances, std::vector<std::string> types,
                 std::vector<Extent> columns)
      : instances_(std::move(instances)), types_(std::move(types)), columns_(std::move(columns)) {
    if (columns_.size() != types_.size()) {
      fail(ErrorKind::kSemantic, "classification needs one column per type");
    }
    for (const auto& c : columns_) {
      if (c.size() != instances_.size()) {
        fail(ErrorKind::kSemantic, "classification column has the wrong length");
      }
    }
  }

  // rows[i][t] == incidence of instance i and type t.
  static Classification from_rows(std::vector<std::string> instances,
                                  std::vector<std::string> types,
                                  const std::vector<std::vector<bool>>& rows) {
    std::vector<Extent> cols(types.size(), Extent(instances.size()));
    for (std::size_t i = 0; i < rows.size(); ++i) {
      for (std::size_t t = 0; t < rows[i].size() && t < types.size(); ++t) {
        if (rows[i][t]) cols[t].set(i);
      }
    }
    return Classification(std::move(instances), std::move(types), std::move(cols));
  }

  const std::vector<std::string>& instances() const { return instances_; }
  const std::vector<std::string>& types() const { return types_; }
  const std::vector<Extent>& columns() const { return columns_; }
  std::size_t instance_count() const { return instances_.size(); }
  std::size_t type_count() const { return types_.size(); }

  bool holds(std::size_t instance, std::size_t type) const { return columns_[type].test(instance); }

  Extent all_instances() const {
    Extent e(instances_.size());
    e.set();
    return e;
  }

  // Types shared by every instance in `instances`.
  Extent intent_of(const Extent& instances) const {
    Extent out(types_.size());
    for (std::size_t t = 0; t < columns_.size(); ++t) {
      if (instances.is_subset_of(columns_[t])) out.set(t);
    }
    return out;
  }

  // Instances having every type in `types`.
  Extent extent_of(const Extent& types) const {
    Extent out = all_instances();
    for (auto t = types.find_first(); t != Extent::npos; t = types.find_next(t)) {
      out &= columns_[t];
    }
    return out;
  }

  Extent close(const Extent& instances) const { return extent_of(intent_of(instances)); }

  friend bool operator==(const Classification&, const Classification&) = default;

 private:
  std::vector<std::string> instances_;
  std::vector<std::string> types_;
  std::vector<Extent> columns_;
};

// Contravariant pair between classifications src and tgt.
struct Infomorphism {
  std::vector<std::size_t> instance_map;  // tgt instance -> src instance
  std::vector<std::size_t> type_map;      // src type -> tgt type
};

struct InfomorphismReport {
  std::uint64_t checked = 0;
  std::vector<std::pair<std::size_t, std::size_t>> violations;  // (tgt instance, src type)

  bool ok() const { return violations.empty(); }
};

// instance_map(i2) |=src t1  iff  i2 |=tgt type_map(t1), for all pairs.
inline InfomorphismReport check_infomorphism(const Infomorphism& f, const Classification& src,
                                             const Classification& tgt) {
  if (f.instance_map.size() != tgt.instance_count() || f.type_map.size() != src.type_count()) {
    fail(ErrorKind::kSemantic, "infomorphism maps do not fit the classifications");
  }
  InfomorphismReport r;
  for (std::size_t i2 = 0; i2 < tgt.instance_count(); ++i2) {
    for (std::size_t t1 = 0; t1 < src.type_count(); ++t1) {
      ++r.checked;
      if (src.holds(f.instance_map[i2], t1) != tgt.holds(i2, f.type_map[t1])) {
        r.violations.emplace_back(i2, t1);
      }
    }
  }
  return r;
}

struct FormalConcept {
  Extent extent;  // over instances
  Extent intent;  // over types

  friend bool operator==(const FormalConcept&, const FormalConcept&) = default;
};

class ConceptLattice {
 public:
  ConceptLattice() = default;
  ConceptLattice(const Classification& c, std::vector<Extent> extents) {
    std::sort(extents.begin(), extents.end(), lex_less);
    for (auto& e : extents) {
      index_.emplace(to_bitstring(e), concepts_.size());
      concepts_.push_back(FormalConcept{e, c.intent_of(e)});
    }
    for (std::size_t i = 0; i < c.instance_count(); ++i) {
      Extent single(c.instance_count());
      single.set(i);
      object_concept_.push_back(index_of(c.close(single)));
    }
    for (std::size_t t = 0; t < c.type_count(); ++t) {
      attribute_concept_.push_back(index_of(c.columns()[t]));
    }
    top_ = index_of(c.all_instances());
    bottom_ = index_of(c.close(Extent(c.instance_count())));
    build_covers();
  }

  const std::vector<FormalConcept>& concepts() const { return concepts_; }
  std::size_t size() const { return concepts_.size(); }
  const FormalConcept& operator[](std::size_t i) const { return concepts_[i]; }
  std::size_t top() const { return top_; }
  std::size_t bottom() const { return bottom_; }
  const std::vector<std::size_t>& object_concept() const { return object_concept_; }
  const std::vector<std::size_t>& attribute_concept() const { return attribute_concept_; }
  const std::vector<std::vector<std::size_t>>& upper_covers() const { return upper_covers_; }
  const std::vector<int>& levels() const { return levels_; }

  std::size_t index_of(const Extent& extent) const {
    auto it = index_.find(to_bitstring(extent));
    if (it == index_.end()) {
      fail(ErrorKind::kSemantic, "no concept with extent " + to_bitstring(extent));
    }
    return it->second;
  }
  bool contains(const Extent& extent) const { return index_.count(to_bitstring(extent)) > 0; }

  bool leq(std::size_t a, std::size_t b) const {
    return concepts_[a].extent.is_subset_of(concepts_[b].extent);
  }

  std::size_t meet(std::size_t a, std::size_t b) const {
    return index_of(concepts_[a].extent & concepts_[b].extent);
  }

  // Least concept above both: its intent is the intersection of intents.
  std::size_t join(std::size_t a, std::size_t b) const {
    const Extent shared = concepts_[a].intent & concepts_[b].intent;
    for (std::size_t k = 0; k < concepts_.size(); ++k) {
      if (concepts_[k].intent == shared) return k;
    }
    fail(ErrorKind::kSemantic, "lattice is missing a join");
  }

 private:
  void build_covers() {
    const std::size_t n = concepts_.size();
    std::vector<std::size_t> by_size(n);
    for (std::size_t i = 0; i < n; ++i) by_size[i] = i;
    std::stable_sort(by_size.begin(), by_size.end(), [&](std::size_t a, std::size_t b) {
      return concepts_[a].extent.count() < concepts_[b].extent.count();
    });
    upper_covers_.assign(n, {});
    for (std::size_t i = 0; i < n; ++i) {
      const auto& ei = concepts_[i].extent;
      std::vector<std::size_t> covers;
      for (auto j : by_size) {
        const auto& ej = concepts_[j].extent;
        if (j == i || !ei.is_proper_subset_of(ej)) continue;
        bool minimal = true;
        for (auto k : covers) {
          if (concepts_[k].extent.is_proper_subset_of(ej)) {
            minimal = false;
            break;
          }
        }
        if (minimal) covers.push_back(j);
      }
      std::sort(covers.begin(), covers.end());
      upper_covers_[i] = std::move(covers);
    }
    levels_.assign(n, 0);
    for (auto i : by_size) {
      for (auto j : upper_covers_[i]) levels_[j] = std::max(levels_[j], levels_[i] + 1);
    }
  }

  std::vector<FormalConcept> concepts_;
  std::map<std::string, std::size_t> index_;
  std::vector<std::size_t> object_concept_;
  std::vector<std::size_t> attribute_concept_;
  std::vector<std::vector<std::size_t>> upper_covers_;
  std::vector<int> levels_;
  std::size_t top_ = 0;
  std::size_t bottom_ = 0;
};

// All closed extents, by NextClosure in lectic order over instances.
inline std::vector<Extent> closed_extents(const Classification& c) {
  const std::size_t n = c.instance_count();
  std::vector<Extent> out;
  Extent a = c.close(Extent(n));
  out.push_back(a);
  for (;;) {
    bool advanced = false;
    for (std::size_t i = n; i-- > 0;) {
      if (a.test(i)) {
        a.reset(i);
        continue;
      }
      Extent seed = a;
      seed.set(i);
      Extent b = c.close(seed);
      // Canonicity: b adds nothing below i.
      bool canonical = true;
      for (std::size_t k = 0; k < i; ++k) {
        if (b.test(k) && !a.test(k)) {
          canonical = false;
          break;
        }
      }
      if (canonical) {
        a = std::move(b);
        advanced = true;
        break;
      }
    }
    if (!advanced) break;
    out.push_back(a);
  }
  return out;
}

inline ConceptLattice concept_lattice(const Classification& c,
                                      std::uint64_t max_cells = std::uint64_t{1} << 28) {
  if (static_cast<std::uint64_t>(c.instance_count()) * c.type_count() > max_cells) {
    fail(ErrorKind::kResourceLimit, "classification too large for concept enumeration");
  }
  return ConceptLattice(c, closed_extents(c));
}

struct RoundTripReport {
  std::vector<std::pair<std::size_t, std::size_t>> mismatches;  // (instance, type)
  bool ok() const { return mismatches.empty(); }
};

// Rebuilds the incidence from the generator maps: i |= t iff the object
// concept of i lies below the attribute concept of t.
inline Classification classification_of_lattice(const ConceptLattice& l,
                                                const Classification& labels) {
  std::vector<Extent> cols(labels.type_count(), Extent(labels.instance_count()));
  for (std::size_t t = 0; t < labels.type_count(); ++t) {
    for (std::size_t i = 0; i < labels.instance_count(); ++i) {
      if (l.leq(l.object_concept()[i], l.attribute_concept()[t])) cols[t].set(i);
    }
  }
  return Classification(labels.instances(), labels.types(), std::move(cols));
}

inline RoundTripReport round_trip_check(const Classification& c) {
  const auto lattice = concept_lattice(c);
  const auto rebuilt = classification_of_lattice(lattice, c);
  RoundTripReport r;
  for (std::size_t t = 0; t < c.type_count(); ++t) {
    for (std::size_t i = 0; i < c.instance_count(); ++i) {
      if (c.holds(i, t) != rebuilt.holds(i, t)) r.mismatches.emplace_back(i, t);
    }
  }
  return r;
}

// An irredundant set of intent types whose common instances are exactly the
// concept's extent. Shorter labels are tried first.
inline std::vector<std::size_t> minimal_generators(const Classification& c,
                                                   const FormalConcept& fc) {
  std::vector<std::size_t> order;
  for (auto t = fc.intent.find_first(); t != Extent::npos; t = fc.intent.find_next(t)) {
    order.push_back(t);
  }
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    const auto& la = c.types()[a];
    const auto& lb = c.types()[b];
    if (la.size() != lb.size()) return la.size() < lb.size();
    return la < lb;
  });
  std::vector<std::size_t> gens;
  Extent cur = c.all_instances();
  for (auto t : order) {
    if (cur == fc.extent) break;
    Extent next = cur & c.columns()[t];
    if (next != cur) {
      gens.push_back(t);
      cur = std::move(next);
    }
  }
  for (std::size_t k = gens.size(); k-- > 0;) {
    Extent without = c.all_instances();
    for (std::size_t j = 0; j < gens.size(); ++j) {
      if (j != k) without &= c.columns()[gens[j]];
    }
    if (without == fc.extent) gens.erase(gens.begin() + static_cast<std::ptrdiff_t>(k));
  }
  return gens;
}

namespace detail {

inline std::string dot_escape(std::string_view s) {
  std::string out;
  for (char ch : s) {
    if (ch == '"' || ch == '\\') out += '\\';
    out += ch;
  }
  return out;
}

}  // namespace detail

// Hasse diagram, bottom to top. Nodes are named by extent bitstring.
inline std::string to_dot(const ConceptLattice& l, const Classification& c,
                          std::string_view name = "lattice") {
  std::ostringstream os;
  os << "digraph \"" << detail::dot_escape(name) << "\" {\n";
  os << "  rankdir=BT;\n";
  os << "  node [shape=box];\n";
  for (const auto& fc : l.concepts()) {
    std::string gens;
    for (auto t : minimal_generators(c, fc)) {
      if (!gens.empty()) gens += ", ";
      gens += c.types()[t];
    }
    const auto bits = to_bitstring(fc.extent);
    os << "  \"" << bits << "\" [label=\"" << bits << "\\n{" << detail::dot_escape(gens)
       << "}\"];\n";
  }
  for (std::size_t i = 0; i < l.size(); ++i) {
    for (auto j : l.upper_covers()[i]) {
      os << "  \"" << to_bitstring(l[i].extent) << "\" -> \"" << to_bitstring(l[j].extent)
         << "\";\n";
    }
  }
  int max_level = 0;
  for (int v : l.levels()) max_level = std::max(max_level, v);
  for (int level = 0; level <= max_level; ++level) {
    os << "  { rank=same;";
    for (std::size_t i = 0; i < l.size(); ++i) {
      if (l.levels()[i] == level) os << " \"" << to_bitstring(l[i].extent) << "\";";
    }
    os << " }\n";
  }
  os << "}\n";
  return os.str();
}

namespace detail {

inline std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

inline std::vector<std::string> split_csv_line(std::string_view line) {
  std::vector<std::string> out;
  std::size_t start = 0;
  for (;;) {
    const auto comma = line.find(',', start);
    out.push_back(trim(line.substr(start, comma == std::string_view::npos ? line.npos
                                                                          : comma - start)));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return out;
}

}  // namespace detail

// Cross table: first row holds type labels (after an unused corner cell),
// first column instance labels, cells 0 or 1.
inline Classification parse_context_csv(std::string_view text, const std::string& file = "<csv>") {
  std::vector<std::string> types;
  std::vector<std::string> instances;
  std::vector<std::vector<bool>> rows;
  int line_no = 0;
  bool header = true;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    auto nl = text.find('\n', pos);
    if (nl == std::string_view::npos) nl = text.size();
    const auto line = text.substr(pos, nl - pos);
    pos = nl + 1;
    ++line_no;
    if (detail::trim(line).empty()) {
      if (nl == text.size()) break;
      continue;
    }
    auto cells = detail::split_csv_line(line);
    const SourceSpan span{file, line_no, 1, static_cast<int>(line.size()) + 1};
    if (header) {
      types.assign(cells.begin() + 1, cells.end());
      header = false;
      continue;
    }
    if (cells.size() != types.size() + 1) {
      fail(ErrorKind::kParse,
           "expected " + std::to_string(types.size() + 1) + " cells, got " +
               std::to_string(cells.size()),
           span);
    }
    instances.push_back(cells[0]);
    std::vector<bool> row;
    for (std::size_t k = 1; k < cells.size(); ++k) {
      if (cells[k] != "0" && cells[k] != "1") {
        fail(ErrorKind::kParse, "cell must be 0 or 1, got '" + cells[k] + "'", span);
      }
      row.push_back(cells[k] == "1");
    }
    rows.push_back(std::move(row));
    if (nl == text.size()) break;
  }
  if (header) fail(ErrorKind::kParse, "empty context", SourceSpan{file, 1, 1, 1});
  return Classification::from_rows(std::move(instances), std::move(types), rows);
}

inline std::string print_context_csv(const Classification& c) {
  std::string out;
  for (const auto& t : c.types()) out += "," + t;
  out += "\n";
  for (std::size_t i = 0; i < c.instance_count(); ++i) {
    out += c.instances()[i];
    for (std::size_t t = 0; t < c.type_count(); ++t) out += c.holds(i, t) ? ",1" : ",0";
    out += "\n";
  }
  return out;
}

}  // namespace ifusion
