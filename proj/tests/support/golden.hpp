#pragma once

// Shipped CLI invocations and their recorded transcripts. Paths in `args`
// are relative to the source tree; "@OUT@" expands to a scratch directory.

#include <filesystem>
#include <fstream>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "ifusion/cli.hpp"

namespace golden {

struct Case {
  std::string name;
  std::vector<std::string> args;
  std::vector<std::string> outputs;  // files under @OUT@ to include
};

// For test names: GoogleTest would otherwise dump the struct's bytes.
inline void PrintTo(const Case& c, std::ostream* os) { *os << c.name; }

inline const std::vector<Case>& cases() {
  static const std::vector<Case> all = {
      {"check_span", {"check", "corpus/prop/span.dia"}, {}},
      {"check_invalid", {"check", "corpus/prop/invalid.dia"}, {}},
      {"check_arity", {"check", "corpus/eq/arity.dia"}, {}},
      {"check_broken", {"check", "corpus/prop/broken.thy"}, {}},
      {"print_kb", {"print", "corpus/prop/kb.thy"}, {}},
      {"print_sigma", {"print", "corpus/prop/sigma.mor"}, {}},
      {"print_xor", {"print", "corpus/eq/xor.thy"}, {}},
      {"print_span", {"print", "corpus/prop/span.dia"}, {}},
      {"entails_kb", {"entails", "corpus/prop/kb.thy", "KB", "q"}, {}},
      {"entails_pos", {"entails", "corpus/prop/kb.thy", "Pos", "q"}, {}},
      {"entails_both", {"entails", "corpus/prop/kb.thy", "Both", "(iff p q)"}, {}},
      {"entails_xor", {"entails", "corpus/eq/xor.thy", "Xorish", "(= (f (f x x) y) (f y (f z z)))"}, {}},
      {"entails_comm", {"entails", "corpus/eq/comm.thy", "Comm", "(= (f x x) x)"}, {}},
      {"entails_undeclared", {"entails", "corpus/prop/kb.thy", "KB", "r"}, {}},
      {"close_pos", {"close", "corpus/prop/kb.thy", "Pos", "--universe-depth", "1"}, {}},
      {"satcond_sigma", {"satcond", "corpus/prop/sigma.mor", "sigma"}, {}},
      {"satcond_collapse", {"satcond", "corpus/prop/sigma.mor", "collapse"}, {}},
      {"satcond_rename", {"satcond", "corpus/eq/rename.mor", "rename", "--config", "corpus/eq/small.json"}, {}},
      {"lattice_pq", {"lattice", "corpus/prop/kb.thy", "PQ", "-o", "@OUT@/pq.dot"}, {"pq.dot"}},
      {"lattice_limit", {"lattice", "corpus/prop/sigma.mor", "ABC", "--max-atoms", "2"}, {}},
      {"fca_animals", {"fca", "corpus/fca/animals.csv", "-o", "@OUT@/animals.dot"}, {"animals.dot"}},
      {"fca_planets", {"fca", "corpus/fca/planets.csv"}, {}},
      {"merge_span", {"merge", "corpus/prop/span.dia", "@OUT@/span"}, {"span.thy", "span.cocone", "span.prov"}},
      {"merge_single", {"merge", "corpus/prop/single.dia", "@OUT@/single"}, {"single.thy", "single.cocone", "single.prov"}},
      {"merge_coproduct", {"merge", "corpus/prop/coproduct.dia", "@OUT@/cop"}, {"cop.thy", "cop.cocone", "cop.prov"}},
      {"merge_coequalizer", {"merge", "corpus/prop/coequalizer.dia", "@OUT@/coeq"}, {"coeq.thy", "coeq.cocone", "coeq.prov"}},
      {"merge_eq_span", {"merge", "corpus/eq/span.dia", "@OUT@/eqspan", "--config", "corpus/eq/small.json"}, {"eqspan.thy", "eqspan.cocone", "eqspan.prov"}},
      {"merge_invalid", {"merge", "corpus/prop/invalid.dia", "@OUT@/invalid"}, {}},
      {"merge_arity", {"merge", "corpus/eq/arity.dia", "@OUT@/arity"}, {}},
  };
  return all;
}

inline std::string read(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

// Runs one case from `root` and renders its whole transcript.
inline std::string transcript(const Case& c, const std::filesystem::path& root,
                              const std::filesystem::path& scratch) {
  std::filesystem::remove_all(scratch);
  std::filesystem::create_directories(scratch);
  const auto saved = std::filesystem::current_path();
  std::filesystem::current_path(root);

  std::vector<std::string> args;
  std::string shown = "$ ifuse";
  for (auto a : c.args) {
    shown += ' ' + a;
    if (auto at = a.find("@OUT@"); at != std::string::npos) a.replace(at, 5, scratch.string());
    args.push_back(a);
  }
  std::ostringstream out, err;
  const int code = ifusion::cli::run(args, out, err);
  std::filesystem::current_path(saved);

  std::string t = shown + "\nexit " + std::to_string(code) + "\n--- stdout\n" + out.str() +
                  "--- stderr\n" + err.str();
  for (const auto& f : c.outputs) t += "--- " + f + "\n" + read(scratch / f);
  return t;
}

inline std::filesystem::path golden_path(const std::filesystem::path& dir, const Case& c) {
  return dir / (c.name + ".txt");
}

// Every corpus file that parses, for round-trip checks. The two excluded
// files are malformed on purpose.
inline std::vector<std::filesystem::path> corpus_files(const std::filesystem::path& corpus) {
  std::vector<std::filesystem::path> out;
  for (const auto& e : std::filesystem::recursive_directory_iterator(corpus)) {
    const auto ext = e.path().extension();
    const auto name = e.path().filename();
    if (name == "broken.thy" || name == "bad_arity.mor") continue;
    if (ext == ".thy" || ext == ".mor" || ext == ".dia") out.push_back(e.path());
  }
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace golden
