#pragma once

#include <algorithm>
#include <fstream>
#include <sstream>
#include <string>

#include "lts.hpp"

namespace seqcal {

// Aldebaran format: header `des (initial, #transitions, #states)`, one
// `(src, "label", dst)` per line, tau rendered as "tau". Termination and
// frontier flags go to a sidecar `<path>.flags` file (`term <id>` /
// `frontier <id>` lines). Ordering is deterministic: transitions sorted
// lexicographically by (src, label, dst).
inline std::string aut_string(const Lts& t) {
  std::vector<LtsTransition> ts = t.transitions;
  std::sort(ts.begin(), ts.end(), [](const auto& x, const auto& y) {
    if (x.src != y.src) return x.src < y.src;
    auto lx = x.act.str(), ly = y.act.str();
    if (lx != ly) return lx < ly;
    return x.dst < y.dst;
  });
  std::ostringstream os;
  os << "des (" << t.initial << ", " << ts.size() << ", " << t.states.size()
     << ")\n";
  for (const auto& tr : ts)
    os << "(" << tr.src << ", \"" << tr.act.str() << "\", " << tr.dst << ")\n";
  return os.str();
}

inline std::string flags_string(const Lts& t) {
  std::ostringstream os;
  for (uint32_t i = 0; i < t.states.size(); ++i)
    if (t.states[i].terminating) os << "term " << i << "\n";
  for (uint32_t i = 0; i < t.states.size(); ++i)
    if (t.states[i].frontier) os << "frontier " << i << "\n";
  return os.str();
}

inline void export_aut(const Lts& t, const std::string& path) {
  std::ofstream aut(path, std::ios::binary);
  if (!aut) throw IoError("cannot write " + path);
  aut << aut_string(t);
  std::ofstream flags(path + ".flags", std::ios::binary);
  if (!flags) throw IoError("cannot write " + path + ".flags");
  flags << flags_string(t);
}

inline Lts parse_aut(const std::string& aut, const std::string& flags) {
  Lts t;
  std::istringstream is(aut);
  std::string line;
  if (!std::getline(is, line)) throw IoError("empty .aut input");
  size_t ntrans = 0, nstates = 0;
  {
    std::istringstream hs(line);
    std::string des;
    char ch;
    hs >> des;
    if (des != "des") throw IoError(".aut header must start with 'des'");
    hs >> ch;  // (
    uint32_t init;
    hs >> init >> ch >> ntrans >> ch >> nstates;
    t.initial = init;
  }
  t.states.assign(nstates, {});
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    size_t open = line.find('(');
    size_t c1 = line.find(',');
    size_t q1 = line.find('"');
    size_t q2 = line.rfind('"');
    size_t c2 = line.find(',', q2);
    size_t close = line.rfind(')');
    if (open == std::string::npos || q1 == std::string::npos || q2 <= q1 ||
        c2 == std::string::npos || close == std::string::npos)
      throw IoError("bad .aut transition line: " + line);
    uint32_t src = std::stoul(line.substr(open + 1, c1 - open - 1));
    std::string label = line.substr(q1 + 1, q2 - q1 - 1);
    uint32_t dst = std::stoul(line.substr(c2 + 1, close - c2 - 1));
    if (src >= nstates || dst >= nstates)
      throw IoError("transition endpoint out of range: " + line);
    t.transitions.push_back({src, Action::parse_label(label), dst});
  }
  std::istringstream fs(flags);
  while (std::getline(fs, line)) {
    if (line.empty()) continue;
    std::istringstream ls(line);
    std::string kind;
    uint32_t id;
    ls >> kind >> id;
    if (id >= nstates) throw IoError("flag id out of range: " + line);
    if (kind == "term")
      t.states[id].terminating = true;
    else if (kind == "frontier")
      t.states[id].frontier = true;
    else
      throw IoError("unknown flag kind: " + line);
  }
  std::sort(t.transitions.begin(), t.transitions.end(),
            [](const auto& x, const auto& y) {
              if (x.src != y.src) return x.src < y.src;
              auto lx = x.act.str(), ly = y.act.str();
              if (lx != ly) return lx < ly;
              return x.dst < y.dst;
            });
  t.build_index();
  return t;
}

inline Lts import_aut(const std::string& path) {
  auto slurp = [](const std::string& p) {
    std::ifstream in(p, std::ios::binary);
    if (!in) throw IoError("cannot read " + p);
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
  };
  return parse_aut(slurp(path), slurp(path + ".flags"));
}

// Graphviz rendering; terminating states are doubled circles, frontier states
// dashed.
inline std::string dot_string(const Lts& t) {
  std::ostringstream os;
  os << "digraph lts {\n  rankdir=LR;\n  node [shape=circle];\n";
  for (uint32_t i = 0; i < t.states.size(); ++i) {
    os << "  s" << i << " [";
    if (t.states[i].terminating) os << "shape=doublecircle,";
    if (t.states[i].frontier) os << "style=dashed,";
    os << "label=\"" << i << "\"";
    if (i < t.labels.size() && !t.labels[i].empty()) {
      std::string esc;
      for (char c : t.labels[i]) {
        if (c == '"' || c == '\\') esc += '\\';
        esc += c;
      }
      os << ",tooltip=\"" << esc << "\"";
    }
    os << "];\n";
  }
  os << "  init [shape=point];\n  init -> s" << t.initial << ";\n";
  for (const auto& tr : t.transitions)
    os << "  s" << tr.src << " -> s" << tr.dst << " [label=\"" << tr.act.str()
       << "\"];\n";
  os << "}\n";
  return os.str();
}

}  // namespace seqcal
