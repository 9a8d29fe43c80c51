#pragma once

#include <cstdint>
#include <deque>
#include <string>
#include <unordered_map>
#include <vector>

#include "errors.hpp"
#include "semantics.hpp"

namespace seqcal {

struct ExploreLimits {
  size_t max_states = 100000;
  size_t max_depth = 1000000;
};

struct LtsTransition {
  uint32_t src;
  Action act;
  uint32_t dst;
};

// Explicit finite LTS. frontier means the state's outgoing transitions may be
// incomplete (exploration was cut there); on non-frontier states the listed
// transitions are exactly the step set.
struct Lts {
  struct State {
    bool terminating = false;
    bool frontier = false;
  };
  std::vector<State> states;
  std::vector<LtsTransition> transitions;  // grouped by src, ascending
  uint32_t initial = 0;
  std::vector<std::string> labels;  // optional; empty or one per state

  size_t num_states() const { return states.size(); }
  bool has_frontier() const {
    for (const auto& s : states)
      if (s.frontier) return true;
    return false;
  }

  // CSR row index over transitions; call after filling transitions.
  void build_index() {
    row_.assign(states.size() + 1, 0);
    for (const auto& t : transitions) ++row_[t.src + 1];
    for (size_t i = 1; i < row_.size(); ++i) row_[i] += row_[i - 1];
  }

  struct Range {
    const LtsTransition* b;
    const LtsTransition* e;
    const LtsTransition* begin() const { return b; }
    const LtsTransition* end() const { return e; }
  };
  Range out(uint32_t s) const {
    return {transitions.data() + row_[s], transitions.data() + row_[s + 1]};
  }

 private:
  std::vector<uint32_t> row_;
};

// A system that can be explored into an Lts:
//   struct Sys {
//     using State = ...;                    // hashable + ==
//     State initial();
//     bool terminating(const State&);
//     struct Succ { Action act; State to; };
//     bool expand(const State&, std::vector<Succ>&);  // false: intrinsically
//                                                     // truncated (frontier)
//     std::string label(const State&);
//     static size_t hash(const State&);
//   };
// expand must return successors in a canonical order.

template <class Sys>
struct Explored {
  Lts lts;
  std::vector<typename Sys::State> states;  // payload per state index
};

// Breadth-first closure under the system's step relation, stopping at the
// limits. Cut states are flagged frontier. Deterministic: state indices are a
// function of the system alone.
template <class Sys>
Explored<Sys> explore(Sys& sys, const ExploreLimits& lim,
                      bool with_labels = false) {
  if (lim.max_states == 0 || lim.max_depth == 0) throw LimitZero();
  using State = typename Sys::State;
  struct H {
    size_t operator()(const State& s) const { return Sys::hash(s); }
  };

  Explored<Sys> ex;
  std::unordered_map<State, uint32_t, H> index;
  std::deque<std::pair<uint32_t, size_t>> queue;  // (state, depth)

  auto add = [&](const State& s, bool& fresh) -> uint32_t {
    auto it = index.find(s);
    if (it != index.end()) {
      fresh = false;
      return it->second;
    }
    fresh = true;
    uint32_t id = static_cast<uint32_t>(ex.states.size());
    index.emplace(s, id);
    ex.states.push_back(s);
    ex.lts.states.push_back({sys.terminating(s), false});
    return id;
  };

  bool fresh;
  add(sys.initial(), fresh);
  queue.emplace_back(0, 0);
  std::vector<typename Sys::Succ> succs;
  while (!queue.empty()) {
    auto [id, depth] = queue.front();
    queue.pop_front();
    if (depth > lim.max_depth || ex.states.size() >= lim.max_states) {
      ex.lts.states[id].frontier = true;
      continue;
    }
    succs.clear();
    bool complete = sys.expand(ex.states[id], succs);
    if (!complete) ex.lts.states[id].frontier = true;
    for (auto& sc : succs) {
      uint32_t to = add(sc.to, fresh);
      ex.lts.transitions.push_back({id, std::move(sc.act), to});
      if (fresh) queue.emplace_back(to, depth + 1);
    }
  }
  ex.lts.initial = 0;
  if (with_labels) {
    ex.lts.labels.reserve(ex.states.size());
    for (const auto& s : ex.states) ex.lts.labels.push_back(sys.label(s));
  }
  ex.lts.build_index();
  return ex;
}

// --- term system -------------------------------------------------------------

class TermSystem {
 public:
  using State = Term;
  struct Succ {
    Action act;
    Term to;
  };

  TermSystem(Interp& in, Term initial, Flavor fl, bool normalize = false)
      : in_(in), fl_(fl), normalize_(normalize), initial_(initial) {
    if (normalize_) initial_ = normalize_term(initial_, in_.factory(), norm_memo_);
  }

  State initial() { return initial_; }
  bool terminating(const State& s) { return in_.terminates(s); }

  bool expand(const State& s, std::vector<Succ>& out) {
    for (const auto& [a, t] : in_.step(s, fl_))
      out.push_back(
          {a, normalize_ ? normalize_term(t, in_.factory(), norm_memo_) : t});
    if (normalize_) {
      std::sort(out.begin(), out.end(), [](const Succ& x, const Succ& y) {
        if (x.act != y.act) return x.act < y.act;
        return term_cmp(x.to, y.to) < 0;
      });
      out.erase(std::unique(out.begin(), out.end(),
                            [](const Succ& x, const Succ& y) {
                              return x.act == y.act && x.to == y.to;
                            }),
                out.end());
    }
    return true;
  }

  std::string label(const State& s) { return pretty(s); }
  static size_t hash(const State& s) {
    return std::hash<const void*>{}(static_cast<const void*>(s));
  }

 private:
  Interp& in_;
  Flavor fl_;
  bool normalize_;
  Term initial_;
  std::unordered_map<Term, Term> norm_memo_;
};

inline Explored<TermSystem> explore_term(Interp& in, Term t, Flavor fl,
                                         const ExploreLimits& lim,
                                         bool with_labels = false,
                                         bool normalize = false) {
  TermSystem sys(in, t, fl, normalize);
  return explore(sys, lim, with_labels);
}

// --- disjoint union ----------------------------------------------------------

struct UnionLts {
  Lts lts;
  uint32_t initial1 = 0;
  uint32_t initial2 = 0;
};

// Tags t1's states with 1 and t2's with 2 (index offset), as in the pairing
// construction used to compare two systems.
inline UnionLts disjoint_union(const Lts& t1, const Lts& t2) {
  UnionLts u;
  u.lts.states = t1.states;
  u.lts.states.insert(u.lts.states.end(), t2.states.begin(), t2.states.end());
  u.lts.transitions = t1.transitions;
  uint32_t off = static_cast<uint32_t>(t1.states.size());
  for (auto t : t2.transitions)
    u.lts.transitions.push_back({t.src + off, t.act, t.dst + off});
  u.initial1 = t1.initial;
  u.initial2 = t2.initial + off;
  u.lts.initial = u.initial1;
  if (!t1.labels.empty() && !t2.labels.empty()) {
    u.lts.labels = t1.labels;
    u.lts.labels.insert(u.lts.labels.end(), t2.labels.begin(),
                        t2.labels.end());
  }
  u.lts.build_index();
  return u;
}

}  // namespace seqcal
