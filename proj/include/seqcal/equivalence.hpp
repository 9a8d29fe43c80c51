#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <numeric>
#include <set>
#include <sstream>
#include <string>
#include <unordered_map>
#include <vector>

#include "lts.hpp"

namespace seqcal {

// --- partitions ---------------------------------------------------------------

struct Partition {
  std::vector<uint32_t> block_of;        // state -> block id (dense)
  std::vector<uint8_t> divergent;        // only for divergence-aware runs
  uint32_t num_blocks = 0;

  bool same(uint32_t a, uint32_t b) const { return block_of[a] == block_of[b]; }
};

enum class Verdict : uint8_t { Holds = 0, Fails = 1, UnknownFrontier = 2 };

struct EquivVerdict {
  Verdict v = Verdict::Holds;
  std::string witness;        // distinguishing info on Fails
  long frontier_k = -1;       // min root distance to a frontier, if any

  bool holds() const { return v == Verdict::Holds; }
  bool fails() const { return v == Verdict::Fails; }
  const char* str() const {
    switch (v) {
      case Verdict::Holds: return "Holds";
      case Verdict::Fails: return "Fails";
      case Verdict::UnknownFrontier: return "UnknownFrontier";
    }
    return "?";
  }
};

namespace detail {

// Dense action ids for fast matching; tau is always id 0.
struct ActionTable {
  std::vector<Action> actions;                 // id -> action
  std::vector<int32_t> tr_act;                 // per transition

  explicit ActionTable(const Lts& t) {
    std::map<Action, int32_t> ids;
    ids.emplace(Action::tau(), 0);
    actions.push_back(Action::tau());
    tr_act.reserve(t.transitions.size());
    for (const auto& tr : t.transitions) {
      auto [it, fresh] = ids.emplace(tr.act, static_cast<int32_t>(actions.size()));
      if (fresh) actions.push_back(tr.act);
      tr_act.push_back(it->second);
    }
  }
};

inline std::vector<uint8_t> can_term_via_tau(const Lts& t) {
  // reverse reachability of terminating states over tau edges
  std::vector<std::vector<uint32_t>> rev(t.states.size());
  for (const auto& tr : t.transitions)
    if (tr.act.is_tau()) rev[tr.dst].push_back(tr.src);
  std::vector<uint8_t> can(t.states.size(), 0);
  std::vector<uint32_t> stack;
  for (uint32_t i = 0; i < t.states.size(); ++i)
    if (t.states[i].terminating) {
      can[i] = 1;
      stack.push_back(i);
    }
  while (!stack.empty()) {
    uint32_t s = stack.back();
    stack.pop_back();
    for (uint32_t p : rev[s])
      if (!can[p]) {
        can[p] = 1;
        stack.push_back(p);
      }
  }
  return can;
}

inline std::vector<uint8_t> can_reach_frontier_via_tau(const Lts& t) {
  std::vector<std::vector<uint32_t>> rev(t.states.size());
  for (const auto& tr : t.transitions)
    if (tr.act.is_tau()) rev[tr.dst].push_back(tr.src);
  std::vector<uint8_t> can(t.states.size(), 0);
  std::vector<uint32_t> stack;
  for (uint32_t i = 0; i < t.states.size(); ++i)
    if (t.states[i].frontier) {
      can[i] = 1;
      stack.push_back(i);
    }
  while (!stack.empty()) {
    uint32_t s = stack.back();
    stack.pop_back();
    for (uint32_t p : rev[s])
      if (!can[p]) {
        can[p] = 1;
        stack.push_back(p);
      }
  }
  return can;
}

// Group states by (old block, signature); returns new block count.
template <class SigOf>
uint32_t regroup(const Lts& t, Partition& p, SigOf&& sig_of) {
  using Sig = std::vector<std::pair<int32_t, uint32_t>>;
  std::map<std::pair<uint32_t, Sig>, uint32_t> ids;
  std::vector<uint32_t> nb(t.states.size());
  for (uint32_t s = 0; s < t.states.size(); ++s) {
    auto key = std::make_pair(p.block_of[s], sig_of(s));
    auto [it, fresh] = ids.emplace(std::move(key), static_cast<uint32_t>(ids.size()));
    nb[s] = it->second;
  }
  p.block_of = std::move(nb);
  p.num_blocks = static_cast<uint32_t>(ids.size());
  return p.num_blocks;
}

}  // namespace detail

// --- exact strong bisimilarity (partition refinement) -------------------------

inline Partition strong_partition(const Lts& t) {
  detail::ActionTable at(t);
  Partition p;
  p.block_of.assign(t.states.size(), 0);
  for (uint32_t s = 0; s < t.states.size(); ++s)
    p.block_of[s] = t.states[s].terminating ? 1 : 0;
  p.num_blocks = 2;
  while (true) {
    uint32_t before = p.num_blocks;
    auto sig_of = [&](uint32_t s) {
      std::vector<std::pair<int32_t, uint32_t>> sig;
      auto r = t.out(s);
      for (const LtsTransition* tr = r.begin(); tr != r.end(); ++tr) {
        size_t idx = static_cast<size_t>(tr - t.transitions.data());
        sig.emplace_back(at.tr_act[idx], p.block_of[tr->dst]);
      }
      std::sort(sig.begin(), sig.end());
      sig.erase(std::unique(sig.begin(), sig.end()), sig.end());
      return sig;
    };
    if (detail::regroup(t, p, sig_of) == before) break;
  }
  return p;
}

// --- exact branching bisimilarity (signature refinement) ----------------------

namespace detail {

// Branching signature of s w.r.t. partition p: visible (and non-inert tau)
// moves reachable through tau steps inside s's own block.
inline std::vector<std::pair<int32_t, uint32_t>> branching_sig(
    const Lts& t, const ActionTable& at, const Partition& p, uint32_t s,
    std::vector<uint32_t>& scratch, std::vector<uint8_t>& seen) {
  std::vector<std::pair<int32_t, uint32_t>> sig;
  scratch.clear();
  scratch.push_back(s);
  seen[s] = 1;
  for (size_t qi = 0; qi < scratch.size(); ++qi) {
    uint32_t x = scratch[qi];
    auto r = t.out(x);
    for (const LtsTransition* tr = r.begin(); tr != r.end(); ++tr) {
      size_t idx = static_cast<size_t>(tr - t.transitions.data());
      int32_t a = at.tr_act[idx];
      if (a == 0 && p.block_of[tr->dst] == p.block_of[s]) {
        if (!seen[tr->dst]) {
          seen[tr->dst] = 1;
          scratch.push_back(tr->dst);
        }
        continue;  // inert
      }
      sig.emplace_back(a, p.block_of[tr->dst]);
    }
  }
  for (uint32_t x : scratch) seen[x] = 0;
  std::sort(sig.begin(), sig.end());
  sig.erase(std::unique(sig.begin(), sig.end()), sig.end());
  return sig;
}

inline void branching_refine(const Lts& t, const ActionTable& at,
                             Partition& p) {
  std::vector<uint32_t> scratch;
  std::vector<uint8_t> seen(t.states.size(), 0);
  while (true) {
    uint32_t before = p.num_blocks;
    auto sig_of = [&](uint32_t s) {
      return branching_sig(t, at, p, s, scratch, seen);
    };
    if (regroup(t, p, sig_of) == before) break;
  }
}

}  // namespace detail

// Coarsest branching bisimulation partition (with the termination clause:
// states in one block agree on tau-reachability of a terminating state).
inline Partition branching_bisim(const Lts& t) {
  if (t.has_frontier()) throw FrontierPresent();
  detail::ActionTable at(t);
  auto can = detail::can_term_via_tau(t);
  Partition p;
  p.block_of.assign(t.states.size(), 0);
  for (uint32_t s = 0; s < t.states.size(); ++s) p.block_of[s] = can[s];
  p.num_blocks = 2;
  detail::branching_refine(t, at, p);
  return p;
}

// Marks states lying on a tau-cycle inside their own block as divergent and
// refines until the partition is stable: the divergence-preserving partition.
inline Partition divergence_refine(const Lts& t, Partition p) {
  if (t.has_frontier()) throw FrontierPresent();
  detail::ActionTable at(t);
  while (true) {
    // tau-SCCs restricted to in-block edges
    std::vector<std::vector<uint32_t>> adj(t.states.size());
    std::vector<uint8_t> self_loop(t.states.size(), 0);
    for (const auto& tr : t.transitions) {
      if (!tr.act.is_tau() || p.block_of[tr.src] != p.block_of[tr.dst])
        continue;
      if (tr.src == tr.dst)
        self_loop[tr.src] = 1;
      else
        adj[tr.src].push_back(tr.dst);
    }
    // iterative Tarjan
    std::vector<uint8_t> divergent(t.states.size(), 0);
    {
      uint32_t n = static_cast<uint32_t>(t.states.size());
      std::vector<int32_t> idx(n, -1), low(n, 0);
      std::vector<uint8_t> on(n, 0);
      std::vector<uint32_t> stk;
      int32_t counter = 0;
      struct Frame {
        uint32_t v;
        size_t child;
      };
      for (uint32_t root = 0; root < n; ++root) {
        if (idx[root] != -1) continue;
        std::vector<Frame> call{{root, 0}};
        idx[root] = low[root] = counter++;
        stk.push_back(root);
        on[root] = 1;
        while (!call.empty()) {
          Frame& f = call.back();
          if (f.child < adj[f.v].size()) {
            uint32_t w = adj[f.v][f.child++];
            if (idx[w] == -1) {
              idx[w] = low[w] = counter++;
              stk.push_back(w);
              on[w] = 1;
              call.push_back({w, 0});
            } else if (on[w]) {
              low[f.v] = std::min(low[f.v], idx[w]);
            }
          } else {
            uint32_t v = f.v;
            call.pop_back();
            if (!call.empty())
              low[call.back().v] = std::min(low[call.back().v], low[v]);
            if (low[v] == idx[v]) {
              std::vector<uint32_t> comp;
              while (true) {
                uint32_t w = stk.back();
                stk.pop_back();
                on[w] = 0;
                comp.push_back(w);
                if (w == v) break;
              }
              if (comp.size() > 1)
                for (uint32_t w : comp) divergent[w] = 1;
            }
          }
        }
      }
      for (uint32_t s = 0; s < n; ++s)
        if (self_loop[s]) divergent[s] = 1;
    }
    uint32_t before = p.num_blocks;
    auto sig_of = [&](uint32_t s) {
      return std::vector<std::pair<int32_t, uint32_t>>{
          {static_cast<int32_t>(divergent[s]), 0}};
    };
    detail::regroup(t, p, sig_of);
    detail::branching_refine(t, at, p);
    p.divergent.assign(divergent.begin(), divergent.end());
    if (p.num_blocks == before) break;
  }
  return p;
}

// Rootedness on top of a computed partition: initial steps must be matched
// strictly (action for action, into the same block), and a terminating root
// requires the other root to reach termination by tau steps.
inline EquivVerdict rooted_check(const Lts& t, uint32_t s1, uint32_t s2,
                                 const Partition& p) {
  if (s1 >= t.states.size() || s2 >= t.states.size())
    throw Error("rooted_check: state index out of range");
  auto can = detail::can_term_via_tau(t);
  auto matched = [&](uint32_t from, uint32_t to) -> const Action* {
    auto rf = t.out(from);
    for (const LtsTransition* tr = rf.begin(); tr != rf.end(); ++tr) {
      bool ok = false;
      for (const auto& cand : t.out(to))
        if (cand.act == tr->act && p.same(cand.dst, tr->dst)) {
          ok = true;
          break;
        }
      if (!ok) return &tr->act;
    }
    return nullptr;
  };
  if (const Action* a = matched(s1, s2)) {
    EquivVerdict v{Verdict::Fails, "root step '" + a->str() + "' unmatched"};
    return v;
  }
  if (const Action* a = matched(s2, s1)) {
    EquivVerdict v{Verdict::Fails,
                   "root step '" + a->str() + "' unmatched (right)"};
    return v;
  }
  if (t.states[s1].terminating && !can[s2])
    return {Verdict::Fails, "left root terminates, right cannot"};
  if (t.states[s2].terminating && !can[s1])
    return {Verdict::Fails, "right root terminates, left cannot"};
  return {Verdict::Holds, {}};
}

}  // namespace seqcal
