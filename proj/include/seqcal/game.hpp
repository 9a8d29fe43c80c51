#pragma once

#include <cstdint>
#include <deque>
#include <string>
#include <unordered_map>
#include <vector>

#include "equivalence.hpp"

namespace seqcal {

// Bounded bisimilarity checking on truncated transition systems. Frontier
// states are wildcards: they match anything, so a Fails verdict is always
// trustworthy, while Holds degrades to UnknownFrontier whenever the input has
// frontier states. Implemented as a greatest-fixpoint deletion over the pairs
// reachable in the matching game.
struct GameOptions {
  bool branching = false;    // tau-abstracting clauses
  bool divergence = false;   // clause 3 (tau-cycle reading), branching only
  size_t max_pairs = 4000000;
  size_t max_tau_closure = 200000;
};

class PairGame {
 public:
  enum Tri : uint8_t { No = 0, Unknown = 1, Yes = 2 };

  PairGame(const Lts& t, GameOptions opt)
      : t_(t), opt_(opt), at_(t), can_term_(detail::can_term_via_tau(t)),
        can_wild_(detail::can_reach_frontier_via_tau(t)) {
    if (opt_.divergence) compute_tau_sccs();
  }

  // Verdict for a root pair. Budget overflows report UnknownFrontier.
  EquivVerdict verdict(uint32_t s1, uint32_t s2) {
    if (!run(s1, s2)) return {Verdict::UnknownFrontier, "budget exceeded"};
    uint32_t id = pair_id(s1, s2);
    if (status_[id] == DEAD)
      return {Verdict::Fails, witness(id)};
    if (t_.has_frontier())
      return {Verdict::UnknownFrontier, {}, frontier_distance(s1, s2)};
    return {Verdict::Holds, {}};
  }

  // Three-valued relation query: Yes means provably related using complete
  // data only; No means provably unrelated; Unknown otherwise.
  Tri query(uint32_t x, uint32_t y) {
    if (x == y) return Yes;
    if (!run(x, y)) return Unknown;
    uint32_t id = pair_id(x, y);
    if (status_[id] == DEAD) return No;
    ensure_exact();
    return exact_[id] ? Yes : Unknown;
  }

  const std::vector<uint8_t>& can_term() const { return can_term_; }
  const std::vector<uint8_t>& can_wild() const { return can_wild_; }

  // tau-closure including the state itself; empty result means overflow
  // (treat as wildcard).
  const std::vector<uint32_t>* tau_closure(uint32_t s) {
    auto it = closures_.find(s);
    if (it != closures_.end()) return it->second.ok ? &it->second.states : nullptr;
    Closure c;
    c.states.push_back(s);
    std::vector<uint8_t> seen;
    seen.assign(t_.states.size(), 0);  // scratch; small systems dominate
    seen[s] = 1;
    for (size_t qi = 0; qi < c.states.size(); ++qi) {
      if (c.states.size() > opt_.max_tau_closure) {
        c.ok = false;
        break;
      }
      uint32_t x = c.states[qi];
      for (const auto& tr : t_.out(x))
        if (tr.act.is_tau() && !seen[tr.dst]) {
          seen[tr.dst] = 1;
          c.states.push_back(tr.dst);
        }
    }
    auto [pos, fresh] = closures_.emplace(s, std::move(c));
    return pos->second.ok ? &pos->second.states : nullptr;
  }

 private:
  static constexpr uint8_t ALIVE = 1, DEAD = 0;

  struct Closure {
    std::vector<uint32_t> states;
    bool ok = true;
  };

  const Lts& t_;
  GameOptions opt_;
  detail::ActionTable at_;
  std::vector<uint8_t> can_term_, can_wild_;

  std::vector<std::pair<uint32_t, uint32_t>> pairs_;
  std::unordered_map<uint64_t, uint32_t> pair_ids_;
  std::vector<uint8_t> status_;
  std::vector<uint8_t> exact_;
  std::vector<int32_t> dead_reason_;   // action id, -1 term, -2 divergence
  std::vector<int32_t> dead_next_;     // pair continuing the witness
  std::vector<uint8_t> dead_side_;     // 0: left move unmatched, 1: right
  bool exact_valid_ = false;
  bool overflow_ = false;
  std::unordered_map<uint32_t, Closure> closures_;

  // divergence support
  std::vector<int32_t> scc_of_;
  std::vector<std::vector<uint32_t>> scc_members_;
  std::vector<uint8_t> scc_cyclic_;

  static uint64_t key(uint32_t a, uint32_t b) {
    return (static_cast<uint64_t>(a) << 32) | b;
  }

  uint32_t pair_id(uint32_t a, uint32_t b) const {
    return pair_ids_.at(key(a, b));
  }

  uint32_t intern_pair(uint32_t a, uint32_t b, std::deque<uint32_t>& work) {
    auto [it, fresh] = pair_ids_.emplace(key(a, b), pairs_.size());
    if (fresh) {
      pairs_.emplace_back(a, b);
      status_.push_back(ALIVE);
      dead_reason_.push_back(0);
      dead_next_.push_back(-1);
      dead_side_.push_back(0);
      work.push_back(it->second);
    }
    return it->second;
  }

  bool wildcard(uint32_t s) const { return t_.states[s].frontier; }

  int32_t act_of(const LtsTransition* tr) const {
    return at_.tr_act[static_cast<size_t>(tr - t_.transitions.data())];
  }

  // Discover the support closure of (s1, s2).
  bool discover(uint32_t s1, uint32_t s2) {
    std::deque<uint32_t> work;
    intern_pair(s1, s2, work);
    while (!work.empty()) {
      if (pairs_.size() > opt_.max_pairs) {
        overflow_ = true;
        return false;
      }
      uint32_t id = work.front();
      work.pop_front();
      auto [u, v] = pairs_[id];
      if (wildcard(u) || wildcard(v)) continue;
      discover_side(u, v, work);
      discover_side(v, u, work);  // candidates are symmetric pairs reversed
    }
    return true;
  }

  // For every move u -a-> u', add all candidate matches on v's side. Pairs
  // are stored oriented (left component from the mover's side), so we intern
  // both orientations to keep lookups simple.
  void discover_side(uint32_t u, uint32_t v, std::deque<uint32_t>& work) {
    auto ru = t_.out(u);
    if (!opt_.branching) {
      for (const LtsTransition* tu = ru.begin(); tu != ru.end(); ++tu)
        for (const auto& tv : t_.out(v))
          if (tv.act == tu->act) {
            intern_pair(tu->dst, tv.dst, work);
            intern_pair(tv.dst, tu->dst, work);
          }
      return;
    }
    const std::vector<uint32_t>* clo = tau_closure(v);
    if (!clo) return;  // overflow: wildcard, no obligations recorded
    for (const LtsTransition* tu = ru.begin(); tu != ru.end(); ++tu) {
      int32_t a = act_of(tu);
      for (uint32_t v2 : *clo) {
        if (wildcard(v2)) continue;
        intern_pair(u, v2, work);
        intern_pair(v2, u, work);
        if (a == 0) {  // the (tau) no-move option
          intern_pair(tu->dst, v2, work);
          intern_pair(v2, tu->dst, work);
        }
        for (const auto& tv : t_.out(v2))
          if (tv.act == tu->act) {
            intern_pair(tu->dst, tv.dst, work);
            intern_pair(tv.dst, tu->dst, work);
          }
      }
    }
    if (opt_.divergence && scc_of_[u] >= 0 && scc_cyclic_[scc_of_[u]]) {
      // pairs needed by the divergence obligation
      if (const auto* c2 = tau_closure(v)) {
        for (uint32_t v2 : *c2)
          for (uint32_t x : scc_members_[scc_of_[u]]) {
            intern_pair(x, v2, work);
            intern_pair(v2, x, work);
          }
      }
    }
  }

  // One aliveness check under wildcard semantics. strict = ignore wildcards
  // and require exact support (used for the Yes side of query()).
  bool check(uint32_t id, bool strict, const std::vector<uint8_t>& alive) {
    auto [u, v] = pairs_[id];
    if (wildcard(u) || wildcard(v)) return !strict;
    // termination clauses
    if (t_.states[u].terminating && !can_term_[v] &&
        (strict || !can_wild_[v]))
      return fail(id, -1, -1, 0, strict);
    if (t_.states[v].terminating && !can_term_[u] &&
        (strict || !can_wild_[u]))
      return fail(id, -1, -1, 1, strict);
    if (!check_moves(id, u, v, 0, strict, alive)) return false;
    if (!check_moves(id, v, u, 1, strict, alive)) return false;
    if (opt_.divergence && !strict) {
      if (!check_divergence(id, u, v, 0, alive)) return false;
      if (!check_divergence(id, v, u, 1, alive)) return false;
    }
    return true;
  }

  bool fail(uint32_t id, int32_t reason, int32_t next, uint8_t side,
            bool strict) {
    if (!strict) {
      dead_reason_[id] = reason;
      dead_next_[id] = next;
      dead_side_[id] = side;
    }
    return false;
  }

  bool alive_at(const std::vector<uint8_t>& alive, uint32_t a,
                uint32_t b) const {
    auto it = pair_ids_.find(key(a, b));
    if (it == pair_ids_.end()) return false;  // undiscovered: unsupported
    return alive[it->second] != 0;
  }

  bool check_moves(uint32_t id, uint32_t u, uint32_t v, uint8_t side,
                   bool strict, const std::vector<uint8_t>& alive) {
    auto ru = t_.out(u);
    for (const LtsTransition* tu = ru.begin(); tu != ru.end(); ++tu) {
      int32_t a = act_of(tu);
      bool ok = false;
      int32_t best_next = -1;
      if (!opt_.branching) {
        for (const auto& tv : t_.out(v)) {
          if (!(tv.act == tu->act)) continue;
          if (wildcard(tv.dst) && !strict) {
            ok = true;
            break;
          }
          bool sup = side == 0 ? alive_at(alive, tu->dst, tv.dst)
                               : alive_at(alive, tv.dst, tu->dst);
          if (sup) {
            ok = true;
            break;
          }
          uint32_t cand = side == 0 ? pair_ids_.at(key(tu->dst, tv.dst))
                                    : pair_ids_.at(key(tv.dst, tu->dst));
          best_next = static_cast<int32_t>(cand);
        }
      } else {
        const std::vector<uint32_t>* clo = tau_closure(v);
        if (!clo) {
          if (strict) return fail(id, a, -1, side, strict);
          continue;  // closure overflow: wildcard
        }
        for (uint32_t v2 : *clo) {
          if (wildcard(v2) && !strict) {
            ok = true;
            break;
          }
          bool stay = side == 0 ? alive_at(alive, u, v2)
                                : alive_at(alive, v2, u);
          if (!stay) continue;
          if (a == 0) {
            bool nomove = side == 0 ? alive_at(alive, tu->dst, v2)
                                    : alive_at(alive, v2, tu->dst);
            if (nomove) {
              ok = true;
              break;
            }
          }
          for (const auto& tv : t_.out(v2)) {
            if (!(tv.act == tu->act)) continue;
            if (wildcard(tv.dst) && !strict) {
              ok = true;
              break;
            }
            bool sup = side == 0 ? alive_at(alive, tu->dst, tv.dst)
                                 : alive_at(alive, tv.dst, tu->dst);
            if (sup) {
              ok = true;
              break;
            }
          }
          if (ok) break;
        }
      }
      if (!ok) return fail(id, a, best_next, side, strict);
    }
    return true;
  }

  bool check_divergence(uint32_t id, uint32_t u, uint32_t v, uint8_t side,
                        const std::vector<uint8_t>& alive) {
    if (scc_of_[u] < 0 || !scc_cyclic_[scc_of_[u]]) return true;
    const auto& members = scc_members_[scc_of_[u]];
    for (uint32_t x : members) {
      bool rel = side == 0 ? alive_at(alive, x, v) : alive_at(alive, v, x);
      if (!rel) return true;  // premise not established
    }
    const std::vector<uint32_t>* clo = tau_closure(v);
    if (!clo) return true;  // wildcard
    for (uint32_t v2 : *clo) {
      if (v2 == v) continue;  // need at least one tau step
      if (wildcard(v2)) return true;
      for (uint32_t x : members) {
        bool rel = side == 0 ? alive_at(alive, x, v2) : alive_at(alive, v2, x);
        if (rel) return true;
      }
    }
    // also a self tau-loop on v counts as tau+ progress to v itself
    for (const auto& tr : t_.out(v))
      if (tr.act.is_tau() && tr.dst == v) return true;
    return fail(id, -2, -1, side, false);
  }

  bool run(uint32_t s1, uint32_t s2) {
    if (overflow_) return false;
    if (pair_ids_.count(key(s1, s2)) && fixpoint_valid_) return true;
    if (!discover(s1, s2)) return false;
    // deletion sweeps to fixpoint
    bool changed = true;
    while (changed) {
      changed = false;
      for (uint32_t id = 0; id < pairs_.size(); ++id) {
        if (status_[id] != ALIVE) continue;
        if (!check(id, false, status_)) {
          status_[id] = DEAD;
          changed = true;
        }
      }
    }
    fixpoint_valid_ = true;
    exact_valid_ = false;
    return true;
  }

  void ensure_exact() {
    if (exact_valid_) return;
    exact_ = status_;
    for (uint32_t id = 0; id < pairs_.size(); ++id) {
      auto [u, v] = pairs_[id];
      if (wildcard(u) || wildcard(v)) exact_[id] = 0;
    }
    bool changed = true;
    while (changed) {
      changed = false;
      for (uint32_t id = 0; id < pairs_.size(); ++id) {
        if (!exact_[id]) continue;
        if (!check(id, true, exact_)) {
          exact_[id] = 0;
          changed = true;
        }
      }
    }
    exact_valid_ = true;
  }

  bool fixpoint_valid_ = false;

  std::string witness(uint32_t id) {
    std::string out;
    int32_t cur = static_cast<int32_t>(id);
    int guard = 0;
    while (cur >= 0 && guard++ < 64) {
      int32_t reason = dead_reason_[cur];
      if (!out.empty()) out += " ";
      if (reason == -1) {
        out += dead_side_[cur] == 0 ? "[left terminates, right cannot]"
                                    : "[right terminates, left cannot]";
        break;
      }
      if (reason == -2) {
        out += "[divergence unmatched]";
        break;
      }
      out += (dead_side_[cur] == 0 ? "" : "~");
      out += at_.actions[reason].str();
      cur = dead_next_[cur];
    }
    return out;
  }

  long frontier_distance(uint32_t s1, uint32_t s2) const {
    std::deque<std::pair<uint32_t, long>> q;
    std::vector<uint8_t> seen(t_.states.size(), 0);
    q.emplace_back(s1, 0);
    q.emplace_back(s2, 0);
    seen[s1] = seen[s2] = 1;
    while (!q.empty()) {
      auto [s, d] = q.front();
      q.pop_front();
      if (t_.states[s].frontier) return d;
      for (const auto& tr : t_.out(s))
        if (!seen[tr.dst]) {
          seen[tr.dst] = 1;
          q.emplace_back(tr.dst, d + 1);
        }
    }
    return -1;
  }

  void compute_tau_sccs() {
    uint32_t n = static_cast<uint32_t>(t_.states.size());
    std::vector<std::vector<uint32_t>> adj(n);
    std::vector<uint8_t> self_loop(n, 0);
    for (const auto& tr : t_.transitions) {
      if (!tr.act.is_tau()) continue;
      if (tr.src == tr.dst)
        self_loop[tr.src] = 1;
      else
        adj[tr.src].push_back(tr.dst);
    }
    scc_of_.assign(n, -1);
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
            int32_t sid = static_cast<int32_t>(scc_members_.size());
            bool cyc = comp.size() > 1;
            for (uint32_t w : comp) {
              scc_of_[w] = sid;
              if (self_loop[w]) cyc = true;
            }
            scc_members_.push_back(std::move(comp));
            scc_cyclic_.push_back(cyc);
          }
        }
      }
    }
  }
};

// Bounded comparison of two root states in one (possibly truncated) LTS.
inline EquivVerdict bounded_bisim(const Lts& t, uint32_t s1, uint32_t s2,
                                  GameOptions opt) {
  PairGame g(t, opt);
  return g.verdict(s1, s2);
}

}  // namespace seqcal
