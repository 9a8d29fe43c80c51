#pragma once

#include <algorithm>
#include <unordered_map>
#include <unordered_set>
#include <utility>
#include <vector>

#include "parser.hpp"
#include "term.hpp"

namespace seqcal {

// Which sequential-composition rule set to run. Standard enables the right
// operand of a Seq whenever the left may terminate; Revised additionally
// requires the left operand to have no step at all (the negative premise).
enum class Flavor : uint8_t { Standard = 0, Revised = 1 };

inline const char* flavor_name(Flavor fl) {
  return fl == Flavor::Standard ? "standard" : "revised";
}

using StepList = std::vector<std::pair<Action, Term>>;

// One-step SOS evaluator over an immutable environment. Step sets and the
// termination predicate are memoized per term; confine an instance to one
// worker.
class Interp {
 public:
  Interp(TermFactory& f, const RecSpec& env) : f_(f), env_(env) {}

  TermFactory& factory() { return f_; }
  const RecSpec& env() const { return env_; }

  // p terminates (the SOS termination predicate, not reachability of 1)
  bool terminates(Term p) {
    auto it = term_memo_.find(p);
    if (it != term_memo_.end()) return it->second;
    if (!term_busy_.insert(p).second)
      throw UnguardedRecursion("termination of '" + pretty(p) +
                               "' depends on itself");
    bool r = false;
    switch (p->op) {
      case Op::Zero:
      case Op::Prefix: r = false; break;
      case Op::One:
      case Op::Star: r = true; break;
      case Op::Alt: r = terminates(p->a) || terminates(p->b); break;
      case Op::Seq:
      case Op::Par: r = terminates(p->a) && terminates(p->b); break;
      case Op::Nesting: r = terminates(p->b); break;
      case Op::Name: r = terminates(env_.body(p->name)); break;
    }
    term_busy_.erase(p);
    term_memo_.emplace(p, r);
    return r;
  }

  // The exact set of SOS-derivable single steps, canonically ordered.
  const StepList& step(Term p, Flavor fl) {
    auto& memo = step_memo_[static_cast<int>(fl)];
    auto it = memo.find(p);
    if (it != memo.end()) return it->second;
    auto& busy = step_busy_[static_cast<int>(fl)];
    if (!busy.insert(p).second)
      throw UnguardedRecursion("steps of '" + pretty(p) +
                               "' depend on themselves");
    StepList out = compute_step(p, fl);
    busy.erase(p);
    std::sort(out.begin(), out.end(), [](const auto& x, const auto& y) {
      if (x.first != y.first) return x.first < y.first;
      return term_cmp(x.second, y.second) < 0;
    });
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return memo.emplace(p, std::move(out)).first->second;
  }

 private:
  StepList compute_step(Term p, Flavor fl) {
    StepList out;
    switch (p->op) {
      case Op::Zero:
      case Op::One: break;
      case Op::Prefix:
        out.emplace_back(p->act, p->a);
        break;
      case Op::Alt: {
        const StepList& l = step(p->a, fl);
        const StepList& r = step(p->b, fl);
        out.insert(out.end(), l.begin(), l.end());
        out.insert(out.end(), r.begin(), r.end());
        break;
      }
      case Op::Seq: {
        const StepList& l = step(p->a, fl);
        for (const auto& [a, t] : l) out.emplace_back(a, f_.seq(t, p->b));
        bool gate = fl == Flavor::Standard ? terminates(p->a)
                                           : l.empty() && terminates(p->a);
        if (gate) {
          const StepList& r = step(p->b, fl);
          out.insert(out.end(), r.begin(), r.end());
        }
        break;
      }
      case Op::Par: {
        const auto& chans = p->channels;
        auto blocked = [&chans](const Action& a) {
          return (a.kind == ActKind::Send || a.kind == ActKind::Recv) &&
                 std::binary_search(chans.begin(), chans.end(), a.channel);
        };
        const StepList& l = step(p->a, fl);
        const StepList& r = step(p->b, fl);
        for (const auto& [a, t] : l)
          if (!blocked(a)) out.emplace_back(a, f_.par(t, p->b, chans));
        for (const auto& [a, t] : r)
          if (!blocked(a)) out.emplace_back(a, f_.par(p->a, t, chans));
        for (const auto& [al, tl] : l) {
          if (al.kind != ActKind::Send && al.kind != ActKind::Recv) continue;
          if (!std::binary_search(chans.begin(), chans.end(), al.channel))
            continue;
          ActKind want =
              al.kind == ActKind::Send ? ActKind::Recv : ActKind::Send;
          for (const auto& [ar, tr] : r)
            if (ar.kind == want && ar.channel == al.channel &&
                ar.datum == al.datum)
              out.emplace_back(Action::tau(), f_.par(tl, tr, chans));
        }
        break;
      }
      case Op::Name: {
        const StepList& s = step(env_.body(p->name), fl);
        out.insert(out.end(), s.begin(), s.end());
        break;
      }
      case Op::Star: {
        const StepList& s = step(p->a, fl);
        for (const auto& [a, t] : s) out.emplace_back(a, f_.seq(t, p));
        break;
      }
      case Op::Nesting: {
        const StepList& l = step(p->a, fl);
        for (const auto& [a, t] : l)
          out.emplace_back(a, f_.seq(t, f_.seq(p, p->a)));
        const StepList& r = step(p->b, fl);
        out.insert(out.end(), r.begin(), r.end());
        break;
      }
    }
    return out;
  }

  TermFactory& f_;
  const RecSpec& env_;
  std::unordered_map<Term, bool> term_memo_;
  std::unordered_set<Term> term_busy_;
  std::unordered_map<Term, StepList> step_memo_[2];
  std::unordered_set<Term> step_busy_[2];
};

inline Term detail_norm_seq(Term l, Term r, TermFactory& f);

// Optional state-space compression: drop literal 1 left operands of Seq and
// reassociate Seq to the right. Behaviour-preserving (checked against the
// strong-bisimulation oracle in the test suite); off by default.
inline Term normalize_term(Term t, TermFactory& f,
                           std::unordered_map<Term, Term>& memo) {
  auto it = memo.find(t);
  if (it != memo.end()) return it->second;
  Term r = t;
  switch (t->op) {
    case Op::Zero:
    case Op::One:
    case Op::Name: break;
    case Op::Prefix: r = f.prefix(t->act, normalize_term(t->a, f, memo)); break;
    case Op::Alt:
      r = f.alt(normalize_term(t->a, f, memo), normalize_term(t->b, f, memo));
      break;
    case Op::Par:
      r = f.par(normalize_term(t->a, f, memo), normalize_term(t->b, f, memo),
                t->channels);
      break;
    case Op::Star: r = f.star(normalize_term(t->a, f, memo)); break;
    case Op::Nesting:
      r = f.nest(normalize_term(t->a, f, memo), normalize_term(t->b, f, memo));
      break;
    case Op::Seq:
      r = detail_norm_seq(normalize_term(t->a, f, memo),
                          normalize_term(t->b, f, memo), f);
      break;
  }
  memo.emplace(t, r);
  return r;
}

inline Term detail_norm_seq(Term l, Term r, TermFactory& f) {
  if (l->op == Op::One) return r;
  if (l->op == Op::Seq)  // (x;y);z -> x;(y;z)
    return detail_norm_seq(l->a, detail_norm_seq(l->b, r, f), f);
  return f.seq(l, r);
}

}  // namespace seqcal
