#pragma once

#include <algorithm>
#include <deque>
#include <set>
#include <string>
#include <unordered_set>
#include <vector>

#include "action.hpp"

namespace seqcal {

enum class Op : uint8_t {
  Zero,
  One,
  Prefix,
  Seq,      // one node for both flavors; the flavor is an interpreter mode
  Alt,
  Par,
  Name,
  Star,
  Nesting
};

struct Expr;
using Term = const Expr*;

struct Expr {
  Op op;
  Action act;                          // Prefix
  Term a = nullptr;                    // left / body
  Term b = nullptr;                    // right
  std::vector<std::string> channels;   // Par; sorted, unique
  std::string name;                    // Name
  uint32_t id = 0;                     // interning order
  size_t hash = 0;
};

namespace detail {

inline size_t expr_content_hash(const Expr& e) {
  size_t h = static_cast<size_t>(e.op) * 1099511628211ull;
  h ^= ActionHash{}(e.act) + 0x9e3779b97f4a7c15ull + (h << 6) + (h >> 2);
  auto mix = [&h](size_t v) { h ^= v + 0x9e3779b97f4a7c15ull + (h << 6) + (h >> 2); };
  mix(e.a ? e.a->hash : 0);
  mix(e.b ? e.b->hash : 0);
  for (const auto& c : e.channels) mix(std::hash<std::string>{}(c));
  mix(std::hash<std::string>{}(e.name));
  return h;
}

inline bool expr_content_eq(const Expr& x, const Expr& y) {
  return x.op == y.op && x.act == y.act && x.a == y.a && x.b == y.b &&
         x.channels == y.channels && x.name == y.name;
}

struct InternHash {
  size_t operator()(const Expr* e) const { return e->hash; }
};
struct InternEq {
  bool operator()(const Expr* x, const Expr* y) const {
    return expr_content_eq(*x, *y);
  }
};

}  // namespace detail

// Hash-consing term factory. Pointer equality on Term is structural equality.
// Not thread-safe; confine a factory (and everything derived from its terms)
// to one worker.
class TermFactory {
 public:
  TermFactory() {
    zero_ = intern(Expr{Op::Zero});
    one_ = intern(Expr{Op::One});
  }

  Term zero() const { return zero_; }
  Term one() const { return one_; }

  Term prefix(Action a, Term body) {
    Expr e{Op::Prefix};
    e.act = std::move(a);
    e.a = body;
    return intern(std::move(e));
  }

  // Bare action shorthand: `a` means `a.1`.
  Term act(Action a) { return prefix(std::move(a), one()); }

  Term seq(Term l, Term r) {
    Expr e{Op::Seq};
    e.a = l;
    e.b = r;
    return intern(std::move(e));
  }

  Term alt(Term l, Term r) {
    Expr e{Op::Alt};
    e.a = l;
    e.b = r;
    return intern(std::move(e));
  }

  Term par(Term l, Term r, std::vector<std::string> channels) {
    std::sort(channels.begin(), channels.end());
    channels.erase(std::unique(channels.begin(), channels.end()),
                   channels.end());
    Expr e{Op::Par};
    e.a = l;
    e.b = r;
    e.channels = std::move(channels);
    return intern(std::move(e));
  }

  Term name(std::string n) {
    Expr e{Op::Name};
    e.name = std::move(n);
    return intern(std::move(e));
  }

  Term star(Term body) {
    Expr e{Op::Star};
    e.a = body;
    return intern(std::move(e));
  }

  Term nest(Term l, Term r) {
    Expr e{Op::Nesting};
    e.a = l;
    e.b = r;
    return intern(std::move(e));
  }

  // (a + 1), the paper's ubiquitous unit summand
  Term unit(Action a) { return alt(act(std::move(a)), one()); }

  // a1 + a2 + ... as prefixes onto 1; empty sum is 0
  Term act_sum(const std::vector<Action>& as) {
    if (as.empty()) return zero();
    Term t = act(as[0]);
    for (size_t i = 1; i < as.size(); ++i) t = alt(t, act(as[i]));
    return t;
  }

  // right-nested t^n (t^0 = 1)
  Term power(Term t, size_t n) {
    Term r = one();
    for (size_t i = 0; i < n; ++i) r = seq(t, r);
    return r;
  }

  size_t size() const { return pool_.size(); }

 private:
  Term intern(Expr&& e) {
    e.hash = detail::expr_content_hash(e);
    auto it = table_.find(&e);
    if (it != table_.end()) return *it;
    e.id = static_cast<uint32_t>(pool_.size());
    pool_.push_back(std::move(e));
    Term t = &pool_.back();
    table_.insert(t);
    return t;
  }

  std::deque<Expr> pool_;
  std::unordered_set<Term, detail::InternHash, detail::InternEq> table_;
  Term zero_ = nullptr;
  Term one_ = nullptr;
};

// Canonical structural order, independent of interning order. Used to make
// successor lists and state numbering reproducible across runs.
inline int term_cmp(Term x, Term y) {
  if (x == y) return 0;
  if (x->op != y->op) return x->op < y->op ? -1 : 1;
  if (auto c = x->act <=> y->act; c != 0) return c < 0 ? -1 : 1;
  if (x->name != y->name) return x->name < y->name ? -1 : 1;
  if (x->channels != y->channels) return x->channels < y->channels ? -1 : 1;
  if (x->a != y->a) {
    if (!x->a || !y->a) return !x->a ? -1 : 1;
    if (int c = term_cmp(x->a, y->a)) return c;
  }
  if (x->b != y->b) {
    if (!x->b || !y->b) return !x->b ? -1 : 1;
    if (int c = term_cmp(x->b, y->b)) return c;
  }
  return 0;
}

// --- pretty printing ------------------------------------------------------
//
// Precedence, loosest to tightest: + | ; | a.P | postfix * | atoms.
// Prefix(a, 1) prints as the bare action.

namespace detail {

enum Prec { PrecAlt = 0, PrecSeq = 1, PrecPrefix = 2, PrecPostfix = 3 };

inline void print_term(std::string& out, Term t, int min_prec) {
  switch (t->op) {
    case Op::Zero: out += '0'; return;
    case Op::One: out += '1'; return;
    case Op::Name: out += t->name; return;
    case Op::Prefix:
      if (t->a->op == Op::One) {  // bare action, atom-level
        out += t->act.str();
        return;
      }
      if (min_prec > PrecPrefix) {
        out += '(';
        print_term(out, t, PrecAlt);
        out += ')';
        return;
      }
      out += t->act.str();
      out += '.';
      print_term(out, t->a, PrecPrefix);
      return;
    case Op::Alt:
      if (min_prec > PrecAlt) {
        out += '(';
        print_term(out, t, PrecAlt);
        out += ')';
        return;
      }
      print_term(out, t->a, PrecAlt);
      out += " + ";
      print_term(out, t->b, PrecSeq);
      return;
    case Op::Seq:
      if (min_prec > PrecSeq) {
        out += '(';
        print_term(out, t, PrecAlt);
        out += ')';
        return;
      }
      print_term(out, t->a, PrecPrefix);
      out += " ; ";
      print_term(out, t->b, PrecSeq);  // right-associative
      return;
    case Op::Star: {
      // bare actions and atoms take the postfix star directly
      Term body = t->a;
      bool atom = body->op == Op::Zero || body->op == Op::One ||
                  body->op == Op::Name || body->op == Op::Nesting ||
                  body->op == Op::Par || body->op == Op::Star ||
                  (body->op == Op::Prefix && body->a->op == Op::One);
      if (atom) {
        print_term(out, body, PrecPostfix);
      } else {
        out += '(';
        print_term(out, body, PrecAlt);
        out += ')';
      }
      out += '*';
      return;
    }
    case Op::Nesting:
      out += "nest(";
      print_term(out, t->a, PrecAlt);
      out += ", ";
      print_term(out, t->b, PrecAlt);
      out += ')';
      return;
    case Op::Par:
      out += '[';
      print_term(out, t->a, PrecAlt);
      out += " || ";
      print_term(out, t->b, PrecAlt);
      out += "]{";
      for (size_t i = 0; i < t->channels.size(); ++i) {
        if (i) out += ',';
        out += t->channels[i];
      }
      out += '}';
      return;
  }
}

}  // namespace detail

inline std::string pretty(Term t) {
  std::string out;
  detail::print_term(out, t, detail::PrecAlt);
  return out;
}

// Names referenced anywhere in t.
inline void collect_names(Term t, std::set<std::string>& out) {
  switch (t->op) {
    case Op::Name: out.insert(t->name); return;
    case Op::Zero:
    case Op::One: return;
    default:
      if (t->a) collect_names(t->a, out);
      if (t->b) collect_names(t->b, out);
  }
}

}  // namespace seqcal
