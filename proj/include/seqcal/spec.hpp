#pragma once

#include <map>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "parser.hpp"

namespace seqcal {

// --- guardedness ------------------------------------------------------------
//
// An equation is flagged when its right-hand side exposes a name outside the
// scope of any action prefix. Exposure positions: Name itself, both sides of
// Alt / Par / Nesting, Star bodies, Seq left operands, and Seq right operands
// when the left operand may terminate syntactically. The analysis
// over-approximates (rejects borderline cases) so that negative-premise
// evaluation is guaranteed to terminate on accepted specifications.

struct GuardOffence {
  std::string name;                 // offending equation
  std::vector<std::string> exposed; // names reachable without a prefix
};

struct GuardReport {
  bool ok = true;
  std::vector<GuardOffence> offenders;
  std::string policy =
      "conservative: Seq-right exposure assumed whenever the left operand "
      "may terminate syntactically";

  std::string str() const {
    if (ok) return "guarded";
    std::ostringstream os;
    os << "unguarded:";
    for (const auto& o : offenders) {
      os << ' ' << o.name << " (exposes";
      for (const auto& e : o.exposed) os << ' ' << e;
      os << ')';
    }
    os << "; " << policy;
    return os.str();
  }
};

namespace detail {

// May the term terminate, judged syntactically? Names unfold; revisits count
// as "may terminate" to stay conservative.
inline bool syn_term(Term t, const RecSpec& spec, std::set<Term>& visiting) {
  switch (t->op) {
    case Op::One:
    case Op::Star: return true;
    case Op::Zero:
    case Op::Prefix: return false;
    case Op::Alt:
      return syn_term(t->a, spec, visiting) || syn_term(t->b, spec, visiting);
    case Op::Seq:
    case Op::Par:
      return syn_term(t->a, spec, visiting) && syn_term(t->b, spec, visiting);
    case Op::Nesting: return syn_term(t->b, spec, visiting);
    case Op::Name: {
      if (!visiting.insert(t).second) return true;
      bool r = syn_term(spec.body(t->name), spec, visiting);
      visiting.erase(t);
      return r;
    }
  }
  return true;
}

inline void exposed_names(Term t, const RecSpec& spec,
                          std::set<std::string>& out) {
  switch (t->op) {
    case Op::Zero:
    case Op::One:
    case Op::Prefix: return;
    case Op::Name: out.insert(t->name); return;
    case Op::Alt:
    case Op::Par:
    case Op::Nesting:
      exposed_names(t->a, spec, out);
      exposed_names(t->b, spec, out);
      return;
    case Op::Star: exposed_names(t->a, spec, out); return;
    case Op::Seq: {
      exposed_names(t->a, spec, out);
      std::set<Term> visiting;
      if (syn_term(t->a, spec, visiting)) exposed_names(t->b, spec, out);
      return;
    }
  }
}

}  // namespace detail

inline GuardReport check_guarded(const RecSpec& spec) {
  GuardReport rep;
  for (const auto& n : spec.order) {
    std::set<std::string> exposed;
    detail::exposed_names(spec.equations.at(n), spec, exposed);
    if (!exposed.empty()) {
      rep.ok = false;
      rep.offenders.push_back(
          {n, std::vector<std::string>(exposed.begin(), exposed.end())});
    }
  }
  return rep;
}

// --- Greibach normal form ----------------------------------------------------
//
// Every equation must be a sum of summands a.xi with xi a possibly empty,
// right-nested sequence of names, plus optionally a single 1 summand. The
// empty sum is 0.

struct GnfSummand {
  Action act;
  std::vector<std::string> tail;  // xi; empty sequence is 1
};

struct GnfEquation {
  std::vector<GnfSummand> summands;
  bool has_one = false;  // the optional (+1)
};

struct GnfSpec {
  std::vector<std::string> variables;        // X_0 .. X_m, definition order
  std::map<std::string, GnfEquation> equations;

  const GnfEquation& eq(const std::string& n) const {
    auto it = equations.find(n);
    if (it == equations.end()) throw UndefinedName(n);
    return it->second;
  }
};

namespace detail {

inline std::vector<std::string> gnf_tail(Term t, const std::string& eq_name) {
  std::vector<std::string> tail;
  while (true) {
    if (t->op == Op::One) return tail;
    if (t->op == Op::Name) {
      tail.push_back(t->name);
      return tail;
    }
    if (t->op == Op::Seq && t->a->op == Op::Name) {
      tail.push_back(t->a->name);
      t = t->b;
      continue;
    }
    throw NotGnf(eq_name, "summand tail is not a sequence of names: '" +
                              pretty(t) + "'");
  }
}

inline void gnf_summands(Term t, const std::string& eq_name, GnfEquation& out) {
  if (t->op == Op::Alt) {
    gnf_summands(t->a, eq_name, out);
    gnf_summands(t->b, eq_name, out);
    return;
  }
  if (t->op == Op::One) {
    out.has_one = true;
    return;
  }
  if (t->op == Op::Prefix) {
    out.summands.push_back({t->act, gnf_tail(t->a, eq_name)});
    return;
  }
  throw NotGnf(eq_name, "summand is not an action prefix: '" + pretty(t) + "'");
}

}  // namespace detail

inline GnfSpec validate_gnf(const RecSpec& spec) {
  GnfSpec g;
  g.variables = spec.order;
  std::set<std::string> vars(spec.order.begin(), spec.order.end());
  for (const auto& n : spec.order) {
    GnfEquation eq;
    Term body = spec.equations.at(n);
    if (body->op != Op::Zero)  // the empty sum is 0
      detail::gnf_summands(body, n, eq);
    for (const auto& s : eq.summands)
      for (const auto& v : s.tail)
        if (!vars.count(v)) throw UndefinedName(v);
    g.equations.emplace(n, std::move(eq));
  }
  return g;
}

// Rebuild the recursive specification a GnfSpec denotes. validate_gnf of the
// result is a fixpoint.
inline RecSpec gnf_to_recspec(const GnfSpec& g, TermFactory& f) {
  RecSpec spec;
  spec.order = g.variables;
  for (const auto& v : g.variables) {
    const GnfEquation& eq = g.eq(v);
    Term body = nullptr;
    for (const auto& s : eq.summands) {
      Term tail = f.one();
      for (auto it = s.tail.rbegin(); it != s.tail.rend(); ++it)
        tail = tail->op == Op::One ? f.name(*it) : f.seq(f.name(*it), tail);
      Term summand = f.prefix(s.act, tail);
      body = body ? f.alt(body, summand) : summand;
    }
    if (eq.has_one) body = body ? f.alt(body, f.one()) : f.one();
    if (!body) body = f.zero();
    spec.equations.emplace(v, body);
  }
  return spec;
}

}  // namespace seqcal
