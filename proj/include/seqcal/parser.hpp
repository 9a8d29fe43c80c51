#pragma once

#include <cctype>
#include <map>
#include <string>
#include <vector>

#include "errors.hpp"
#include "term.hpp"

namespace seqcal {

// Recursive specification environment: at most one equation per name, every
// referenced name defined.
struct RecSpec {
  std::vector<std::string> order;          // definition order; index 0 is X_0
  std::map<std::string, Term> equations;

  bool has(const std::string& n) const { return equations.count(n) != 0; }
  Term body(const std::string& n) const {
    auto it = equations.find(n);
    if (it == equations.end()) throw UndefinedName(n);
    return it->second;
  }
};

// Concrete syntax
//   expr     := seq ('+' seq)*                      left-associative
//   seq      := pre (';' seq)?                      right-associative
//   pre      := action '.' pre | post
//   post     := atom '*'*
//   atom     := '0' | '1' | Name | action | 'nest' '(' expr ',' expr ')'
//             | '[' expr '||' expr ']' '{' chans '}' | '(' expr ')'
//   action   := 'tau' | ident | ident '!' datum | ident '?' datum
//
// Identifiers starting with an upper-case letter are process names; all
// others are actions (a bare action is shorthand for action-prefix onto 1).
// '#' starts a comment until end of line.
class Parser {
 public:
  explicit Parser(std::string text, TermFactory& f)
      : src_(std::move(text)), f_(f) {}

  Term parse_term() {
    Term t = expr();
    skip_ws();
    if (!eof()) fail("trailing input");
    return t;
  }

  // One `Name = expr` per line.
  RecSpec parse_spec() {
    RecSpec spec;
    while (true) {
      skip_ws();
      if (eof()) break;
      int l = line_, c = col_;
      if (peek() == '0' || peek() == '1')
        throw ReservedWordError(std::string(1, peek()), l, c);
      std::string lhs = ident();
      if (lhs == "tau" || lhs == "nest")
        throw ReservedWordError(lhs, l, c);
      if (!std::isupper(static_cast<unsigned char>(lhs[0])))
        fail("equation name must start with an upper-case letter");
      skip_ws();
      expect('=');
      Term rhs = expr();
      if (spec.equations.count(lhs)) throw DuplicateDefinition(lhs);
      spec.order.push_back(lhs);
      spec.equations.emplace(lhs, rhs);
      skip_ws();
    }
    // every referenced name needs a defining equation
    std::set<std::string> used;
    for (const auto& [n, body] : spec.equations) collect_names(body, used);
    for (const auto& n : used)
      if (!spec.has(n)) throw UndefinedName(n);
    return spec;
  }

 private:
  std::string src_;
  size_t pos_ = 0;
  int line_ = 1, col_ = 1;
  TermFactory& f_;

  bool eof() const { return pos_ >= src_.size(); }
  char peek() const { return eof() ? '\0' : src_[pos_]; }
  char peek2() const { return pos_ + 1 < src_.size() ? src_[pos_ + 1] : '\0'; }

  char advance() {
    char ch = src_[pos_++];
    if (ch == '\n') {
      ++line_;
      col_ = 1;
    } else {
      ++col_;
    }
    return ch;
  }

  void skip_ws() {
    while (!eof()) {
      char ch = peek();
      if (ch == '#') {
        while (!eof() && peek() != '\n') advance();
      } else if (std::isspace(static_cast<unsigned char>(ch))) {
        advance();
      } else {
        break;
      }
    }
  }

  [[noreturn]] void fail(const std::string& msg) const {
    throw SyntaxError(msg, line_, col_);
  }

  void expect(char ch) {
    skip_ws();
    if (peek() != ch) fail(std::string("expected '") + ch + "'");
    advance();
  }

  bool accept(char ch) {
    skip_ws();
    if (peek() == ch) {
      advance();
      return true;
    }
    return false;
  }

  static bool ident_start(char c) {
    return std::isalpha(static_cast<unsigned char>(c)) || c == '_';
  }
  static bool ident_char(char c) {
    return std::isalnum(static_cast<unsigned char>(c)) || c == '_' ||
           c == '\'';
  }

  std::string ident() {
    skip_ws();
    if (!ident_start(peek())) fail("expected identifier");
    std::string s;
    while (!eof() && ident_char(peek())) s += advance();
    return s;
  }

  std::string datum() {
    skip_ws();
    if (!ident_start(peek()) && !std::isdigit(static_cast<unsigned char>(peek())))
      fail("expected datum");
    std::string s;
    while (!eof() && ident_char(peek())) s += advance();
    return s;
  }

  Term expr() {
    Term t = seq_expr();
    while (true) {
      skip_ws();
      if (peek() == '+') {
        advance();
        t = f_.alt(t, seq_expr());
      } else {
        break;
      }
    }
    return t;
  }

  Term seq_expr() {
    Term l = pre_expr();
    skip_ws();
    if (peek() == ';') {
      advance();
      return f_.seq(l, seq_expr());
    }
    return l;
  }

  // Returns an Action for lower-case identifiers (after ! / ? resolution).
  Action action_tail(std::string head, int l, int c) {
    skip_ws();
    if (peek() == '!' || peek() == '?') {
      bool send = peek() == '!';
      if (head == "tau") throw ReservedWordError("tau", l, c);
      advance();
      std::string d = datum();
      return send ? Action::send(head, d) : Action::recv(head, d);
    }
    if (head == "tau") return Action::tau();
    return Action::plain(head);
  }

  Term pre_expr() {
    skip_ws();
    if (ident_start(peek())) {
      int l = line_, c = col_;
      size_t save_pos = pos_;
      int save_line = line_, save_col = col_;
      std::string id = ident();
      if (id == "nest") {
        // roll back; nest(...) is an atom
        pos_ = save_pos;
        line_ = save_line;
        col_ = save_col;
        return post_expr();
      }
      if (std::isupper(static_cast<unsigned char>(id[0]))) {
        pos_ = save_pos;
        line_ = save_line;
        col_ = save_col;
        return post_expr();
      }
      Action a = action_tail(id, l, c);
      skip_ws();
      if (peek() == '.') {
        advance();
        return f_.prefix(a, pre_expr());
      }
      // bare action means a.1; allow postfix stars
      Term t = f_.act(a);
      while (accept('*')) t = f_.star(t);
      return t;
    }
    return post_expr();
  }

  Term post_expr() {
    Term t = atom();
    while (accept('*')) t = f_.star(t);
    return t;
  }

  Term atom() {
    skip_ws();
    if (eof()) fail("unexpected end of input");
    char ch = peek();
    if (ch == '0') {
      advance();
      return f_.zero();
    }
    if (ch == '1') {
      advance();
      return f_.one();
    }
    if (ch == '(') {
      advance();
      Term t = expr();
      expect(')');
      return t;
    }
    if (ch == '[') {
      advance();
      Term l = expr();
      skip_ws();
      if (!(peek() == '|' && peek2() == '|')) fail("expected '||'");
      advance();
      advance();
      Term r = expr();
      expect(']');
      expect('{');
      std::vector<std::string> chans;
      skip_ws();
      if (peek() != '}') {
        chans.push_back(ident());
        while (accept(',')) chans.push_back(ident());
      }
      expect('}');
      return f_.par(l, r, std::move(chans));
    }
    if (ident_start(ch)) {
      int l = line_, c = col_;
      std::string id = ident();
      if (id == "nest") {
        expect('(');
        Term a = expr();
        expect(',');
        Term b = expr();
        expect(')');
        return f_.nest(a, b);
      }
      if (std::isupper(static_cast<unsigned char>(id[0]))) return f_.name(id);
      return f_.act(action_tail(id, l, c));
    }
    fail("unexpected character");
  }
};

inline Term parse_process(const std::string& text, TermFactory& f) {
  return Parser(text, f).parse_term();
}

inline RecSpec parse_spec(const std::string& text, TermFactory& f) {
  return Parser(text, f).parse_spec();
}

}  // namespace seqcal
