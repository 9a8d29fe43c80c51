#pragma once

#include <stdexcept>
#include <string>

namespace seqcal {

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct SyntaxError : Error {
  int line, col;
  SyntaxError(const std::string& msg, int line_, int col_)
      : Error("syntax error at " + std::to_string(line_) + ":" +
              std::to_string(col_) + ": " + msg),
        line(line_),
        col(col_) {}
};

struct ReservedWordError : Error {
  ReservedWordError(const std::string& word, int line, int col)
      : Error("reserved word '" + word + "' misused at " +
              std::to_string(line) + ":" + std::to_string(col)) {}
};

struct DuplicateDefinition : Error {
  explicit DuplicateDefinition(const std::string& name)
      : Error("duplicate definition of '" + name + "'") {}
};

struct UndefinedName : Error {
  std::string name;
  explicit UndefinedName(const std::string& n)
      : Error("undefined name '" + n + "'"), name(n) {}
};

struct UnguardedRecursion : Error {
  explicit UnguardedRecursion(const std::string& what)
      : Error("unguarded recursion: " + what) {}
};

struct NotGnf : Error {
  std::string name;
  NotGnf(const std::string& n, const std::string& why)
      : Error("equation '" + n + "' is not in Greibach normal form: " + why),
        name(n) {}
};

struct LimitZero : Error {
  LimitZero() : Error("exploration limits must be positive") {}
};

struct FrontierPresent : Error {
  FrontierPresent()
      : Error("operation requires a frontier-free transition system") {}
};

struct ChannelCollision : Error {
  explicit ChannelCollision(const std::string& chan)
      : Error("channel '" + chan + "' collides with a reserved channel") {}
};

struct NonRegularShape : Error {
  explicit NonRegularShape(const std::string& why)
      : Error("specification is not in regular shape: " + why) {}
};

struct IoError : Error {
  explicit IoError(const std::string& what) : Error("io: " + what) {}
};

}  // namespace seqcal
