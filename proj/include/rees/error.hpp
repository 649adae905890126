#pragma once

#include <stdexcept>
#include <string>

namespace rees {

/// Base of every error the engine raises.
class Error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

class ContextMismatch : public Error {
public:
  ContextMismatch() : Error("polynomials live in different rings") {}
};

class ParseError : public Error {
public:
  ParseError(const std::string& what, std::size_t line = 0)
      : Error(line ? "line " + std::to_string(line) + ": " + what : what), line_(line) {}
  std::size_t line() const { return line_; }

private:
  std::size_t line_;
};

/// A computation exceeded a configured size cap.
class ResourceLimit : public Error {
public:
  using Error::Error;
};

class NotSimple : public Error {
public:
  using Error::Error;
};

class NotSingular : public Error {
public:
  using Error::Error;
};

/// No generator is monic in the requested variable with the right order.
class NoTransversal : public Error {
public:
  NoTransversal(std::size_t stage, const std::string& var, const std::string& detail = "")
      : Error("no transversal generator in variable " + var + " at elimination stage " +
              std::to_string(stage) + " (a linear_change may be needed)" +
              (detail.empty() ? "" : "; " + detail)),
        stage_(stage),
        var_(var) {}
  std::size_t stage() const { return stage_; }
  const std::string& var() const { return var_; }

private:
  std::size_t stage_;
  std::string var_;
};

class NonAdditiveInitialForm : public Error {
public:
  NonAdditiveInitialForm(std::size_t gen, const std::string& form)
      : Error("initial form " + form + " of generator " + std::to_string(gen) +
              " is not additive; tau undetermined"),
        gen_(gen) {}
  std::size_t generator() const { return gen_; }

private:
  std::size_t gen_;
};

class NotDivisible : public Error {
public:
  NotDivisible(std::size_t gen, const std::string& what)
      : Error("generator " + std::to_string(gen) + ": " + what), gen_(gen) {}
  std::size_t generator() const { return gen_; }

private:
  std::size_t gen_;
};

}  // namespace rees
