#ifndef L1PT_ERRORS_HPP
#define L1PT_ERRORS_HPP

#include <stdexcept>
#include <string>
#include <vector>

namespace l1pt {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// An argument lies outside the domain of the operation.
class DomainError : public Error {
 public:
  using Error::Error;
};

/// A root-finding bracket does not contain a sign change.
class BracketError : public Error {
 public:
  using Error::Error;
};

/// An iterative procedure ran out of iterations. Carries the best iterate.
class ConvergenceError : public Error {
 public:
  ConvergenceError(const std::string& what, double best_iterate)
      : Error(what), best_iterate_(best_iterate) {}

  double best_iterate() const noexcept { return best_iterate_; }

 private:
  double best_iterate_;
};

/// Linear algebra failure: rank deficiency, singular subproblem.
class NumericalError : public Error {
 public:
  using Error::Error;
};

/// AMP residual blew up. `trace` holds the residual norm history.
class DivergenceError : public Error {
 public:
  DivergenceError(const std::string& what, std::vector<double> trace)
      : Error(what), trace_(std::move(trace)) {}

  const std::vector<double>& trace() const noexcept { return trace_; }

 private:
  std::vector<double> trace_;
};

/// Invalid ensemble or problem specification.
class SpecError : public Error {
 public:
  using Error::Error;
};

/// Malformed CSV/JSON input. `line` is 1-based, 0 when not applicable.
class ParseError : public Error {
 public:
  ParseError(const std::string& what, std::size_t line)
      : Error(what), line_(line) {}

  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

}  // namespace l1pt

#endif  // L1PT_ERRORS_HPP
