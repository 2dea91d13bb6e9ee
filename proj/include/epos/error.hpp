#ifndef EPOS_ERROR_HPP
#define EPOS_ERROR_HPP

#include <cstddef>
#include <stdexcept>
#include <string>

namespace epos {

/// Base class of every exception thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed formula, structure or DIMACS text. `position` is a byte offset
/// into the input (or a line number for line-oriented formats).
class ParseError : public Error {
 public:
  ParseError(const std::string& what, std::size_t position)
      : Error(what + " (at " + std::to_string(position) + ")"),
        position_(position) {}

  std::size_t position() const { return position_; }

 private:
  std::size_t position_;
};

/// Undeclared symbol, arity mismatch, or a formula that does not fit the
/// structure it is evaluated on.
class SignatureError : public Error {
 public:
  using Error::Error;
};

/// A configured resource limit would be exceeded. The message names the limit.
class LimitError : public Error {
 public:
  LimitError(const std::string& limit, const std::string& what)
      : Error(what + " [limit: " + limit + "]"), limit_(limit) {}

  const std::string& limit() const { return limit_; }

 private:
  std::string limit_;
};

/// An operation was called on input that violates its precondition.
class PreconditionError : public Error {
 public:
  using Error::Error;
};

/// The localizer fast path was requested on a structure that is not known to
/// be locally refutable.
class NotLocallyRefutableError : public PreconditionError {
 public:
  using PreconditionError::PreconditionError;
};

}  // namespace epos

#endif  // EPOS_ERROR_HPP
