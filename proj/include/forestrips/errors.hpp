#pragma once

#include <stdexcept>
#include <string>

namespace frips {

/// Base class for all library errors.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

/// Two scalars from different quadratic fields were combined.
class FieldMismatchError : public Error {
public:
    using Error::Error;
};

/// Division by zero and friends.
class ArithmeticError : public Error {
public:
    using Error::Error;
};

/// Malformed textual input (scalar expressions, documents).
class ParseError : public Error {
public:
    explicit ParseError(const std::string& msg, std::string where = {})
        : Error(where.empty() ? msg : msg + " (at " + where + ")"), where_(std::move(where)) {}
    const std::string& where() const { return where_; }

private:
    std::string where_;
};

/// A structural invariant of a loaded or constructed object is violated.
class ValidationError : public Error {
public:
    explicit ValidationError(const std::string& msg, std::string path = {})
        : Error(path.empty() ? msg : msg + " [" + path + "]"), path_(std::move(path)) {}
    const std::string& path() const { return path_; }

private:
    std::string path_;
};

/// Geometric query outside its defined range (different components, empty hull).
class GeometryError : public Error {
public:
    using Error::Error;
};

/// A point was fed to a partial isometry outside its domain.
class DomainError : public Error {
public:
    using Error::Error;
};

/// An operation's stated precondition does not hold for the given system.
class PreconditionError : public Error {
public:
    using Error::Error;
};

/// Three distinct domains share a non-degenerate arc; carries a witness description.
class TripleOverlapError : public Error {
public:
    explicit TripleOverlapError(const std::string& msg, std::string witness = {})
        : Error(msg), witness_(std::move(witness)) {}
    const std::string& witness() const { return witness_; }

private:
    std::string witness_;
};

/// A step or node budget ran out before the computation finished.
class BudgetError : public Error {
public:
    using Error::Error;
};

/// A relation that must hold by construction failed; indicates a bug
/// or an inconsistent independence declaration.
class InternalError : public Error {
public:
    using Error::Error;
};

} // namespace frips
