#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace clapim {

/// Root of the library's error hierarchy. Everything thrown on a bad input
/// or a violated contract derives from this.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A symbol outside {A,C,G,T} where a canonical base was required.
class InvalidBaseError : public Error {
 public:
  using Error::Error;
};

/// A histogram count does not fit the 6-bit field of the packed key.
class KeyOverflowError : public Error {
 public:
  using Error::Error;
};

/// Malformed input file; carries the 1-based line number when known.
class ParseError : public Error {
 public:
  ParseError(const std::string& what, std::size_t line)
      : Error(what + " (line " + std::to_string(line) + ")"), line_(line) {}
  explicit ParseError(const std::string& what) : Error(what) {}
  std::size_t line() const { return line_; }

 private:
  std::size_t line_ = 0;
};

/// Sequence lengths incompatible with the requested operation.
class LengthError : public Error {
 public:
  using Error::Error;
};

/// More k-mers than crossbar rows.
class CapacityError : public Error {
 public:
  using Error::Error;
};

/// Column indices collide or do not fit the crossbar layout.
class LayoutError : public Error {
 public:
  using Error::Error;
};

/// Search requested on a crossbar with no k-mers loaded.
class EmptyCrossbarError : public Error {
 public:
  using Error::Error;
};

/// Input shorter than the configured k-mer / read length.
class TooShortError : public Error {
 public:
  using Error::Error;
};

/// Inconsistent inputs while constructing a derived structure.
class BuildError : public Error {
 public:
  using Error::Error;
};

/// Corrupt or version-incompatible file.
class LoadError : public Error {
 public:
  using Error::Error;
};

/// Invalid runtime configuration value.
class ConfigError : public Error {
 public:
  using Error::Error;
};

}  // namespace clapim
