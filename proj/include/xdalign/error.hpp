#pragma once

#include <stdexcept>
#include <string>

namespace xdalign {

// Base of every error raised by the toolkit. Subclasses carry the category
// so callers (and the CLI) can report which contract was violated.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ParseError : public Error {
 public:
  using Error::Error;
};

class ValidationError : public Error {
 public:
  using Error::Error;
};

class ProviderError : public Error {
 public:
  using Error::Error;
};

class IntegrityError : public Error {
 public:
  using Error::Error;
};

class NormalizationError : public Error {
 public:
  using Error::Error;
};

class FormatError : public Error {
 public:
  using Error::Error;
};

class LengthError : public Error {
 public:
  using Error::Error;
};

class MissingVectorError : public Error {
 public:
  using Error::Error;
};

}  // namespace xdalign
