#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace zeroone {

// Base for all errors raised by the library. CLI maps subclasses to exit codes.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct SyntaxError : Error {
  std::size_t position;
  std::string expected;
  SyntaxError(std::size_t pos, std::string exp)
      : Error("syntax error at offset " + std::to_string(pos) + ": expected " + exp),
        position(pos),
        expected(std::move(exp)) {}
};

struct FreeVariableError : Error {
  std::string name;
  explicit FreeVariableError(std::string var)
      : Error("free variable: " + var), name(std::move(var)) {}
};

struct VocabularyError : Error {
  using Error::Error;
};

// Sentence evaluated on a partial function with undefined entries.
struct PartialModelError : Error {
  using Error::Error;
};

// Exact enumeration or oracle cost above the desk-scale cap.
struct TooLargeError : Error {
  using Error::Error;
};

struct ParityError : Error {
  using Error::Error;
};

struct ShapeError : Error {
  using Error::Error;
};

struct FaninError : Error {
  using Error::Error;
};

// Fixed-width rational arithmetic left the representable range.
struct RationalOverflowError : Error {
  using Error::Error;
};

struct IoError : Error {
  using Error::Error;
};

// Malformed model/circuit dump file.
struct FormatError : Error {
  using Error::Error;
};

}  // namespace zeroone
