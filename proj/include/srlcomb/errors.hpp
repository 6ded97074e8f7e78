#pragma once

#include <stdexcept>
#include <string>

namespace srlcomb {

/// Malformed input text. `line` is 1-based; 0 when no line applies.
class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& what, int line, int column = 0)
      : std::runtime_error(format(what, line, column)), line_(line), column_(column) {}

  int line() const { return line_; }
  int column() const { return column_; }

 private:
  static std::string format(const std::string& what, int line, int column) {
    std::string out = "line " + std::to_string(line);
    if (column > 0) out += ", column " + std::to_string(column);
    return out + ": " + what;
  }

  int line_;
  int column_;
};

/// Documents that should describe the same sentences/predicates do not.
class AlignmentError : public std::runtime_error {
 public:
  AlignmentError(const std::string& what, int sentence)
      : std::runtime_error("sentence " + std::to_string(sentence) + ": " + what),
        sentence_(sentence) {}

  int sentence() const { return sentence_; }

 private:
  int sentence_;
};

/// A solution or candidate refers to something outside its sentence.
class StructuralError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A document cannot be written in the requested format.
class SerializationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A scoring model does not match the feature vocabulary it is applied to.
class ModelMismatchError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace srlcomb
