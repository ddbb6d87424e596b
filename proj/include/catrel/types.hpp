#pragma once

#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <string>

namespace catrel {

enum class NodeId : std::uint32_t {};
enum class CatalystId : std::uint32_t {};
using EdgeIndex = std::size_t;

constexpr std::size_t index(NodeId v) { return static_cast<std::size_t>(v); }
constexpr std::size_t index(CatalystId c) { return static_cast<std::size_t>(c); }
constexpr NodeId node(std::size_t i) { return static_cast<NodeId>(i); }
constexpr CatalystId catalyst(std::size_t i) { return static_cast<CatalystId>(i); }

/// A graph reference that does not exist, or a path/tree that does not match
/// the graph it is applied to.
class StructuralError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// An exponential routine refused an input larger than its guard.
class GuardError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// An argument violates the documented precondition of an operation.
class PreconditionError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Malformed graph or query file; carries the 1-based line number.
class ParseError : public std::runtime_error {
 public:
  ParseError(std::size_t line, const std::string& what)
      : std::runtime_error("line " + std::to_string(line) + ": " + what), line_(line) {}
  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

}  // namespace catrel
