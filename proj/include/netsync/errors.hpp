#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace netsync {

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class InvalidArgument : public Error {
 public:
  using Error::Error;
};

/// The absolute FIM is singular: some agents cannot reach any information
/// source (prior or reference). `unreachable` lists those agents.
class NotSynchronizable : public Error {
 public:
  NotSynchronizable(const std::string& what, std::vector<std::size_t> unreachable)
      : Error(what), unreachable_(std::move(unreachable)) {}
  const std::vector<std::size_t>& unreachable() const noexcept { return unreachable_; }

 private:
  std::vector<std::size_t> unreachable_;
};

/// The agent graph has more than one connected component.
class Disconnected : public Error {
 public:
  using Error::Error;
};

/// A transient state has zero total weight (no neighbours, no prior).
class DegenerateNode : public Error {
 public:
  DegenerateNode(const std::string& what, std::size_t node) : Error(what), node_(node) {}
  std::size_t node() const noexcept { return node_; }

 private:
  std::size_t node_;
};

/// An iterative or series evaluation hit its cap without converging.
class Diverged : public Error {
 public:
  using Error::Error;
};

class IoError : public Error {
 public:
  using Error::Error;
};

class ParseError : public Error {
 public:
  using Error::Error;
};

/// A memory or size guard tripped.
class ResourceLimit : public Error {
 public:
  using Error::Error;
};

std::string format_node_list(const std::vector<std::size_t>& nodes, std::size_t max_shown = 10);

}  // namespace netsync
