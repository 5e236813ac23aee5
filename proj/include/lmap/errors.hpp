#pragma once

#include <stdexcept>
#include <string>

namespace lmap {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Invalid parameters or arguments supplied by the caller.
class UsageError : public Error {
 public:
  using Error::Error;
};

/// Input data that cannot be processed (unreadable files, bad schema, duplicate ids).
class DataError : public Error {
 public:
  using Error::Error;
};

class UnknownNode : public DataError {
 public:
  explicit UnknownNode(const std::string& id) : DataError("unknown node id '" + id + "'"), id_(id) {}
  const std::string& id() const noexcept { return id_; }

 private:
  std::string id_;
};

}  // namespace lmap
