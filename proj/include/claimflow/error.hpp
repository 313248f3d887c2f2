#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace claimflow {

/// Base for every error raised by the engine.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Input data violates a contract (bad record, duplicate id, dangling reference...).
class DataError : public Error {
 public:
  DataError(std::string what, std::size_t record = 0)
      : Error(std::move(what)), record_(record) {}
  /// 1-based record (line) number in the source file, 0 when not file-backed.
  std::size_t record() const noexcept { return record_; }

 private:
  std::size_t record_;
};

class DanglingReferenceError : public DataError {
 public:
  DanglingReferenceError(std::string id, std::string what, std::size_t record = 0)
      : DataError(std::move(what), record), id_(std::move(id)) {}
  const std::string& id() const noexcept { return id_; }

 private:
  std::string id_;
};

/// Caller asked for something the inputs cannot answer (unknown id, empty set...).
class InvalidArgument : public Error {
 public:
  using Error::Error;
};

/// Gold and predicted instance keys disagree.
class KeyMismatchError : public Error {
 public:
  KeyMismatchError(std::string key, std::string what)
      : Error(std::move(what)), key_(std::move(key)) {}
  const std::string& key() const noexcept { return key_; }

 private:
  std::string key_;
};

class IoError : public Error {
 public:
  using Error::Error;
};

}  // namespace claimflow
