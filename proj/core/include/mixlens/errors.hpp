#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace mixlens {

/// Base of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class IoError : public Error {
 public:
  using Error::Error;
};

/// Malformed dataset, vocabulary, model or explanation file.
class FormatError : public Error {
 public:
  using Error::Error;
};

/// Caller passed something outside an operation's domain.
class DomainError : public Error {
 public:
  using Error::Error;
};

/// Request too large to compute exhaustively.
class SizeError : public DomainError {
 public:
  using DomainError::DomainError;
};

class InputError : public Error {
 public:
  using Error::Error;
};

class TrainingError : public Error {
 public:
  using Error::Error;
};

class DivergenceError : public TrainingError {
 public:
  DivergenceError(std::string hyperparameter, const std::string& what)
      : TrainingError(what), hyperparameter_(std::move(hyperparameter)) {}

  const std::string& hyperparameter() const noexcept { return hyperparameter_; }

 private:
  std::string hyperparameter_;
};

class ConnectionError : public Error {
 public:
  using Error::Error;
};

/// The peer answered, but not in the wire format. When raised while
/// predicting, failed_indices() names the texts of the affected batch.
class ProtocolError : public Error {
 public:
  explicit ProtocolError(const std::string& what, std::vector<std::size_t> failed = {})
      : Error(what), failed_(std::move(failed)) {}

  const std::vector<std::size_t>& failed_indices() const noexcept { return failed_; }

 private:
  std::vector<std::size_t> failed_;
};

/// A batch of predictions failed. Indices refer to the caller's text list.
class PredictionError : public Error {
 public:
  PredictionError(const std::string& what, std::vector<std::size_t> failed)
      : Error(what), failed_(std::move(failed)) {}

  const std::vector<std::size_t>& failed_indices() const noexcept { return failed_; }

 private:
  std::vector<std::size_t> failed_;
};

}  // namespace mixlens
