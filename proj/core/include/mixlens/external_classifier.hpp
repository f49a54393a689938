#pragma once

#include <chrono>
#include <cstddef>
#include <memory>
#include <mutex>
#include <span>
#include <string>
#include <vector>

#include "mixlens/classifier.hpp"

namespace mixlens {

struct ExternalOptions {
  std::chrono::milliseconds handshake_timeout{30'000};
  /// Zero means wait indefinitely for predict responses.
  std::chrono::milliseconds response_timeout{0};
  /// Rows whose sum is further than this from 1 are rejected; closer rows
  /// are renormalized.
  double normalization_tolerance = 1e-3;
};

/// Child process speaking line-delimited JSON on stdin/stdout:
///
///   -> {"op":"handshake","version":1}
///   <- {"classes":[...],"batch_limit":64,"name":"..."}
///   -> {"op":"predict","texts":[...]}
///   <- {"probs":[[...],...]}
///   -> {"op":"shutdown"}
///
/// Requests are serialized; the object is safe to share between threads.
class ExternalClassifier final : public Classifier {
 public:
  /// Launches `command` through /bin/sh and performs the handshake.
  static std::unique_ptr<ExternalClassifier> connect(const std::string& command,
                                                     const ExternalOptions& options = {});

  ~ExternalClassifier() override;
  ExternalClassifier(const ExternalClassifier&) = delete;
  ExternalClassifier& operator=(const ExternalClassifier&) = delete;

  ClassifierKind kind() const noexcept override { return ClassifierKind::external; }
  const std::vector<std::string>& class_names() const noexcept override { return classes_; }
  std::size_t batch_limit() const noexcept override { return batch_limit_; }
  std::vector<ProbDist> predict_proba(std::span<const std::string> texts) override;

  const std::string& name() const noexcept { return name_; }

  /// Sends shutdown and reaps the child. Returns its exit status, or -1 if
  /// it had to be killed. Idempotent.
  int close();

 private:
  ExternalClassifier(int pid, int fd, ExternalOptions options);

  void send_line(const std::string& line);
  std::string read_line(std::chrono::milliseconds timeout);
  void handshake();

  int pid_ = -1;
  int fd_ = -1;
  ExternalOptions options_;
  std::string buffer_;
  std::vector<std::string> classes_;
  std::size_t batch_limit_ = 0;
  std::string name_;
  int exit_status_ = -1;
  bool closed_ = false;
  std::mutex mutex_;
};

/// Convenience wrapper around ExternalClassifier::connect.
std::unique_ptr<Classifier> connect_external(const std::string& command,
                                             const ExternalOptions& options = {});

}  // namespace mixlens
