#include "mixlens/external_classifier.hpp"

#include <cerrno>
#include <cmath>
#include <cstring>
#include <numeric>
#include <set>
#include <thread>

#include <poll.h>
#include <signal.h>
#include <spawn.h>
#include <sys/socket.h>
#include <sys/wait.h>
#include <unistd.h>

#include <json.hpp>

#include "mixlens/errors.hpp"

extern char** environ;

namespace mixlens {
namespace {

using json = nlohmann::json;
using Clock = std::chrono::steady_clock;

std::vector<std::size_t> all_indices(std::size_t n) {
  std::vector<std::size_t> v(n);
  std::iota(v.begin(), v.end(), std::size_t{0});
  return v;
}

// Waits up to `timeout` for the child to exit; returns its status or -1.
int reap(int pid, std::chrono::milliseconds timeout) {
  const auto deadline = Clock::now() + timeout;
  while (true) {
    int status = 0;
    const int r = ::waitpid(pid, &status, WNOHANG);
    if (r == pid) return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    if (r < 0) return -1;
    if (Clock::now() >= deadline) return -2;
    std::this_thread::sleep_for(std::chrono::milliseconds(5));
  }
}

}  // namespace

ExternalClassifier::ExternalClassifier(int pid, int fd, ExternalOptions options)
    : pid_(pid), fd_(fd), options_(options) {}

std::unique_ptr<ExternalClassifier> ExternalClassifier::connect(const std::string& command,
                                                                const ExternalOptions& options) {
  int sv[2];
  if (::socketpair(AF_UNIX, SOCK_STREAM | SOCK_CLOEXEC, 0, sv) != 0) {
    throw ConnectionError(std::string("socketpair failed: ") + std::strerror(errno));
  }

  posix_spawn_file_actions_t actions;
  posix_spawn_file_actions_init(&actions);
  posix_spawn_file_actions_adddup2(&actions, sv[1], STDIN_FILENO);
  posix_spawn_file_actions_adddup2(&actions, sv[1], STDOUT_FILENO);
  // Own process group, so a hung classifier started through the shell can be
  // killed together with the shell.
  posix_spawnattr_t attr;
  posix_spawnattr_init(&attr);
  posix_spawnattr_setflags(&attr, POSIX_SPAWN_SETPGROUP);
  posix_spawnattr_setpgroup(&attr, 0);

  const char* argv[] = {"/bin/sh", "-c", command.c_str(), nullptr};
  pid_t pid = -1;
  const int rc = ::posix_spawn(&pid, "/bin/sh", &actions, &attr, const_cast<char**>(argv), environ);
  posix_spawnattr_destroy(&attr);
  posix_spawn_file_actions_destroy(&actions);
  ::close(sv[1]);
  if (rc != 0) {
    ::close(sv[0]);
    throw ConnectionError("cannot launch '" + command + "': " + std::strerror(rc));
  }

  std::unique_ptr<ExternalClassifier> handle(new ExternalClassifier(pid, sv[0], options));
  handle->handshake();
  return handle;
}

ExternalClassifier::~ExternalClassifier() { close(); }

void ExternalClassifier::send_line(const std::string& line) {
  std::string payload = line;
  payload.push_back('\n');
  std::size_t sent = 0;
  while (sent < payload.size()) {
    const ssize_t n = ::send(fd_, payload.data() + sent, payload.size() - sent, MSG_NOSIGNAL);
    if (n < 0) {
      if (errno == EINTR) continue;
      throw ConnectionError(std::string("write to classifier failed: ") + std::strerror(errno));
    }
    sent += static_cast<std::size_t>(n);
  }
}

std::string ExternalClassifier::read_line(std::chrono::milliseconds timeout) {
  const bool bounded = timeout.count() > 0;
  const auto deadline = Clock::now() + timeout;
  while (true) {
    const std::size_t nl = buffer_.find('\n');
    if (nl != std::string::npos) {
      std::string line = buffer_.substr(0, nl);
      buffer_.erase(0, nl + 1);
      if (!line.empty() && line.back() == '\r') line.pop_back();
      return line;
    }
    int wait_ms = -1;
    if (bounded) {
      const auto left =
          std::chrono::duration_cast<std::chrono::milliseconds>(deadline - Clock::now()).count();
      if (left <= 0) throw ConnectionError("timed out waiting for classifier response");
      wait_ms = static_cast<int>(left);
    }
    pollfd pfd{fd_, POLLIN, 0};
    const int ready = ::poll(&pfd, 1, wait_ms);
    if (ready < 0) {
      if (errno == EINTR) continue;
      throw ConnectionError(std::string("poll failed: ") + std::strerror(errno));
    }
    if (ready == 0) continue;
    char chunk[4096];
    const ssize_t n = ::recv(fd_, chunk, sizeof chunk, 0);
    if (n < 0) {
      if (errno == EINTR) continue;
      throw ConnectionError(std::string("read from classifier failed: ") + std::strerror(errno));
    }
    if (n == 0) throw ConnectionError("classifier closed its output");
    buffer_.append(chunk, static_cast<std::size_t>(n));
  }
}

void ExternalClassifier::handshake() {
  json reply;
  try {
    send_line(json{{"op", "handshake"}, {"version", 1}}.dump());
    const std::string line = read_line(options_.handshake_timeout);
    reply = json::parse(line);
  } catch (const json::exception& e) {
    close();
    throw ProtocolError(std::string("invalid handshake line: ") + e.what());
  } catch (const ConnectionError& e) {
    close();
    throw ConnectionError(std::string("handshake failed: ") + e.what());
  }

  try {
    if (!reply.is_object()) throw ProtocolError("handshake reply is not a JSON object");
    if (reply.contains("error")) {
      throw ProtocolError("classifier reported an error: " + reply["error"].dump());
    }
    classes_ = reply.at("classes").get<std::vector<std::string>>();
    if (classes_.empty()) throw ProtocolError("handshake declared no classes");
    if (std::set<std::string>(classes_.begin(), classes_.end()).size() != classes_.size()) {
      throw ProtocolError("handshake declared duplicate classes");
    }
    const long long limit = reply.value("batch_limit", 64LL);
    if (limit <= 0) throw ProtocolError("handshake batch_limit must be positive");
    batch_limit_ = static_cast<std::size_t>(limit);
    name_ = reply.value("name", "");
  } catch (const json::exception& e) {
    close();
    throw ProtocolError(std::string("malformed handshake: ") + e.what());
  } catch (const ProtocolError&) {
    close();
    throw;
  }
}

std::vector<ProbDist> ExternalClassifier::predict_proba(std::span<const std::string> texts) {
  std::lock_guard lock(mutex_);
  if (closed_) throw PredictionError("classifier handle is closed", all_indices(texts.size()));
  if (texts.size() > batch_limit_) {
    throw InputError("batch of " + std::to_string(texts.size()) + " exceeds batch_limit " +
                     std::to_string(batch_limit_));
  }
  if (texts.empty()) return {};

  json reply;
  try {
    send_line(json{{"op", "predict"}, {"texts", std::vector<std::string>(texts.begin(), texts.end())}}
                  .dump(-1, ' ', false, json::error_handler_t::replace));
    reply = json::parse(read_line(options_.response_timeout));
  } catch (const ConnectionError& e) {
    throw PredictionError(e.what(), all_indices(texts.size()));
  } catch (const json::exception& e) {
    throw ProtocolError(std::string("unparsable predict response: ") + e.what(),
                        all_indices(texts.size()));
  }

  auto fail = [&](const std::string& why) {
    return ProtocolError(why, all_indices(texts.size()));
  };
  if (!reply.is_object()) throw fail("predict response is not a JSON object");
  if (reply.contains("error")) throw fail("classifier reported an error: " + reply["error"].dump());
  const auto it = reply.find("probs");
  if (it == reply.end() || !it->is_array()) throw fail("predict response has no 'probs' array");
  if (it->size() != texts.size()) {
    throw fail("expected " + std::to_string(texts.size()) + " rows, got " +
               std::to_string(it->size()));
  }

  std::vector<ProbDist> out;
  out.reserve(texts.size());
  for (const json& row : *it) {
    if (!row.is_array() || row.size() != classes_.size()) {
      throw fail("probability row does not match the handshake class count");
    }
    ProbDist p;
    p.reserve(row.size());
    double sum = 0.0;
    for (const json& v : row) {
      if (!v.is_number()) throw fail("non-numeric probability");
      const double x = v.get<double>();
      if (!std::isfinite(x) || x < 0.0 || x > 1.0 + options_.normalization_tolerance) {
        throw fail("probability outside [0, 1]");
      }
      p.push_back(x);
      sum += x;
    }
    if (std::abs(sum - 1.0) > options_.normalization_tolerance) {
      throw fail("probability row sums to " + std::to_string(sum));
    }
    for (double& x : p) x = std::min(1.0, x / sum);
    out.push_back(std::move(p));
  }
  return out;
}

int ExternalClassifier::close() {
  std::lock_guard lock(mutex_);
  if (closed_) return exit_status_;
  closed_ = true;
  if (fd_ >= 0) {
    try {
      send_line(json{{"op", "shutdown"}}.dump());
    } catch (const Error&) {
      // Child already gone.
    }
    ::shutdown(fd_, SHUT_WR);
  }
  if (pid_ > 0) {
    int status = reap(pid_, std::chrono::milliseconds(2000));
    if (status == -2) {
      ::kill(-pid_, SIGKILL);
      ::waitpid(pid_, nullptr, 0);
      status = -1;
    }
    exit_status_ = status;
    pid_ = -1;
  }
  if (fd_ >= 0) {
    ::close(fd_);
    fd_ = -1;
  }
  return exit_status_;
}

std::unique_ptr<Classifier> connect_external(const std::string& command,
                                             const ExternalOptions& options) {
  return ExternalClassifier::connect(command, options);
}

}  // namespace mixlens
