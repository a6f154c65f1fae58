// Copyright 2026 The placetune Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.


#ifndef PLACETUNE_ORCHESTRATOR_TRANSPORT_HPP
#define PLACETUNE_ORCHESTRATOR_TRANSPORT_HPP

#include <condition_variable>
#include <cstdint>
#include <deque>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <utility>

namespace placetune::orchestrator {

enum class ReadStatus { line, timeout, closed };

/// Bidirectional, newline-delimited message stream. Writes are thread safe.
class LineChannel {
 public:
  virtual ~LineChannel() = default;
  virtual bool write_line(const std::string& line) = 0;
  virtual ReadStatus read_line(std::string& out, double timeoutSeconds) = 0;
  virtual void close() = 0;
};

/// In-process channel endpoints sharing two queues.
std::pair<std::shared_ptr<LineChannel>, std::shared_ptr<LineChannel>> make_local_channel();

/// TCP endpoint over a connected socket descriptor; owns the descriptor.
class SocketChannel : public LineChannel {
 public:
  explicit SocketChannel(int fd);
  ~SocketChannel() override;
  bool write_line(const std::string& line) override;
  ReadStatus read_line(std::string& out, double timeoutSeconds) override;
  void close() override;

 private:
  int fd_;
  std::mutex writeMutex_;
  std::string buffer_;
  bool closed_ = false;
};

/// Connects to HOST:PORT. Throws std::runtime_error on failure.
std::shared_ptr<SocketChannel> connect_to(const std::string& host, std::uint16_t port);

class Listener {
 public:
  /// Binds 0.0.0.0:port (0 picks a free port). Throws std::runtime_error.
  explicit Listener(std::uint16_t port);
  ~Listener();
  Listener(const Listener&) = delete;
  Listener& operator=(const Listener&) = delete;

  std::uint16_t port() const { return port_; }
  /// Waits up to timeoutSeconds for a connection.
  std::shared_ptr<SocketChannel> accept(double timeoutSeconds);
  void close();

 private:
  int fd_;
  std::uint16_t port_;
};

}  // namespace placetune::orchestrator

#endif  // PLACETUNE_ORCHESTRATOR_TRANSPORT_HPP
