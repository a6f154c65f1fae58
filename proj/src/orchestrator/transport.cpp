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


#include "placetune/orchestrator/transport.hpp"

#include <arpa/inet.h>
#include <netdb.h>
#include <netinet/in.h>
#include <netinet/tcp.h>
#include <poll.h>
#include <sys/socket.h>
#include <unistd.h>

#include <cerrno>
#include <chrono>
#include <cstring>
#include <stdexcept>

namespace placetune::orchestrator {

namespace {

struct Pipe {
  std::mutex mutex;
  std::condition_variable cv;
  std::deque<std::string> lines;
  bool closed = false;
};

class LocalChannel : public LineChannel {
 public:
  LocalChannel(std::shared_ptr<Pipe> in, std::shared_ptr<Pipe> out) : in_(std::move(in)), out_(std::move(out)) {}
  ~LocalChannel() override { close(); }

  bool write_line(const std::string& line) override {
    std::lock_guard lock(out_->mutex);
    if (out_->closed) return false;
    out_->lines.push_back(line);
    out_->cv.notify_one();
    return true;
  }

  ReadStatus read_line(std::string& out, double timeoutSeconds) override {
    std::unique_lock lock(in_->mutex);
    auto ready = [&] { return !in_->lines.empty() || in_->closed; };
    if (!in_->cv.wait_for(lock, std::chrono::duration<double>(std::max(0.0, timeoutSeconds)), ready)) {
      return ReadStatus::timeout;
    }
    if (in_->lines.empty()) return ReadStatus::closed;
    out = std::move(in_->lines.front());
    in_->lines.pop_front();
    return ReadStatus::line;
  }

  void close() override {
    for (auto* p : {in_.get(), out_.get()}) {
      std::lock_guard lock(p->mutex);
      p->closed = true;
      p->cv.notify_all();
    }
  }

 private:
  std::shared_ptr<Pipe> in_;
  std::shared_ptr<Pipe> out_;
};

int poll_ms(double seconds) { return seconds <= 0 ? 0 : static_cast<int>(seconds * 1000.0 + 0.5); }

}  // namespace

std::pair<std::shared_ptr<LineChannel>, std::shared_ptr<LineChannel>> make_local_channel() {
  auto a = std::make_shared<Pipe>();
  auto b = std::make_shared<Pipe>();
  return {std::make_shared<LocalChannel>(a, b), std::make_shared<LocalChannel>(b, a)};
}

SocketChannel::SocketChannel(int fd) : fd_(fd) {
  int one = 1;
  ::setsockopt(fd_, IPPROTO_TCP, TCP_NODELAY, &one, sizeof one);
}

SocketChannel::~SocketChannel() {
  close();
  ::close(fd_);
}

bool SocketChannel::write_line(const std::string& line) {
  std::lock_guard lock(writeMutex_);
  std::string data = line + "\n";
  std::size_t sent = 0;
  while (sent < data.size()) {
    ssize_t n = ::send(fd_, data.data() + sent, data.size() - sent, MSG_NOSIGNAL);
    if (n < 0 && errno == EINTR) continue;
    if (n <= 0) return false;
    sent += static_cast<std::size_t>(n);
  }
  return true;
}

ReadStatus SocketChannel::read_line(std::string& out, double timeoutSeconds) {
  const auto deadline = std::chrono::steady_clock::now() + std::chrono::duration<double>(timeoutSeconds);
  for (;;) {
    auto nl = buffer_.find('\n');
    if (nl != std::string::npos) {
      out = buffer_.substr(0, nl);
      buffer_.erase(0, nl + 1);
      return ReadStatus::line;
    }
    if (closed_) return ReadStatus::closed;
    double left = std::chrono::duration<double>(deadline - std::chrono::steady_clock::now()).count();
    pollfd p{fd_, POLLIN, 0};
    int r = ::poll(&p, 1, poll_ms(left));
    if (r < 0 && errno == EINTR) continue;
    if (r == 0) return ReadStatus::timeout;
    if (r < 0) {
      closed_ = true;
      continue;
    }
    char chunk[4096];
    ssize_t n = ::recv(fd_, chunk, sizeof chunk, 0);
    if (n < 0 && errno == EINTR) continue;
    if (n <= 0) {
      closed_ = true;
      continue;
    }
    buffer_.append(chunk, static_cast<std::size_t>(n));
  }
}

void SocketChannel::close() { ::shutdown(fd_, SHUT_RDWR); }

std::shared_ptr<SocketChannel> connect_to(const std::string& host, std::uint16_t port) {
  addrinfo hints{};
  hints.ai_family = AF_UNSPEC;
  hints.ai_socktype = SOCK_STREAM;
  addrinfo* res = nullptr;
  const std::string service = std::to_string(port);
  if (int rc = ::getaddrinfo(host.c_str(), service.c_str(), &hints, &res); rc != 0) {
    throw std::runtime_error("cannot resolve " + host + ": " + ::gai_strerror(rc));
  }
  int fd = -1;
  for (addrinfo* a = res; a; a = a->ai_next) {
    fd = ::socket(a->ai_family, a->ai_socktype, a->ai_protocol);
    if (fd < 0) continue;
    if (::connect(fd, a->ai_addr, a->ai_addrlen) == 0) break;
    ::close(fd);
    fd = -1;
  }
  ::freeaddrinfo(res);
  if (fd < 0) throw std::runtime_error("cannot connect to " + host + ":" + service);
  return std::make_shared<SocketChannel>(fd);
}

Listener::Listener(std::uint16_t port) {
  fd_ = ::socket(AF_INET, SOCK_STREAM, 0);
  if (fd_ < 0) throw std::runtime_error(std::string("socket: ") + std::strerror(errno));
  int one = 1;
  ::setsockopt(fd_, SOL_SOCKET, SO_REUSEADDR, &one, sizeof one);
  sockaddr_in addr{};
  addr.sin_family = AF_INET;
  addr.sin_addr.s_addr = htonl(INADDR_ANY);
  addr.sin_port = htons(port);
  if (::bind(fd_, reinterpret_cast<sockaddr*>(&addr), sizeof addr) != 0 || ::listen(fd_, 64) != 0) {
    std::string err = std::strerror(errno);
    ::close(fd_);
    throw std::runtime_error("cannot listen on port " + std::to_string(port) + ": " + err);
  }
  socklen_t len = sizeof addr;
  ::getsockname(fd_, reinterpret_cast<sockaddr*>(&addr), &len);
  port_ = ntohs(addr.sin_port);
}

Listener::~Listener() { close(); }

void Listener::close() {
  if (fd_ >= 0) {
    ::shutdown(fd_, SHUT_RDWR);
    ::close(fd_);
    fd_ = -1;
  }
}

std::shared_ptr<SocketChannel> Listener::accept(double timeoutSeconds) {
  if (fd_ < 0) return nullptr;
  pollfd p{fd_, POLLIN, 0};
  if (::poll(&p, 1, poll_ms(timeoutSeconds)) <= 0) return nullptr;
  int fd = ::accept(fd_, nullptr, nullptr);
  if (fd < 0) return nullptr;
  return std::make_shared<SocketChannel>(fd);
}

}  // namespace placetune::orchestrator
