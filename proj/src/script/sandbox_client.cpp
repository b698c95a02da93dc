#include "tabqa/script/sandbox_client.hpp"

#include <fcntl.h>
#include <poll.h>
#include <signal.h>
#include <spawn.h>
#include <sys/socket.h>
#include <sys/wait.h>
#include <unistd.h>

#include <cerrno>
#include <cstring>

#include <json.hpp>

#include "tabqa/error.hpp"
#include "tabqa/exact_json.hpp"

extern char** environ;

namespace tabqa::script {

using nlohmann::json;

std::string_view to_string(SandboxStatus s) noexcept {
  switch (s) {
    case SandboxStatus::Ok: return "ok";
    case SandboxStatus::Error: return "error";
    case SandboxStatus::Timeout: return "timeout";
  }
  return "error";
}

namespace {

[[noreturn]] void protocol(const std::string& what) { throw Error(ErrorKind::SandboxProtocol, what); }

json parse_object(std::string_view line) {
  json j;
  try {
    j = json_exact::parse(line);
  } catch (const std::exception& e) {
    protocol(std::string("malformed JSON: ") + e.what());
  }
  if (!j.is_object()) protocol("expected a JSON object");
  return j;
}

const json& field(const json& j, const char* key, json::value_t type) {
  auto it = j.find(key);
  if (it == j.end()) protocol(std::string("missing field '") + key + "'");
  if (it->type() != type &&
      !(type == json::value_t::number_integer && it->type() == json::value_t::number_unsigned)) {
    protocol(std::string("field '") + key + "' has the wrong type");
  }
  return *it;
}

}  // namespace

std::string request_to_json(const SandboxRequest& req) {
  json j = {{"id", req.id},
            {"code", req.code},
            {"table_csv_path", req.table_csv_path.string()},
            {"timeout_ms", req.timeout_ms}};
  return j.dump();
}

SandboxRequest request_from_json(std::string_view line) {
  json j = parse_object(line);
  SandboxRequest req;
  req.id = field(j, "id", json::value_t::string).get<std::string>();
  req.code = field(j, "code", json::value_t::string).get<std::string>();
  req.table_csv_path = field(j, "table_csv_path", json::value_t::string).get<std::string>();
  req.timeout_ms = field(j, "timeout_ms", json::value_t::number_integer).get<std::int64_t>();
  if (req.timeout_ms <= 0) protocol("timeout_ms must be positive");
  return req;
}

std::string response_to_json(const SandboxResponse& resp) {
  json j = {{"id", resp.id}, {"status", std::string(to_string(resp.status))}};
  if (resp.result) j["result"] = answer_to_json(*resp.result);
  if (resp.error_text) j["error_text"] = *resp.error_text;
  j["duration_ms"] = resp.duration_ms;
  return json_exact::dump(j);
}

SandboxResponse response_from_json(std::string_view line) {
  json j = parse_object(line);
  SandboxResponse resp;
  resp.id = field(j, "id", json::value_t::string).get<std::string>();
  std::string status = field(j, "status", json::value_t::string).get<std::string>();
  if (status == "ok") {
    resp.status = SandboxStatus::Ok;
  } else if (status == "error") {
    resp.status = SandboxStatus::Error;
  } else if (status == "timeout") {
    resp.status = SandboxStatus::Timeout;
  } else {
    protocol("unknown status '" + status + "'");
  }
  if (j.contains("result") && !j["result"].is_null()) {
    try {
      resp.result = answer_from_json(j["result"]);
    } catch (const Error& e) {
      protocol(std::string("result is not a canonical answer: ") + e.what());
    }
  }
  if (j.contains("error_text") && !j["error_text"].is_null()) {
    resp.error_text = field(j, "error_text", json::value_t::string).get<std::string>();
  }
  if (j.contains("duration_ms")) {
    resp.duration_ms = field(j, "duration_ms", json::value_t::number_integer).get<std::int64_t>();
    if (resp.duration_ms < 0) protocol("duration_ms must be non-negative");
  }
  if (resp.status == SandboxStatus::Ok && (!resp.result || resp.error_text)) {
    protocol("status ok requires a result and no error_text");
  }
  if (resp.status == SandboxStatus::Error && (!resp.error_text || resp.result)) {
    protocol("status error requires error_text and no result");
  }
  return resp;
}

namespace {

struct Fd {
  int fd = -1;
  Fd() = default;
  explicit Fd(int f) : fd(f) {}
  Fd(const Fd&) = delete;
  Fd& operator=(const Fd&) = delete;
  ~Fd() { reset(); }
  void reset() {
    if (fd >= 0) ::close(fd);
    fd = -1;
  }
};

struct SpawnActions {
  posix_spawn_file_actions_t actions;
  posix_spawnattr_t attr;
  SpawnActions() {
    posix_spawn_file_actions_init(&actions);
    posix_spawnattr_init(&attr);
  }
  ~SpawnActions() {
    posix_spawn_file_actions_destroy(&actions);
    posix_spawnattr_destroy(&attr);
  }
};

std::string errno_text(const char* what) { return std::string(what) + ": " + std::strerror(errno); }

void set_nonblocking(int fd) { ::fcntl(fd, F_SETFL, ::fcntl(fd, F_GETFL) | O_NONBLOCK); }

}  // namespace

SandboxClient::SandboxClient(std::vector<std::string> command, std::chrono::milliseconds grace)
    : command_(std::move(command)), grace_(grace) {
  if (command_.empty()) throw Error(ErrorKind::Config, "sandbox command is empty");
}

SandboxResponse SandboxClient::run(const SandboxRequest& req) const {
  using clock = std::chrono::steady_clock;
  const auto started = clock::now();
  const auto deadline = started + std::chrono::milliseconds(req.timeout_ms) + grace_;

  // stdin is a socket so a runner that exits early cannot SIGPIPE us.
  int stdin_pair[2];
  if (::socketpair(AF_UNIX, SOCK_STREAM | SOCK_CLOEXEC, 0, stdin_pair) != 0) protocol(errno_text("socketpair"));
  Fd in_parent(stdin_pair[0]), in_child(stdin_pair[1]);
  int out_pipe[2], err_pipe[2];
  if (::pipe2(out_pipe, O_CLOEXEC) != 0) protocol(errno_text("pipe"));
  Fd out_read(out_pipe[0]), out_write(out_pipe[1]);
  if (::pipe2(err_pipe, O_CLOEXEC) != 0) protocol(errno_text("pipe"));
  Fd err_read(err_pipe[0]), err_write(err_pipe[1]);

  SpawnActions spawn;
  posix_spawn_file_actions_adddup2(&spawn.actions, in_child.fd, STDIN_FILENO);
  posix_spawn_file_actions_adddup2(&spawn.actions, out_write.fd, STDOUT_FILENO);
  posix_spawn_file_actions_adddup2(&spawn.actions, err_write.fd, STDERR_FILENO);
  posix_spawnattr_setflags(&spawn.attr, POSIX_SPAWN_SETPGROUP | POSIX_SPAWN_SETSIGMASK | POSIX_SPAWN_SETSIGDEF);
  posix_spawnattr_setpgroup(&spawn.attr, 0);
  sigset_t empty, defaults;
  sigemptyset(&empty);
  sigemptyset(&defaults);
  sigaddset(&defaults, SIGPIPE);
  posix_spawnattr_setsigmask(&spawn.attr, &empty);
  posix_spawnattr_setsigdefault(&spawn.attr, &defaults);

  std::vector<char*> argv;
  for (const auto& a : command_) argv.push_back(const_cast<char*>(a.c_str()));
  argv.push_back(nullptr);

  pid_t pid = -1;
  int rc = ::posix_spawnp(&pid, argv[0], &spawn.actions, &spawn.attr, argv.data(), environ);
  if (rc != 0) protocol("cannot start sandbox '" + command_.front() + "': " + std::strerror(rc));
  in_child.reset();
  out_write.reset();
  err_write.reset();

  std::string payload = request_to_json(req) + "\n";
  std::size_t sent = 0;
  while (sent < payload.size()) {
    ssize_t n = ::send(in_parent.fd, payload.data() + sent, payload.size() - sent, MSG_NOSIGNAL);
    if (n < 0) {
      if (errno == EINTR) continue;
      break;  // runner closed stdin; its exit status tells the rest
    }
    sent += static_cast<std::size_t>(n);
  }
  ::shutdown(in_parent.fd, SHUT_WR);

  set_nonblocking(out_read.fd);
  set_nonblocking(err_read.fd);
  std::string out, err;
  bool timed_out = false;
  char buf[8192];
  while (out_read.fd >= 0 || err_read.fd >= 0) {
    auto remaining = std::chrono::duration_cast<std::chrono::milliseconds>(deadline - clock::now()).count();
    if (remaining <= 0) {
      timed_out = true;
      break;
    }
    pollfd fds[2];
    nfds_t nfds = 0;
    for (int fd : {out_read.fd, err_read.fd}) {
      if (fd >= 0) fds[nfds++] = {fd, POLLIN, 0};
    }
    int ready = ::poll(fds, nfds, static_cast<int>(remaining));
    if (ready < 0 && errno != EINTR) break;
    for (nfds_t i = 0; i < nfds && ready > 0; ++i) {
      if (!fds[i].revents) continue;
      Fd& src = fds[i].fd == out_read.fd ? out_read : err_read;
      std::string& sink = fds[i].fd == out_read.fd ? out : err;
      ssize_t n = ::read(src.fd, buf, sizeof buf);
      if (n > 0) {
        if (sink.size() < (1u << 20)) sink.append(buf, static_cast<std::size_t>(n));
      } else if (n == 0 || (errno != EAGAIN && errno != EINTR)) {
        src.reset();
      }
    }
  }

  // Wait for the leader without reaping it, so the group id stays reserved
  // while stragglers are killed.
  while (!timed_out) {
    siginfo_t info{};
    if (::waitid(P_PID, static_cast<id_t>(pid), &info, WEXITED | WNOHANG | WNOWAIT) == 0 && info.si_pid == pid) break;
    if (clock::now() >= deadline) {
      timed_out = true;
      break;
    }
    ::usleep(2000);
  }
  ::kill(-pid, SIGKILL);
  int wstatus = 0;
  while (::waitpid(pid, &wstatus, 0) < 0 && errno == EINTR) {
  }
  const auto elapsed = std::chrono::duration_cast<std::chrono::milliseconds>(clock::now() - started).count();

  if (timed_out) {
    SandboxResponse resp;
    resp.id = req.id;
    resp.status = SandboxStatus::Timeout;
    resp.duration_ms = elapsed;
    return resp;
  }
  auto tail = [](const std::string& s) { return s.size() > 2000 ? s.substr(s.size() - 2000) : s; };
  if (!WIFEXITED(wstatus) || WEXITSTATUS(wstatus) != 0) {
    std::string how = WIFEXITED(wstatus) ? "exited with status " + std::to_string(WEXITSTATUS(wstatus))
                                         : "was killed by signal " + std::to_string(WTERMSIG(wstatus));
    protocol("sandbox " + how + (err.empty() ? "" : ": " + tail(err)));
  }
  auto newline = out.find('\n');
  if (newline == std::string::npos) protocol("sandbox response is not newline-terminated");
  if (out.find_first_not_of(" \t\r\n", newline) != std::string::npos) protocol("sandbox wrote more than one line");
  SandboxResponse resp = response_from_json(std::string_view(out).substr(0, newline));
  if (resp.id != req.id) protocol("response id '" + resp.id + "' does not echo request id '" + req.id + "'");
  return resp;
}

}  // namespace tabqa::script
