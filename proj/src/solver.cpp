#include "sqlbound/solver.hpp"

#include <cerrno>
#include <chrono>
#include <csignal>
#include <cstdlib>
#include <cstring>
#include <mutex>
#include <sstream>

#include <fcntl.h>
#include <poll.h>
#include <sys/wait.h>
#include <unistd.h>

#include "sqlbound/errors.hpp"

#ifndef SQLBOUND_DEFAULT_SOLVER
#define SQLBOUND_DEFAULT_SOLVER "z3"
#endif

namespace sqlbound {

namespace {

std::vector<std::string> split_args(const std::string& s) {
  std::vector<std::string> out;
  std::istringstream is(s);
  std::string w;
  while (is >> w) out.push_back(w);
  return out;
}

struct SExpr {
  std::string atom;
  std::vector<SExpr> list;
  bool is_list = false;
};

class SExprReader {
public:
  explicit SExprReader(const std::string& text) : s_(text) {}

  bool at_end() {
    skip();
    return i_ >= s_.size();
  }

  SExpr read() {
    skip();
    if (i_ >= s_.size()) throw InternalError("unexpected end of solver output");
    SExpr e;
    if (s_[i_] == '(') {
      ++i_;
      e.is_list = true;
      while (true) {
        skip();
        if (i_ >= s_.size()) throw InternalError("unbalanced solver output");
        if (s_[i_] == ')') {
          ++i_;
          break;
        }
        e.list.push_back(read());
      }
      return e;
    }
    if (s_[i_] == ')') throw InternalError("unexpected ')' in solver output");
    std::size_t start = i_;
    if (s_[i_] == '|') {
      i_ = s_.find('|', i_ + 1);
      if (i_ == std::string::npos) throw InternalError("unterminated |symbol| in solver output");
      ++i_;
    } else if (s_[i_] == '"') {
      ++i_;
      while (i_ < s_.size() && !(s_[i_] == '"' && (i_ + 1 >= s_.size() || s_[i_ + 1] != '"'))) i_ += s_[i_] == '"' ? 2 : 1;
      ++i_;
    } else {
      while (i_ < s_.size() && !std::isspace(static_cast<unsigned char>(s_[i_])) && s_[i_] != '(' && s_[i_] != ')') ++i_;
    }
    e.atom = s_.substr(start, i_ - start);
    return e;
  }

private:
  void skip() {
    while (i_ < s_.size()) {
      if (std::isspace(static_cast<unsigned char>(s_[i_]))) {
        ++i_;
      } else if (s_[i_] == ';') {
        while (i_ < s_.size() && s_[i_] != '\n') ++i_;
      } else {
        break;
      }
    }
  }

  const std::string& s_;
  std::size_t i_ = 0;
};

bool is_integer(const std::string& a) {
  if (a.empty()) return false;
  for (char c : a)
    if (!std::isdigit(static_cast<unsigned char>(c))) return false;
  return true;
}

smt::GroundValue ground(const SExpr& e) {
  if (!e.is_list) {
    if (e.atom == "true") return true;
    if (e.atom == "false") return false;
    if (is_integer(e.atom)) return static_cast<std::int64_t>(std::stoll(e.atom));
    return e.atom;
  }
  if (e.list.size() == 2 && !e.list[0].is_list && e.list[0].atom == "-" && !e.list[1].is_list &&
      is_integer(e.list[1].atom))
    return -static_cast<std::int64_t>(std::stoll(e.list[1].atom));
  std::ostringstream os;
  os << "(";
  for (std::size_t i = 0; i < e.list.size(); ++i) {
    smt::GroundValue v = ground(e.list[i]);
    os << (i ? " " : "");
    if (const auto* b = std::get_if<bool>(&v)) os << (*b ? "true" : "false");
    else if (const auto* n = std::get_if<std::int64_t>(&v)) os << *n;
    else os << std::get<std::string>(v);
  }
  os << ")";
  return os.str();
}

void ignore_sigpipe() {
  static std::once_flag once;
  std::call_once(once, [] { std::signal(SIGPIPE, SIG_IGN); });
}

void set_nonblocking(int fd) { fcntl(fd, F_SETFL, fcntl(fd, F_GETFL) | O_NONBLOCK); }

} // namespace

const char* to_string(SatStatus s) {
  switch (s) {
  case SatStatus::Sat: return "sat";
  case SatStatus::Unsat: return "unsat";
  case SatStatus::Unknown: return "unknown";
  }
  return "?";
}

SolverConfig SolverConfig::from_env() {
  SolverConfig c;
  const char* bin = std::getenv("SOLVER_BIN");
  c.binary = bin && *bin ? bin : SQLBOUND_DEFAULT_SOLVER;
  const char* args = std::getenv("SOLVER_ARGS");
  c.args = split_args(args ? args : "-in -smt2");
  return c;
}

const smt::GroundValue* Model::find(const smt::Term& t) const { return find(smt::print(t)); }

const smt::GroundValue* Model::find(const std::string& term_text) const {
  auto f = values_.find(term_text);
  return f == values_.end() ? nullptr : &f->second;
}

std::vector<smt::GroundValue> parse_get_value(const std::string& text) {
  SExprReader r(text);
  SExpr e = r.read();
  if (!e.is_list) throw InternalError("get-value answer is not a list: " + text.substr(0, 200));
  std::vector<smt::GroundValue> out;
  for (const auto& pair : e.list) {
    if (!pair.is_list || pair.list.size() != 2) throw InternalError("malformed get-value pair");
    out.push_back(ground(pair.list[1]));
  }
  return out;
}

SatResult check_sat(const std::string& script, std::int64_t timeout_ms, const std::vector<smt::Term>& values,
                    const SolverConfig& config) {
  ignore_sigpipe();
  auto start = std::chrono::steady_clock::now();
  SatResult res;
  auto elapsed = [&] {
    return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
  };
  if (timeout_ms <= 0) {
    res.reason = "timeout";
    return res;
  }

  int in[2], out[2], err[2];
  if (pipe(in) != 0 || pipe(out) != 0 || pipe(err) != 0) throw Error(std::string("pipe: ") + std::strerror(errno));
  pid_t pid = fork();
  if (pid < 0) throw Error(std::string("fork: ") + std::strerror(errno));
  if (pid == 0) {
    dup2(in[0], 0);
    dup2(out[1], 1);
    dup2(err[1], 2);
    for (int fd : {in[0], in[1], out[0], out[1], err[0], err[1]}) close(fd);
    std::vector<char*> argv;
    argv.push_back(const_cast<char*>(config.binary.c_str()));
    for (const auto& a : config.args) argv.push_back(const_cast<char*>(a.c_str()));
    argv.push_back(nullptr);
    execvp(argv[0], argv.data());
    std::fprintf(stderr, "cannot execute %s: %s\n", config.binary.c_str(), std::strerror(errno));
    _exit(127);
  }
  close(in[0]);
  close(out[1]);
  close(err[1]);
  set_nonblocking(in[1]);
  set_nonblocking(out[0]);
  set_nonblocking(err[0]);

  std::string stdout_text;
  std::size_t written = 0;
  int wfd = in[1], ofd = out[0], efd = err[0];
  bool timed_out = false;
  char buf[65536];
  while (ofd >= 0 || efd >= 0) {
    double left = static_cast<double>(timeout_ms) - elapsed();
    if (left <= 0) {
      timed_out = true;
      break;
    }
    std::vector<pollfd> fds;
    if (wfd >= 0) fds.push_back({wfd, POLLOUT, 0});
    if (ofd >= 0) fds.push_back({ofd, POLLIN, 0});
    if (efd >= 0) fds.push_back({efd, POLLIN, 0});
    int rc = poll(fds.data(), fds.size(), static_cast<int>(std::min(left, 1000.0)) + 1);
    if (rc < 0 && errno != EINTR) break;
    for (const auto& p : fds) {
      if (!p.revents) continue;
      if (p.fd == wfd) {
        ssize_t n = write(wfd, script.data() + written, script.size() - written);
        if (n > 0) written += static_cast<std::size_t>(n);
        if (n < 0 && errno != EAGAIN) written = script.size();
        if (written >= script.size()) {
          close(wfd);
          wfd = -1;
        }
      } else {
        int& fd = p.fd == ofd ? ofd : efd;
        ssize_t n = read(fd, buf, sizeof buf);
        if (n > 0) (p.fd == ofd ? stdout_text : res.stderr_text).append(buf, static_cast<std::size_t>(n));
        else if (n == 0 || errno != EAGAIN) {
          close(fd);
          fd = -1;
        }
      }
    }
  }
  for (int fd : {wfd, ofd, efd})
    if (fd >= 0) close(fd);
  int status = 0;
  if (timed_out) kill(pid, SIGKILL);
  waitpid(pid, &status, 0);
  res.elapsed_ms = elapsed();
  if (timed_out) {
    res.reason = "timeout";
    return res;
  }

  SExprReader r(stdout_text);
  std::string answer;
  try {
    if (!r.at_end()) answer = r.read().atom;
  } catch (const InternalError&) {
  }
  if (answer == "sat") {
    res.status = SatStatus::Sat;
  } else if (answer == "unsat") {
    res.status = SatStatus::Unsat;
    return res;
  } else if (answer == "unknown") {
    res.reason = "solver-unknown";
    return res;
  } else {
    res.reason = "solver-error";
    if (res.stderr_text.empty()) res.stderr_text = stdout_text;
    return res;
  }
  if (!values.empty()) {
    std::size_t first_line = stdout_text.find('\n');
    std::vector<smt::GroundValue> vs;
    try {
      vs = parse_get_value(first_line == std::string::npos ? "" : stdout_text.substr(first_line + 1));
    } catch (const InternalError& e) {
      res.status = SatStatus::Unknown;
      res.reason = "solver-error";
      res.stderr_text = e.what();
      return res;
    }
    if (vs.size() != values.size()) {
      res.status = SatStatus::Unknown;
      res.reason = "solver-error";
      res.stderr_text = "get-value returned " + std::to_string(vs.size()) + " of " +
                        std::to_string(values.size()) + " values";
      return res;
    }
    for (std::size_t i = 0; i < vs.size(); ++i) res.model.set(smt::print(values[i]), vs[i]);
  }
  return res;
}

} // namespace sqlbound
