#pragma once

#include <fcntl.h>
#include <signal.h>
#include <sys/wait.h>
#include <unistd.h>

#include <array>
#include <chrono>
#include <cstdio>
#include <filesystem>
#include <map>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "json.hpp"

namespace maass::testing {

struct CliResult {
  int status = -1;
  std::string out;
};

inline std::string shell_quote(const std::string& s) {
  std::string q = "'";
  for (char c : s) q += c == '\'' ? std::string("'\\''") : std::string(1, c);
  return q + "'";
}

// Runs the command-line tool, capturing stdout; stderr is discarded.
inline CliResult run_cli(const std::string& exe, const std::vector<std::string>& args) {
  std::string cmd = shell_quote(exe);
  for (auto& a : args) cmd += " " + shell_quote(a);
  cmd += " 2>/dev/null";
  CliResult r;
  FILE* p = ::popen(cmd.c_str(), "r");
  if (!p) return r;
  std::array<char, 4096> buf{};
  size_t n;
  while ((n = std::fread(buf.data(), 1, buf.size(), p)) > 0) r.out.append(buf.data(), n);
  int st = ::pclose(p);
  r.status = WIFEXITED(st) ? WEXITSTATUS(st) : -1;
  return r;
}

// Starts the tool and SIGKILLs it after `after`; returns false if it had
// already finished.
inline bool run_cli_and_kill(const std::string& exe, const std::vector<std::string>& args,
                             std::chrono::milliseconds after) {
  pid_t pid = ::fork();
  if (pid == 0) {
    std::vector<char*> argv;
    argv.push_back(const_cast<char*>(exe.c_str()));
    for (auto& a : args) argv.push_back(const_cast<char*>(a.c_str()));
    argv.push_back(nullptr);
    int devnull = ::open("/dev/null", O_WRONLY);
    ::dup2(devnull, 1);
    ::dup2(devnull, 2);
    ::execv(exe.c_str(), argv.data());
    ::_exit(127);
  }
  std::this_thread::sleep_for(after);
  int st = 0;
  if (::waitpid(pid, &st, WNOHANG) == pid) return false;
  ::kill(pid, SIGKILL);
  ::waitpid(pid, &st, 0);
  return true;
}

inline std::vector<nlohmann::json> json_lines(const std::string& s) {
  std::vector<nlohmann::json> out;
  std::istringstream in(s);
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty()) out.push_back(nlohmann::json::parse(line));
  }
  return out;
}

// Records keyed by ell with timing and seed metadata removed.
inline std::map<long, nlohmann::json> comparable(const std::vector<nlohmann::json>& recs) {
  std::map<long, nlohmann::json> out;
  for (auto j : recs) {
    j.erase("elapsed_seconds");
    j.erase("seed");
    out[j["ell"].get<long>()] = j;
  }
  return out;
}

inline std::filesystem::path fresh_dir(const std::string& name) {
  auto p = std::filesystem::temp_directory_path() / ("maass-" + name + "-" + std::to_string(::getpid()));
  std::filesystem::remove_all(p);
  return p;
}

}  // namespace maass::testing
