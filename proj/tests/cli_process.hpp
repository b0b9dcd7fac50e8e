// Runs the command-line tool and captures its standard output and exit code.
#ifndef MIDLEVELS_TESTS_CLI_PROCESS_HPP
#define MIDLEVELS_TESTS_CLI_PROCESS_HPP

#include <sys/wait.h>

#include <array>
#include <cstdio>
#include <initializer_list>
#include <stdexcept>
#include <string>
#include <vector>

namespace cli {

struct Result {
  int code = -1;
  std::string out;
};

inline std::string quote(const std::string& s) {
  std::string q = "'";
  for (char c : s) {
    if (c == '\'') {
      q += "'\\''";
    } else {
      q += c;
    }
  }
  return q + "'";
}

/// Runs `exe args...` with stderr discarded.
inline Result run(const std::string& exe, const std::vector<std::string>& args) {
  std::string cmd = quote(exe);
  for (const std::string& a : args) cmd += " " + quote(a);
  cmd += " 2>/dev/null";
  FILE* pipe = popen(cmd.c_str(), "r");
  if (!pipe) throw std::runtime_error("popen failed for " + cmd);
  Result r;
  std::array<char, 4096> buf{};
  std::size_t got = 0;
  while ((got = std::fread(buf.data(), 1, buf.size(), pipe)) > 0) r.out.append(buf.data(), got);
  const int status = pclose(pipe);
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

inline Result run(const std::string& exe, std::initializer_list<std::string> args) {
  return run(exe, std::vector<std::string>(args));
}

inline std::string first_line(const std::string& s) { return s.substr(0, s.find('\n')); }

}  // namespace cli

#endif  // MIDLEVELS_TESTS_CLI_PROCESS_HPP
