#ifndef ISOCRIT_TESTS_RUN_CLI_HPP
#define ISOCRIT_TESTS_RUN_CLI_HPP

#include <array>
#include <cstdio>
#include <string>
#include <sys/wait.h>

namespace testutil {

struct CliResult {
  int exit_code = -1;
  std::string out;
};

inline CliResult run_cli(const std::string& exe, const std::string& args,
                         bool keep_stderr = false) {
  CliResult r;
  const std::string cmd = exe + " " + args + (keep_stderr ? " 2>&1" : " 2>/dev/null");
  FILE* pipe = ::popen(cmd.c_str(), "r");
  if (pipe == nullptr) return r;
  std::array<char, 4096> buf;
  std::size_t got = 0;
  while ((got = std::fread(buf.data(), 1, buf.size(), pipe)) > 0)
    r.out.append(buf.data(), got);
  const int status = ::pclose(pipe);
  if (WIFEXITED(status)) r.exit_code = WEXITSTATUS(status);
  return r;
}

}  // namespace testutil

#endif
