#include <sys/wait.h>

#include <cstdio>
#include <iostream>
#include <string>
#include <thread>
#include <vector>

#include "checks.hpp"

#ifndef POLYVIS_CLI_PATH
#error "POLYVIS_CLI_PATH must name the command line binary"
#endif

namespace {

std::string quote(const std::string& s) {
  std::string out = "'";
  for (char c : s) out += c == '\'' ? std::string("'\\''") : std::string(1, c);
  return out + "'";
}

std::pair<int, std::string> run_binary(const std::vector<std::string>& args) {
  std::string cmd = quote(POLYVIS_CLI_PATH);
  for (const auto& a : args) cmd += " " + quote(a);
  cmd += " 2>/dev/null";
  FILE* pipe = popen(cmd.c_str(), "r");
  if (!pipe) return {-1, ""};
  std::string out;
  char buf[4096];
  while (std::size_t n = std::fread(buf, 1, sizeof buf, pipe)) out.append(buf, n);
  const int status = pclose(pipe);
  return {WIFEXITED(status) ? WEXITSTATUS(status) : -1, out};
}

}  // namespace

int main(int argc, char** argv) {
  polyvis::app::CheckConfig cfg;
  cfg.threads = std::max(1u, std::thread::hardware_concurrency());
  cfg.cli = run_binary;
  for (int i = 1; i < argc; ++i) cfg.only.push_back(std::stoi(argv[i]));
  cfg.on_result = [](const polyvis::app::CheckOutcome& c) {
    char t[32];
    std::snprintf(t, sizeof t, "%.1f s", c.seconds);
    std::cout << (c.pass ? "PASS" : "FAIL") << " [" << c.id << "] " << c.name << ": " << c.detail << " [" << t
              << "]" << std::endl;
  };
  int failed = 0;
  const auto results = polyvis::app::run_checks(cfg);
  for (const auto& c : results) failed += !c.pass;
  std::cout << results.size() - failed << " of " << results.size() << " criteria passed" << std::endl;
  return failed ? 1 : 0;
}
