#include <cstdlib>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "treslev/app/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  std::optional<std::string> env_config;
  if (const char* env = std::getenv("TRESLEV_CONFIG")) env_config = env;

  const treslev::app::CliResult r = treslev::app::run(args, env_config);
  std::cout << r.out;
  std::cerr << r.err;
  return r.exit_code;
}
