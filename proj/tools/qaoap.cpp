// Command-line entry point. Subcommands are wired in as the pipeline grows.
#include <cstdio>

int main() {
  std::puts("qaoap: no subcommand");
  return 2;
}
