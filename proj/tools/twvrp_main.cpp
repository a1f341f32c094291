// CLI entry point; subcommands are wired up in src/ as the solvers land.
#include <cstdio>

int main() {
  std::puts("twvrp: not yet wired");
  return 0;
}
