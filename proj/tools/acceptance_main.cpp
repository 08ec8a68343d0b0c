#include <cstring>
#include <iostream>

#include "jellium/acceptance.hpp"

// Prints one line per acceptance criterion; exit status 1 if any fails.
// --quick skips the long-budget criteria, --json also prints the report.
int main(int argc, char** argv) {
  jellium::acceptance::Options opts;
  bool want_json = false;
  for (int i = 1; i < argc; ++i) {
    if (!std::strcmp(argv[i], "--quick")) opts.quick = true;
    else if (!std::strcmp(argv[i], "--json")) want_json = true;
    else {
      std::cerr << "usage: jellium_acceptance [--quick] [--json]\n";
      return 2;
    }
  }
  const auto results = jellium::acceptance::run(opts);
  std::cout << jellium::acceptance::summary_lines(results);
  if (want_json) std::cout << jellium::acceptance::to_json(results).dump(2) << "\n";
  return jellium::acceptance::all_passed(results) ? 0 : 1;
}
