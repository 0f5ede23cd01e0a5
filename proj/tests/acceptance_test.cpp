#include <cstdio>

#include "verlinde/selfcheck.hpp"

int main() {
  verlinde::SelfCheckOptions opt;
  opt.threads = 1;
  int failed = 0;
  for (const auto& r : verlinde::run_acceptance(opt)) {
    std::printf("criterion %2d %-28s %s  (%.2f s)  %s\n", r.id, r.name.c_str(), r.pass ? "PASS" : "FAIL", r.seconds,
                r.detail.c_str());
    failed += !r.pass;
  }
  std::printf("%d of 10 criteria passed\n", 10 - failed);
  return failed ? 1 : 0;
}
