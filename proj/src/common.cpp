#include "mwt/common.hpp"

#include <cstdio>
#include <cstdlib>

namespace mwt {

std::string format_double(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

int worker_count() {
  static const int n = [] {
    const char* env = std::getenv("MWT_THREADS");
    if (!env) return 1;
    const long v = std::strtol(env, nullptr, 10);
    if (v < 1) return 1;
    if (v > 64) return 64;
    return static_cast<int>(v);
  }();
  return n;
}

}  // namespace mwt
