#include "zmw/parallel.hpp"

#include <cstdlib>
#include <string>

namespace zmw {

unsigned resolve_threads(unsigned requested) {
  if (const char* env = std::getenv("ZMW_THREADS"); env != nullptr && *env != '\0') {
    try {
      const long v = std::stol(env);
      if (v > 0) requested = static_cast<unsigned>(v);
    } catch (...) {
      // ignore malformed override
    }
  }
  if (requested == 0) requested = std::max(1u, std::thread::hardware_concurrency());
  return requested;
}

}  // namespace zmw
