#include "rabiring/parallel.hpp"

#include <cstdlib>
#include <string>

namespace rabiring {

int resolve_workers(int requested) {
  if (requested > 0) return requested;
  if (const char* env = std::getenv("RABI_RING_WORKERS")) {
    try {
      int w = std::stoi(env);
      if (w > 0) return w;
    } catch (...) {
      // fall through to hardware default
    }
  }
  unsigned hw = std::thread::hardware_concurrency();
  return hw > 0 ? static_cast<int>(hw) : 1;
}

}  // namespace rabiring
