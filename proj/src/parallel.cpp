#include "blesskit/parallel.hpp"

#include <atomic>
#include <cstdlib>
#include <string>
#include <thread>

namespace blesskit {
namespace {

std::atomic<int> g_override{0};

int from_environment() {
  if (const char* env = std::getenv("BLESSKIT_THREADS")) {
    try {
      const int v = std::stoi(env);
      if (v > 0) return v;
    } catch (const std::exception&) {
      // fall through to the hardware default
    }
  }
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : static_cast<int>(hw);
}

}  // namespace

int thread_count() {
  const int o = g_override.load();
  if (o > 0) return o;
  static const int env = from_environment();
  return env;
}

void set_thread_count(int threads) { g_override.store(threads > 0 ? threads : 0); }

}  // namespace blesskit
