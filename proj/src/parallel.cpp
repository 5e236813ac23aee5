#include "lmap/parallel.hpp"

#include <omp.h>

#include <charconv>
#include <cstdlib>
#include <cstring>

#include "lmap/errors.hpp"

namespace lmap {

int apply_thread_override() {
  const char* env = std::getenv("LMAP_THREADS");
  if (env != nullptr && *env != '\0') {
    int threads = 0;
    auto [end, ec] = std::from_chars(env, env + std::strlen(env), threads);
    if (ec != std::errc{} || *end != '\0' || threads < 1)
      throw UsageError(std::string("LMAP_THREADS must be a positive integer, got '") + env + "'");
    omp_set_num_threads(threads);
  }
  return omp_get_max_threads();
}

int max_threads() { return omp_get_max_threads(); }

}  // namespace lmap
