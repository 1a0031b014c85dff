#include "dephasim/parallel.hpp"

#include <charconv>
#include <cstdlib>
#include <string_view>

#include <omp.h>

namespace dephasim {

int thread_cap_from_env() {
  const char* raw = std::getenv("DEPHASIM_THREADS");
  if (raw == nullptr) return 0;
  const std::string_view text{raw};
  int value = 0;
  const auto [end, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc{} || end != text.data() + text.size() || value < 0) return 0;
  return value;
}

void set_thread_cap(int threads) {
  if (threads > 0) omp_set_num_threads(threads);
}

int max_threads() { return omp_get_max_threads(); }

}  // namespace dephasim
