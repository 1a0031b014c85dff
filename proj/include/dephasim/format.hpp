#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace dephasim {

// Shortest decimal that round-trips to the same double; '.' separator, no locale.
std::string format_double(double value);

std::uint64_t fnv1a64(std::string_view bytes);

// CSV table with a one-line header. Cells are preformatted and never quoted,
// so they must not contain commas or newlines.
struct Table {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  void add_row(std::vector<std::string> row);
  std::string to_csv() const;
};

}  // namespace dephasim
