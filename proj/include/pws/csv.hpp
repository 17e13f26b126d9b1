#pragma once

#include <filesystem>
#include <fstream>
#include <string>
#include <string_view>
#include <vector>

namespace pws {

/// Shortest text that round-trips a double: 17 significant digits.
[[nodiscard]] std::string format_double(double v);

/// RFC 4180 writer: comma separator, CRLF-free ('\n') line ends, quoting when needed.
class CsvWriter {
 public:
  CsvWriter(const std::filesystem::path& path, const std::vector<std::string>& header);

  CsvWriter& field(std::string_view text);
  CsvWriter& field(double v);
  CsvWriter& field(long long v);
  CsvWriter& empty();
  void end_row();

 private:
  std::ofstream out_;
  std::size_t columns_;
  std::size_t in_row_ = 0;
};

}  // namespace pws
