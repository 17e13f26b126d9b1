#include "pws/csv.hpp"

#include <fmt/format.h>

#include "pws/error.hpp"

namespace pws {

std::string format_double(double v) { return fmt::format("{:.17g}", v); }

CsvWriter::CsvWriter(const std::filesystem::path& path, const std::vector<std::string>& header)
    : out_(path), columns_(header.size()) {
  if (!out_) throw Error(ErrorCode::config_error, "cannot write " + path.string());
  for (const auto& h : header) field(h);
  end_row();
}

CsvWriter& CsvWriter::field(std::string_view text) {
  if (in_row_++ > 0) out_ << ',';
  if (text.find_first_of(",\"\n\r") == std::string_view::npos) {
    out_ << text;
  } else {
    out_ << '"';
    for (char c : text) {
      if (c == '"') out_ << '"';
      out_ << c;
    }
    out_ << '"';
  }
  return *this;
}

CsvWriter& CsvWriter::field(double v) { return field(format_double(v)); }

CsvWriter& CsvWriter::field(long long v) { return field(std::to_string(v)); }

CsvWriter& CsvWriter::empty() { return field(std::string_view{}); }

void CsvWriter::end_row() {
  if (in_row_ != columns_) {
    throw Error(ErrorCode::invalid_argument, "CSV row has " + std::to_string(in_row_) +
                                                 " fields, header has " + std::to_string(columns_));
  }
  out_ << '\n';
  in_row_ = 0;
}

}  // namespace pws
