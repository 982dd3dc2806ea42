#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <type_traits>
#include <vector>

namespace olp::csv {

// Shortest round-trip decimal form, independent of the C locale.
std::string format(double v);
std::string format(std::uint64_t v);

// Accumulates rows in memory; fields are written verbatim, so callers pass
// values that need no quoting.
class Table {
 public:
  explicit Table(std::vector<std::string> header);

  template <class... Ts>
  void row(const Ts&... fields) {
    std::vector<std::string> cells;
    cells.reserve(sizeof...(fields));
    (cells.push_back(cell(fields)), ...);
    add(cells);
  }
  void add(const std::vector<std::string>& cells);

  std::size_t rows() const { return rows_; }
  const std::string& text() const { return text_; }

 private:
  template <class T>
  static std::string cell(const T& v) {
    if constexpr (std::is_same_v<T, bool>) {
      return v ? "1" : "0";
    } else if constexpr (std::is_floating_point_v<T>) {
      return format(static_cast<double>(v));
    } else if constexpr (std::is_integral_v<T> && std::is_unsigned_v<T>) {
      return format(static_cast<std::uint64_t>(v));
    } else if constexpr (std::is_integral_v<T>) {
      return std::to_string(v);
    } else {
      return std::string(v);
    }
  }

  std::size_t columns_;
  std::size_t rows_ = 0;
  std::string text_;
};

// Writes bytes exactly; throws std::ios_base::failure on I/O errors.
void write_file(const std::filesystem::path& path, std::string_view bytes);
std::string read_file(const std::filesystem::path& path);

// Parsed comma-separated file with a header line.
struct Document {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  // Column index by name; throws std::runtime_error when absent.
  std::size_t column(const std::string& name) const;
};

Document parse(std::string_view text);

double to_double(const std::string& field);

}  // namespace olp::csv
