#pragma once

#include <filesystem>
#include <initializer_list>
#include <span>
#include <string>
#include <vector>

namespace cavkin {

/// Column store of sampled observables. All columns share the row count.
class TimeSeries {
 public:
  TimeSeries() = default;
  explicit TimeSeries(std::vector<std::string> columns);

  void add_row(std::span<const double> values);
  void add_row(std::initializer_list<double> values) { add_row(std::span<const double>(values.begin(), values.size())); }

  std::size_t rows() const { return data_.empty() ? 0 : data_.front().size(); }
  std::size_t cols() const { return names_.size(); }
  const std::vector<std::string>& names() const { return names_; }

  bool has(const std::string& name) const;
  std::span<const double> column(const std::string& name) const;
  std::span<const double> column(std::size_t index) const { return data_.at(index); }

  /// Header row then one line per sample, 17 significant digits.
  std::string to_csv() const;
  void write_csv(const std::filesystem::path& path) const;

 private:
  std::vector<std::string> names_;
  std::vector<std::vector<double>> data_;
};

/// Shortest round-trip-safe text with 17 significant digits.
std::string format_double(double v);

}  // namespace cavkin
