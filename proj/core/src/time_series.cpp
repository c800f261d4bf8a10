#include "cavkin/time_series.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <stdexcept>

namespace cavkin {

TimeSeries::TimeSeries(std::vector<std::string> columns)
    : names_(std::move(columns)), data_(names_.size()) {}

void TimeSeries::add_row(std::span<const double> values) {
  if (values.size() != names_.size()) throw std::invalid_argument("row width does not match columns");
  for (std::size_t c = 0; c < values.size(); ++c) data_[c].push_back(values[c]);
}

bool TimeSeries::has(const std::string& name) const {
  return std::find(names_.begin(), names_.end(), name) != names_.end();
}

std::span<const double> TimeSeries::column(const std::string& name) const {
  const auto it = std::find(names_.begin(), names_.end(), name);
  if (it == names_.end()) throw std::out_of_range("no column '" + name + "'");
  return data_[static_cast<std::size_t>(it - names_.begin())];
}

std::string format_double(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v, std::chars_format::general, 17);
  return std::string(buf, res.ptr);
}

std::string TimeSeries::to_csv() const {
  std::string out;
  for (std::size_t c = 0; c < names_.size(); ++c) {
    if (c) out += ',';
    out += names_[c];
  }
  out += '\n';
  for (std::size_t r = 0; r < rows(); ++r) {
    for (std::size_t c = 0; c < names_.size(); ++c) {
      if (c) out += ',';
      out += format_double(data_[c][r]);
    }
    out += '\n';
  }
  return out;
}

void TimeSeries::write_csv(const std::filesystem::path& path) const {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot write " + path.string());
  const auto text = to_csv();
  f.write(text.data(), static_cast<std::streamsize>(text.size()));
}

}  // namespace cavkin
