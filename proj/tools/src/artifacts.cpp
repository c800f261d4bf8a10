#include "artifacts.hpp"

#include <algorithm>
#include <array>
#include <fstream>
#include <memory>
#include <stdexcept>

#include <openssl/evp.h>

namespace cavkin::cli {

std::string sha256_hex(const std::filesystem::path& file) {
  std::ifstream in(file, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read " + file.string());
  std::unique_ptr<EVP_MD_CTX, decltype(&EVP_MD_CTX_free)> ctx(EVP_MD_CTX_new(), &EVP_MD_CTX_free);
  if (!ctx || EVP_DigestInit_ex(ctx.get(), EVP_sha256(), nullptr) != 1) throw std::runtime_error("sha256 init failed");
  std::array<char, 1 << 16> buf{};
  while (in) {
    in.read(buf.data(), buf.size());
    if (in.gcount() > 0) EVP_DigestUpdate(ctx.get(), buf.data(), static_cast<std::size_t>(in.gcount()));
  }
  unsigned char md[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  EVP_DigestFinal_ex(ctx.get(), md, &len);
  static const char* hex = "0123456789abcdef";
  std::string out;
  for (unsigned int i = 0; i < len; ++i) {
    out += hex[md[i] >> 4];
    out += hex[md[i] & 15];
  }
  return out;
}

RunDirectory::RunDirectory(std::filesystem::path root) : root_(std::move(root)) {
  std::filesystem::create_directories(root_ / "snapshots");
}

void RunDirectory::write_csv(const std::string& name, const TimeSeries& series) {
  series.write_csv(root_ / name);
  add(name);
}

void RunDirectory::write_json(const std::string& name, const nlohmann::json& j) {
  std::ofstream out(root_ / name);
  if (!out) throw std::runtime_error("cannot write " + (root_ / name).string());
  out << j.dump(2) << "\n";
  add(name);
}

void RunDirectory::add(const std::string& relative) {
  if (std::find(files_.begin(), files_.end(), relative) == files_.end()) files_.push_back(relative);
}

void RunDirectory::finalize(const nlohmann::json& config, const std::string& scenario) {
  write_json("config.json", config);
  auto files = files_;
  std::sort(files.begin(), files.end());
  nlohmann::json list = nlohmann::json::array();
  for (const auto& f : files) {
    list.push_back({{"path", f},
                    {"bytes", std::filesystem::file_size(root_ / f)},
                    {"sha256", sha256_hex(root_ / f)}});
  }
  nlohmann::json manifest = {{"tool", "cavkin"}, {"version", "0.1.0"}, {"scenario", scenario}, {"files", list}};
  std::ofstream out(root_ / "manifest.json");
  if (!out) throw std::runtime_error("cannot write manifest");
  out << manifest.dump(2) << "\n";
}

}  // namespace cavkin::cli
