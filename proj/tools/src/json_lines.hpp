#pragma once

#include <map>
#include <string>
#include <string_view>

namespace cavkin::cli {

// Maps dotted key paths ("model.pump.ratio", "nbody.grid.nx", "oracle.alphas[2]")
// to the 1-based line where the key (or array element) appears in the source text.
// Assumes the text is already known to be valid JSON.
class JsonLineIndex {
 public:
  explicit JsonLineIndex(std::string_view text);

  /// Line of `path`, or of its closest recorded ancestor; 1 if nothing matches.
  int line_of(const std::string& path) const;

 private:
  std::map<std::string, int> lines_;
};

}  // namespace cavkin::cli
