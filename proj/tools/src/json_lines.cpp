#include "json_lines.hpp"

#include <vector>

namespace cavkin::cli {
namespace {

struct Frame {
  bool object = false;
  std::string path;
  int index = 0;        // next array element
  std::string key;      // last key seen in an object
  bool expect_key = true;
};

std::string join(const std::string& base, const std::string& key) { return base.empty() ? key : base + "." + key; }

}  // namespace

JsonLineIndex::JsonLineIndex(std::string_view text) {
  std::vector<Frame> stack;
  int line = 1;
  lines_[""] = 1;

  // path of the value about to start in the current container
  auto value_path = [&]() -> std::string {
    if (stack.empty()) return "";
    const Frame& f = stack.back();
    if (f.object) return join(f.path, f.key);
    return f.path + "[" + std::to_string(f.index) + "]";
  };
  auto begin_value = [&](int at) {
    if (!stack.empty() && !stack.back().object) lines_.emplace(value_path(), at);
  };

  for (std::size_t i = 0; i < text.size(); ++i) {
    const char c = text[i];
    if (c == '\n') {
      ++line;
      continue;
    }
    if (c == '"') {
      const int start_line = line;
      std::string s;
      for (++i; i < text.size() && text[i] != '"'; ++i) {
        if (text[i] == '\\' && i + 1 < text.size()) {
          s += text[++i];
        } else {
          if (text[i] == '\n') ++line;
          s += text[i];
        }
      }
      if (!stack.empty() && stack.back().object && stack.back().expect_key) {
        stack.back().key = s;
        stack.back().expect_key = false;
        lines_.emplace(join(stack.back().path, s), start_line);
      } else {
        begin_value(start_line);
      }
      continue;
    }
    switch (c) {
      case '{':
      case '[': {
        begin_value(line);
        Frame f;
        f.object = c == '{';
        f.path = value_path();
        stack.push_back(std::move(f));
        break;
      }
      case '}':
      case ']':
        if (!stack.empty()) stack.pop_back();
        break;
      case ',':
        if (!stack.empty()) {
          if (stack.back().object) {
            stack.back().expect_key = true;
          } else {
            ++stack.back().index;
          }
        }
        break;
      case ' ':
      case '\t':
      case '\r':
      case ':':
        break;
      default:
        // first character of a number / true / false / null
        if (i == 0 || std::string_view(",[:").find(text[i - 1]) != std::string_view::npos ||
            text[i - 1] == ' ' || text[i - 1] == '\t' || text[i - 1] == '\n') {
          begin_value(line);
        }
        break;
    }
  }
}

int JsonLineIndex::line_of(const std::string& path) const {
  std::string p = path;
  while (true) {
    if (auto it = lines_.find(p); it != lines_.end()) return it->second;
    if (p.empty()) return 1;
    const auto dot = p.find_last_of(".[");
    p = dot == std::string::npos ? "" : p.substr(0, dot);
  }
}

}  // namespace cavkin::cli
