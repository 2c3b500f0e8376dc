#pragma once

#include <charconv>
#include <cstdint>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>
#include <string_view>
#include <system_error>
#include <vector>

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include "csdelay/core/errors.hpp"
#include "csdelay/core/format.hpp"

namespace csdelay {

/// Sectioned key/value text ("[section]" headers, "key = value" lines).
/// Lines whose first non-blank character is '#' or ';' are comments.
class KeyValueDoc {
 public:
  using Tree = boost::property_tree::ptree;

  KeyValueDoc() = default;

  static KeyValueDoc parse(std::istream& in) {
    // Blank out '#' comments (the ini reader only knows ';') while keeping line numbers.
    std::ostringstream cleaned;
    std::string line;
    while (std::getline(in, line)) {
      const auto first = line.find_first_not_of(" \t\r");
      if (first != std::string::npos && line[first] == '#') line.clear();
      cleaned << line << '\n';
    }
    std::istringstream src(cleaned.str());
    KeyValueDoc doc;
    try {
      boost::property_tree::ini_parser::read_ini(src, doc.tree_);
    } catch (const boost::property_tree::ini_parser_error& e) {
      throw ConfigError("", e.message(), e.line());
    }
    return doc;
  }

  void write(std::ostream& out) const {
    bool first = true;
    for (const auto& [section, body] : tree_) {
      if (!first) out << '\n';
      first = false;
      out << '[' << section << "]\n";
      for (const auto& [key, value] : body) out << key << " = " << value.data() << '\n';
    }
  }

  void set(const std::string& section, const std::string& key, const std::string& value) {
    section_tree(section).put(Tree::path_type(key, '\0'), value);
  }
  void set(const std::string& section, const std::string& key, const char* value) {
    set(section, key, std::string(value));
  }
  void set(const std::string& section, const std::string& key, double value) {
    set(section, key, format_double(value));
  }
  void set(const std::string& section, const std::string& key, bool value) {
    set(section, key, std::string(value ? "true" : "false"));
  }
  void set_int(const std::string& section, const std::string& key, long long value) {
    set(section, key, std::to_string(value));
  }

  bool has_section(const std::string& section) const {
    return tree_.get_child_optional(Tree::path_type(section, '\0')) ? true : false;
  }
  bool has(const std::string& section, const std::string& key) const {
    const auto s = tree_.get_child_optional(Tree::path_type(section, '\0'));
    return s && s->get_child_optional(Tree::path_type(key, '\0')) ? true : false;
  }

  std::string get(const std::string& section, const std::string& key) const {
    if (!has(section, key)) throw ConfigError(section + "." + key, "missing");
    return tree_.get_child(Tree::path_type(section, '\0'))
        .get_child(Tree::path_type(key, '\0'))
        .data();
  }
  std::string get_or(const std::string& section, const std::string& key,
                     const std::string& fallback) const {
    return has(section, key) ? get(section, key) : fallback;
  }

  double get_double(const std::string& section, const std::string& key) const {
    return parse_double(get(section, key), section + "." + key);
  }
  double get_double_or(const std::string& section, const std::string& key, double fallback) const {
    return has(section, key) ? get_double(section, key) : fallback;
  }
  long long get_int(const std::string& section, const std::string& key) const {
    return parse_int(get(section, key), section + "." + key);
  }
  long long get_int_or(const std::string& section, const std::string& key,
                       long long fallback) const {
    return has(section, key) ? get_int(section, key) : fallback;
  }

  std::vector<std::string> keys(const std::string& section) const {
    std::vector<std::string> out;
    if (const auto s = tree_.get_child_optional(Tree::path_type(section, '\0')))
      for (const auto& kv : *s) out.push_back(kv.first);
    return out;
  }
  std::vector<std::string> sections() const {
    std::vector<std::string> out;
    for (const auto& kv : tree_) out.push_back(kv.first);
    return out;
  }

  static double parse_double(std::string_view text, const std::string& field) {
    const auto s = trim(text);
    double x = 0.0;
    const auto* end = s.data() + s.size();
    const auto [ptr, ec] = std::from_chars(s.data(), end, x);
    if (s.empty() || ec != std::errc() || ptr != end)
      throw ConfigError(field, "expected a number, got '" + std::string(text) + "'");
    return x;
  }

  static long long parse_int(std::string_view text, const std::string& field) {
    const auto s = trim(text);
    long long x = 0;
    const auto* end = s.data() + s.size();
    const auto [ptr, ec] = std::from_chars(s.data(), end, x);
    if (s.empty() || ec != std::errc() || ptr != end)
      throw ConfigError(field, "expected an integer, got '" + std::string(text) + "'");
    return x;
  }

  static std::string_view trim(std::string_view s) {
    const auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string_view::npos) return {};
    const auto e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
  }

 private:
  Tree& section_tree(const std::string& section) {
    const Tree::path_type p(section, '\0');
    if (auto s = tree_.get_child_optional(p)) return *s;
    return tree_.add_child(p, Tree{});
  }

  Tree tree_;
};

}  // namespace csdelay
