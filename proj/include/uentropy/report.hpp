#pragma once

#include <string>
#include <vector>

#include <json.hpp>

namespace uent {

// Numeric cells carry 17 significant digits; summaries may round for display.
std::string format_full(double v);

class CsvWriter {
 public:
  explicit CsvWriter(std::vector<std::string> columns);

  void add_row(const std::vector<std::string>& cells);
  std::string str() const;
  void write(const std::string& path) const;

  static std::string cell(double v) { return format_full(v); }
  static std::string cell(int v) { return std::to_string(v); }
  static std::string cell(std::size_t v) { return std::to_string(v); }
  static std::string cell(const std::string& s);  // quoted if needed

 private:
  std::vector<std::string> columns_;
  std::vector<std::vector<std::string>> rows_;
};

void write_text_file(const std::string& path, const std::string& content);
void write_json_file(const std::string& path, const nlohmann::json& j);
std::string join_flags(const std::vector<std::string>& flags);

}  // namespace uent
