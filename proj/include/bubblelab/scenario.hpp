#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include <json.hpp>

#include "bubblelab/error.hpp"
#include "bubblelab/paths.hpp"

namespace bubblelab::scenario {

/// Flat "key = value" scenario file. '#' starts a comment.
class Config {
 public:
  static Config parse(const std::string& text);
  static Config load(const std::filesystem::path& file);

  [[nodiscard]] bool has(const std::string& key) const;
  [[nodiscard]] std::string str(const std::string& key) const;
  [[nodiscard]] std::string str(const std::string& key, const std::string& fallback) const;
  [[nodiscard]] double number(const std::string& key) const;
  [[nodiscard]] double number(const std::string& key, double fallback) const;
  [[nodiscard]] std::size_t integer(const std::string& key, std::size_t fallback) const;
  [[nodiscard]] std::vector<double> list(const std::string& key) const;
  [[nodiscard]] paths::PathSpec path(const std::string& key, const std::string& fallback) const;

  void set(const std::string& key, const std::string& value);
  [[nodiscard]] const std::map<std::string, std::string>& entries() const noexcept { return entries_; }

  /// Throws Config for keys no accessor asked for.
  void reject_unused() const;

 private:
  std::map<std::string, std::string> entries_;
  mutable std::set<std::string> used_;
};

struct Report {
  std::string name;
  std::string model;
  std::string csv;
  nlohmann::json json;
  int exit_code = 0;
};

/// 2 when a solver diagnostic means the run did not deliver what was asked.
int exit_code_for(const Diagnostics& diags);

Report run(const Config& config);

/// Sets a scalar field; "X.level", "X.ratio" and "X.tail" edit a path field.
void apply_parameter(Config& config, const std::string& param, double value);

/// One CSV row per grid value, in grid order.
std::string sweep(const Config& config, const std::string& param, const std::vector<double>& grid);

std::vector<double> parse_grid(const std::string& text);

}  // namespace bubblelab::scenario
