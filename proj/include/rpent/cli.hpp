#pragma once

// Batch front end: `rpent <subcommand> [flags]`.

#include <iosfwd>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "rpent/serialize.hpp"

namespace rpent::cli {

inline constexpr const char* kToolName = "rpent";
inline constexpr const char* kToolVersion = "0.1.0";
inline constexpr const char* kOutDirEnv = "RPENT_OUT_DIR";

enum ExitCode : int {
  kExitPass = 0,
  kExitUsage = 1,
  kExitNumerics = 2,
  kExitCounterexample = 3,
};

class ConfigError : public InvalidInput {
 public:
  using InvalidInput::InvalidInput;
};

// Parses a JSON object. Syntax errors become ConfigError with a
// "source:line:column: message" diagnostic.
Json parse_config_text(const std::string& text, const std::string& source);
Json load_config_file(const std::string& path);

// "2x2,2x3" -> {(2,2), (2,3)}
std::vector<std::pair<Eigen::Index, Eigen::Index>> parse_dim_pairs(const std::string& spec);
// "4,6,8" -> {4, 6, 8}
std::vector<Eigen::Index> parse_dim_list(const std::string& spec);
// "0.1,1,6" -> {0.1, 1, 6}
std::vector<double> parse_number_list(const std::string& spec);

// Typed access to a flat config object. Every key read is recorded;
// finish() rejects whatever was not read.
class ConfigReader {
 public:
  ConfigReader(Json object, std::string context);

  bool has(const std::string& key) const;
  int get_int(const std::string& key, int fallback);
  std::uint64_t get_uint64(const std::string& key, std::uint64_t fallback);
  double get_double(const std::string& key, double fallback);
  std::string get_string(const std::string& key, const std::string& fallback);
  // Number, array of numbers, or a comma-separated string.
  std::vector<double> get_double_list(const std::string& key, const std::vector<double>& fallback);
  std::vector<int> get_int_list(const std::string& key, const std::vector<int>& fallback);
  // String spec or JSON array; integers give a dimension list, pairs (or
  // "AxB" items) give fixed subsystem dimensions.
  void get_dims(const std::string& key, std::vector<Eigen::Index>* list,
                std::vector<std::pair<Eigen::Index, Eigen::Index>>* pairs);

  void finish() const;

 private:
  const Json* find(const std::string& key);
  [[noreturn]] void type_error(const std::string& key, const char* expected) const;

  Json object_;
  std::string context_;
  std::set<std::string> used_;
};

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace rpent::cli
