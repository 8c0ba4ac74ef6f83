#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include "rpent/cli.hpp"

namespace rpent::cli {

namespace {

std::vector<std::string> split_items(const std::string& spec) {
  std::vector<std::string> out;
  std::string item;
  std::istringstream in(spec);
  while (std::getline(in, item, ',')) {
    item.erase(0, item.find_first_not_of(" \t"));
    item.erase(item.find_last_not_of(" \t") + 1);
    if (item.empty()) throw ConfigError("empty item in list '" + spec + "'");
    out.push_back(item);
  }
  if (out.empty()) throw ConfigError("empty list");
  return out;
}

Eigen::Index parse_dim(const std::string& text) {
  std::size_t pos = 0;
  long long v = 0;
  try {
    v = std::stoll(text, &pos);
  } catch (const std::exception&) {
    throw ConfigError("not an integer: '" + text + "'");
  }
  if (pos != text.size() || v < 1) throw ConfigError("bad dimension '" + text + "'");
  return static_cast<Eigen::Index>(v);
}

double parse_number(const std::string& text) {
  std::size_t pos = 0;
  double v = 0.0;
  try {
    v = std::stod(text, &pos);
  } catch (const std::exception&) {
    throw ConfigError("not a number: '" + text + "'");
  }
  if (pos != text.size() || !std::isfinite(v)) throw ConfigError("not a number: '" + text + "'");
  return v;
}

}  // namespace

Json parse_config_text(const std::string& text, const std::string& source) {
  Json j;
  try {
    j = Json::parse(text);
  } catch (const Json::parse_error& e) {
    std::size_t line = 1, column = 1;
    const std::size_t end = std::min<std::size_t>(e.byte == 0 ? 0 : e.byte - 1, text.size());
    for (std::size_t i = 0; i < end; ++i) {
      if (text[i] == '\n') {
        ++line;
        column = 1;
      } else {
        ++column;
      }
    }
    std::string what = e.what();
    const auto colon = what.rfind(": ");
    if (colon != std::string::npos) what = what.substr(colon + 2);
    std::ostringstream msg;
    msg << source << ":" << line << ":" << column << ": malformed JSON: " << what;
    throw ConfigError(msg.str());
  }
  if (!j.is_object()) throw ConfigError(source + ": config must be a JSON object");
  return j;
}

Json load_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config_text(buf.str(), path);
}

std::vector<std::pair<Eigen::Index, Eigen::Index>> parse_dim_pairs(const std::string& spec) {
  std::vector<std::pair<Eigen::Index, Eigen::Index>> out;
  for (const auto& item : split_items(spec)) {
    const auto x = item.find_first_of("xX");
    if (x == std::string::npos) throw ConfigError("expected AxB in dims item '" + item + "'");
    out.emplace_back(parse_dim(item.substr(0, x)), parse_dim(item.substr(x + 1)));
  }
  return out;
}

std::vector<Eigen::Index> parse_dim_list(const std::string& spec) {
  std::vector<Eigen::Index> out;
  for (const auto& item : split_items(spec)) out.push_back(parse_dim(item));
  return out;
}

std::vector<double> parse_number_list(const std::string& spec) {
  std::vector<double> out;
  for (const auto& item : split_items(spec)) out.push_back(parse_number(item));
  return out;
}

ConfigReader::ConfigReader(Json object, std::string context)
    : object_(std::move(object)), context_(std::move(context)) {
  if (!object_.is_object()) throw ConfigError(context_ + ": config must be a JSON object");
}

bool ConfigReader::has(const std::string& key) const { return object_.contains(key); }

const Json* ConfigReader::find(const std::string& key) {
  used_.insert(key);
  const auto it = object_.find(key);
  return it == object_.end() ? nullptr : &*it;
}

void ConfigReader::type_error(const std::string& key, const char* expected) const {
  throw ConfigError(context_ + ": key '" + key + "' must be " + expected);
}

int ConfigReader::get_int(const std::string& key, int fallback) {
  const Json* v = find(key);
  if (!v) return fallback;
  if (!v->is_number_integer()) type_error(key, "an integer");
  return v->get<int>();
}

std::uint64_t ConfigReader::get_uint64(const std::string& key, std::uint64_t fallback) {
  const Json* v = find(key);
  if (!v) return fallback;
  if (!v->is_number_unsigned()) type_error(key, "a nonnegative integer");
  return v->get<std::uint64_t>();
}

double ConfigReader::get_double(const std::string& key, double fallback) {
  const Json* v = find(key);
  if (!v) return fallback;
  if (!v->is_number()) type_error(key, "a number");
  return v->get<double>();
}

std::string ConfigReader::get_string(const std::string& key, const std::string& fallback) {
  const Json* v = find(key);
  if (!v) return fallback;
  if (!v->is_string()) type_error(key, "a string");
  return v->get<std::string>();
}

std::vector<double> ConfigReader::get_double_list(const std::string& key, const std::vector<double>& fallback) {
  const Json* v = find(key);
  if (!v) return fallback;
  if (v->is_number()) return {v->get<double>()};
  if (v->is_string()) {
    try {
      return parse_number_list(v->get<std::string>());
    } catch (const ConfigError& e) {
      throw ConfigError(context_ + ": key '" + key + "': " + e.what());
    }
  }
  if (!v->is_array() || v->empty()) type_error(key, "a number or a nonempty list of numbers");
  std::vector<double> out;
  for (const auto& x : *v) {
    if (!x.is_number()) type_error(key, "a list of numbers");
    out.push_back(x.get<double>());
  }
  return out;
}

std::vector<int> ConfigReader::get_int_list(const std::string& key, const std::vector<int>& fallback) {
  const bool present = has(key);
  const auto values = get_double_list(key, {});
  if (!present) return fallback;
  std::vector<int> out;
  for (double x : values) {
    if (x != std::round(x) || std::abs(x) > 1e9) type_error(key, "a list of integers");
    out.push_back(static_cast<int>(x));
  }
  return out;
}

void ConfigReader::get_dims(const std::string& key, std::vector<Eigen::Index>* list,
                            std::vector<std::pair<Eigen::Index, Eigen::Index>>* pairs) {
  const Json* v = find(key);
  if (!v) return;
  try {
    if (v->is_string()) {
      const auto spec = v->get<std::string>();
      if (spec.find_first_of("xX") != std::string::npos) {
        if (!pairs) throw ConfigError("subsystem pairs are not accepted here");
        *pairs = parse_dim_pairs(spec);
        if (list) list->clear();
      } else {
        if (!list) throw ConfigError("expected AxB subsystem pairs");
        *list = parse_dim_list(spec);
      }
      return;
    }
    if (!v->is_array() || v->empty()) throw ConfigError("expected a dims spec string or a nonempty array");
    if (v->at(0).is_array()) {
      if (!pairs) throw ConfigError("subsystem pairs are not accepted here");
      pairs->clear();
      for (const auto& p : *v) {
        if (!p.is_array() || p.size() != 2 || !p[0].is_number_unsigned() || !p[1].is_number_unsigned()) {
          throw ConfigError("expected [d_A, d_B] pairs");
        }
        pairs->emplace_back(p[0].get<Eigen::Index>(), p[1].get<Eigen::Index>());
      }
      if (list) list->clear();
    } else {
      if (!list) throw ConfigError("expected AxB subsystem pairs");
      list->clear();
      for (const auto& d : *v) {
        if (!d.is_number_unsigned()) throw ConfigError("expected positive integer dimensions");
        list->push_back(d.get<Eigen::Index>());
      }
    }
  } catch (const ConfigError& e) {
    throw ConfigError(context_ + ": key '" + key + "': " + e.what());
  }
}

void ConfigReader::finish() const {
  std::vector<std::string> unknown;
  for (const auto& [key, value] : object_.items()) {
    if (!used_.count(key)) unknown.push_back(key);
  }
  if (unknown.empty()) return;
  std::string msg = context_ + ": unknown key";
  msg += unknown.size() > 1 ? "s" : "";
  for (std::size_t i = 0; i < unknown.size(); ++i) msg += (i ? ", '" : " '") + unknown[i] + "'";
  throw ConfigError(msg);
}

}  // namespace rpent::cli
