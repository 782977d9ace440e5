#pragma once

#include <functional>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

#include "curb/io.hpp"

namespace curb::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitIo = 1;
inline constexpr int kExitAlgorithm = 2;
inline constexpr int kExitUsage = 64;

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class Source { Flag, Env, ConfigFile, Default };
std::string_view to_string(Source s);

/// Resolves option values in the order: command-line flag, CURB_<NAME>
/// environment variable, config file, built-in default.
///
/// Config files are JSON objects keyed by long option name ("ransac-iters").
/// A nested object under the subcommand name overrides top-level keys.
class Settings {
 public:
  using EnvLookup = std::function<std::optional<std::string>(const std::string&)>;

  Settings(std::map<std::string, std::string> flags, io::Json config, std::string command,
           EnvLookup env = process_env);

  /// "ransac-iters" -> "CURB_RANSAC_ITERS"
  static std::string env_name(std::string_view option);
  static std::optional<std::string> process_env(const std::string& name);

  std::optional<std::string> raw(const std::string& option) const;
  Source source(const std::string& option) const;
  bool has(const std::string& option) const { return raw(option).has_value(); }

  std::string text(const std::string& option, std::string fallback) const;
  std::optional<std::string> text(const std::string& option) const { return raw(option); }
  double real(const std::string& option, double fallback) const;
  std::optional<double> real(const std::string& option) const;
  std::int64_t integer(const std::string& option, std::int64_t fallback) const;

 private:
  std::optional<std::pair<std::string, Source>> lookup(const std::string& option) const;

  std::map<std::string, std::string> flags_;
  io::Json config_;
  std::string command_;
  EnvLookup env_;
};

/// Full command-line entry point; returns the process exit code.
int run(int argc, char** argv);

}  // namespace curb::cli
