#include <cctype>
#include <cmath>
#include <cstdlib>

#include "curb/cli.hpp"

namespace curb::cli {

std::string_view to_string(Source s) {
  switch (s) {
    case Source::Flag: return "flag";
    case Source::Env: return "env";
    case Source::ConfigFile: return "config";
    case Source::Default: return "default";
  }
  return "?";
}

Settings::Settings(std::map<std::string, std::string> flags, io::Json config, std::string command,
                   EnvLookup env)
    : flags_(std::move(flags)),
      config_(std::move(config)),
      command_(std::move(command)),
      env_(std::move(env)) {
  if (!config_.is_null() && !config_.is_object()) {
    throw UsageError("config file must hold a JSON object");
  }
}

std::string Settings::env_name(std::string_view option) {
  std::string name = "CURB_";
  for (char c : option) {
    name += c == '-' ? '_' : static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
  }
  return name;
}

std::optional<std::string> Settings::process_env(const std::string& name) {
  const char* v = std::getenv(name.c_str());
  if (v == nullptr || *v == '\0') return std::nullopt;
  return std::string(v);
}

namespace {

std::optional<std::string> scalar_text(const io::Json& v) {
  if (v.is_string()) return v.get<std::string>();
  if (v.is_number_integer()) return std::to_string(v.get<std::int64_t>());
  if (v.is_number()) return io::format_real(v.get<double>());
  if (v.is_boolean()) return v.get<bool>() ? "true" : "false";
  return std::nullopt;
}

}  // namespace

std::optional<std::pair<std::string, Source>> Settings::lookup(const std::string& option) const {
  if (const auto it = flags_.find(option); it != flags_.end()) {
    return std::pair{it->second, Source::Flag};
  }
  if (env_) {
    if (auto v = env_(env_name(option))) return std::pair{*v, Source::Env};
  }
  if (config_.is_object()) {
    if (const auto sec = config_.find(command_); sec != config_.end() && sec->is_object()) {
      if (const auto it = sec->find(option); it != sec->end()) {
        if (auto v = scalar_text(*it)) return std::pair{*v, Source::ConfigFile};
      }
    }
    if (const auto it = config_.find(option); it != config_.end()) {
      if (auto v = scalar_text(*it)) return std::pair{*v, Source::ConfigFile};
    }
  }
  return std::nullopt;
}

std::optional<std::string> Settings::raw(const std::string& option) const {
  if (auto v = lookup(option)) return v->first;
  return std::nullopt;
}

Source Settings::source(const std::string& option) const {
  if (auto v = lookup(option)) return v->second;
  return Source::Default;
}

std::string Settings::text(const std::string& option, std::string fallback) const {
  if (auto v = raw(option)) return *v;
  return fallback;
}

std::optional<double> Settings::real(const std::string& option) const {
  const auto v = lookup(option);
  if (!v) return std::nullopt;
  const std::string& s = v->first;
  char* end = nullptr;
  const double x = std::strtod(s.c_str(), &end);
  if (s.empty() || end != s.c_str() + s.size() || !std::isfinite(x)) {
    throw UsageError("--" + option + " (" + std::string(to_string(v->second)) +
                     "): expected a finite number, got '" + s + "'");
  }
  return x;
}

double Settings::real(const std::string& option, double fallback) const {
  return real(option).value_or(fallback);
}

std::int64_t Settings::integer(const std::string& option, std::int64_t fallback) const {
  const auto v = lookup(option);
  if (!v) return fallback;
  const std::string& s = v->first;
  char* end = nullptr;
  const long long x = std::strtoll(s.c_str(), &end, 10);
  if (s.empty() || end != s.c_str() + s.size()) {
    throw UsageError("--" + option + " (" + std::string(to_string(v->second)) +
                     "): expected an integer, got '" + s + "'");
  }
  return x;
}

}  // namespace curb::cli
