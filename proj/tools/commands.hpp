// File-driven command runner: `key = value` configs, `--key value` overrides,
// CSV / JSON-lines artifacts and a manifest of the resolved parameters.
#pragma once

#include <iosfwd>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

namespace rqi::cli {

using Params = std::map<std::string, std::string>;

enum Exit { kOk = 0, kNumericFailure = 1, kConfigError = 2 };

// Validation failure attributed to one key.
class ConfigError : public std::runtime_error {
 public:
  ConfigError(std::string key, const std::string& what)
      : std::runtime_error(what), key_(std::move(key)) {}
  const std::string& key() const { return key_; }

 private:
  std::string key_;
};

// Non-finite or otherwise unusable result.
class NumericFailure : public std::runtime_error {
  using std::runtime_error::runtime_error;
};

// One `key = value` per line; `#` starts a comment; blank lines ignored.
Params parse_config(std::istream& is, const std::string& source);
Params read_config_file(const std::string& path);

const std::vector<std::string>& command_names();
// Defaults for every key the command accepts, including out and manifest.
Params command_defaults(const std::string& command);

// Resolves defaults with `given`, runs the command and writes its artifacts.
// `out = -` writes the artifact to `stdout_sink` and skips the manifest unless
// `manifest` names a path.
int run(const std::string& command, const Params& given, std::ostream& stdout_sink,
        std::ostream& diag);

// argv front end: rqi <command> [--config file] [--key value ...]
int main(const std::vector<std::string>& args, std::ostream& stdout_sink, std::ostream& diag);

}  // namespace rqi::cli
