#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include <json.hpp>

namespace onsager::cli {

using Json = nlohmann::ordered_json;

/// Every key a command may read, with its default value.
Json default_config();

/// Merges a JSON config file over the defaults. Unknown keys and type
/// mismatches throw ValidationError naming the field; syntax errors name
/// the line and column.
Json load_config(const std::filesystem::path& path);

/// Applies one "dotted.key=value" override. The value is parsed as JSON
/// when possible and kept as a string otherwise.
void apply_override(Json& config, const std::string& assignment);

/// Checks leaf types against the defaults (ValidationError on mismatch).
void check_config(const Json& config);

struct Invocation {
  std::string command;
  Json config;
  std::filesystem::path out;
  std::vector<std::string> inputs;
};

void cmd_synth(const Invocation& inv);
void cmd_simulate(const Invocation& inv);
void cmd_mollify_check(const Invocation& inv);
void cmd_flux_sweep(const Invocation& inv);
void cmd_budget(const Invocation& inv);
void cmd_channel_check(const Invocation& inv);
void cmd_report(const Invocation& inv);

/// Full driver: parses arguments, runs the command, maps errors to exit
/// codes (0 ok, 2 validation, 3 identity or stability failure).
int main(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace onsager::cli
