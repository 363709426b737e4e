#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "run_config.hpp"

namespace mfh::cli {

/// Command-line values that take precedence over the config file.
struct Overrides {
    std::optional<std::filesystem::path> config;
    std::optional<std::uint64_t> seed;
    std::optional<int> window;
    std::optional<std::vector<int>> horizons;
    std::optional<int> m;
    std::optional<std::filesystem::path> out;
    std::optional<int> step;
    std::optional<int> threads;
    std::optional<double> alpha;
    std::optional<int> replications;
};

RunConfig resolve_config(const Overrides& overrides);

std::string sha256_hex(const std::string& bytes);

/// Collects input and output hashes for one command and writes manifest.json
/// next to the outputs.
class OutputDir {
public:
    OutputDir(std::filesystem::path dir, std::string command, const RunConfig& config);

    const std::filesystem::path& path() const { return dir_; }
    void add_input(const std::filesystem::path& file);
    void write(const std::string& name, const std::string& content);
    void add_failure(std::string message);
    void finish(std::optional<std::uint64_t> seed);

private:
    std::filesystem::path dir_;
    std::string command_;
    std::string config_hash_;
    std::vector<std::pair<std::string, std::string>> inputs_;
    std::vector<std::pair<std::string, std::string>> outputs_;
    std::vector<std::string> failures_;
};

void cmd_transform(const RunConfig& config);
void cmd_align(const RunConfig& config);
void cmd_simulate(const RunConfig& config);
void cmd_backtest(const RunConfig& config);
void cmd_evaluate(const RunConfig& config);
void cmd_report(const RunConfig& config);

/// Full command-line entry point; returns the process exit code.
int run(int argc, const char* const* argv);
int run(const std::vector<std::string>& args);

}  // namespace mfh::cli
