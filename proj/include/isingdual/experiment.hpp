#pragma once

#include "isingdual/lattice_model.hpp"
#include "isingdual/sampling.hpp"

#include <json.hpp>

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace isingdual {

inline constexpr std::string_view version = "0.1.0";
inline constexpr std::string_view csv_header = "chain_id,sample_index,per_site_log2_Z";

// Exit codes of the command-line tool.
inline constexpr int exit_ok = 0;
inline constexpr int exit_config_error = 1;
inline constexpr int exit_verification_failure = 2;
inline constexpr int exit_io_error = 3;

struct ConfigIssue
{
    std::string path; // JSON pointer to the offending field
    std::string message;
};

/// Every problem found in a configuration document.
class ConfigError : public std::runtime_error
{
public:
    explicit ConfigError(std::vector<ConfigIssue> issues);
    ConfigError(std::string path, std::string message);
    [[nodiscard]] const std::vector<ConfigIssue>& issues() const noexcept { return issues_; }

private:
    std::vector<ConfigIssue> issues_;
};

class IoError : public std::runtime_error
{
public:
    using std::runtime_error::runtime_error;
};

struct CouplingSpec
{
    enum class Kind { constant, uniform, values };
    Kind kind = Kind::constant;
    double constant = 0.0;
    double lo = 0.0;
    double hi = 0.0;
    std::uint64_t seed = 0;
    std::vector<double> values;
};

struct ModelSpec
{
    Topology type = Topology::grid;
    std::size_t size = 2;
    Boundary boundary = Boundary::free_2d;
    CouplingSpec coupling;
};

enum class ExactKind { brute, brute_dual, transfer, closed_form };

std::string_view to_string(ExactKind kind) noexcept;

struct McSpec
{
    Estimator estimator = Estimator::uniform;
    Domain domain = Domain::primal;
    std::uint64_t samples = 100000;
    std::size_t chains = 1;
    std::uint64_t burn_in = 1000;
    std::uint64_t stride = 100;
    std::uint64_t seed = 0;
};

enum class OutputFormat { csv, json };

struct OutputSpec
{
    std::string path = "out.csv";
    OutputFormat format = OutputFormat::csv;
};

/// Exactly one of `exact` and `mc` is set.
struct ExperimentConfig
{
    ModelSpec model;
    std::optional<ExactKind> exact;
    std::optional<McSpec> mc;
    OutputSpec output;

    [[nodiscard]] nlohmann::json to_json() const;
};

/// Parses and validates a JSON configuration. A run manifest is accepted as
/// well; its "config" member is used. Throws ConfigError listing every issue.
ExperimentConfig parse_config(std::string_view text);
ExperimentConfig config_from_json(const nlohmann::json& doc);

/// Couplings of the configured model in canonical edge order.
std::vector<double> resolve_couplings(const ModelSpec& spec);
IsingModel build_model(const ModelSpec& spec);

struct ChainSummary
{
    long long chain_id;
    double ln_z;
    double per_site_log2_z;
    double std_error_ln_z;
};

struct RunManifest
{
    nlohmann::json config;
    std::vector<double> couplings;
    std::string code_version;
    double wall_seconds = 0.0;
    std::vector<ChainSummary> results;
    nlohmann::json notes = nlohmann::json::object();

    [[nodiscard]] nlohmann::json to_json() const;
};

struct RunOptions
{
    std::size_t threads = 1;
    bool check_constraints = false;
    /// Written as a chain_id = -1 row ahead of the Monte Carlo rows.
    std::optional<double> reference_per_site;
};

/// Manifest path for an output file: "<path>.manifest.json".
std::filesystem::path manifest_path(const std::filesystem::path& output);

/// Runs one configured experiment, writes the output file and its manifest.
/// Throws ConfigError for estimator/model incompatibilities and IoError when
/// a file cannot be written.
RunManifest run_experiment(const ExperimentConfig& cfg, const RunOptions& options = {});

/// Rows of the output table for an exact result or a set of chains.
std::string format_csv(const std::vector<SamplePath>& paths, std::optional<double> reference);
std::string format_number(double v);

struct VerifyOptions
{
    std::size_t max_m = 4;
    std::size_t max_n = 16;
    std::size_t trials = 20;
    std::uint64_t seed = 1;
    double tolerance = 1e-9;
    /// Adds this many bits (k ln 2) to the dual normalization; used to check
    /// that the harness notices a wrong constant.
    double tamper_bits = 0.0;
};

struct VerifyReport
{
    bool passed = true;
    std::size_t comparisons = 0;
    double worst_relative = 0.0;
    std::string worst_case;
    std::vector<std::string> failures;
};

/// Cross-checks every exact method against the others on random models.
VerifyReport verify(const VerifyOptions& options);

enum class Figure { fig6, fig7, fig8, fig9, fig10, fig11 };

std::optional<Figure> figure_from_string(std::string_view name);
std::string_view to_string(Figure f) noexcept;

/// The configuration used to regenerate a figure's sample paths.
ExperimentConfig figure_preset(Figure figure, std::uint64_t samples = 100000);

/// Runs a figure preset into `out_dir/<fig>.csv` with the exact transfer
/// matrix value as the reference row.
RunManifest reproduce(Figure figure, const std::filesystem::path& out_dir,
                      const RunOptions& options = {}, std::uint64_t samples = 100000);

} // namespace isingdual
