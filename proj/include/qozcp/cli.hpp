#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "qozcp/ambiguity.hpp"
#include "qozcp/sequences.hpp"

namespace qozcp::cli {

inline constexpr int kFormatVersion = 1;

enum ExitCode : int { kOk = 0, kInternalError = 1, kUsageError = 2 };

/// Error in user-supplied flags or input data; maps to exit code 2.
class UsageError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// On-disk record of a designed (or synthesized) pair.
struct PairArchive {
    int format_version = kFormatVersion;
    std::size_t zone = 0;
    std::string mode;
    nlohmann::ordered_json config = nlohmann::ordered_json::object();
    SequencePair pair;
    std::vector<double> objective_history;
    nlohmann::ordered_json metrics = nlohmann::ordered_json::object();
};

std::string serialize_archive(const PairArchive& archive);
PairArchive parse_archive(const std::string& text);
PairArchive read_archive(const std::filesystem::path& path);

/// CSV with header "k,theta,re,im,modulus" and one row per grid cell.
void write_surface_table(std::ostream& os, const AmbiguitySurface& surface);

/// Resolves "golay:L" or an archive path to a pair plus its zone (if known).
struct LoadedPair {
    SequencePair pair;
    std::optional<std::size_t> zone;
    std::string label;
};
LoadedPair load_pair(const std::string& spec);

/// Directory for outputs when no explicit path is given: $QOZCP_OUTPUT_DIR or ".".
std::filesystem::path default_output_dir();

/// Entry point shared by the qozcp executable and the tests.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace qozcp::cli
