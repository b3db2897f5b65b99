#pragma once

#include <filesystem>
#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace qpt::cli {

enum class Model { Dicke, Lmg };
enum class Task { Fidelity, Echo, Converge, Collapse, Sweep };
/// Which side(s) of the critical point generated pairs are placed on.
/// Dicke uses Normal/SuperRadiant, LMG Symmetric/Broken; Both means the
/// model's two phases in that order.
enum class Side { Below, Above, Both };

struct ExactControls {
    bool enabled = false;
    std::vector<int> N;
    double nb_factor = 1.0;
    std::optional<int> n_b;  // fixed cutoff; overrides nb_factor
    long dense_threshold = 4096;
    std::string reference = "scaling";  // D(N) reference: scaling | gaussian

    int cutoff_for(int n) const;
};

struct TimeControls {
    double periods = 1.0;
    int samples_per_period = 400;
};

struct RunConfig {
    Model model = Model::Dicke;
    Task task = Task::Fidelity;
    double omega = 1.0;
    double omega0 = 1.0;
    double gamma = 0.0;
    std::vector<std::pair<double, double>> pairs;
    std::vector<double> etas;
    std::vector<double> scales;
    std::optional<Side> side;  // unset: normal (Dicke) or symmetric (LMG)
    ExactControls exact;
    TimeControls time;
    std::string csv;
    std::string json;
    int threads = 1;

    Side side_or_default() const;
};

std::string to_string(Model m);
std::string to_string(Task t);
std::string to_string(Model m, Side s);
Model parse_model(const std::string& s);
Task parse_task(const std::string& s);
Side parse_side(const std::string& s);

/// Where-hint for error messages: maps a dotted key path to a prefix such as
/// "line 7: ". Empty for configs assembled from flags.
using Locator = std::function<std::string(const std::string& key)>;

/// Domain and consistency checks; throws InputError.
void validate(const RunConfig& config, const Locator& where = {});

/// Parses and validates a JSON document. Syntax errors, unknown keys, type
/// errors and domain violations are reported with the line they occur on.
RunConfig parse_config(const std::string& text);
RunConfig load_config(const std::filesystem::path& path);

/// Canonical JSON of everything that influences results (outputs and
/// thread count excluded).
std::string canonical_json(const RunConfig& config);

/// 64-bit FNV-1a of the canonical JSON, as 16 hex digits.
std::string config_hash(const RunConfig& config);

}  // namespace qpt::cli
