// qpt_scaling: parameter sweeps and figure data for the Dicke and LMG
// scaling relations. Every subcommand builds a RunConfig (optionally
// starting from --config) and writes CSV/JSON tables, or CSV to stdout.

#include <cstdio>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "qpt/config.hpp"
#include "qpt/errors.hpp"
#include "qpt/runner.hpp"
#include "qpt/table.hpp"

namespace {

using qpt::cli::Model;
using qpt::cli::RunConfig;
using qpt::cli::Task;

enum Exit { kOk = 0, kUsage = 2, kResource = 3, kNumeric = 4 };

// Flag values are held as optionals so that only flags actually given
// override the configuration file.
struct Flags {
    std::string config;
    std::optional<double> omega, omega0, gamma;
    std::vector<std::string> pairs;
    std::vector<double> etas, scales;
    std::optional<std::string> phase;
    std::vector<int> N;
    bool exact = false;
    std::optional<double> nb_factor;
    std::optional<int> n_b;
    std::optional<long> dense_threshold;
    std::optional<std::string> reference;
    std::optional<double> periods;
    std::optional<int> samples_per_period;
    std::optional<std::string> csv, json;
    std::optional<int> threads;
};

std::pair<double, double> parse_pair(const std::string& s) {
    const auto comma = s.find(',');
    if (comma == std::string::npos) throw qpt::InputError("pair '" + s + "' must be written as p1,p2");
    try {
        std::size_t used1 = 0, used2 = 0;
        const std::string a = s.substr(0, comma), b = s.substr(comma + 1);
        const double x = std::stod(a, &used1), y = std::stod(b, &used2);
        if (used1 != a.size() || used2 != b.size()) throw std::invalid_argument(s);
        return {x, y};
    } catch (const std::logic_error&) {
        throw qpt::InputError("pair '" + s + "' is not two numbers");
    }
}

RunConfig assemble(const Flags& f, std::optional<Model> model, std::optional<Task> task) {
    RunConfig c = f.config.empty() ? RunConfig{} : qpt::cli::load_config(f.config);
    if (model) c.model = *model;
    if (task) c.task = *task;
    if (f.omega) c.omega = *f.omega;
    if (f.omega0) c.omega0 = *f.omega0;
    if (f.gamma) c.gamma = *f.gamma;
    if (!f.pairs.empty()) {
        c.pairs.clear();
        c.etas.clear();
        c.scales.clear();
        for (const auto& p : f.pairs) c.pairs.push_back(parse_pair(p));
    }
    if (!f.etas.empty()) {
        c.etas = f.etas;
        c.pairs.clear();
    }
    if (!f.scales.empty()) {
        c.scales = f.scales;
        c.pairs.clear();
    }
    if (f.phase) c.side = qpt::cli::parse_side(*f.phase);
    if (!f.N.empty()) c.exact.N = f.N;
    if (f.exact) c.exact.enabled = true;
    if (f.nb_factor) c.exact.nb_factor = *f.nb_factor;
    if (f.n_b) c.exact.n_b = *f.n_b;
    if (f.dense_threshold) c.exact.dense_threshold = *f.dense_threshold;
    if (f.reference) c.exact.reference = *f.reference;
    if (f.periods) c.time.periods = *f.periods;
    if (f.samples_per_period) c.time.samples_per_period = *f.samples_per_period;
    if (f.csv) c.csv = *f.csv;
    if (f.json) c.json = *f.json;
    c.threads = qpt::cli::resolve_threads(f.threads, c);
    qpt::cli::validate(c);
    return c;
}

void add_common(CLI::App* sub, Flags& f, bool model_params) {
    sub->add_option("--config", f.config, "JSON run configuration; flags override its values")
        ->check(CLI::ExistingFile);
    if (model_params) {
        sub->add_option("--omega", f.omega, "boson frequency");
        sub->add_option("--omega0", f.omega0, "atomic splitting");
        sub->add_option("--gamma", f.gamma, "LMG anisotropy in [0, 1)");
    }
    sub->add_option("--pair", f.pairs, "parameter pair p1,p2 (repeatable)");
    sub->add_option("--eta", f.etas, "scaling ratios")->delimiter(',');
    sub->add_option("--scale", f.scales, "distance of p2 from the critical point, relative")->delimiter(',');
    sub->add_option("--phase", f.phase, "normal | superradiant | symmetric | broken | both");
    sub->add_option("--periods", f.periods, "echo time span in oscillation periods");
    sub->add_option("--samples-per-period", f.samples_per_period, "echo samples per period");
    sub->add_option("--csv", f.csv, "CSV output path");
    sub->add_option("--json", f.json, "JSON output path");
    sub->add_option("--threads", f.threads, "worker threads (default: QPT_THREADS or 1)");
}

void add_exact(CLI::App* sub, Flags& f, bool toggle) {
    sub->add_option("--N", f.N, "atom numbers")->delimiter(',');
    if (toggle) sub->add_flag("--exact", f.exact, "use exact diagonalisation of the truncated Hamiltonian");
    sub->add_option("--nb-factor", f.nb_factor, "boson cutoff as a multiple of N (default 1)");
    sub->add_option("--n-b", f.n_b, "fixed boson cutoff");
    sub->add_option("--dense-threshold", f.dense_threshold, "largest block handled by the dense solver");
    sub->add_option("--reference", f.reference, "D(N) reference fidelity: scaling | gaussian");
}

int execute(const RunConfig& c) {
    const auto out = qpt::cli::run(c);
    const auto written = qpt::cli::write_outputs(c, out);
    if (written.empty()) {
        std::cout << qpt::io::to_csv(out.table);
        if (out.summary) std::cout << "\n" << qpt::io::to_csv(*out.summary);
    } else {
        for (const auto& p : written) std::cerr << "wrote " << p << "\n";
    }
    return kOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Fidelity and Loschmidt-echo scaling near the Dicke and LMG critical points"};
    app.require_subcommand(1);
    app.set_version_flag("--version", std::string("qpt_scaling ") + qpt::cli::kVersion);

    struct Entry {
        CLI::App* sub;
        std::optional<Model> model;
        std::optional<Task> task;
    };
    Flags f;
    std::vector<Entry> entries;
    auto add = [&](const char* name, const char* help, std::optional<Model> m, std::optional<Task> t, bool exact,
                   bool exact_toggle) {
        CLI::App* sub = app.add_subcommand(name, help);
        add_common(sub, f, true);
        if (exact) add_exact(sub, f, exact_toggle);
        entries.push_back({sub, m, t});
    };
    add("dicke-fidelity", "effective-model fidelity against the scaling law", Model::Dicke, Task::Fidelity, false, false);
    add("dicke-echo", "Loschmidt echo, closed form or exact (--exact)", Model::Dicke, Task::Echo, true, true);
    add("dicke-converge", "finite-N fidelity and its distance D(N) from the scaling law", Model::Dicke,
        Task::Converge, true, false);
    add("lmg-fidelity", "LMG fidelity against the scaling law", Model::Lmg, Task::Fidelity, false, false);
    add("lmg-echo", "LMG single-mode Loschmidt echo", Model::Lmg, Task::Echo, false, false);
    add("collapse", "echo collapse on the rescaled time axis, grouped by eta", std::nullopt, Task::Collapse, true, true);
    add("sweep", "eta x scale grid of analytic (and optionally exact) fidelities", std::nullopt, Task::Sweep, true,
        true);
    CLI::App* run_cmd = app.add_subcommand("run", "execute a JSON run configuration");
    run_cmd->add_option("--config", f.config, "JSON run configuration")->required()->check(CLI::ExistingFile);
    run_cmd->add_option("--threads", f.threads, "worker threads (default: QPT_THREADS or the config value)");
    run_cmd->add_option("--csv", f.csv, "CSV output path");
    run_cmd->add_option("--json", f.json, "JSON output path");
    entries.push_back({run_cmd, std::nullopt, std::nullopt});

    std::optional<std::string> model_name;
    for (auto* name : {"collapse", "sweep"})
        app.get_subcommand(name)->add_option("--model", model_name, "dicke | lmg");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kOk : kUsage;
    }

    try {
        for (const auto& e : entries) {
            if (!e.sub->parsed()) continue;
            std::optional<Model> model = e.model;
            if (model_name) model = qpt::cli::parse_model(*model_name);
            return execute(assemble(f, model, e.task));
        }
        return kUsage;
    } catch (const qpt::ResourceError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kResource;
    } catch (const qpt::NumericError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kNumeric;
    } catch (const qpt::InputError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kUsage;
    } catch (const qpt::DomainError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kUsage;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kNumeric;
    }
}
