#include "qpt/runner.hpp"

#include <cmath>
#include <cstdlib>
#include <numbers>
#include <string>

#include "qpt/dicke_effective.hpp"
#include "qpt/dicke_exact.hpp"
#include "qpt/echo.hpp"
#include "qpt/errors.hpp"
#include "qpt/lmg.hpp"

namespace qpt::cli {

int resolve_threads(std::optional<int> flag, const RunConfig& config) {
    if (flag) {
        if (*flag < 1) throw InputError("--threads must be at least 1");
        return *flag;
    }
    if (const char* env = std::getenv("QPT_THREADS"); env && *env) {
        char* end = nullptr;
        const long v = std::strtol(env, &end, 10);
        if (*end != '\0' || v < 1 || v > 4096) throw InputError("QPT_THREADS must be a positive integer");
        return int(v);
    }
    return config.threads;
}

namespace {

using io::Cell;
using io::ColumnSpec;
using io::ColumnType;
using io::ResultTable;

constexpr ColumnType R = ColumnType::Real;
constexpr ColumnType I = ColumnType::Integer;
constexpr ColumnType T = ColumnType::Text;

struct Point {
    double eta;
    double scale;  // 0 for explicit pairs
    double p1;
    double p2;
    std::string phase;
};

double critical_value(const RunConfig& c) {
    return c.model == Model::Dicke ? dicke::critical_coupling(c.omega, c.omega0) : 1.0;
}

std::string phase_of(const RunConfig& c, double p) {
    const double crit = critical_value(c);
    if (c.model == Model::Dicke) return p <= crit ? "normal" : "superradiant";
    return p > 1.0 ? "symmetric" : p < 1.0 ? "broken" : "critical";
}

double eta_of(const RunConfig& c, double p1, double p2) {
    if (p1 == p2) return 1.0;
    if (c.model == Model::Lmg) return lmg::eta_lmg(p1, p2);
    return dicke::scaling_eta(p1, p2, critical_value(c)).eta;
}

std::vector<Point> points(const RunConfig& c) {
    std::vector<Point> out;
    if (!c.pairs.empty()) {
        for (const auto& [a, b] : c.pairs) out.push_back({eta_of(c, a, b), 0.0, a, b, phase_of(c, b)});
        return out;
    }
    const double crit = critical_value(c);
    const Side side = c.side_or_default();
    std::vector<Side> sides;
    if (side == Side::Both) sides = {Side::Below, Side::Above};
    else sides = {side};
    for (const Side s : sides) {
        const double sign = s == Side::Below ? -1.0 : 1.0;
        for (const double eta : c.etas)
            for (const double scale : c.scales) {
                // Distances from the critical point in units of it: scale for
                // the second parameter, eta * scale for the first.
                const double p2 = crit * (1.0 + sign * scale);
                const double p1 = eta == 1.0 ? p2 : crit * (1.0 + sign * eta * scale);
                out.push_back({eta, scale, p1, p2, to_string(c.model, s)});
            }
    }
    return out;
}

double analytic_fidelity(const RunConfig& c, const Point& p) {
    if (p.p1 == p.p2) return 1.0;
    if (c.model == Model::Lmg) return lmg::fidelity_lmg(c.gamma, p.p1, p.p2);
    return dicke::fidelity_gaussian({c.omega, c.omega0, p.p1}, {c.omega, c.omega0, p.p2});
}

dicke::SolverOptions solver_options(const RunConfig& c) {
    dicke::SolverOptions o;
    o.dense.threshold = c.exact.dense_threshold;
    return o;
}

std::string param_name(const RunConfig& c, int which) {
    return std::string(c.model == Model::Dicke ? "lambda" : "h") + std::to_string(which);
}

std::string param_unit(const RunConfig& c) { return c.model == Model::Dicke ? "energy" : "1"; }

void stamp(ResultTable& t, const RunConfig& c) {
    t.set_provenance("program", std::string("qpt_scaling ") + kVersion);
    t.set_provenance("config_hash", config_hash(c));
    t.set_provenance("model", to_string(c.model));
    t.set_provenance("task", to_string(c.task));
    if (c.model == Model::Dicke) {
        t.set_provenance("omega", io::format_real(c.omega));
        t.set_provenance("omega0", io::format_real(c.omega0));
        t.set_provenance("lambda_c", io::format_real(critical_value(c)));
    } else {
        t.set_provenance("gamma", io::format_real(c.gamma));
    }
}

RunOutput fidelity_task(const RunConfig& c, int threads) {
    const auto pts = points(c);
    ResultTable t({{"eta", R, "1"},
                   {param_name(c, 1), R, param_unit(c)},
                   {param_name(c, 2), R, param_unit(c)},
                   {"phase", T, "1"},
                   {"Lp_analytic", R, "1"},
                   {"Lp_scaling", R, "1"}});
    const auto rows = parallel_map(pts.size(), threads, [&](std::size_t i) {
        const Point& p = pts[i];
        return std::vector<Cell>{p.eta, p.p1, p.p2, p.phase, analytic_fidelity(c, p), dicke::fidelity_scaling(p.eta)};
    });
    for (auto r : rows) t.add_row(std::move(r));
    stamp(t, c);
    return {std::move(t), std::nullopt};
}

RunOutput sweep_task(const RunConfig& c, int threads) {
    const auto pts = points(c);
    std::vector<ColumnSpec> cols = {{"model", T, "1"},        {"eta", R, "1"},         {"scale", R, "1"},
                                    {"phase", T, "1"},        {"param1", R, param_unit(c)}, {"param2", R, param_unit(c)},
                                    {"Lp_analytic", R, "1"},  {"Lp_scaling", R, "1"}};
    if (c.exact.enabled) {
        cols.push_back({"N", I, "1"});
        cols.push_back({"n_b", I, "1"});
        cols.push_back({"LpN", R, "1"});
    }
    ResultTable t(std::move(cols));
    const auto rows = parallel_map(pts.size(), threads, [&](std::size_t i) {
        const Point& p = pts[i];
        std::vector<Cell> row{to_string(c.model), p.eta, p.scale, p.phase, p.p1, p.p2, analytic_fidelity(c, p),
                              dicke::fidelity_scaling(p.eta)};
        if (c.exact.enabled) {
            const int N = c.exact.N.front(), nb = c.exact.cutoff_for(N);
            row.emplace_back(std::int64_t(N));
            row.emplace_back(std::int64_t(nb));
            row.emplace_back(dicke::fidelity_exact(c.omega, c.omega0, N, nb, p.p1, p.p2, solver_options(c)));
        }
        return row;
    });
    for (auto r : rows) t.add_row(std::move(r));
    stamp(t, c);
    if (c.exact.enabled) t.set_provenance("truncation", "n_b = " + (c.exact.n_b ? std::to_string(*c.exact.n_b)
                                                                              : io::format_real(c.exact.nb_factor) + " N"));
    return {std::move(t), std::nullopt};
}

RunOutput converge_task(const RunConfig& c, int threads) {
    const auto [l1, l2] = c.pairs.front();
    dicke::ConvergenceOptions opt;
    opt.nb_factor = c.exact.nb_factor;
    opt.reference = c.exact.reference == "gaussian" ? dicke::DReference::Gaussian : dicke::DReference::Scaling;
    opt.solver = solver_options(c);
    // One ConvergenceSeries per N keeps the workers independent.
    const auto parts = parallel_map(c.exact.N.size(), threads, [&](std::size_t i) {
        dicke::ConvergenceOptions o = opt;
        if (c.exact.n_b) o.nb_factor = double(*c.exact.n_b) / c.exact.N[i];
        const int n = c.exact.N[i];
        return dicke::convergence_D(c.omega, c.omega0, l1, l2, std::span<const int>(&n, 1), o);
    });
    dicke::ConvergenceSeries all{{}, parts.front().Lp_reference, opt.reference};
    for (const auto& p : parts) all.entries.push_back(p.entries.front());

    ResultTable t({{"N", I, "1"}, {"n_b", I, "1"}, {"LpN", R, "1"}, {"D", R, "1"}});
    for (const auto& e : all.entries) t.add_row({std::int64_t(e.N), std::int64_t(e.n_b), e.LpN, e.D});
    stamp(t, c);
    t.set_provenance("lambda1", io::format_real(l1));
    t.set_provenance("lambda2", io::format_real(l2));
    t.set_provenance("reference", c.exact.reference);
    t.set_provenance("Lp_reference", io::format_real(all.Lp_reference));
    std::string slopes;
    if (all.entries.size() > 1)
        for (const double s : dicke::log_slopes(all)) slopes += (slopes.empty() ? "" : " ") + io::format_real(s);
    if (!slopes.empty()) t.set_provenance("log_slopes", slopes);
    t.set_provenance("truncation", c.exact.n_b ? "n_b = " + std::to_string(*c.exact.n_b)
                                               : "n_b = " + io::format_real(c.exact.nb_factor) + " N");
    return {std::move(t), std::nullopt};
}

echo::EchoSeries series_for(const RunConfig& c, const Point& p) {
    auto grid_for = [&](double omega1) {
        const double period = std::numbers::pi / omega1;
        const auto samples = std::size_t(std::ceil(c.time.periods * c.time.samples_per_period)) + 1;
        return echo::uniform_grid(c.time.periods * period, samples);
    };
    if (c.model == Model::Lmg) {
        const double gap = lmg::gap_angle({c.gamma, p.p1}).delta;
        if (!(gap > 0)) throw DomainError("h1 = 1 has no oscillation frequency");
        const auto grid = grid_for(gap);
        return lmg::echo_lmg(c.gamma, p.p1, p.p2, grid);
    }
    const dicke::DickeParams d1{c.omega, c.omega0, p.p1}, d2{c.omega, c.omega0, p.p2};
    const double e1 = dicke::mode_energies(d1).e1;
    if (!(e1 > 0)) throw DomainError("lambda1 = lambda_c has no oscillation frequency");
    const auto grid = grid_for(e1);
    if (c.exact.enabled) {
        const int N = c.exact.N.front();
        linalg::DenseOptions dense;
        dense.threshold = c.exact.dense_threshold;
        auto s = dicke::echo_exact(c.omega, c.omega0, N, c.exact.cutoff_for(N), p.p1, p.p2, grid, dense);
        return s;
    }
    if ((p.p1 < d1.lambda_c()) != (p.p2 < d1.lambda_c()) && p.p1 != p.p2)
        throw CrossPhaseError("couplings lie on opposite sides of lambda_c");
    auto s = echo::survival_closed(dicke::zero_mode_map(d1, d2), e1, grid);
    s.source = {"dicke", p.p1, p.p2, d1.lambda_c()};
    return s;
}

RunOutput echo_task(const RunConfig& c, int threads, bool collapse) {
    const auto pts = points(c);
    const auto series = parallel_map(pts.size(), threads, [&](std::size_t i) { return series_for(c, pts[i]); });

    ResultTable t({{"series", I, "1"},
                   {"eta", R, "1"},
                   {param_name(c, 1), R, param_unit(c)},
                   {param_name(c, 2), R, param_unit(c)},
                   {"t", R, "1/energy"},
                   {"tau", R, "1"},
                   {"M", R, "1"}});
    for (std::size_t i = 0; i < series.size(); ++i)
        for (std::size_t k = 0; k < series[i].t.size(); ++k)
            t.add_row({std::int64_t(i), pts[i].eta, pts[i].p1, pts[i].p2, series[i].t[k], series[i].tau[k],
                       series[i].M[k]});
    stamp(t, c);
    t.set_provenance("time_grid", io::format_real(c.time.periods) + " periods, " +
                                      std::to_string(c.time.samples_per_period) + " samples per period");
    if (c.model == Model::Dicke) {
        if (c.exact.enabled) {
            const int N = c.exact.N.front();
            t.set_provenance("solver", "exact diagonalization, even parity block, N = " + std::to_string(N) +
                                           ", n_b = " + std::to_string(c.exact.cutoff_for(N)));
        } else {
            t.set_provenance("solver", "single soft-mode closed form");
        }
    } else if (c.side_or_default() != Side::Above) {
        t.set_provenance("extrapolated", "broken-phase echo uses the symmetric-phase construction");
    }

    if (!collapse) {
        ResultTable s({{"series", I, "1"},
                       {"eta", R, "1"},
                       {param_name(c, 1), R, param_unit(c)},
                       {param_name(c, 2), R, param_unit(c)},
                       {"omega1", R, "energy"},
                       {"M_p", R, "1"},
                       {"t_min", R, "1/energy"},
                       {"M_p_scaling", R, "1"}});
        for (std::size_t i = 0; i < series.size(); ++i) {
            double mp = NAN, tmin = NAN;
            if (series[i].covers_period()) {
                const auto m = echo::min_echo(series[i]);
                mp = m.value;
                tmin = m.t;
            }
            s.add_row({std::int64_t(i), pts[i].eta, pts[i].p1, pts[i].p2, series[i].omega1, mp, tmin,
                       echo::mp_scaling(pts[i].eta)});
        }
        stamp(s, c);
        return {std::move(t), std::move(s)};
    }

    std::vector<echo::CollapseGroup> groups;
    for (std::size_t i = 0; i < pts.size(); ++i) {
        auto it = std::find_if(groups.begin(), groups.end(), [&](const auto& g) { return g.eta == pts[i].eta; });
        if (it == groups.end()) {
            groups.push_back({pts[i].eta, {}});
            it = groups.end() - 1;
        }
        it->series.push_back(series[i]);
    }
    const auto report = echo::collapse_check(groups);
    ResultTable s({{"eta", R, "1"},
                   {"members", I, "1"},
                   {"spread", R, "1"},
                   {"spread_decreasing", I, "1"},
                   {"interpolation_bound", R, "1"}});
    for (const auto& g : report.groups)
        s.add_row({g.eta, std::int64_t(g.members.size()), g.spread, std::int64_t(g.spread_decreasing ? 1 : 0),
                   g.interpolation_bound});
    stamp(s, c);
    return {std::move(t), std::move(s)};
}

}  // namespace

RunOutput run(const RunConfig& config) {
    validate(config);
    const int threads = config.threads;
    switch (config.task) {
        case Task::Fidelity: return fidelity_task(config, threads);
        case Task::Sweep: return sweep_task(config, threads);
        case Task::Converge: return converge_task(config, threads);
        case Task::Echo: return echo_task(config, threads, false);
        default: return echo_task(config, threads, true);
    }
}

std::vector<std::string> write_outputs(const RunConfig& config, const RunOutput& output) {
    std::vector<std::string> written;
    for (const std::string& path : {config.csv, config.json}) {
        if (path.empty()) continue;
        io::write_table(path, output.table);
        written.push_back(path);
        if (output.summary) {
            std::filesystem::path p(path);
            std::filesystem::path s = p.parent_path() / (p.stem().string() + ".summary" + p.extension().string());
            io::write_table(s, *output.summary);
            written.push_back(s.string());
        }
    }
    return written;
}

}  // namespace qpt::cli
