// Acceptance checks, one line per criterion. Exit status is the number of
// failed criteria.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "qpt/dicke_effective.hpp"
#include "qpt/dicke_exact.hpp"
#include "qpt/echo.hpp"
#include "qpt/linalg/eigh.hpp"
#include "qpt/linalg/lanczos.hpp"
#include "qpt/linalg/propagate.hpp"
#include "qpt/lmg.hpp"
#include "qpt/squeeze.hpp"

using namespace qpt;

namespace {

struct Outcome {
    bool pass;
    std::string detail;
};

std::string fmt(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.3g", v);
    return buf;
}

double tanh_for_eta(double eta) { return (std::sqrt(eta) - 1.0) / (std::sqrt(eta) + 1.0); }

Outcome fidelity_scaling_law() {
    double worst3 = 0, worst4 = 0;
    for (const auto& [w, w0] : {std::pair{1.0, 1.0}, std::pair{2.0, 0.5}}) {
        const double lc = dicke::critical_coupling(w, w0);
        for (const double eta : {1e-3, 1e-2, 1e-1, 0.5})
            for (const double sign : {-1.0, 1.0})
                for (const double scale : {1e-3, 1e-4}) {
                    const dicke::DickeParams p1{w, w0, lc * (1 + sign * eta * scale)};
                    const dicke::DickeParams p2{w, w0, lc * (1 + sign * scale)};
                    const double dev = std::abs(dicke::fidelity_gaussian(p1, p2) - dicke::fidelity_scaling(eta));
                    (scale == 1e-3 ? worst3 : worst4) = std::max(scale == 1e-3 ? worst3 : worst4, dev);
                }
    }
    return {worst3 <= 1e-3 && worst4 <= 1e-4,
            "max deviation " + fmt(worst3) + " at 1e-3 lambda_c, " + fmt(worst4) + " at 1e-4 lambda_c"};
}

Outcome lmg_universality() {
    double worst = 0;
    for (const double gamma : {0.0, 0.5})
        for (const double eta : {1e-2, 1e-1}) {
            const double h2 = 1.0 + 1e-3, h1 = 1.0 + eta * 1e-3;
            worst = std::max(worst, std::abs(lmg::fidelity_lmg(gamma, h1, h2) - dicke::fidelity_scaling(eta)));
        }
    return {worst <= 1e-3, "max deviation " + fmt(worst)};
}

Outcome convergence_study() {
    const std::vector<int> Ns = {8, 16, 32, 64, 128};
    const auto series = dicke::convergence_D(1.0, 1.0, 0.495, 0.45, Ns);
    bool decreasing = true;
    for (std::size_t i = 1; i < series.entries.size(); ++i)
        decreasing = decreasing && series.entries[i].D < series.entries[i - 1].D;
    const auto slopes = dicke::log_slopes(series);
    // "Measurably" more negative: each slope drop exceeds 0.01.
    bool concave = true;
    for (std::size_t i = 1; i < slopes.size(); ++i) concave = concave && slopes[i] < slopes[i - 1] - 0.01;
    std::string d = "D =";
    for (const auto& e : series.entries) d += " " + fmt(e.D);
    d += "; slopes =";
    for (double s : slopes) d += " " + fmt(s);
    return {decreasing && concave, d};
}

Outcome echo_minimum() {
    double worst = 0;
    for (const double eta : {1e-4, 1e-3, 1e-2, 1e-1}) {
        const auto map = squeeze::SqueezeMap::from_tanh(tanh_for_eta(eta));
        const double delta = 1.0;
        const auto grid = echo::uniform_grid(std::numbers::pi / delta * 1.02, 1001);
        const auto series = echo::survival_closed(map, delta, grid);
        worst = std::max(worst, std::abs(echo::min_echo(series).value - echo::mp_scaling(eta)));
    }
    return {worst <= 1e-6, "max |M_p - 2 sqrt(eta)/(1+eta)| = " + fmt(worst)};
}

echo::EchoSeries single_mode(double eta, double scale) {
    const dicke::DickeParams p2{1.0, 1.0, 0.5 * (1 - scale)};
    const dicke::DickeParams p1{1.0, 1.0, 0.5 * (1 - eta * scale)};
    const double e1 = dicke::mode_energies(p1).e1;
    std::vector<double> t;
    for (int k = 0; k <= 2000; ++k) t.push_back(std::numbers::pi * k / 2000.0 / e1);
    auto s = echo::survival_closed(dicke::zero_mode_map(p1, p2), e1, t);
    s.source = {"dicke", p1.lambda, p2.lambda, 0.5};
    return s;
}

Outcome echo_collapse() {
    std::vector<echo::CollapseGroup> groups;
    for (const double eta : {1e-2, 1e-3}) groups.push_back({eta, {single_mode(eta, 1e-2), single_mode(eta, 1e-3)}});
    const auto analytic = echo::collapse_check(groups);
    double worst = 0;
    for (const auto& g : analytic.groups) worst = std::max(worst, g.spread);

    // Exact diagonalisation, eta = 0.5, lambda2 at 0.2 and 0.4 lambda_c below it.
    auto exact_spread = [](int N) {
        echo::CollapseGroup g{0.5, {}};
        for (const double l2 : {0.3, 0.4}) {
            const double l1 = 0.5 - 0.5 * (0.5 - l2);
            const double e1 = dicke::mode_energies({1.0, 1.0, l1}).e1;
            std::vector<double> t;
            for (int k = 0; k <= 400; ++k) t.push_back(std::numbers::pi * k / 400.0 / e1);
            g.series.push_back(dicke::echo_exact(1.0, 1.0, N, N, l1, l2, t));
        }
        return echo::collapse_check(std::span(&g, 1)).groups.front().spread;
    };
    const double s32 = exact_spread(32), s64 = exact_spread(64);
    return {worst <= 1e-4 && s64 < s32, "single-mode spread " + fmt(worst) + "; exact spread N=32 " + fmt(s32) +
                                            ", N=64 " + fmt(s64)};
}

Outcome echo_shape() {
    // Near-critical echo, eta = 0.5, lambda2 = 0.99 lambda_c.
    const dicke::DickeParams p2{1.0, 1.0, 0.495}, p1{1.0, 1.0, 0.4975};
    const auto modes = dicke::mode_energies(p1);
    const double t_p = 2 * std::numbers::pi / modes.e2;
    const double t_1 = 2 * std::numbers::pi / modes.e1;
    const auto grid = echo::uniform_grid(std::numbers::pi / modes.e1, 4001);
    const auto series = echo::survival_closed(dicke::zero_mode_map(p1, p2), modes.e1, grid);
    const auto fit = echo::fit_envelope(series, t_p, 0.4 * t_1);

    // Synthetic round trip.
    const echo::SemiclassicalParams truth{0.5, 0.2, 1.0};
    echo::EchoSeries synth;
    for (int k = 0; k <= 200; ++k) {
        const double t = 0.05 * k;
        synth.t.push_back(t);
        synth.tau.push_back(t);
        synth.M.push_back(echo::semiclassical_envelope(truth, t));
    }
    const auto rt = echo::fit_envelope(synth, 0.0, 10.0);
    const double eg = std::abs(rt.params.gamma / truth.gamma - 1), ex = std::abs(rt.params.xi / truth.xi - 1);
    return {fit.max_log_residual <= 0.05 && eg <= 0.01 && ex <= 0.01,
            "echo fit residual " + fmt(fit.max_log_residual) + " on [T_p, 0.4 T_1]; round trip errors Gamma " +
                fmt(eg) + ", xi " + fmt(ex)};
}

Outcome solver_integrity() {
    std::mt19937_64 rng(20240611);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    double recon = 0, ortho = 0, agree = 0, unit = 0;
    for (int trial = 0; trial < 100; ++trial) {
        const int n = 2 + int(rng() % 199);
        Eigen::MatrixXd a(n, n);
        for (int i = 0; i < n; ++i)
            for (int j = i; j < n; ++j) a(i, j) = a(j, i) = u(rng);
        const auto m = linalg::SymmetricMatrix<double>::from_dense(a);
        const auto d = linalg::eigh_dense(m);
        const double fro = m.frobenius_norm();
        recon = std::max(recon, (d.vectors * d.values.asDiagonal() * d.vectors.transpose() - a).cwiseAbs().maxCoeff() / fro);
        ortho = std::max(ortho, (d.vectors.transpose() * d.vectors - Eigen::MatrixXd::Identity(n, n)).cwiseAbs().maxCoeff());

        Eigen::VectorXd psi = Eigen::VectorXd::NullaryExpr(n, [&] { return u(rng); }).normalized();
        unit = std::max(unit, std::abs(linalg::spectral_weights(d, psi).sum() - 1.0));
        for (const double t : {0.0, 0.7, 13.0})
            unit = std::max(unit, std::abs(linalg::spectral_propagate(d, psi, t)) - 1.0);
    }
    for (int trial = 0; trial < 100; ++trial) {
        const int n = 10 + int(rng() % 491);
        std::vector<linalg::Triplet<double>> t;
        for (int i = 0; i < n; ++i) {
            t.push_back({u(rng), i, i});
            for (int k = 0; k < 3; ++k) {
                const int j = int(rng() % n);
                t.push_back({u(rng), std::min(i, j), std::max(i, j)});
            }
        }
        const auto m = linalg::SymmetricMatrix<double>::from_upper_triplets(n, t);
        const double dense = linalg::eigh_dense(m).values(0);
        const double lz = linalg::lanczos_ground(m, 1e-12).energy;
        agree = std::max(agree, std::abs(dense - lz));
    }
    return {recon <= 1e-9 && ortho <= 1e-10 && agree <= 1e-8 && unit <= 1e-10,
            "reconstruction " + fmt(recon) + ", orthonormality " + fmt(ortho) + ", Lanczos/dense " + fmt(agree) +
                ", unitarity " + fmt(unit)};
}

Outcome cross_module() {
    double worst_fid = 0, worst_col = 0;
    for (double eta = 1e-4; eta <= 1.0; eta *= 1.7) {
        const auto map = squeeze::SqueezeMap::from_tanh(tanh_for_eta(eta));
        worst_fid = std::max(worst_fid, std::abs(dicke::fidelity_scaling(eta) - squeeze::fidelity(map)));
    }
    for (const double q : {-0.9, -0.5, -0.1, 0.0, 0.3, 0.5, 0.8}) {
        const auto map = squeeze::SqueezeMap::from_tanh(q);
        const std::size_t n = squeeze::expansion_order_for(map, 1e-16);
        const auto g = squeeze::ground_expansion(map, n);
        const auto c = squeeze::overlap_matrix(map, 2 * n + 1, 0);
        for (std::size_t k = 0; k <= n; ++k)
            worst_col = std::max(worst_col, std::abs(c(Eigen::Index(2 * k), 0) - std::abs(g.amplitudes[k])));
    }
    return {worst_fid <= 1e-12 && worst_col <= 1e-12,
            "scaling vs squeeze fidelity " + fmt(worst_fid) + ", overlap column 0 vs expansion " + fmt(worst_col)};
}

}  // namespace

int main() {
    const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria = {
        {"fidelity scaling law", fidelity_scaling_law},
        {"LMG/Dicke universality", lmg_universality},
        {"convergence study D(N)", convergence_study},
        {"echo minimum M_p", echo_minimum},
        {"echo collapse", echo_collapse},
        {"echo envelope shape", echo_shape},
        {"exact solver integrity", solver_integrity},
        {"cross-module identities", cross_module},
    };
    int failed = 0;
    for (std::size_t i = 0; i < criteria.size(); ++i) {
        const auto start = std::chrono::steady_clock::now();
        Outcome o;
        try {
            o = criteria[i].second();
        } catch (const std::exception& e) {
            o = {false, std::string("threw: ") + e.what()};
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        std::printf("[%s] criterion %zu %s: %s (%.2f s)\n", o.pass ? "PASS" : "FAIL", i + 1, criteria[i].first,
                    o.detail.c_str(), secs);
        std::fflush(stdout);
        failed += o.pass ? 0 : 1;
    }
    return failed;
}
