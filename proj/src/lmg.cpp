#include "qpt/lmg.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "qpt/errors.hpp"

namespace qpt::lmg {

const char* to_string(Phase phase) {
    switch (phase) {
        case Phase::Symmetric: return "symmetric";
        case Phase::Broken: return "broken";
        default: return "critical";
    }
}

void LmgParams::validate() const {
    if (!(gamma >= 0 && gamma < 1)) throw InputError("anisotropy gamma must lie in [0, 1), got " + std::to_string(gamma));
    if (!(h > 0) || !std::isfinite(h)) throw InputError("field h must be positive and finite");
    if (h < 1 && !(h * h > gamma))
        throw InputError("broken phase requires h^2 > gamma (h = " + std::to_string(h) +
                         ", gamma = " + std::to_string(gamma) + ")");
}

Phase LmgParams::phase() const {
    if (h > 1) return Phase::Symmetric;
    if (h < 1) return Phase::Broken;
    return Phase::Critical;
}

LmgMode gap_angle(const LmgParams& params) {
    params.validate();
    const double g = params.gamma, h = params.h;
    switch (params.phase()) {
        case Phase::Symmetric:
            // atanh((1-g)/(2h-1-g)) written as a log ratio, exact near h = 1.
            return {2.0 * std::sqrt((h - 1.0) * (h - g)), 0.5 * std::log((h - g) / (h - 1.0))};
        case Phase::Broken:
            return {2.0 * std::sqrt((1.0 - h * h) * (1.0 - g)), 0.5 * std::log((1.0 - g) / (1.0 - h * h))};
        default:
            return {0.0, std::numeric_limits<double>::infinity()};
    }
}

namespace {

void same_phase(double h1, double h2) {
    if ((h1 - 1.0) * (h2 - 1.0) < 0)
        throw CrossPhaseError("fields h1 = " + std::to_string(h1) + " and h2 = " + std::to_string(h2) +
                              " lie on opposite sides of h = 1");
}

}  // namespace

squeeze::SqueezeMap lmg_map(double gamma, double h1, double h2) {
    const LmgMode m1 = gap_angle({gamma, h1});
    const LmgMode m2 = gap_angle({gamma, h2});
    same_phase(h1, h2);
    if (h1 == 1.0 || h2 == 1.0) throw DomainError("Bogoliubov angle diverges at h = 1");
    return squeeze::relative_map(m1.theta, m2.theta);
}

double fidelity_lmg(double gamma, double h1, double h2) {
    LmgParams{gamma, h1}.validate();
    LmgParams{gamma, h2}.validate();
    same_phase(h1, h2);
    if (h1 == h2) return 1.0;
    if (h1 == 1.0 || h2 == 1.0) return 0.0;
    return squeeze::fidelity(lmg_map(gamma, h1, h2));
}

double eta_lmg(double h1, double h2) {
    if (!(h1 > 0) || !(h2 > 0)) throw InputError("fields must be positive");
    if (h1 == h2) return 1.0;
    if (h2 == 1.0) throw InputError("eta undefined for h2 = 1");
    same_phase(h1, h2);
    return (h1 - 1.0) / (h2 - 1.0);
}

echo::EchoSeries echo_lmg(double gamma, double h1, double h2, std::span<const double> t_grid) {
    const squeeze::SqueezeMap map = lmg_map(gamma, h1, h2);
    const LmgMode m1 = gap_angle({gamma, h1});
    echo::EchoSeries out = echo::survival_closed(map, m1.delta, t_grid);
    out.source = {"lmg", h1, h2, 1.0};
    out.meta.emplace_back("gamma", std::to_string(gamma));
    if (h1 < 1.0) out.meta.emplace_back("extrapolated", "broken-phase echo built from the symmetric-phase construction");
    return out;
}

}  // namespace qpt::lmg
