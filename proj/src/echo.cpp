#include "qpt/echo.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "qpt/errors.hpp"

namespace qpt::echo {

double EchoSource::distance2() const { return std::abs(param2 - critical); }

void EchoSeries::validate() const {
    if (t.size() != tau.size() || t.size() != M.size())
        throw InputError("echo series columns have unequal lengths");
    check_time_grid(t);
    if (std::abs(M.front() - 1.0) > 1e-10) throw InputError("echo series does not start at M = 1");
    for (std::size_t i = 0; i < t.size(); ++i)
        if (std::abs(tau[i] - omega1 * t[i]) > 1e-12 * std::max(1.0, std::abs(tau[i])))
            throw InputError("rescaled grid differs from omega1 * t at sample " + std::to_string(i));
}

bool EchoSeries::covers_period() const {
    return period && std::isfinite(*period) && !t.empty() && t.back() - t.front() >= *period * (1.0 - 1e-12);
}

void check_time_grid(std::span<const double> t_grid) {
    if (t_grid.empty()) throw InputError("time grid is empty");
    if (t_grid.front() != 0.0) throw InputError("time grid must start at t = 0");
    for (std::size_t i = 1; i < t_grid.size(); ++i)
        if (!(t_grid[i] > t_grid[i - 1]))
            throw InputError("time grid is not strictly ascending at index " + std::to_string(i));
}

std::vector<double> uniform_grid(double t_max, std::size_t samples) {
    if (samples < 2 || !(t_max > 0)) throw InputError("uniform grid needs t_max > 0 and at least two samples");
    std::vector<double> out(samples);
    for (std::size_t i = 0; i < samples; ++i)
        out[i] = t_max * static_cast<double>(i) / static_cast<double>(samples - 1);
    return out;
}

EchoSeries survival_closed(const squeeze::SqueezeMap& map, double delta1, std::span<const double> t_grid) {
    if (!(delta1 >= 0) || !std::isfinite(delta1)) throw InputError("gap delta1 must be non-negative and finite");
    check_time_grid(t_grid);
    const double q = map.tanh_r();
    const double c = std::cosh(map.r());
    const double one_minus_q2 = 1.0 / (c * c);

    EchoSeries out;
    out.t.assign(t_grid.begin(), t_grid.end());
    out.omega1 = delta1;
    out.M.reserve(t_grid.size());
    out.tau.reserve(t_grid.size());
    if (delta1 == 0.0) {
        if (q != 0.0) out.warnings.emplace_back("degenerate gap: zero-frequency mode gives a constant echo");
        out.period = std::numeric_limits<double>::infinity();
    } else {
        out.period = std::numbers::pi / delta1;
    }
    for (double t : t_grid) {
        // 1 - 2 q^2 cos(2x) + q^4 = (1 - q^2)^2 + 4 q^2 sin^2(x)
        const double s = std::sin(delta1 * t);
        const double denom = std::sqrt(one_minus_q2 * one_minus_q2 + 4.0 * q * q * s * s);
        out.M.push_back(one_minus_q2 / denom);
        out.tau.push_back(delta1 * t);
    }
    out.meta = {{"kind", "single-mode closed form"}, {"tanh_r", std::to_string(q)}};
    return out;
}

double semiclassical_envelope(const SemiclassicalParams& params, double t) {
    const double x = 1.0 + params.xi * params.xi * t * t;
    return params.b0 / std::sqrt(x) * std::exp(-params.gamma * t * t / x);
}

EchoSeries rescale_time(EchoSeries series, double omega1) {
    if (!(omega1 > 0) || !std::isfinite(omega1)) throw InputError("rescaling frequency must be positive");
    series.omega1 = omega1;
    for (std::size_t i = 0; i < series.t.size(); ++i) series.tau[i] = omega1 * series.t[i];
    return series;
}

EchoMinimum min_echo(const EchoSeries& series) {
    if (series.M.empty()) throw InputError("empty echo series");
    if (!series.covers_period()) throw DomainError("echo series does not cover one full period");
    const auto& t = series.t;
    const auto& m = series.M;
    const auto it = std::min_element(m.begin(), m.end());
    const std::size_t i = static_cast<std::size_t>(it - m.begin());
    EchoMinimum out{*it, t[i]};
    if (i == 0 || i + 1 == m.size()) return out;

    // Parabola through (t[i-1], m[i-1]), (t[i], m[i]), (t[i+1], m[i+1]).
    const double x0 = t[i - 1] - t[i], x2 = t[i + 1] - t[i];
    const double y0 = m[i - 1] - m[i], y2 = m[i + 1] - m[i];
    const double det = x0 * x2 * (x0 - x2);
    const double a = (y0 * x2 - y2 * x0) / det;
    const double b = (y2 * x0 * x0 - y0 * x2 * x2) / det;
    if (!(a > 0)) return out;
    const double shift = -b / (2.0 * a);
    if (shift < x0 || shift > x2) return out;
    out.value = m[i] + b * shift + a * shift * shift;
    out.t = t[i] + shift;
    return out;
}

double mp_scaling(double eta) {
    if (!(eta > 0) || !std::isfinite(eta)) throw InputError("eta must be positive and finite");
    return 2.0 * std::sqrt(eta) / (1.0 + eta);
}

double interpolate(std::span<const double> x, std::span<const double> y, double at) {
    const auto hi = std::lower_bound(x.begin(), x.end(), at);
    if (hi == x.end()) {
        if (std::abs(at - x.back()) <= 1e-12 * std::max(1.0, std::abs(at))) return y.back();
        throw InputError("interpolation point above the grid");
    }
    const std::size_t j = static_cast<std::size_t>(hi - x.begin());
    if (x[j] == at) return y[j];
    if (j == 0) throw InputError("interpolation point below the grid");
    const double w = (at - x[j - 1]) / (x[j] - x[j - 1]);
    return (1.0 - w) * y[j - 1] + w * y[j];
}

}  // namespace qpt::echo
