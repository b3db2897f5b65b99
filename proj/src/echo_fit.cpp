#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <string>

#include <Eigen/Dense>

#include "qpt/echo.hpp"
#include "qpt/errors.hpp"

namespace qpt::echo {

namespace {

// Parameters x = (Gamma, s = xi^2, u = ln b0); the model is linear in u.
constexpr double kLogB0Max = 0.18232155679395462;  // ln 1.2

struct Window {
    Eigen::ArrayXd t2;
    Eigen::ArrayXd log_m;
};

Eigen::ArrayXd log_model(const Eigen::Vector3d& x, const Eigen::ArrayXd& t2) {
    const Eigen::ArrayXd d = 1.0 + x(1) * t2;
    return x(2) - 0.5 * d.log() - x(0) * t2 / d;
}

Eigen::MatrixX3d jacobian(const Eigen::Vector3d& x, const Eigen::ArrayXd& t2) {
    const Eigen::ArrayXd d = 1.0 + x(1) * t2;
    Eigen::MatrixX3d j(t2.size(), 3);
    j.col(0) = (-t2 / d).matrix();
    j.col(1) = (-0.5 * t2 / d + x(0) * t2.square() / d.square()).matrix();
    j.col(2).setOnes();
    return j;
}

Eigen::Vector3d project(Eigen::Vector3d x) {
    x(0) = std::max(x(0), 0.0);
    x(1) = std::max(x(1), 0.0);
    x(2) = std::min(x(2), kLogB0Max);
    return x;
}

struct Attempt {
    Eigen::Vector3d x;
    double cost;
    int iterations;
    bool converged;
    std::vector<double> trace;
};

Attempt levenberg_marquardt(const Window& w, Eigen::Vector3d x) {
    constexpr int kMaxIterations = 400;
    x = project(x);
    Eigen::ArrayXd r = log_model(x, w.t2) - w.log_m;
    double cost = 0.5 * r.square().sum();
    double mu = 1e-3;
    Attempt out{x, cost, 0, false, {cost}};

    for (int it = 1; it <= kMaxIterations; ++it) {
        const Eigen::MatrixX3d j = jacobian(x, w.t2);
        const Eigen::Matrix3d jtj = j.transpose() * j;
        const Eigen::Vector3d g = j.transpose() * r.matrix();

        // Projected gradient: components pushing against an active bound do not count.
        Eigen::Vector3d pg = g;
        if (x(0) == 0.0 && g(0) > 0) pg(0) = 0;
        if (x(1) == 0.0 && g(1) > 0) pg(1) = 0;
        if (x(2) == kLogB0Max && g(2) < 0) pg(2) = 0;
        if (pg.norm() <= 1e-13 * std::max(1.0, std::sqrt(2.0 * cost)) * std::sqrt(double(w.t2.size()))) {
            out.converged = true;
            out.iterations = it - 1;
            break;
        }

        bool accepted = false;
        for (int tries = 0; tries < 40 && !accepted; ++tries) {
            Eigen::Matrix3d lhs = jtj;
            lhs.diagonal() += mu * jtj.diagonal().cwiseMax(1e-12);
            const Eigen::Vector3d step = lhs.ldlt().solve(-g);
            const Eigen::Vector3d trial = project(x + step);
            const Eigen::ArrayXd r_trial = log_model(trial, w.t2) - w.log_m;
            const double c_trial = 0.5 * r_trial.square().sum();
            if (std::isfinite(c_trial) && c_trial <= cost) {
                const double drop = cost - c_trial;
                const bool moved = (trial - x).norm() > 1e-15 * (1.0 + x.norm());
                x = trial;
                r = r_trial;
                cost = c_trial;
                mu = std::max(mu / 3.0, 1e-12);
                accepted = true;
                out.trace.push_back(cost);
                if (!moved || drop <= 1e-15 * std::max(cost, 1e-300)) {
                    out.converged = true;
                    out.iterations = it;
                    out.x = x;
                    out.cost = cost;
                    return out;
                }
            } else {
                mu *= 4.0;
            }
        }
        out.iterations = it;
        if (!accepted) {
            // No descent direction left at any damping: a stationary point.
            out.converged = true;
            break;
        }
    }
    out.x = x;
    out.cost = cost;
    return out;
}

}  // namespace

EnvelopeFit fit_envelope(const EchoSeries& series, double t_lo, double t_hi) {
    if (!(t_hi > t_lo) || t_lo < 0) throw InputError("fit window must satisfy 0 <= t_lo < t_hi");
    if (series.t.size() != series.M.size()) throw InputError("echo series columns have unequal lengths");
    if (series.period && std::isfinite(*series.period) && t_hi > *series.period * (1.0 + 1e-12))
        throw InputError("fit window extends beyond the first echo period");

    std::vector<double> t2, lm;
    for (std::size_t i = 0; i < series.t.size(); ++i) {
        const double t = series.t[i];
        if (t < t_lo || t > t_hi) continue;
        if (!(series.M[i] > 0)) throw InputError("echo vanishes inside the fit window; ln M undefined");
        t2.push_back(t * t);
        lm.push_back(std::log(series.M[i]));
    }
    if (t2.size() < 10)
        throw InputError("fit window holds " + std::to_string(t2.size()) + " samples; at least 10 required");

    Window w{Eigen::Map<Eigen::ArrayXd>(t2.data(), Eigen::Index(t2.size())),
             Eigen::Map<Eigen::ArrayXd>(lm.data(), Eigen::Index(lm.size()))};

    const double scale = 1.0 / (t_hi * t_hi);
    Attempt best{};
    best.cost = std::numeric_limits<double>::infinity();
    std::vector<double> trace;
    for (double s0 : {0.0, 1e-2, 1.0, 1e2}) {
        for (double g0 : {0.0, 1.0}) {
            Attempt a = levenberg_marquardt(w, Eigen::Vector3d(g0 * scale, s0 * scale, 0.0));
            trace.insert(trace.end(), a.trace.begin(), a.trace.end());
            if (a.converged && a.cost < best.cost) best = std::move(a);
        }
    }
    if (!std::isfinite(best.cost))
        throw FitError("envelope fit did not converge from any starting point", std::move(trace));

    EnvelopeFit out;
    out.params.gamma = best.x(0);
    out.params.xi = std::sqrt(best.x(1));
    out.params.b0 = std::exp(best.x(2));
    const Eigen::ArrayXd res = log_model(best.x, w.t2) - w.log_m;
    out.max_log_residual = res.abs().maxCoeff();
    out.rms_log_residual = std::sqrt(res.square().mean());
    out.samples = t2.size();
    out.iterations = best.iterations;
    return out;
}

}  // namespace qpt::echo
