#include <algorithm>
#include <cmath>
#include <string>

#include "qpt/echo.hpp"
#include "qpt/errors.hpp"

namespace qpt::echo {

namespace {

// h^2/8 max|M''| from second differences of one series.
double interpolation_error(const EchoSeries& s) {
    double worst = 0;
    for (std::size_t i = 1; i + 1 < s.tau.size(); ++i) {
        const double h0 = s.tau[i] - s.tau[i - 1], h1 = s.tau[i + 1] - s.tau[i];
        const double d2 = 2.0 * ((s.M[i + 1] - s.M[i]) / h1 - (s.M[i] - s.M[i - 1]) / h0) / (h0 + h1);
        const double h = std::max(h0, h1);
        worst = std::max(worst, h * h / 8.0 * std::abs(d2));
    }
    return worst;
}

}  // namespace

CollapseReport collapse_check(std::span<const CollapseGroup> groups) {
    CollapseReport report;
    for (const CollapseGroup& group : groups) {
        if (group.series.empty()) throw InputError("collapse group without series");
        std::vector<const EchoSeries*> members;
        for (const EchoSeries& s : group.series) {
            if (s.tau.size() != s.M.size() || s.tau.empty()) throw InputError("series without a tau grid");
            members.push_back(&s);
        }
        std::stable_sort(members.begin(), members.end(), [](const EchoSeries* a, const EchoSeries* b) {
            return a->source.distance2() > b->source.distance2();
        });

        double lo = -INFINITY, hi = INFINITY;
        for (const EchoSeries* s : members) {
            lo = std::max(lo, s->tau.front());
            hi = std::min(hi, s->tau.back());
        }
        if (!(hi > lo)) throw InputError("series of group eta = " + std::to_string(group.eta) + " share no tau range");

        GroupReport g;
        g.eta = group.eta;
        for (const double x : members.front()->tau)
            if (x >= lo && x <= hi) g.tau.push_back(x);

        std::vector<std::vector<double>> values;
        for (const EchoSeries* s : members) {
            g.members.push_back({s->source.param1, s->source.param2, s->source.distance2()});
            std::vector<double> v;
            v.reserve(g.tau.size());
            for (const double x : g.tau) v.push_back(interpolate(s->tau, s->M, x));
            values.push_back(std::move(v));
            g.interpolation_bound = std::max(g.interpolation_bound, interpolation_error(*s));
        }

        for (std::size_t k = 0; k < g.tau.size(); ++k) {
            double mn = INFINITY, mx = -INFINITY;
            for (const auto& v : values) {
                mn = std::min(mn, v[k]);
                mx = std::max(mx, v[k]);
            }
            g.spread = std::max(g.spread, mx - mn);
        }
        for (std::size_t m = 0; m + 1 < values.size(); ++m) {
            double d = 0;
            for (std::size_t k = 0; k < g.tau.size(); ++k) d = std::max(d, std::abs(values[m][k] - values[m + 1][k]));
            g.adjacent_spreads.push_back(d);
        }
        for (std::size_t m = 0; m + 1 < g.adjacent_spreads.size(); ++m)
            if (g.adjacent_spreads[m + 1] > g.adjacent_spreads[m]) g.spread_decreasing = false;
        report.groups.push_back(std::move(g));
    }
    return report;
}

}  // namespace qpt::echo
