#include <doctest.h>

#include <cmath>
#include <numeric>

#include "qpt/errors.hpp"
#include "qpt/squeeze.hpp"

using namespace qpt;
using squeeze::SqueezeMap;

TEST_CASE("maps satisfy P^2 - Q^2 = 1 and fix phases to zero") {
    for (double r : {-5.0, -0.3, 0.0, 0.2, 1.0, 7.5}) {
        const auto m = SqueezeMap::from_r(r);
        CHECK(std::abs(m.p11() * m.p11() - m.q11() * m.q11() - 1.0) <= 1e-12 * m.p11() * m.p11());
        CHECK(m.p11() >= 1.0);
        CHECK(m.theta_c() == 0.0);
        CHECK(m.theta_r() == 0.0);
    }
    CHECK_THROWS_AS(SqueezeMap::from_tanh(1.0), InputError);
    CHECK_THROWS_AS(SqueezeMap::from_r(NAN), InputError);
}

TEST_CASE("relative_map") {
    const auto id = squeeze::relative_map(0.7, 0.7);
    CHECK(id.r() == 0.0);
    CHECK(id.p11() == 1.0);
    CHECK(id.q11() == 0.0);

    const auto m = squeeze::relative_map(1.1989476, 0.8958797);
    CHECK(m.r() == doctest::Approx(-0.15153395).epsilon(1e-12));
    CHECK(m.tanh_r() == doctest::Approx(-0.15038463727322312).epsilon(1e-12));

    const auto swapped = squeeze::relative_map(0.8958797, 1.1989476);
    CHECK(swapped.r() == -m.r());
    CHECK(swapped.q11() == -m.q11());
    CHECK(swapped.p11() == m.p11());
    CHECK_THROWS_AS(squeeze::relative_map(INFINITY, 0.0), InputError);
}

TEST_CASE("ground expansion amplitudes") {
    const auto vac = squeeze::ground_expansion(SqueezeMap::from_r(0.0), 5);
    CHECK(vac.amplitudes[0] == 1.0);
    for (std::size_t n = 1; n <= 5; ++n) CHECK(vac.amplitudes[n] == 0.0);

    const auto g = squeeze::ground_expansion(SqueezeMap::from_tanh(0.5), 10);
    CHECK(g.amplitudes[0] == doctest::Approx(0.9306048591020996).epsilon(1e-13));
    CHECK(g.amplitudes[1] == doctest::Approx(0.32901850323812312).epsilon(1e-13));
    CHECK(g.amplitudes[2] == doctest::Approx(0.14246919105967360).epsilon(1e-13));

    const auto neg = squeeze::ground_expansion(SqueezeMap::from_tanh(-0.5), 10);
    for (std::size_t n = 0; n <= 10; ++n) {
        CHECK(std::abs(neg.amplitudes[n]) == g.amplitudes[n]);
        CHECK((neg.amplitudes[n] < 0) == (n % 2 == 1));
    }

    CHECK_THROWS_AS(squeeze::ground_expansion(SqueezeMap::from_r(20.0), 3), DomainError);
    CHECK_NOTHROW(squeeze::ground_expansion(SqueezeMap::from_r(19.9), 3));
}

TEST_CASE("normalisation within the tail bound") {
    for (double q : {-0.95, -0.5, 0.1, 0.7, 0.9}) {
        const auto map = SqueezeMap::from_tanh(q);
        const std::size_t n = squeeze::expansion_order_for(map, 1e-12);
        const auto g = squeeze::ground_expansion(map, n);
        CHECK(g.tail_bound <= 1e-12);
        double sum = 0;
        for (double a : g.amplitudes) sum += a * a;
        CHECK(std::abs(sum - 1.0) <= 1e-12);
        CHECK(sum <= 1.0 + 1e-14);
        CHECK(sum >= 1.0 - g.tail_bound - 1e-14);
    }
}

TEST_CASE("fidelity") {
    CHECK(squeeze::fidelity(SqueezeMap::from_r(0)) == 1.0);
    CHECK(squeeze::fidelity(SqueezeMap::from_tanh(-0.1503847)) == doctest::Approx(0.99429751822452207).epsilon(1e-13));
    const double q = (std::sqrt(0.1) - 1) / (std::sqrt(0.1) + 1);
    CHECK(squeeze::fidelity(SqueezeMap::from_tanh(q)) == doctest::Approx(0.92437772965439573).epsilon(1e-13));
    for (double r : {-2.0, -0.4, 0.9, 3.0}) {
        const auto m = SqueezeMap::from_r(r);
        CHECK(std::abs(squeeze::fidelity(m) - squeeze::ground_expansion(m, 0).amplitudes[0]) <= 1e-12);
        CHECK(squeeze::fidelity(m) == squeeze::fidelity(SqueezeMap::from_r(-r)));
    }
}

TEST_CASE("overlap matrix structure") {
    const auto id = squeeze::overlap_matrix(SqueezeMap::from_r(0.0), 6, 6);
    CHECK((id - Eigen::MatrixXd::Identity(7, 7)).cwiseAbs().maxCoeff() == 0.0);

    for (double q : {-0.6, 0.3}) {
        const auto map = SqueezeMap::from_tanh(q);
        const auto c = squeeze::overlap_matrix(map, 160, 4);
        for (Eigen::Index n = 0; n < c.rows(); ++n)
            for (Eigen::Index m = 0; m < c.cols(); ++m) {
                if ((n + m) % 2) CHECK(c(n, m) == 0.0);
                CHECK(c(n, m) >= 0.0);
            }
        for (Eigen::Index m = 0; m < c.cols(); ++m) {
            CHECK(c.col(m).squaredNorm() >= 1 - 1e-10);
            CHECK(c.col(m).squaredNorm() <= 1 + 1e-9);
        }
        // Metric outputs are even in r.
        const auto flipped = squeeze::overlap_matrix(SqueezeMap::from_tanh(-q), 160, 4);
        CHECK((c - flipped).cwiseAbs().maxCoeff() <= 1e-13);
        CHECK(std::abs(c(0, 0) - squeeze::fidelity(map)) <= 1e-12);
    }

    const auto c = squeeze::overlap_matrix(SqueezeMap::from_tanh(0.5), 80, 0);
    CHECK(c(0, 0) == doctest::Approx(0.9306048591020996).epsilon(1e-12));
    CHECK(c(2, 0) == doctest::Approx(0.32901850323812312).epsilon(1e-12));
    CHECK(c(4, 0) == doctest::Approx(0.14246919105967360).epsilon(1e-12));
}

TEST_CASE("overlap matrix against brute-force Bogoliubov transform") {
    // Independent route: squeezed states from the exponentiated generator in a
    // large truncated Fock space. S(r) = exp(r/2 (a^2 - a^dag^2)); <n|S|m>.
    const int dim = 220;
    const double r = 0.4;
    Eigen::MatrixXd a = Eigen::MatrixXd::Zero(dim, dim);
    for (int n = 1; n < dim; ++n) a(n - 1, n) = std::sqrt(double(n));
    const Eigen::MatrixXd gen = 0.5 * r * (a * a - a.transpose() * a.transpose());
    // Taylor series of the exponential with scaling and squaring.
    Eigen::MatrixXd x = gen / 1024.0, s = Eigen::MatrixXd::Identity(dim, dim), term = s;
    for (int k = 1; k < 30; ++k) {
        term = term * x / double(k);
        s += term;
    }
    for (int k = 0; k < 10; ++k) s = s * s;

    const auto c = squeeze::overlap_matrix(SqueezeMap::from_r(r), 40, 5);
    double worst = 0;
    for (int n = 0; n <= 40; ++n)
        for (int m = 0; m <= 5; ++m) worst = std::max(worst, std::abs(c(n, m) - std::abs(s(n, m))));
    CHECK(worst <= 1e-10);
}

TEST_CASE("overlap matrix rejects insufficient truncation") {
    const auto map = SqueezeMap::from_tanh(0.9);
    try {
        squeeze::overlap_matrix(map, 10, 3);
        FAIL("expected NumericError");
    } catch (const NumericError& e) {
        CHECK(std::string(e.what()).find("column") != std::string::npos);
    }
}

TEST_CASE("participation ratio") {
    CHECK(squeeze::participation_ratio(SqueezeMap::from_r(0), 0, 10) == 1.0);
    CHECK(squeeze::participation_ratio(SqueezeMap::from_r(0), 3, 10) == 1.0);
    CHECK(squeeze::participation_ratio(SqueezeMap::from_tanh(0.5), 0, 120) ==
          doctest::Approx(1.3120785012165185).epsilon(1e-12));

    // Closed form for m = 0: sum a^4 = (1 - q^2) / AGM(1, sqrt(1 - q^4)).
    auto agm = [](double x, double y) {
        while (std::abs(x - y) > 1e-16 * x) {
            const double m = 0.5 * (x + y);
            y = std::sqrt(x * y);
            x = m;
        }
        return x;
    };
    for (double q : {0.2, -0.45, 0.8}) {
        const double expect = agm(1.0, std::sqrt(1 - std::pow(q, 4))) / (1 - q * q);
        CHECK(squeeze::participation_ratio(SqueezeMap::from_tanh(q), 0, 800) == doctest::Approx(expect).epsilon(1e-11));
    }

    double prev = 1.0;
    for (int k = 1; k <= 20; ++k) {
        const double chi = squeeze::participation_ratio(SqueezeMap::from_r(0.1 * k), 0, 2000);
        CHECK(chi > prev);
        prev = chi;
    }
    CHECK_THROWS_AS(squeeze::participation_ratio(SqueezeMap::from_tanh(0.95), 2, 20), NumericError);
}
