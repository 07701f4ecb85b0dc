#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>
#include <vector>

#include "mpsprep/distributions.hpp"
#include "mpsprep/stats.hpp"

using namespace mpsprep;

TEST_CASE("threshold formula") {
    CHECK(std::abs(ks_threshold(0.05, 450) - 0.09054010104937463) < 1e-15);
    CHECK(std::abs(ks_threshold(0.05, 150) - 0.1568200551399371) < 1e-15);
    CHECK(ks_threshold(2.0 / M_E, 1) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK_THROWS_AS(ks_threshold(0.0, 10), validation_error);
    CHECK_THROWS_AS(ks_threshold(1.0, 10), validation_error);
    CHECK_THROWS_AS(ks_threshold(0.05, 0), validation_error);
}

TEST_CASE("empirical statistic on tiny hand-checked sets") {
    const auto uniform = [](double x) { return std::min(1.0, std::max(0.0, x)); };
    CHECK(ks_statistic({0.5}, uniform) == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(ks_statistic({0.25, 0.75}, uniform) == doctest::Approx(0.25).epsilon(1e-15));
    // duplicates must be treated as one jump of height 2/n
    CHECK(ks_statistic({0.5, 0.5}, uniform) == doctest::Approx(0.5).epsilon(1e-15));
    // order of the input must not matter
    CHECK(ks_statistic({0.75, 0.25}, uniform) == doctest::Approx(0.25).epsilon(1e-15));
    CHECK_THROWS_AS(ks_statistic(std::vector<double>{}, uniform), validation_error);
}

TEST_CASE("discrete statistic checks both sides of every jump") {
    DiscreteDistribution d{{0.0, 1.0}, {0.5, 0.5}};
    const auto uniform = [](double x) { return std::min(1.0, std::max(0.0, x)); };
    CHECK(ks_statistic(d, uniform) == doctest::Approx(0.5).epsilon(1e-15));

    // the target is assumed continuous: both sides of each jump are compared
    // against the same target value, so a coinciding step target registers its
    // full jump height (step-vs-step comparisons belong to ks_between)
    DiscreteDistribution point{{0.0}, {1.0}};
    const auto step = [](double x) { return x >= 0.0 ? 1.0 : 0.0; };
    CHECK(ks_statistic(point, step) == doctest::Approx(1.0).epsilon(1e-15));
}

TEST_CASE("pairwise statistic equals the brute-force cumulative gap") {
    std::mt19937_64 rng(61);
    std::exponential_distribution<double> ex(1.0);
    for (int trial = 0; trial < 20; ++trial) {
        const int m = 3 + int(rng() % 40);
        DiscreteDistribution a, b;
        double sa = 0, sb = 0;
        for (int i = 0; i < m; ++i) {
            a.x.push_back(i);
            b.x.push_back(i);
            a.p.push_back(ex(rng));
            b.p.push_back(ex(rng));
            sa += a.p.back();
            sb += b.p.back();
        }
        for (int i = 0; i < m; ++i) {
            a.p[i] /= sa;
            b.p[i] /= sb;
        }
        double want = 0, ca = 0, cb = 0;
        for (int i = 0; i < m; ++i) {
            ca += a.p[i];
            cb += b.p[i];
            want = std::max(want, std::abs(ca - cb));
        }
        CHECK(ks_between(a, b) == doctest::Approx(want).epsilon(1e-14));
        CHECK(ks_between(a, a) == 0.0);
    }
    DiscreteDistribution a{{0.0, 1.0}, {0.5, 0.5}};
    DiscreteDistribution c{{0.0, 2.0}, {0.5, 0.5}};
    CHECK_THROWS_AS(ks_between(a, c), validation_error);
}

TEST_CASE("distribution validation") {
    CHECK_THROWS_AS((DiscreteDistribution{{1.0, 0.0}, {0.5, 0.5}}.validate()),
                    validation_error);
    CHECK_THROWS_AS((DiscreteDistribution{{0.0, 1.0}, {-0.1, 1.1}}.validate()),
                    validation_error);
    CHECK_THROWS_AS((DiscreteDistribution{{0.0, 1.0}, {0.5, 0.6}}.validate()),
                    validation_error);
    CHECK_THROWS_AS((DiscreteDistribution{{}, {}}.validate()), validation_error);
    DiscreteDistribution ok{{0.0, 1.0, 2.5}, {0.25, 0.5, 0.25}};
    CHECK_NOTHROW(ok.validate());
    CHECK(ok.cumulative().back() == doctest::Approx(1.0).epsilon(1e-15));
}

TEST_CASE("power laws are fitted exactly") {
    std::vector<double> xs{4, 8, 16, 32, 64}, ys;
    for (double x : xs) ys.push_back(3.7 * std::pow(x, -1.8));
    const FitResult fit = loglog_slope(xs, ys);
    CHECK(fit.slope == doctest::Approx(-1.8).epsilon(1e-12));
    CHECK(fit.intercept == doctest::Approx(std::log(3.7)).epsilon(1e-10));
    CHECK(fit.r2 == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(fit.points == 5);
    CHECK_THROWS_AS(loglog_slope({1, 2}, {1, 2}), validation_error);
    CHECK_THROWS_AS(loglog_slope({1, 2, 3}, {1, -2, 3}), validation_error);
    CHECK_THROWS_AS(loglog_slope({2, 2, 2}, {1, 2, 3}), validation_error);
}

TEST_CASE("normal-distance grids and cross-rule identities") {
    for (int n : {4, 16}) {
        const DistanceReport mx = pdf_cdf_distances(n, GridRule::matched_x);
        const DistanceReport sz = pdf_cdf_distances(n, GridRule::standardized_z);
        CHECK(mx.grid_points == 100 * n + 1);
        const double sigma = std::sqrt(n / 12.0);
        // cdf sups agree under the monotone axis change; pdf sups carry 1/sigma
        CHECK(mx.sup_cdf == doctest::Approx(sz.sup_cdf).epsilon(1e-13));
        CHECK(mx.sup_pdf == doctest::Approx(sz.sup_pdf / sigma).epsilon(1e-12));
        // the pdf L1 distance is invariant, the cdf L1 picks up the scale
        CHECK(mx.l1_pdf == doctest::Approx(sz.l1_pdf).epsilon(1e-12));
        CHECK(mx.l1_cdf == doctest::Approx(sz.l1_cdf * sigma).epsilon(1e-12));
        CHECK(mx.ks == mx.sup_cdf);
    }
    // convergence direction
    CHECK(pdf_cdf_distances(16, GridRule::standardized_z).sup_pdf <
          pdf_cdf_distances(4, GridRule::standardized_z).sup_pdf);
}

TEST_CASE("matched-axis L1 agrees with an independent trapezoid") {
    const int n = 4;
    const DistanceReport rep = pdf_cdf_distances(n, GridRule::matched_x);
    const IrwinHallSpec spec(n);
    const StandardizedVariable sv(n);
    const double zmax = std::sqrt(3.0 * n);
    const int npts = 100 * n + 1;
    const double dz = 2.0 * zmax / (npts - 1);
    double l1 = 0.0, sup = 0.0;
    for (int i = 0; i < npts; ++i) {
        const double z = -zmax + i * dz;
        const double d =
            std::abs(irwin_hall_pdf(spec, sv.x_of_z(z)) - normal_pdf(z) / sv.sigma_x());
        sup = std::max(sup, d);
        l1 += ((i == 0 || i == npts - 1) ? 0.5 : 1.0) * d;
    }
    l1 *= dz * sv.sigma_x();
    CHECK(rep.l1_pdf == doctest::Approx(l1).epsilon(1e-8));
    CHECK(rep.sup_pdf == doctest::Approx(sup).epsilon(1e-8));
}

TEST_CASE("uniform samples pass their own test at the configured level") {
    std::mt19937_64 rng(62);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    const int trials = 200, shots = 10000;
    const double threshold = ks_threshold(0.05, shots);
    const auto cdf = [](double x) { return std::min(1.0, std::max(0.0, x)); };
    int passes = 0;
    for (int t = 0; t < trials; ++t) {
        std::vector<double> samples(shots);
        for (auto& s : samples) s = u(rng);
        if (ks_statistic(std::move(samples), cdf) < threshold) ++passes;
    }
    CHECK(passes >= 190);
}
