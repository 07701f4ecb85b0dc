#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <Eigen/Dense>

#include <cmath>
#include <random>

#include "mpsprep/distributions.hpp"
#include "mpsprep/encode.hpp"
#include "test_helpers.hpp"

using namespace mpsprep;

namespace {

double poly_eval(const std::vector<double>& c, double x) {
    double acc = 0.0;
    for (auto it = c.rbegin(); it != c.rend(); ++it) acc = acc * x + *it;
    return acc;
}

}  // namespace

TEST_CASE("grid addressing") {
    const Grid g(3, -1.0, 1.0);
    CHECK(g.size() == 8);
    CHECK(g.x(0) == doctest::Approx(-1.0).epsilon(1e-15));
    CHECK(g.x(7) == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(g.x(3) == doctest::Approx(-1.0 + 6.0 / 7.0).epsilon(1e-14));
    CHECK_THROWS_AS(Grid(1, 0.0, 1.0), validation_error);
    CHECK_THROWS_AS(Grid(51, 0.0, 1.0), validation_error);
    CHECK_THROWS_AS(Grid(4, 1.0, 1.0), validation_error);
    CHECK_THROWS_AS(Grid(4, 2.0, 1.0), validation_error);
}

TEST_CASE("constant and identity polynomials") {
    const Grid g2(2, 0.0, 1.0);
    const Eigen::VectorXd ones = to_statevector(encode_polynomial({1.0}, Grid(3, 0.0, 1.0)));
    CHECK((ones - Eigen::VectorXd::Ones(8)).cwiseAbs().maxCoeff() < 1e-14);

    const Eigen::VectorXd ramp = to_statevector(encode_polynomial({0.0, 1.0}, g2));
    CHECK(ramp(0) == doctest::Approx(0.0).epsilon(1e-15));
    CHECK(ramp(1) == doctest::Approx(1.0 / 3.0).epsilon(1e-14));
    CHECK(ramp(2) == doctest::Approx(2.0 / 3.0).epsilon(1e-14));
    CHECK(ramp(3) == doctest::Approx(1.0).epsilon(1e-14));
}

TEST_CASE("random polynomials contract to the exact grid samples") {
    std::mt19937_64 rng(31);
    std::uniform_real_distribution<double> coeff(-1.0, 1.0);
    for (int trial = 0; trial < 50; ++trial) {
        const int deg = int(rng() % 9);
        const int n = 8 + int(rng() % 5);  // 8..12 keeps bond p+1 <= 2^(n/2)
        const double a = -2.0 * std::abs(coeff(rng)) - 0.1;
        const double b = 2.0 * std::abs(coeff(rng)) + 1.0;
        const Grid g(n, a, b);
        std::vector<double> c(deg + 1);
        for (auto& v : c) v = coeff(rng);

        const MPS m = encode_polynomial(c, g);
        CHECK(m.max_bond() <= deg + 1);
        const Eigen::VectorXd got = to_statevector(m);
        double scale = 1e-300;
        for (std::uint64_t k = 0; k < g.size(); ++k)
            scale = std::max(scale, std::abs(poly_eval(c, g.x(k))));
        for (std::uint64_t k = 0; k < g.size(); ++k)
            CHECK(std::abs(got(Eigen::Index(k)) - poly_eval(c, g.x(k))) <= 1e-12 * scale);
    }
}

TEST_CASE("polynomial encoding is linear") {
    const Grid g(6, -0.5, 2.0);
    const std::vector<double> p{0.3, -1.2, 0.7, 0.05};
    const std::vector<double> q{-0.4, 0.9, -0.3, 0.6};
    std::vector<double> s(4);
    for (int i = 0; i < 4; ++i) s[i] = p[i] + q[i];
    const Eigen::VectorXd want = to_statevector(encode_polynomial(s, g));
    const Eigen::VectorXd got =
        to_statevector(encode_polynomial(p, g)) + to_statevector(encode_polynomial(q, g));
    CHECK((got - want).cwiseAbs().maxCoeff() <= 1e-13 * want.cwiseAbs().maxCoeff());
}

TEST_CASE("degree cap versus qubit count") {
    CHECK_THROWS_AS(encode_polynomial(std::vector<double>(9, 1.0), Grid(4, 0.0, 1.0)),
                    validation_error);
    CHECK_NOTHROW(encode_polynomial(std::vector<double>(9, 1.0), Grid(8, 0.0, 1.0)));
}

TEST_CASE("region restriction zeroes the complement") {
    std::mt19937_64 rng(32);
    const MPS m = test_helpers::random_mps(rng, 3, 2);
    const Eigen::VectorXd full = to_statevector(m);

    const Eigen::VectorXd top = to_statevector(restrict_to_region(m, 1, 1));
    for (int k = 0; k < 8; ++k) {
        const double want = (k >= 4) ? full(k) : 0.0;
        CHECK(top(k) == doctest::Approx(want).epsilon(1e-13));
    }
    const Eigen::VectorXd quarter = to_statevector(restrict_to_region(m, 2, 2));
    for (int k = 0; k < 8; ++k) {
        const double want = (k == 4 || k == 5) ? full(k) : 0.0;
        CHECK(quarter(k) == doctest::Approx(want).epsilon(1e-13));
    }
    CHECK_THROWS_AS(restrict_to_region(m, 4, 2), validation_error);
    CHECK_THROWS_AS(restrict_to_region(m, 0, 4), validation_error);
}

TEST_CASE("order-2 density encodes exactly on 8 qubits") {
    const auto enc = encode_irwin_hall(2, 8);
    const IrwinHallSpec spec(2);
    const Eigen::VectorXd amp = to_statevector(enc.state) * enc.report.norm_scale;
    double peak = 0.0;
    for (std::uint64_t k = 0; k < enc.grid.size(); ++k)
        peak = std::max(peak, irwin_hall_pdf(spec, enc.grid.x(k)));
    for (std::uint64_t k = 0; k < enc.grid.size(); ++k) {
        const double want = irwin_hall_pdf(spec, enc.grid.x(k));
        CHECK(std::abs(amp(Eigen::Index(k)) - want) <= 1e-10 * peak);
    }
    CHECK(enc.report.raw_max_bond == 4);  // 2 regions x bond 2
}

TEST_CASE("order-16 density on 12 qubits: exact amplitudes at full rank") {
    const auto enc = encode_irwin_hall(16, 12);
    CHECK(enc.report.raw_max_bond == 256);  // 16 regions x bond 16, uncompressed
    CHECK(enc.report.fidelity_lower_bound() >= 1.0 - 1e-12);
    const IrwinHallSpec spec(16);
    const Eigen::VectorXd amp = to_statevector(enc.state) * enc.report.norm_scale;
    double peak = 0.0;
    for (std::uint64_t k = 0; k < enc.grid.size(); ++k)
        peak = std::max(peak, irwin_hall_pdf(spec, enc.grid.x(k)));
    for (std::uint64_t k = 0; k < enc.grid.size(); ++k) {
        const double want = irwin_hall_pdf(spec, enc.grid.x(k));
        CHECK(std::abs(amp(Eigen::Index(k)) - want) <= 1e-10 * peak);
    }
}

TEST_CASE("low-rank compression keeps almost all of the weight") {
    const auto enc = encode_irwin_hall(8, 10);
    const auto [t2, rep2] = truncate(enc.state, 2);
    const double fid2 = overlap(t2, enc.state) * overlap(t2, enc.state);
    CHECK(fid2 > 0.99);

    const auto capped = encode_irwin_hall(8, 10, 2);
    CHECK(capped.state.max_bond() <= 2);
    CHECK(capped.report.fidelity_lower_bound() > 0.99);
    CHECK(capped.report.fidelity_lower_bound() < 1.0);
}

TEST_CASE("square-root amplitude mode matches the dense construction") {
    const auto enc = encode_irwin_hall(4, 10, std::nullopt, AmplitudeMode::sqrt_pdf);
    const IrwinHallSpec spec(4);
    Eigen::VectorXd want(1 << 10);
    for (std::uint64_t k = 0; k < enc.grid.size(); ++k)
        want(Eigen::Index(k)) = std::sqrt(std::max(0.0, irwin_hall_pdf(spec, enc.grid.x(k))));
    want /= want.norm();
    const Eigen::VectorXd got = to_statevector(enc.state);
    const double sign = (got.dot(want) >= 0) ? 1.0 : -1.0;
    CHECK((sign * got - want).cwiseAbs().maxCoeff() < 1e-10);
}

TEST_CASE("encoded states are weakly entangled") {
    const auto enc = encode_irwin_hall(16, 12);
    const double mid = entanglement_entropy(enc.state, 6);
    CHECK(mid > 1e-8);
    CHECK(mid < 1.0);
    // entanglement must fall off towards the address tail
    CHECK(entanglement_entropy(enc.state, 11) < mid + 1e-9);
}

TEST_CASE("piecewise encoder input validation") {
    CHECK_THROWS_AS(encode_irwin_hall(3, 8), validation_error);   // not a power of two
    CHECK_THROWS_AS(encode_irwin_hall(16, 3), validation_error);  // 2^4 pieces need 4 bits
    CHECK_THROWS_AS(encode_irwin_hall(0, 8), validation_error);
    CHECK_THROWS_AS(encode_irwin_hall(8, 8, 0), validation_error);  // chi cap must be >= 1

    EncodingRequest req{irwin_hall_pieces(IrwinHallSpec(4)), Grid(6, 0.0, 3.0),
                        AmplitudeMode::pdf, std::nullopt};
    CHECK_THROWS_AS(encode_piecewise(req), validation_error);  // grid/support mismatch
}
