#pragma once

#include <functional>
#include <vector>

#include "mpsprep/errors.hpp"

namespace mpsprep {

struct DiscreteDistribution {
    std::vector<double> x;  // strictly ascending support
    std::vector<double> p;  // nonnegative, sums to 1 within 1e-9

    void validate() const;
    std::vector<double> cumulative() const;
};

// Comparison grids for Irwin-Hall-vs-normal distances: either on the
// standardized (zero-mean, unit-variance) axis or mapped onto the raw sum's
// axis. Both use the same points; sup distances of cdfs coincide, densities
// and L1 weights pick up the scale factor.
enum class GridRule { standardized_z, matched_x };

struct DistanceReport {
    int order = 0;
    GridRule rule = GridRule::matched_x;
    int grid_points = 0;
    double sup_pdf = 0.0;
    double l1_pdf = 0.0;
    double sup_cdf = 0.0;
    double l1_cdf = 0.0;
    double ks = 0.0;  // alias of sup_cdf
};

struct FitResult {
    double slope = 0.0;
    double intercept = 0.0;
    double r2 = 0.0;
    int points = 0;
};

// Empirical two-sided KS: jumps are compared against the target on both sides.
double ks_statistic(std::vector<double> samples,
                    const std::function<double(double)>& target_cdf);
double ks_statistic(const DiscreteDistribution& dist,
                    const std::function<double(double)>& target_cdf);

// Sup distance between the step cdfs of two distributions on a shared support.
double ks_between(const DiscreteDistribution& a, const DiscreteDistribution& b);

// Acceptance threshold sqrt(ln(2/alpha)/s).
double ks_threshold(double alpha, long long samples);

// Sup and trapezoid-L1 distances between the order-n Irwin-Hall pdf/cdf and
// the limiting normal, sampled with spacing sqrt(3)/(50 sqrt(n)) on the
// standardized axis over +-sqrt(3n).
DistanceReport pdf_cdf_distances(int order, GridRule rule);

FitResult loglog_slope(const std::vector<double>& xs, const std::vector<double>& ys);

}  // namespace mpsprep
