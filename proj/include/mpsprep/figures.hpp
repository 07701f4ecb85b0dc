#pragma once

#include <functional>
#include <string>
#include <vector>

#include "mpsprep/encode.hpp"
#include "mpsprep/stats.hpp"

namespace mpsprep {

struct FigureSeries {
    std::vector<std::string> columns;
    std::vector<std::vector<double>> rows;
};

// Distance-vs-order sweep over n in {4, 8, ..., 256} with fitted log-log
// slopes; 2a covers the density, 2b the cumulative distribution, both on the
// raw sum's axis.
struct Figure2 {
    FigureSeries series;  // n, sup_error, avg_error
    FitResult sup_fit;
    FitResult avg_fit;
};
Figure2 figure_2a();
Figure2 figure_2b();

// Sup-norm cdf error of grid-discretized order-16 and normal pmfs against the
// undiscretized normal on [-4 sqrt(3), 4 sqrt(3)], swept over qubit counts;
// evaluated streaming, so 2^23 points never materialize.
FigureSeries figure_3(int order = 16, int max_qubits = 23);  // qubits, irwin_hall_error, normal_error

// Per-depth infidelity and KS distance (prepared vs exact encoded
// distribution) for orders 8 and 16.
FigureSeries figure_4a(int n_qubits = 14, int max_depth = 16);

// KS of prepared states against the sampled-statistics normal
// N(n/2, sqrt(n/24)); floors are the same KS for the exact encoded states.
struct Figure4b {
    FigureSeries curves;  // depth, ks_n8, ks_n16, ks_n32, ks_n64
    FigureSeries floors;  // n, ks_floor
};
Figure4b figure_4b(int n_qubits = 14, int max_depth = 8);

// Measurement distribution of a state: p_k = amplitude_k^2 over grid points.
DiscreteDistribution state_distribution(const MPS& state, const Grid& grid);

// cdf of the normal matching the sampled statistics of a pdf-amplitude
// encoding: mean n/2, standard deviation sqrt(n/24).
std::function<double(double)> sampled_normal_cdf(int order);

}  // namespace mpsprep
