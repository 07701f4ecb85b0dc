#pragma once

#include <cmath>
#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

#include "mpsprep/distributions.hpp"
#include "mpsprep/mps.hpp"

namespace mpsprep {

// Uniform dyadic grid on [a, b]: x_k = a + k/h with h = (2^N - 1)/(b - a),
// indexed big-endian (site 0 carries the most significant address bit).
struct Grid {
    int n_qubits = 0;
    double a = 0.0;
    double b = 1.0;

    Grid(int n_qubits, double a, double b);

    std::uint64_t size() const { return std::uint64_t(1) << n_qubits; }
    double h() const { return (std::pow(2.0, n_qubits) - 1.0) / (b - a); }
    double x(std::uint64_t k) const { return a + double(k) / h(); }
};

enum class AmplitudeMode { pdf, sqrt_pdf };

struct EncodingRequest {
    PiecewisePolynomial function;
    Grid grid;
    AmplitudeMode amplitude_mode = AmplitudeMode::pdf;
    std::optional<int> chi_max;
};

// Exact tensor-train form of f(x) = sum_i coeffs[i] x^i sampled on the grid;
// every interior bond equals degree+1.
MPS encode_polynomial(const std::vector<double>& coeffs, const Grid& grid);

// Zero all amplitudes whose top `support_bits` address bits differ from `region`.
MPS restrict_to_region(const MPS& state, std::uint64_t region, int support_bits);

// Piecewise encoder: per-region polynomial chains behind one-hot address
// selectors, summed, compressed (optionally capped), then normalized.
std::pair<MPS, TruncationReport> encode_piecewise(const EncodingRequest& req);

struct IrwinHallEncoding {
    MPS state;
    Grid grid;
    TruncationReport report;
};

IrwinHallEncoding encode_irwin_hall(int order, int n_qubits,
                                    std::optional<int> chi_max = std::nullopt,
                                    AmplitudeMode mode = AmplitudeMode::pdf);

}  // namespace mpsprep
