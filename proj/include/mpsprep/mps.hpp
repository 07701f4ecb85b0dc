#pragma once

#include <Eigen/Dense>

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "mpsprep/errors.hpp"

namespace mpsprep {

// Weight discarded while compressing, per interior bond (sum of squared
// dropped singular values, relative to the state's norm), plus structural
// diagnostics.  1 - sum(eps) lower-bounds the squared overlap with the
// uncompressed state.
struct TruncationReport {
    std::vector<double> discarded_weights;
    int raw_max_bond = 0;   // largest interior bond before any compression
    int max_bond = 0;       // largest interior bond afterwards
    double norm_scale = 1;  // 2-norm absorbed by the final normalization
    double fidelity_lower_bound() const {
        double s = 0;
        for (double e : discarded_weights) s += e;
        return 1.0 - s;
    }
};

// Chain of N rank-3 real tensors; sites[i][sigma] is the chi_{i-1} x chi_i
// matrix for physical value sigma.  chi_0 = chi_N = 1.  Basis index of the
// contracted vector is big-endian: site 0 is the most significant bit.
struct MPS {
    enum class Form { none, left, right, mixed };

    std::vector<std::array<Eigen::MatrixXd, 2>> sites;
    Form form = Form::none;
    int center = -1;  // only meaningful for Form::mixed

    int size() const { return static_cast<int>(sites.size()); }
    // bond between sites i and i+1 (0-based), i in [0, N-2]
    int bond(int i) const { return static_cast<int>(sites[i][0].cols()); }
    int max_bond() const;
    void validate() const;  // shape chain consistency, finite entries

    static MPS product_zero(int n_sites);  // |0...0>
};

MPS canonicalize(const MPS& state, MPS::Form target);  // Form::left or Form::right

// Compress every interior bond to chi_max (>= 1) by an SVD sweep; singular
// values below 1e-14 of the local maximum are treated as zero regardless.
// The returned state is normalized; report.norm_scale holds the absorbed norm.
std::pair<MPS, TruncationReport> truncate(const MPS& state, int chi_max);

// Elementwise amplitude sum via block-diagonal bond embedding; interior bonds
// add (chi_a + chi_b), no recompression.
MPS add(const MPS& a, const MPS& b);

// <a|b> by transfer-matrix contraction, O(N chi^3).
double overlap(const MPS& a, const MPS& b);

// Dense contraction; index k = sum_i sigma_i 2^(N-1-i) over 0-based sites.
Eigen::VectorXd to_statevector(const MPS& state, int max_qubits = 24);

// Von Neumann entropy (natural log) of the Schmidt spectrum across the bond
// after `cut` sites (1 <= cut <= N-1).  Requires a normalized state.
double entanglement_entropy(const MPS& state, int cut);

// Exact sequential sampling from |amplitude|^2: right-canonicalize, then draw
// site by site from the conditional marginals.  Deterministic per seed.
// Returned values are big-endian basis indices.
std::vector<std::uint64_t> sample(const MPS& state, int shots, std::uint64_t seed);

std::string to_bitstring(std::uint64_t k, int n_bits);

}  // namespace mpsprep
