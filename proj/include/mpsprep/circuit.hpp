#pragma once

#include <Eigen/Dense>

#include <utility>
#include <vector>

#include "mpsprep/mps.hpp"

namespace mpsprep {

// One staircase layer: gates[j] is a real orthogonal 4x4 acting on qubit pair
// (j, j+1) in the |q_j q_{j+1}> basis (first qubit = high bit), plus a single
// 2x2 rotation on qubit 0. Acting on a ket, gates apply bottom-up — gates[N-2]
// first, then ascending to gates[0], head last — so each gate meets its upper
// qubit still in |0>.
struct CircuitLayer {
    std::vector<Eigen::Matrix4d> gates;
    Eigen::Matrix2d head = Eigen::Matrix2d::Identity();

    int n_qubits() const { return int(gates.size()) + 1; }
    void validate() const;  // orthogonality of every gate and the head, 1e-10
};

// layers[0] is the outermost factor: preparing from |0...0> applies
// layers.back() first and layers[0] last.
struct Circuit {
    std::vector<CircuitLayer> layers;

    int n_qubits() const;
    void validate() const;
};

// Exact single-layer preparation of a bond-dimension-2 state: gates are unitary
// completions of the site isometries, gauged so every determinant is +1.
CircuitLayer layer_from_chi2(const MPS& state);

// Iterative disentangling: per step, truncate to bond 2, build the preparing
// layer, and pull its adjoint through the target. Returns the layers and the
// per-step infidelities 1 - |<psi_i|0...0>|.
std::pair<Circuit, std::vector<double>> extract_circuit(const MPS& target, int depth);

MPS apply_layer(const MPS& state, const CircuitLayer& layer);
MPS apply_layer_adjoint(const MPS& state, const CircuitLayer& layer);

Eigen::VectorXd simulate_statevector(const Circuit& circuit, int max_qubits = 24);
MPS simulate_mps(const Circuit& circuit);

}  // namespace mpsprep
