#pragma once

#include <Eigen/Dense>

#include <string>
#include <vector>

#include "mpsprep/circuit.hpp"

namespace mpsprep {

// A native operation: ry/rz rotation on one qubit or a cx. Ops lists are
// ordered by application time (first entry is applied first).
struct NativeOp {
    enum class Kind { ry, rz, cx };
    Kind kind = Kind::ry;
    double angle = 0.0;  // rotations only
    int qubit = 0;       // rotation target
    int control = 0, target = 0;  // cx wires

    static NativeOp rotation(Kind k, double angle, int qubit);
    static NativeOp cnot(int control, int target);
};

struct CompiledGate {
    std::vector<NativeOp> ops;  // on abstract wires: 0 = upper qubit, 1 = lower
    bool swap = false;          // a trailing SWAP was factored out
};

struct CompiledCircuit {
    int n_qubits = 0;
    std::vector<NativeOp> ops;
    // final_permutation[l] = physical wire holding logical qubit l (logical
    // qubit 0 is the most significant address bit).
    std::vector<int> final_permutation;

    int cx_count() const;
};

// Real orthogonal 4x4 -> exactly two cx plus ry/rz rotations; det = -1 inputs
// factor a trailing SWAP that the caller absorbs by relabeling wires.
CompiledGate compile_o4(const Eigen::Matrix4d& gate);

CompiledCircuit compile_circuit(const Circuit& circuit);

// OpenQASM 2.0 subset: qreg/creg, ry, rz, cx, measure. Classical bit c[l]
// receives logical qubit l (the l-th most significant address bit).
std::string to_qasm(const CompiledCircuit& compiled);

// Dense complex simulation of the native-op stream from |0...0>, returned in
// *physical* wire order (apply final_permutation to recover logical indices).
Eigen::VectorXcd simulate_compiled_dense(const CompiledCircuit& compiled, int max_qubits = 24);

// Reindex a physical-order amplitude vector into logical order using the
// compiled permutation.
Eigen::VectorXcd permute_to_logical(const Eigen::VectorXcd& physical,
                                    const std::vector<int>& final_permutation);

}  // namespace mpsprep
