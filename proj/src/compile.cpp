#include "mpsprep/compile.hpp"

#include <array>
#include <cmath>
#include <complex>
#include <cstdio>
#include <numbers>
#include <sstream>

namespace mpsprep {
namespace {

using cd = std::complex<double>;
using Eigen::Matrix2cd;
using Eigen::Matrix4cd;
using Eigen::Matrix4d;

constexpr double kPi = std::numbers::pi;

Matrix4cd kron2(const Matrix2cd& a, const Matrix2cd& b) {
    Matrix4cd k;
    for (int r1 = 0; r1 < 2; ++r1)
        for (int c1 = 0; c1 < 2; ++c1) k.block<2, 2>(2 * r1, 2 * c1) = a(r1, c1) * b;
    return k;
}

// Magic-style change of basis: C = CX * (u3 (x) u4) conjugates SO(4) into
// SU(2) (x) SU(2).
Matrix4cd basis_change() {
    Matrix4d cx;
    cx << 1, 0, 0, 0, 0, 1, 0, 0, 0, 0, 0, 1, 0, 0, 1, 0;
    Matrix2cd u3, u4;
    const double s = 1.0 / std::sqrt(2.0);
    u3 << cd(s, 0), cd(0, s), cd(s, 0), cd(0, -s);
    u4 << cd(1, 0), cd(0, 0), cd(0, 0), cd(0, 1);
    return cx.cast<cd>() * kron2(u3, u4);
}

struct Zyz {
    double alpha = 0, beta = 0, gamma = 0;
    int sign = 1;  // rz(alpha) ry(beta) rz(gamma) = sign * u
};

// Wrap into (-pi, pi]; each 2*pi step flips the reconstruction's sign.
void wrap_angle(double& a, int& sign) {
    while (a > kPi) {
        a -= 2 * kPi;
        sign = -sign;
    }
    while (a <= -kPi) {
        a += 2 * kPi;
        sign = -sign;
    }
}

Zyz zyz_decompose(const Matrix2cd& u) {
    Zyz r;
    const double a00 = std::abs(u(0, 0)), a10 = std::abs(u(1, 0));
    r.beta = 2.0 * std::atan2(a10, a00);
    if (a10 < 1e-12) {
        double a = -std::arg(u(0, 0));
        if (a == -kPi) a = kPi;  // arg's closed branch end maps to +pi exactly
        r.alpha = r.gamma = a;
        r.beta = 0.0;
        return r;
    }
    if (a00 < 1e-12) {
        r.beta = kPi;
        r.alpha = 2.0 * std::arg(u(1, 0));
        r.gamma = 0.0;
        wrap_angle(r.alpha, r.sign);
        return r;
    }
    r.alpha = std::arg(u(1, 0)) - std::arg(u(0, 0));
    r.gamma = -std::arg(u(1, 0)) - std::arg(u(0, 0));
    wrap_angle(r.alpha, r.sign);
    wrap_angle(r.gamma, r.sign);
    return r;
}

void emit_zyz(std::vector<NativeOp>& ops, const Zyz& z, int wire) {
    ops.push_back(NativeOp::rotation(NativeOp::Kind::rz, z.gamma, wire));
    ops.push_back(NativeOp::rotation(NativeOp::Kind::ry, z.beta, wire));
    ops.push_back(NativeOp::rotation(NativeOp::Kind::rz, z.alpha, wire));
}

Matrix2cd ry_matrix(double th) {
    Matrix2cd m;
    m << cd(std::cos(th / 2), 0), cd(-std::sin(th / 2), 0), cd(std::sin(th / 2), 0),
        cd(std::cos(th / 2), 0);
    return m;
}

Matrix2cd rz_matrix(double th) {
    Matrix2cd m = Matrix2cd::Zero();
    m(0, 0) = std::exp(cd(0, -th / 2));
    m(1, 1) = std::exp(cd(0, th / 2));
    return m;
}

void emit_head(std::vector<NativeOp>& ops, const Eigen::Matrix2d& h, int wire) {
    if ((h.transpose() * h - Eigen::Matrix2d::Identity()).cwiseAbs().maxCoeff() > 1e-8)
        throw validation_error("head is not orthogonal");
    if (h.determinant() < 0)
        throw validation_error(
            "reflection heads are not supported; gauge the preparing layer to det +1");
    double th = 2.0 * std::atan2(h(1, 0), h(0, 0));
    const bool wrapped = th > kPi || th <= -kPi;
    if (th > kPi) th -= 2 * kPi;
    if (th <= -kPi) th += 2 * kPi;
    ops.push_back(NativeOp::rotation(NativeOp::Kind::ry, th, wire));
    if (wrapped) {  // ry(th -+ 2pi) = -ry(th); rz(pi)^2 = -I restores it
        ops.push_back(NativeOp::rotation(NativeOp::Kind::rz, kPi, wire));
        ops.push_back(NativeOp::rotation(NativeOp::Kind::rz, kPi, wire));
    }
}

}  // namespace

NativeOp NativeOp::rotation(Kind k, double angle, int qubit) {
    NativeOp op;
    op.kind = k;
    op.angle = angle;
    op.qubit = qubit;
    return op;
}

NativeOp NativeOp::cnot(int control, int target) {
    NativeOp op;
    op.kind = Kind::cx;
    op.control = control;
    op.target = target;
    return op;
}

int CompiledCircuit::cx_count() const {
    int c = 0;
    for (const auto& op : ops)
        if (op.kind == NativeOp::Kind::cx) ++c;
    return c;
}

CompiledGate compile_o4(const Eigen::Matrix4d& gate) {
    if ((gate.transpose() * gate - Matrix4d::Identity()).cwiseAbs().maxCoeff() > 1e-8)
        throw validation_error("gate is not orthogonal");
    const double det = gate.determinant();
    if (std::abs(std::abs(det) - 1.0) > 1e-8)
        throw validation_error("gate determinant must be +-1");

    CompiledGate out;
    Matrix4d g = gate;
    if (det < 0) {
        Matrix4d swap;
        swap << 1, 0, 0, 0, 0, 0, 1, 0, 0, 1, 0, 0, 0, 0, 0, 1;
        g = swap * g;  // gate = SWAP * g, the SWAP is absorbed by relabeling
        out.swap = true;
    }

    static const Matrix4cd C = basis_change();
    const Matrix4cd q = C * g.cast<cd>() * C.adjoint();

    // Rearrange so a tensor product becomes a rank-1 matrix, then read the
    // factors off the top singular pair.
    Matrix4cd p;
    for (int r1 = 0; r1 < 2; ++r1)
        for (int c1 = 0; c1 < 2; ++c1)
            for (int r2 = 0; r2 < 2; ++r2)
                for (int c2 = 0; c2 < 2; ++c2)
                    p(2 * r1 + c1, 2 * r2 + c2) = q(2 * r1 + r2, 2 * c1 + c2);
    Eigen::JacobiSVD<Matrix4cd> svd(p, Eigen::ComputeFullU | Eigen::ComputeFullV);
    if (svd.singularValues()(1) > 1e-8)
        throw numeric_error("conjugated gate failed to factor into a tensor product");
    Matrix2cd b1;
    const double s0 = std::sqrt(svd.singularValues()(0));
    b1 << svd.matrixU()(0, 0), svd.matrixU()(1, 0), svd.matrixU()(2, 0), svd.matrixU()(3, 0);
    b1 *= s0;
    b1 /= std::sqrt(b1.determinant());  // principal root: det(b1) = 1
    Matrix2cd b2 = Matrix2cd::Zero();
    for (int r1 = 0; r1 < 2; ++r1)
        for (int c1 = 0; c1 < 2; ++c1)
            b2 += std::conj(b1(r1, c1)) * q.block<2, 2>(2 * r1, 2 * c1);
    b2 /= 2.0;
    if ((kron2(b1, b2).adjoint() * q).trace().real() < 0) b1 = -b1;

    Zyz z1 = zyz_decompose(b1);
    Zyz z2 = zyz_decompose(b2);

    auto& ops = out.ops;
    ops.push_back(NativeOp::rotation(NativeOp::Kind::rz, -kPi / 2, 0));
    ops.push_back(NativeOp::rotation(NativeOp::Kind::ry, kPi / 2, 0));
    ops.push_back(NativeOp::rotation(NativeOp::Kind::rz, kPi / 2, 1));
    ops.push_back(NativeOp::cnot(0, 1));
    emit_zyz(ops, z1, 0);
    emit_zyz(ops, z2, 1);
    if (z1.sign * z2.sign < 0) {  // absorb the leftover -I as rz(pi)^2
        ops.push_back(NativeOp::rotation(NativeOp::Kind::rz, kPi, 1));
        ops.push_back(NativeOp::rotation(NativeOp::Kind::rz, kPi, 1));
    }
    ops.push_back(NativeOp::cnot(0, 1));
    ops.push_back(NativeOp::rotation(NativeOp::Kind::ry, -kPi / 2, 0));
    ops.push_back(NativeOp::rotation(NativeOp::Kind::rz, kPi / 2, 0));
    ops.push_back(NativeOp::rotation(NativeOp::Kind::rz, -kPi / 2, 1));
    return out;
}

CompiledCircuit compile_circuit(const Circuit& circuit) {
    CompiledCircuit out;
    if (circuit.layers.empty()) return out;
    circuit.validate();
    const int n = circuit.n_qubits();
    out.n_qubits = n;
    out.final_permutation.resize(n);
    for (int i = 0; i < n; ++i) out.final_permutation[i] = i;
    auto& wire = out.final_permutation;

    for (auto it = circuit.layers.rbegin(); it != circuit.layers.rend(); ++it) {
        for (int j = n - 2; j >= 0; --j) {
            CompiledGate cg = compile_o4(it->gates[j]);
            for (NativeOp op : cg.ops) {
                if (op.kind == NativeOp::Kind::cx) {
                    op.control = wire[j + op.control];
                    op.target = wire[j + op.target];
                } else {
                    op.qubit = wire[j + op.qubit];
                }
                out.ops.push_back(op);
            }
            if (cg.swap) std::swap(wire[j], wire[j + 1]);
        }
        emit_head(out.ops, it->head, wire[0]);
    }
    return out;
}

std::string to_qasm(const CompiledCircuit& compiled) {
    std::ostringstream os;
    char buf[64];
    os << "OPENQASM 2.0;\n";
    os << "include \"qelib1.inc\";\n";
    os << "qreg q[" << compiled.n_qubits << "];\n";
    os << "creg c[" << compiled.n_qubits << "];\n";
    for (const auto& op : compiled.ops) {
        switch (op.kind) {
            case NativeOp::Kind::ry:
            case NativeOp::Kind::rz:
                std::snprintf(buf, sizeof buf, "%.17g", op.angle);
                os << (op.kind == NativeOp::Kind::ry ? "ry" : "rz") << "(" << buf << ") q["
                   << op.qubit << "];\n";
                break;
            case NativeOp::Kind::cx:
                os << "cx q[" << op.control << "],q[" << op.target << "];\n";
                break;
        }
    }
    for (int l = 0; l < compiled.n_qubits; ++l)
        os << "measure q[" << compiled.final_permutation[l] << "] -> c[" << l << "];\n";
    return os.str();
}

Eigen::VectorXcd simulate_compiled_dense(const CompiledCircuit& compiled, int max_qubits) {
    const int n = compiled.n_qubits;
    if (n < 1) throw validation_error("compiled circuit has no qubits");
    if (n > max_qubits)
        throw validation_error("dense simulation capped at " + std::to_string(max_qubits) +
                               " qubits");
    Eigen::VectorXcd v = Eigen::VectorXcd::Zero(std::uint64_t(1) << n);
    v(0) = cd(1, 0);
    const auto one_qubit = [&v, n](const Matrix2cd& m, int q) {
        const std::uint64_t b = std::uint64_t(1) << (n - 1 - q);
        for (std::uint64_t k = 0; k < std::uint64_t(v.size()); ++k) {
            if (k & b) continue;
            const cd a0 = v(k), a1 = v(k | b);
            v(k) = m(0, 0) * a0 + m(0, 1) * a1;
            v(k | b) = m(1, 0) * a0 + m(1, 1) * a1;
        }
    };
    for (const auto& op : compiled.ops) {
        switch (op.kind) {
            case NativeOp::Kind::ry:
                one_qubit(ry_matrix(op.angle), op.qubit);
                break;
            case NativeOp::Kind::rz:
                one_qubit(rz_matrix(op.angle), op.qubit);
                break;
            case NativeOp::Kind::cx: {
                const std::uint64_t bc = std::uint64_t(1) << (n - 1 - op.control);
                const std::uint64_t bt = std::uint64_t(1) << (n - 1 - op.target);
                for (std::uint64_t k = 0; k < std::uint64_t(v.size()); ++k)
                    if ((k & bc) && !(k & bt)) std::swap(v(k), v(k | bt));
                break;
            }
        }
    }
    return v;
}

Eigen::VectorXcd permute_to_logical(const Eigen::VectorXcd& physical,
                                    const std::vector<int>& final_permutation) {
    const int n = int(final_permutation.size());
    if (physical.size() != Eigen::Index(std::uint64_t(1) << n))
        throw validation_error("vector length does not match the permutation size");
    Eigen::VectorXcd out(physical.size());
    for (std::uint64_t kp = 0; kp < std::uint64_t(physical.size()); ++kp) {
        std::uint64_t kl = 0;
        for (int l = 0; l < n; ++l) {
            const std::uint64_t bit = (kp >> (n - 1 - final_permutation[l])) & 1;
            kl |= bit << (n - 1 - l);
        }
        out(kl) = physical(kp);
    }
    return out;
}

}  // namespace mpsprep
