#pragma once

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <random>

#include "mpsprep/compile.hpp"
#include "mpsprep/mps.hpp"

namespace test_helpers {

// Brute-force contraction, one matrix product per basis state.  Slow but
// structurally independent of to_statevector's prefix/suffix blocking.
inline Eigen::VectorXd dense_contract(const mpsprep::MPS& m) {
    const int n = m.size();
    const Eigen::Index dim = Eigen::Index(1) << n;
    Eigen::VectorXd v(dim);
    for (Eigen::Index k = 0; k < dim; ++k) {
        Eigen::MatrixXd acc = Eigen::MatrixXd::Identity(1, 1);
        for (int i = 0; i < n; ++i) {
            const int sigma = int((std::uint64_t(k) >> (n - 1 - i)) & 1);
            acc = acc * m.sites[i][sigma];
        }
        v(k) = acc(0, 0);
    }
    return v;
}

inline mpsprep::MPS random_mps(std::mt19937_64& rng, int n, int chi) {
    std::normal_distribution<double> g;
    mpsprep::MPS m;
    m.sites.resize(n);
    for (int i = 0; i < n; ++i) {
        const int l = (i == 0) ? 1 : chi;
        const int r = (i == n - 1) ? 1 : chi;
        for (int sigma = 0; sigma < 2; ++sigma) {
            Eigen::MatrixXd a(l, r);
            for (int p = 0; p < l; ++p)
                for (int q = 0; q < r; ++q) a(p, q) = g(rng);
            m.sites[i][sigma] = a;
        }
    }
    return m;
}

// Haar-ish orthogonal matrix: QR of a Gaussian matrix with the R-diagonal
// sign fixed so Q is uniquely determined.
inline Eigen::MatrixXd random_orthogonal(std::mt19937_64& rng, int dim) {
    std::normal_distribution<double> g;
    Eigen::MatrixXd a(dim, dim);
    for (int i = 0; i < dim; ++i)
        for (int j = 0; j < dim; ++j) a(i, j) = g(rng);
    Eigen::HouseholderQR<Eigen::MatrixXd> qr(a);
    Eigen::MatrixXd q = qr.householderQ() * Eigen::MatrixXd::Identity(dim, dim);
    const Eigen::MatrixXd r = qr.matrixQR();
    for (int j = 0; j < dim; ++j)
        if (r(j, j) < 0) q.col(j) *= -1.0;
    return q;
}

inline Eigen::Matrix4d random_so4(std::mt19937_64& rng) {
    Eigen::Matrix4d q = random_orthogonal(rng, 4);
    if (q.determinant() < 0) q.col(0) *= -1.0;
    return q;
}

// |<a|b>| / (|a| |b|), the dense fidelity between unnormalized vectors.
inline double vector_fidelity(const Eigen::VectorXd& a, const Eigen::VectorXd& b) {
    return std::abs(a.dot(b)) / (a.norm() * b.norm());
}

inline Eigen::Matrix4cd kron22(const Eigen::Matrix2cd& a, const Eigen::Matrix2cd& b) {
    Eigen::Matrix4cd out;
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) out.block<2, 2>(2 * i, 2 * j) = a(i, j) * b;
    return out;
}

inline Eigen::Matrix2cd rotation_matrix(mpsprep::NativeOp::Kind k, double t) {
    const std::complex<double> im(0.0, 1.0);
    Eigen::Matrix2cd m;
    if (k == mpsprep::NativeOp::Kind::ry)
        m << std::cos(t / 2), -std::sin(t / 2), std::sin(t / 2), std::cos(t / 2);
    else
        m << std::exp(-im * (t / 2)), 0.0, 0.0, std::exp(im * (t / 2));
    return m;
}

// Product of a two-wire native-op stream; wire 0 carries the high bit of the
// 4-dimensional basis index, matching the gate convention everywhere else.
inline Eigen::Matrix4cd rebuild_gate(const mpsprep::CompiledGate& g) {
    using mpsprep::NativeOp;
    const Eigen::Matrix2cd id = Eigen::Matrix2cd::Identity();
    Eigen::Matrix4cd full = Eigen::Matrix4cd::Identity();
    for (const NativeOp& op : g.ops) {
        Eigen::Matrix4cd step;
        if (op.kind == NativeOp::Kind::cx) {
            step.setZero();
            for (int s = 0; s < 4; ++s) {
                const int cbit = (s >> (1 - op.control)) & 1;
                const int out = cbit ? (s ^ (1 << (1 - op.target))) : s;
                step(out, s) = 1.0;
            }
        } else {
            const Eigen::Matrix2cd m = rotation_matrix(op.kind, op.angle);
            step = (op.qubit == 0) ? kron22(m, id) : kron22(id, m);
        }
        full = step * full;
    }
    return full;
}

inline Eigen::Matrix4d swap_matrix() {
    Eigen::Matrix4d s = Eigen::Matrix4d::Zero();
    s(0, 0) = s(3, 3) = 1.0;
    s(1, 2) = s(2, 1) = 1.0;
    return s;
}

}  // namespace test_helpers
