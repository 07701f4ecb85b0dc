#include "mpsprep/circuit.hpp"

#include <Eigen/SVD>

#include <cmath>
#include <limits>

namespace mpsprep {
namespace {

constexpr double kOrthoTol = 1e-10;
constexpr int kLossless = std::numeric_limits<int>::max();

void check_orthogonal(const Eigen::MatrixXd& g, const char* what) {
    const double err =
        (g.transpose() * g - Eigen::MatrixXd::Identity(g.cols(), g.cols())).cwiseAbs().maxCoeff();
    if (err > kOrthoTol) throw validation_error(std::string(what) + " is not orthogonal");
}

// Deterministic orthonormal completion of the leading columns against the
// standard basis, then a sign flip on the last added column to force det +1.
void complete_columns(Eigen::MatrixXd& g, int fixed) {
    const int d = int(g.rows());
    int have = fixed;
    int last = -1;
    for (int cand = 0; cand < d && have < d; ++cand) {
        Eigen::VectorXd v = Eigen::VectorXd::Unit(d, cand);
        for (int pass = 0; pass < 2; ++pass)  // twice-is-enough Gram-Schmidt
            for (int j = 0; j < have; ++j) v -= g.col(j).dot(v) * g.col(j);
        const double nrm = v.norm();
        if (nrm > 1e-6) {
            g.col(have) = v / nrm;
            last = have;
            ++have;
        }
    }
    if (have < d) throw numeric_error("isometry completion failed");
    if (g.determinant() < 0) {
        if (last < 0) throw numeric_error("cannot gauge a full orthogonal matrix to det +1");
        g.col(last) = -g.col(last);
    }
}

double zero_amplitude(const MPS& s) {
    Eigen::MatrixXd acc = Eigen::MatrixXd::Ones(1, 1);
    for (const auto& site : s.sites) acc = acc * site[0];
    return acc(0, 0);
}

// Contract sites (j, j+1), hit them with a 4x4 in the |q_j q_{j+1}> basis,
// split back by a rank-revealing SVD (no weight is discarded).
void apply_two_site(MPS& s, const Eigen::Matrix4d& g, int j) {
    const auto l = s.sites[j][0].rows();
    const auto r = s.sites[j + 1][0].cols();
    std::array<std::array<Eigen::MatrixXd, 2>, 2> blk;
    for (int a = 0; a < 2; ++a)
        for (int b = 0; b < 2; ++b) blk[a][b] = s.sites[j][a] * s.sites[j + 1][b];
    Eigen::MatrixXd m(2 * l, 2 * r);
    for (int ta = 0; ta < 2; ++ta)
        for (int tb = 0; tb < 2; ++tb) {
            Eigen::MatrixXd acc = Eigen::MatrixXd::Zero(l, r);
            for (int a = 0; a < 2; ++a)
                for (int b = 0; b < 2; ++b) acc += g(2 * ta + tb, 2 * a + b) * blk[a][b];
            m.block(ta * l, tb * r, l, r) = acc;
        }
    Eigen::BDCSVD<Eigen::MatrixXd> svd(m, Eigen::ComputeThinU | Eigen::ComputeThinV);
    const Eigen::VectorXd& sv = svd.singularValues();
    const double smax = sv.size() ? sv(0) : 0.0;
    int keep = 0;
    while (keep < sv.size() && sv(keep) > 1e-14 * smax) ++keep;
    keep = std::max(keep, 1);
    Eigen::MatrixXd u = svd.matrixU().leftCols(keep);
    Eigen::MatrixXd v = svd.matrixV().leftCols(keep);
    for (Eigen::Index c = 0; c < u.cols(); ++c) {
        Eigen::Index imax = 0;
        u.col(c).cwiseAbs().maxCoeff(&imax);
        if (u(imax, c) < 0) {
            u.col(c) = -u.col(c);
            v.col(c) = -v.col(c);
        }
    }
    Eigen::MatrixXd carry = sv.head(keep).asDiagonal() * v.transpose();
    s.sites[j][0] = u.topRows(l);
    s.sites[j][1] = u.bottomRows(l);
    s.sites[j + 1][0] = carry.leftCols(r);
    s.sites[j + 1][1] = carry.rightCols(r);
}

void apply_head(MPS& s, const Eigen::Matrix2d& h) {
    Eigen::MatrixXd n0 = h(0, 0) * s.sites[0][0] + h(0, 1) * s.sites[0][1];
    Eigen::MatrixXd n1 = h(1, 0) * s.sites[0][0] + h(1, 1) * s.sites[0][1];
    s.sites[0][0] = std::move(n0);
    s.sites[0][1] = std::move(n1);
}

void check_layer_size(const MPS& s, const CircuitLayer& layer) {
    if (layer.n_qubits() != s.size()) throw validation_error("layer and state sizes differ");
}

}  // namespace

void CircuitLayer::validate() const {
    if (gates.empty()) throw validation_error("a layer needs at least one gate");
    for (const auto& g : gates) check_orthogonal(g, "gate");
    check_orthogonal(head, "head");
}

int Circuit::n_qubits() const {
    if (layers.empty()) throw validation_error("empty circuit has no qubit count");
    return layers.front().n_qubits();
}

void Circuit::validate() const {
    if (layers.empty()) throw validation_error("circuit has no layers");
    const int n = layers.front().n_qubits();
    for (const auto& l : layers) {
        if (l.n_qubits() != n) throw validation_error("layers disagree on qubit count");
        l.validate();
    }
}

CircuitLayer layer_from_chi2(const MPS& state) {
    const int n = state.size();
    if (n < 2) throw validation_error("need at least two sites");
    if (state.max_bond() > 2) throw validation_error("state must have bond dimension <= 2");
    MPS w = canonicalize(state, MPS::Form::left);
    if (std::abs(overlap(w, w) - 1.0) > 1e-8) throw validation_error("state must be normalized");

    CircuitLayer layer;
    layer.gates.resize(n - 1);

    // Head from the first tensor; a det=-1 head is regauged by flipping the
    // first bond's second channel on both sides of the bond.
    const int l0 = w.bond(0);
    Eigen::Matrix2d h = Eigen::Matrix2d::Zero();
    for (int sig = 0; sig < 2; ++sig)
        for (int s = 0; s < l0; ++s) h(sig, s) = w.sites[0][sig](0, s);
    if (l0 == 1) {
        h(0, 1) = -h(1, 0);
        h(1, 1) = h(0, 0);
    } else if (h.determinant() < 0) {
        h.col(1) = -h.col(1);
        w.sites[1][0].row(1) = -w.sites[1][0].row(1);
        w.sites[1][1].row(1) = -w.sites[1][1].row(1);
    }
    layer.head = h;

    for (int j = 0; j + 1 < n; ++j) {
        const auto& a = w.sites[j + 1];
        const int l = int(a[0].rows()), r = int(a[0].cols());
        Eigen::MatrixXd g = Eigen::MatrixXd::Zero(4, 4);
        for (int s = 0; s < l; ++s)
            for (int sig = 0; sig < 2; ++sig)
                for (int sp = 0; sp < r; ++sp) g(2 * s + sig, sp) = a[sig](s, sp);
        complete_columns(g, r);
        layer.gates[j] = g;
    }
    return layer;
}

MPS apply_layer(const MPS& state, const CircuitLayer& layer) {
    check_layer_size(state, layer);
    layer.validate();
    MPS s = state;
    for (int j = s.size() - 2; j >= 0; --j) apply_two_site(s, layer.gates[j], j);
    apply_head(s, layer.head);
    s.form = MPS::Form::none;
    return s;
}

MPS apply_layer_adjoint(const MPS& state, const CircuitLayer& layer) {
    check_layer_size(state, layer);
    layer.validate();
    MPS s = state;
    apply_head(s, layer.head.transpose());
    for (int j = 0; j + 1 < s.size(); ++j) apply_two_site(s, layer.gates[j].transpose(), j);
    s.form = MPS::Form::none;
    return s;
}

std::pair<Circuit, std::vector<double>> extract_circuit(const MPS& target, int depth) {
    if (depth < 1) throw validation_error("depth must be >= 1");
    MPS psi = canonicalize(target, MPS::Form::right);
    if (std::abs(overlap(psi, psi) - 1.0) > 1e-8)
        throw validation_error("target must be normalized");

    Circuit circuit;
    std::vector<double> infidelities;
    for (int i = 0; i < depth; ++i) {
        auto [chi2, rep] = truncate(psi, 2);
        CircuitLayer layer = layer_from_chi2(chi2);
        psi = apply_layer_adjoint(psi, layer);
        psi = truncate(psi, kLossless).first;  // orthogonal layer: norm already 1
        circuit.layers.push_back(std::move(layer));
        infidelities.push_back(1.0 - std::abs(zero_amplitude(psi)));
    }
    return {std::move(circuit), std::move(infidelities)};
}

MPS simulate_mps(const Circuit& circuit) {
    circuit.validate();
    MPS psi = MPS::product_zero(circuit.n_qubits());
    for (auto it = circuit.layers.rbegin(); it != circuit.layers.rend(); ++it)
        psi = apply_layer(psi, *it);
    return truncate(psi, kLossless).first;
}

Eigen::VectorXd simulate_statevector(const Circuit& circuit, int max_qubits) {
    circuit.validate();
    const int n = circuit.n_qubits();
    if (n > max_qubits)
        throw validation_error("statevector backend capped at " + std::to_string(max_qubits) +
                               " qubits");
    Eigen::VectorXd v = Eigen::VectorXd::Zero(std::uint64_t(1) << n);
    v(0) = 1.0;
    const auto apply_gate = [&v, n](const Eigen::Matrix4d& g, int q_hi, int q_lo) {
        const std::uint64_t bh = std::uint64_t(1) << (n - 1 - q_hi);
        const std::uint64_t bl = std::uint64_t(1) << (n - 1 - q_lo);
        for (std::uint64_t k = 0; k < std::uint64_t(v.size()); ++k) {
            if (k & (bh | bl)) continue;
            const std::uint64_t i00 = k, i01 = k | bl, i10 = k | bh, i11 = k | bh | bl;
            Eigen::Vector4d amp(v(i00), v(i01), v(i10), v(i11));
            amp = g * amp;
            v(i00) = amp(0);
            v(i01) = amp(1);
            v(i10) = amp(2);
            v(i11) = amp(3);
        }
    };
    for (auto it = circuit.layers.rbegin(); it != circuit.layers.rend(); ++it) {
        for (int j = n - 2; j >= 0; --j) apply_gate(it->gates[j], j, j + 1);
        const std::uint64_t bh = std::uint64_t(1) << (n - 1);
        for (std::uint64_t k = 0; k < bh; ++k) {
            const double a0 = v(k), a1 = v(k | bh);
            v(k) = it->head(0, 0) * a0 + it->head(0, 1) * a1;
            v(k | bh) = it->head(1, 0) * a0 + it->head(1, 1) * a1;
        }
    }
    return v;
}

}  // namespace mpsprep
