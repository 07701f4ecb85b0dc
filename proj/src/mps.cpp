#include "mpsprep/mps.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

#include <cmath>
#include <random>

namespace mpsprep {
namespace {

Eigen::MatrixXd stack_rows(const std::array<Eigen::MatrixXd, 2>& site) {
    const auto l = site[0].rows(), r = site[0].cols();
    Eigen::MatrixXd m(2 * l, r);
    m.topRows(l) = site[0];
    m.bottomRows(l) = site[1];
    return m;
}

void unstack_rows(std::array<Eigen::MatrixXd, 2>& site, const Eigen::MatrixXd& m) {
    const auto l = m.rows() / 2;
    site[0] = m.topRows(l);
    site[1] = m.bottomRows(l);
}

// Thin QR with R's diagonal forced nonnegative (deterministic gauge).
void thin_qr(const Eigen::MatrixXd& m, Eigen::MatrixXd& q, Eigen::MatrixXd& r) {
    const auto k = std::min(m.rows(), m.cols());
    Eigen::HouseholderQR<Eigen::MatrixXd> qr(m);
    q = qr.householderQ() * Eigen::MatrixXd::Identity(m.rows(), k);
    r = qr.matrixQR().topRows(k).triangularView<Eigen::Upper>();
    for (Eigen::Index j = 0; j < k; ++j) {
        if (r(j, j) < 0) {
            q.col(j) = -q.col(j);
            r.row(j) = -r.row(j);
        }
    }
}

// Absorb site i into left-canonical form, pushing the remainder right.
void qr_step_left(MPS& w, int i) {
    Eigen::MatrixXd q, r;
    thin_qr(stack_rows(w.sites[i]), q, r);
    unstack_rows(w.sites[i], q);
    w.sites[i + 1][0] = r * w.sites[i + 1][0];
    w.sites[i + 1][1] = r * w.sites[i + 1][1];
}

void qr_step_right(MPS& w, int i) {
    const auto l = w.sites[i][0].rows(), r = w.sites[i][0].cols();
    Eigen::MatrixXd m(l, 2 * r);
    m.leftCols(r) = w.sites[i][0];
    m.rightCols(r) = w.sites[i][1];
    Eigen::MatrixXd q, rr;
    thin_qr(m.transpose(), q, rr);  // m = (rr^T)(q^T)
    Eigen::MatrixXd qt = q.transpose();
    w.sites[i][0] = qt.leftCols(r);
    w.sites[i][1] = qt.rightCols(r);
    Eigen::MatrixXd lmat = rr.transpose();
    w.sites[i - 1][0] = w.sites[i - 1][0] * lmat;
    w.sites[i - 1][1] = w.sites[i - 1][1] * lmat;
}

void check_finite(const MPS& s) {
    for (const auto& site : s.sites)
        for (const auto& m : site)
            if (!m.allFinite()) throw validation_error("tensor contains NaN/Inf");
}

Eigen::BDCSVD<Eigen::MatrixXd> thin_svd(const Eigen::MatrixXd& m) {
    return Eigen::BDCSVD<Eigen::MatrixXd>(m, Eigen::ComputeThinU | Eigen::ComputeThinV);
}

// Largest-magnitude entry of each left singular vector made positive.
void fix_svd_signs(Eigen::MatrixXd& u, Eigen::MatrixXd& v) {
    for (Eigen::Index j = 0; j < u.cols(); ++j) {
        Eigen::Index imax = 0;
        u.col(j).cwiseAbs().maxCoeff(&imax);
        if (u(imax, j) < 0) {
            u.col(j) = -u.col(j);
            v.col(j) = -v.col(j);
        }
    }
}

constexpr double kSingularFloor = 1e-14;  // relative zero threshold

}  // namespace

int MPS::max_bond() const {
    int m = 1;
    for (int i = 0; i + 1 < size(); ++i) m = std::max(m, bond(i));
    return m;
}

void MPS::validate() const {
    if (sites.empty()) throw validation_error("empty MPS");
    if (sites.front()[0].rows() != 1 || sites.back()[0].cols() != 1)
        throw validation_error("edge bonds must be 1");
    for (int i = 0; i < size(); ++i) {
        const auto& s = sites[i];
        if (s[0].rows() != s[1].rows() || s[0].cols() != s[1].cols())
            throw validation_error("physical slices disagree in shape");
        if (i + 1 < size() && s[0].cols() != sites[i + 1][0].rows())
            throw validation_error("adjacent bond dimensions disagree");
    }
    check_finite(*this);
}

MPS MPS::product_zero(int n_sites) {
    if (n_sites < 1) throw validation_error("need at least one site");
    MPS s;
    s.sites.resize(n_sites);
    for (auto& site : s.sites) {
        site[0] = Eigen::MatrixXd::Ones(1, 1);
        site[1] = Eigen::MatrixXd::Zero(1, 1);
    }
    s.form = Form::left;
    return s;
}

MPS canonicalize(const MPS& state, MPS::Form target) {
    state.validate();
    MPS w = state;
    if (target == MPS::Form::left) {
        for (int i = 0; i + 1 < w.size(); ++i) qr_step_left(w, i);
        w.form = MPS::Form::left;
    } else if (target == MPS::Form::right) {
        for (int i = w.size() - 1; i > 0; --i) qr_step_right(w, i);
        w.form = MPS::Form::right;
    } else {
        throw validation_error("canonicalize target must be left or right");
    }
    return w;
}

std::pair<MPS, TruncationReport> truncate(const MPS& state, int chi_max) {
    if (chi_max < 1) throw validation_error("chi_max must be >= 1");
    TruncationReport rep;
    rep.raw_max_bond = state.max_bond();

    MPS w = canonicalize(state, MPS::Form::right);
    const double nrm = std::sqrt(overlap(w, w));
    if (!(nrm > 0)) throw numeric_error("cannot truncate the zero state");
    w.sites[0][0] /= nrm;
    w.sites[0][1] /= nrm;
    rep.norm_scale = nrm;

    const int n = w.size();
    rep.discarded_weights.assign(std::max(0, n - 1), 0.0);
    for (int i = 0; i + 1 < n; ++i) {
        auto svd = thin_svd(stack_rows(w.sites[i]));
        Eigen::VectorXd s = svd.singularValues();
        Eigen::MatrixXd u = svd.matrixU(), v = svd.matrixV();
        const double smax = s.size() ? s(0) : 0.0;
        int keep = 0;
        while (keep < s.size() && s(keep) > kSingularFloor * smax && keep < chi_max) ++keep;
        keep = std::max(keep, 1);
        double eps = 0.0;
        for (Eigen::Index j = keep; j < s.size(); ++j) eps += s(j) * s(j);
        rep.discarded_weights[i] = eps;
        Eigen::MatrixXd uk = u.leftCols(keep), vk = v.leftCols(keep);
        fix_svd_signs(uk, vk);
        unstack_rows(w.sites[i], uk);
        Eigen::MatrixXd carry = s.head(keep).asDiagonal() * vk.transpose();
        w.sites[i + 1][0] = carry * w.sites[i + 1][0];
        w.sites[i + 1][1] = carry * w.sites[i + 1][1];
    }
    // Left part is isometric, so the state's norm sits in the last site.
    const double tail = std::sqrt(w.sites[n - 1][0].squaredNorm() + w.sites[n - 1][1].squaredNorm());
    if (tail > 0) {
        w.sites[n - 1][0] /= tail;
        w.sites[n - 1][1] /= tail;
    }
    w.form = MPS::Form::left;
    rep.max_bond = w.max_bond();
    return {std::move(w), rep};
}

MPS add(const MPS& a, const MPS& b) {
    if (a.size() != b.size()) throw validation_error("site counts differ");
    const int n = a.size();
    MPS out;
    out.sites.resize(n);
    for (int i = 0; i < n; ++i) {
        const auto la = a.sites[i][0].rows(), ra = a.sites[i][0].cols();
        const auto lb = b.sites[i][0].rows(), rb = b.sites[i][0].cols();
        const auto L = (i == 0) ? 1 : la + lb;
        const auto R = (i == n - 1) ? 1 : ra + rb;
        for (int s = 0; s < 2; ++s) {
            Eigen::MatrixXd m = Eigen::MatrixXd::Zero(L, R);
            if (i == 0 && n > 1) {
                m.leftCols(ra) = a.sites[i][s];
                m.rightCols(rb) = b.sites[i][s];
            } else if (i == n - 1 && n > 1) {
                m.topRows(la) = a.sites[i][s];
                m.bottomRows(lb) = b.sites[i][s];
            } else if (n == 1) {
                m = a.sites[i][s] + b.sites[i][s];
            } else {
                m.topLeftCorner(la, ra) = a.sites[i][s];
                m.bottomRightCorner(lb, rb) = b.sites[i][s];
            }
            out.sites[i][s] = std::move(m);
        }
    }
    out.form = MPS::Form::none;
    return out;
}

double overlap(const MPS& a, const MPS& b) {
    if (a.size() != b.size()) throw validation_error("site counts differ");
    Eigen::MatrixXd e = Eigen::MatrixXd::Ones(1, 1);
    for (int i = 0; i < a.size(); ++i) {
        Eigen::MatrixXd next = a.sites[i][0].transpose() * e * b.sites[i][0];
        next += a.sites[i][1].transpose() * e * b.sites[i][1];
        e = std::move(next);
    }
    return e(0, 0);
}

Eigen::VectorXd to_statevector(const MPS& state, int max_qubits) {
    state.validate();
    const int n = state.size();
    if (n > max_qubits)
        throw validation_error("dense contraction capped at " + std::to_string(max_qubits) +
                               " qubits");
    const int mid = n / 2;
    // Left prefix table: row r = bits of sites [0, mid), big-endian.
    Eigen::MatrixXd left = Eigen::MatrixXd::Ones(1, 1);
    for (int i = 0; i < mid; ++i) {
        Eigen::MatrixXd t0 = left * state.sites[i][0];
        Eigen::MatrixXd t1 = left * state.sites[i][1];
        Eigen::MatrixXd nx(2 * left.rows(), t0.cols());
        for (Eigen::Index r = 0; r < left.rows(); ++r) {
            nx.row(2 * r) = t0.row(r);
            nx.row(2 * r + 1) = t1.row(r);
        }
        left = std::move(nx);
    }
    // Right suffix table: col c = bits of sites [i, n), big-endian.
    Eigen::MatrixXd right = Eigen::MatrixXd::Ones(1, 1);
    for (int i = n - 1; i >= mid; --i) {
        const auto w = right.cols();
        Eigen::MatrixXd nx(state.sites[i][0].rows(), 2 * w);
        nx.leftCols(w) = state.sites[i][0] * right;
        nx.rightCols(w) = state.sites[i][1] * right;
        right = std::move(nx);
    }
    Eigen::VectorXd v(std::uint64_t(1) << n);
    const auto wsuf = right.cols();
    for (Eigen::Index r = 0; r < left.rows(); ++r)
        v.segment(r * wsuf, wsuf) = (left.row(r) * right).transpose();
    return v;
}

double entanglement_entropy(const MPS& state, int cut) {
    const int n = state.size();
    if (cut < 1 || cut > n - 1) throw validation_error("cut must be in [1, N-1]");
    MPS w = canonicalize(state, MPS::Form::right);
    const double nrm2 = overlap(w, w);
    if (std::abs(nrm2 - 1.0) > 1e-8) throw validation_error("state must be normalized");
    for (int i = 0; i < cut - 1; ++i) qr_step_left(w, i);
    // Left block isometric, right block right-canonical: squared Schmidt
    // coefficients are the eigenvalues of sum_sigma M M^T at site cut-1...
    // after the sweep the center tensor is sites[cut-1] seen from its left bond.
    Eigen::MatrixXd q, r;
    thin_qr(stack_rows(w.sites[cut - 1]), q, r);
    Eigen::MatrixXd g = r * r.transpose();
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(g);
    double s = 0.0;
    for (Eigen::Index i = 0; i < eig.eigenvalues().size(); ++i) {
        const double lam2 = std::max(eig.eigenvalues()(i), 0.0);
        if (lam2 > 1e-30) s -= lam2 * std::log(lam2);
    }
    return s;
}

std::vector<std::uint64_t> sample(const MPS& state, int shots, std::uint64_t seed) {
    if (shots <= 0) throw validation_error("shots must be positive");
    MPS w = canonicalize(state, MPS::Form::right);
    if (std::abs(overlap(w, w) - 1.0) > 1e-8) throw validation_error("state must be normalized");
    std::mt19937_64 rng(seed);
    auto uniform = [&rng]() { return (rng() >> 11) * 0x1.0p-53; };
    const int n = w.size();
    std::vector<std::uint64_t> out;
    out.reserve(shots);
    for (int shot = 0; shot < shots; ++shot) {
        Eigen::RowVectorXd v = Eigen::RowVectorXd::Ones(1);
        std::uint64_t k = 0;
        for (int i = 0; i < n; ++i) {
            Eigen::RowVectorXd w0 = v * w.sites[i][0];
            Eigen::RowVectorXd w1 = v * w.sites[i][1];
            const double p0 = w0.squaredNorm(), p1 = w1.squaredNorm();
            const int sigma = (uniform() * (p0 + p1) < p0) ? 0 : 1;
            v = (sigma == 0) ? std::move(w0) : std::move(w1);
            v /= std::sqrt(sigma == 0 ? p0 : p1);
            k = (k << 1) | static_cast<std::uint64_t>(sigma);
        }
        out.push_back(k);
    }
    return out;
}

std::string to_bitstring(std::uint64_t k, int n_bits) {
    std::string s(n_bits, '0');
    for (int i = 0; i < n_bits; ++i)
        if ((k >> (n_bits - 1 - i)) & 1) s[i] = '1';
    return s;
}

}  // namespace mpsprep
