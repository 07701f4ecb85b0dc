#include "mpsprep/encode.hpp"

#include <Eigen/SVD>

#include <algorithm>
#include <limits>

#include "ih_exact.hpp"

namespace mpsprep {
namespace {

constexpr int kLossless = std::numeric_limits<int>::max();
// Partial sums are recompressed once their bonds pass this size; below it the
// full region sum is materialized so reported raw bonds stay exact.
constexpr int kAssemblyBondCap = 512;

std::vector<std::vector<double>> pascal(int p) {
    std::vector<std::vector<double>> c(p + 1);
    for (int i = 0; i <= p; ++i) {
        c[i].assign(i + 1, 1.0);
        for (int j = 1; j < i; ++j) c[i][j] = c[i - 1][j - 1] + c[i - 1][j];
    }
    return c;
}

double horner(const std::vector<double>& c, double x) {
    double acc = 0.0;
    for (auto it = c.rbegin(); it != c.rend(); ++it) acc = acc * x + *it;
    return acc;
}

// Tensor-train chain of `len` sites contracting to f(a0 + m/h) at the local
// grid index m; coefficients are about the local origin a0.
MPS oseledets_chain(const std::vector<double>& coeffs, int len, double a0, double h) {
    const int p = int(coeffs.size()) - 1;
    const int chi = p + 1;
    const auto binom = pascal(p);
    MPS s;
    s.sites.resize(len);

    const double t1 = std::pow(2.0, len - 1) / h;
    if (len == 1) {
        for (int sig = 0; sig < 2; ++sig) {
            s.sites[0][sig] = Eigen::MatrixXd::Constant(1, 1, horner(coeffs, a0 + sig * t1));
        }
        return s;
    }

    for (int sig = 0; sig < 2; ++sig) {
        const double y = a0 + sig * t1;
        Eigen::MatrixXd g = Eigen::MatrixXd::Zero(1, chi);
        for (int sidx = 0; sidx <= p; ++sidx) {
            double acc = 0.0;  // sum_{k >= s} a_k C(k, s) y^{k-s}, Horner in y
            for (int k = p; k >= sidx; --k) acc = acc * y + coeffs[k] * binom[k][sidx];
            g(0, sidx) = acc;
        }
        s.sites[0][sig] = std::move(g);
    }
    for (int i = 1; i + 1 < len; ++i) {
        const double t = std::pow(2.0, len - 1 - i) / h;
        // sigma=0 has t=0, so the lower-triangular binomial tensor degenerates
        // to the identity (0^0 = 1 on the diagonal).
        s.sites[i][0] = Eigen::MatrixXd::Identity(chi, chi);
        Eigen::MatrixXd m = Eigen::MatrixXd::Zero(chi, chi);
        for (int al = 0; al <= p; ++al) {
            double tp = 1.0;
            for (int be = al; be >= 0; --be) {
                m(al, be) = binom[al][al - be] * tp;
                tp *= t;
            }
        }
        s.sites[i][1] = std::move(m);
    }
    for (int sig = 0; sig < 2; ++sig) {
        Eigen::MatrixXd v(chi, 1);
        const double t = sig / h;
        double tp = 1.0;
        for (int al = 0; al <= p; ++al) {
            v(al, 0) = tp;
            tp *= t;
        }
        s.sites[len - 1][sig] = std::move(v);
    }
    return s;
}

// Taylor shift in place: returns coefficients of f(u + s) given those of f(x).
std::vector<double> taylor_shift(std::vector<double> c, double s) {
    const int p = int(c.size()) - 1;
    for (int m = 0; m <= p; ++m)
        for (int i = p - 1; i >= m; --i) c[i] += s * c[i + 1];
    return c;
}

// Coefficients of piece `region` about the region's left grid edge, which sits
// region*(b-a)/(2^k(2^N-1)) to the right of the piece's knot. When exact
// integer tables are available the shift is done in rational arithmetic.
std::vector<double> region_local_coeffs(const PiecewisePolynomial& f, std::uint64_t region,
                                        const Grid& g, int k) {
    const bool exact = f.tables && f.a == 0.0 && f.piece_width() == 1.0 &&
                       int(f.pieces.size()) == f.tables->n;
    if (exact) {
        const auto& ex = f.tables->exact;
        const mpz_class denom_grid = (mpz_class(1) << g.n_qubits) - 1;
        mpq_class delta(mpz_class(long(region)), denom_grid);  // region/(2^N-1)
        delta.canonicalize();
        std::vector<mpq_class> q(ex.left[region].size());
        for (std::size_t i = 0; i < q.size(); ++i) {
            q[i] = mpq_class(ex.left[region][i], ex.denom);
            q[i].canonicalize();
        }
        q = detail::shift_rat(q, delta);
        std::vector<double> out(q.size());
        for (std::size_t i = 0; i < q.size(); ++i) out[i] = detail::to_double(q[i]);
        return out;
    }
    const double x_start = g.a + double(region) * std::pow(2.0, g.n_qubits - k) / g.h();
    return taylor_shift(f.pieces[region], x_start);
}

MPS selector_chain(std::uint64_t region, int k, double scale) {
    MPS s;
    s.sites.resize(k);
    for (int j = 0; j < k; ++j) {
        const int bit = int((region >> (k - 1 - j)) & 1);
        s.sites[j][bit] = Eigen::MatrixXd::Constant(1, 1, j == k - 1 ? scale : 1.0);
        s.sites[j][1 - bit] = Eigen::MatrixXd::Zero(1, 1);
    }
    return s;
}

MPS prepend(const MPS& head, const MPS& tail) {
    MPS out;
    out.sites = head.sites;
    out.sites.insert(out.sites.end(), tail.sites.begin(), tail.sites.end());
    return out;
}

// Rank-revealing recompression that keeps the overall scale (truncate
// normalizes, so the absorbed norm is multiplied back in).
MPS compress_keep_scale(const MPS& s) {
    auto [t, rep] = truncate(s, kLossless);
    t.sites[0][0] *= rep.norm_scale;
    t.sites[0][1] *= rep.norm_scale;
    return t;
}

MPS dense_to_mps(Eigen::VectorXd v, int n) {
    MPS s;
    s.sites.resize(n);
    Eigen::MatrixXd carry = v.transpose();
    for (int i = 0; i < n; ++i) {
        const auto chi = carry.rows(), w = carry.cols();
        if (i == n - 1) {
            s.sites[i][0] = carry.col(0);
            s.sites[i][1] = carry.col(1);
            break;
        }
        Eigen::MatrixXd m(2 * chi, w / 2);
        m.topRows(chi) = carry.leftCols(w / 2);
        m.bottomRows(chi) = carry.rightCols(w / 2);
        Eigen::BDCSVD<Eigen::MatrixXd> svd(m, Eigen::ComputeThinU | Eigen::ComputeThinV);
        const Eigen::VectorXd& sv = svd.singularValues();
        const double smax = sv.size() ? sv(0) : 0.0;
        int keep = 0;
        while (keep < sv.size() && sv(keep) > 1e-14 * smax) ++keep;
        keep = std::max(keep, 1);
        Eigen::MatrixXd u = svd.matrixU().leftCols(keep);
        Eigen::MatrixXd vv = svd.matrixV().leftCols(keep);
        for (Eigen::Index j = 0; j < u.cols(); ++j) {
            Eigen::Index imax = 0;
            u.col(j).cwiseAbs().maxCoeff(&imax);
            if (u(imax, j) < 0) {
                u.col(j) = -u.col(j);
                vv.col(j) = -vv.col(j);
            }
        }
        s.sites[i][0] = u.topRows(chi);
        s.sites[i][1] = u.bottomRows(chi);
        carry = sv.head(keep).asDiagonal() * vv.transpose();
    }
    return s;
}

}  // namespace

Grid::Grid(int n_qubits_, double a_, double b_) : n_qubits(n_qubits_), a(a_), b(b_) {
    if (n_qubits < 2 || n_qubits > 50)
        throw validation_error("qubit count must be in [2, 50]");
    if (!(b > a) || !std::isfinite(a) || !std::isfinite(b))
        throw validation_error("interval must satisfy a < b and be finite");
}

MPS encode_polynomial(const std::vector<double>& coeffs, const Grid& grid) {
    if (coeffs.empty()) throw validation_error("need at least one coefficient");
    const int p = int(coeffs.size()) - 1;
    if (std::uint64_t(p) + 1 > (std::uint64_t(1) << (grid.n_qubits / 2)))
        throw validation_error("degree too high for this qubit count (bond p+1 unreachable)");
    MPS s = oseledets_chain(coeffs, grid.n_qubits, grid.a, grid.h());
    s.form = MPS::Form::none;
    return s;
}

MPS restrict_to_region(const MPS& state, std::uint64_t region, int support_bits) {
    if (support_bits < 0 || support_bits > state.size())
        throw validation_error("support_bits out of range");
    if (support_bits < 64 && region >= (std::uint64_t(1) << support_bits))
        throw validation_error("region index out of range");
    MPS out = state;
    for (int j = 0; j < support_bits; ++j) {
        const int bit = int((region >> (support_bits - 1 - j)) & 1);
        out.sites[j][1 - bit].setZero();
    }
    out.form = MPS::Form::none;
    return out;
}

std::pair<MPS, TruncationReport> encode_piecewise(const EncodingRequest& req) {
    const PiecewisePolynomial& f = req.function;
    const Grid& g = req.grid;
    const int k = f.support_bits();
    const int n_q = g.n_qubits;
    if (k > n_q) throw validation_error("more pieces than grid cells");
    if (f.a != g.a || f.b != g.b)
        throw validation_error("grid interval must match the function support");
    if (req.chi_max && *req.chi_max < 1) throw validation_error("chi_max must be >= 1");

    if (req.amplitude_mode == AmplitudeMode::sqrt_pdf) {
        if (n_q > 20) throw validation_error("sqrt_pdf mode is dense; capped at 20 qubits");
        Eigen::VectorXd v(std::uint64_t(1) << n_q);
        double scale = 0.0;
        for (std::uint64_t j = 0; j < std::uint64_t(v.size()); ++j) {
            v(j) = f(g.x(j));
            scale = std::max(scale, std::abs(v(j)));
        }
        for (std::uint64_t j = 0; j < std::uint64_t(v.size()); ++j) {
            if (v(j) < -1e-12 * scale)
                throw validation_error("sqrt_pdf requires a nonnegative function");
            v(j) = std::sqrt(std::max(v(j), 0.0));
        }
        const double nrm = v.norm();
        if (!(nrm > 0)) throw numeric_error("function vanishes on the whole grid");
        v /= nrm;
        MPS tt = dense_to_mps(std::move(v), n_q);
        const int raw = tt.max_bond();
        auto [state, rep] = truncate(tt, req.chi_max.value_or(kLossless));
        rep.raw_max_bond = raw;
        rep.norm_scale *= nrm;
        return {std::move(state), rep};
    }

    const int len = n_q - k;
    MPS acc;
    int raw_max = 1;
    for (std::uint64_t region = 0; region < (std::uint64_t(1) << k); ++region) {
        const auto local = region_local_coeffs(f, region, g, k);
        MPS piece;
        if (len == 0) {
            piece = selector_chain(region, k, local.empty() ? 0.0 : local[0]);
        } else {
            MPS sub = oseledets_chain(local, len, 0.0, g.h());
            piece = (k == 0) ? std::move(sub) : prepend(selector_chain(region, k, 1.0), sub);
        }
        acc = (region == 0) ? std::move(piece) : add(acc, piece);
        raw_max = std::max(raw_max, acc.max_bond());
        if (acc.max_bond() > kAssemblyBondCap) acc = compress_keep_scale(acc);
    }
    auto [state, rep] = truncate(acc, req.chi_max.value_or(kLossless));
    rep.raw_max_bond = raw_max;
    return {std::move(state), rep};
}

IrwinHallEncoding encode_irwin_hall(int order, int n_qubits, std::optional<int> chi_max,
                                    AmplitudeMode mode) {
    if (order < 2 || (order & (order - 1)) != 0)
        throw validation_error("order must be a power of two");
    int k = 0;
    while ((1 << k) < order) ++k;
    if (k > n_qubits) throw validation_error("order 2^k needs at least k qubits");
    Grid grid(n_qubits, 0.0, double(order));
    EncodingRequest req{irwin_hall_pieces(IrwinHallSpec(order)), grid, mode, chi_max};
    auto [state, rep] = encode_piecewise(req);
    return {std::move(state), grid, rep};
}

}  // namespace mpsprep
