#include "mpsprep/figures.hpp"

#include <cmath>

#include "mpsprep/circuit.hpp"
#include "mpsprep/distributions.hpp"

namespace mpsprep {
namespace {

const std::vector<int> kSweepOrders = {4, 8, 16, 32, 64, 128, 256};

Figure2 distance_sweep(bool pdf) {
    Figure2 fig;
    fig.series.columns = {"n", "sup_error", "avg_error"};
    std::vector<double> ns, sups, avgs;
    for (int n : kSweepOrders) {
        const DistanceReport rep = pdf_cdf_distances(n, GridRule::matched_x);
        // mean error over the comparison window: the L1 distance divided by
        // the window width 2 sqrt(3n) sigma (the width grows like n, so this
        // steepens the fitted slope by one relative to the raw integral)
        const double width = 2.0 * std::sqrt(3.0 * n) * std::sqrt(n / 12.0);
        const double sup = pdf ? rep.sup_pdf : rep.sup_cdf;
        const double avg = (pdf ? rep.l1_pdf : rep.l1_cdf) / width;
        fig.series.rows.push_back({double(n), sup, avg});
        ns.push_back(n);
        sups.push_back(sup);
        avgs.push_back(avg);
    }
    fig.sup_fit = loglog_slope(ns, sups);
    fig.avg_fit = loglog_slope(ns, avgs);
    return fig;
}

double kahan_sum(const std::function<double(std::uint64_t)>& term, std::uint64_t count) {
    double s = 0.0, c = 0.0;
    for (std::uint64_t k = 0; k < count; ++k) {
        const double y = term(k) - c;
        const double t = s + y;
        c = (t - s) - y;
        s = t;
    }
    return s;
}

// Sup over the grid of |discretized cdf - undiscretized normal cdf|, two
// passes so nothing of size 2^N is stored.
double discretized_cdf_error(const std::function<double(double)>& weight, int n_qubits) {
    const double zmax = 4.0 * std::sqrt(3.0);
    const std::uint64_t count = std::uint64_t(1) << n_qubits;
    const auto z_of = [zmax, count](std::uint64_t k) {
        return -zmax + 2.0 * zmax * double(k) / double(count - 1);
    };
    const double total = kahan_sum([&](std::uint64_t k) { return weight(z_of(k)); }, count);
    double err = 0.0, cum = 0.0, comp = 0.0;
    for (std::uint64_t k = 0; k < count; ++k) {
        const double z = z_of(k);
        const double f = normal_cdf(z);
        err = std::max(err, std::abs(cum - f));
        const double y = weight(z) / total - comp;
        const double t = cum + y;
        comp = (t - cum) - y;
        cum = t;
        err = std::max(err, std::abs(cum - f));
    }
    return err;
}

}  // namespace

Figure2 figure_2a() { return distance_sweep(true); }
Figure2 figure_2b() { return distance_sweep(false); }

FigureSeries figure_3(int order, int max_qubits) {
    if (max_qubits < 2 || max_qubits > 30)
        throw validation_error("max_qubits must be in [2, 30]");
    const PiecewisePolynomial f = irwin_hall_pieces(IrwinHallSpec(order));
    const StandardizedVariable sv(order);
    FigureSeries series;
    series.columns = {"qubits", "irwin_hall_error", "normal_error"};
    for (int nq = 2; nq <= max_qubits; ++nq) {
        const double e_ih = discretized_cdf_error(
            [&](double z) { return std::max(f(sv.x_of_z(z)), 0.0); }, nq);
        const double e_norm =
            discretized_cdf_error([](double z) { return normal_pdf(z); }, nq);
        series.rows.push_back({double(nq), e_ih, e_norm});
    }
    return series;
}

DiscreteDistribution state_distribution(const MPS& state, const Grid& grid) {
    const Eigen::VectorXd amps = to_statevector(state);
    DiscreteDistribution d;
    d.x.resize(amps.size());
    d.p.resize(amps.size());
    double total = 0.0;
    for (Eigen::Index k = 0; k < amps.size(); ++k) {
        d.x[k] = grid.x(std::uint64_t(k));
        d.p[k] = amps(k) * amps(k);
        total += d.p[k];
    }
    for (auto& p : d.p) p /= total;  // absorbs float-level norm drift
    return d;
}

std::function<double(double)> sampled_normal_cdf(int order) {
    const double mu = order / 2.0;
    const double sigma = std::sqrt(order / 24.0);
    return [mu, sigma](double x) { return normal_cdf((x - mu) / sigma); };
}

FigureSeries figure_4a(int n_qubits, int max_depth) {
    FigureSeries series;
    series.columns = {"depth", "infidelity_n8", "ks_n8", "infidelity_n16", "ks_n16"};
    series.rows.assign(max_depth, {});
    for (int d = 0; d < max_depth; ++d) series.rows[d] = {double(d + 1), 0, 0, 0, 0};
    int col = 1;
    for (int order : {8, 16}) {
        const IrwinHallEncoding enc = encode_irwin_hall(order, n_qubits);
        const DiscreteDistribution exact = state_distribution(enc.state, enc.grid);
        auto [circuit, infids] = extract_circuit(enc.state, max_depth);
        for (int d = 1; d <= max_depth; ++d) {
            Circuit prefix;
            prefix.layers.assign(circuit.layers.begin(), circuit.layers.begin() + d);
            const MPS prepared = simulate_mps(prefix);
            const DiscreteDistribution dist = state_distribution(prepared, enc.grid);
            series.rows[d - 1][col] = infids[d - 1];
            series.rows[d - 1][col + 1] = ks_between(dist, exact);
        }
        col += 2;
    }
    return series;
}

Figure4b figure_4b(int n_qubits, int max_depth) {
    const std::vector<int> orders = {8, 16, 32, 64};
    Figure4b fig;
    fig.curves.columns = {"depth"};
    fig.floors.columns = {"n", "ks_floor"};
    fig.curves.rows.assign(max_depth, {});
    for (int d = 0; d < max_depth; ++d) {
        fig.curves.rows[d].assign(orders.size() + 1, 0.0);
        fig.curves.rows[d][0] = d + 1;
    }
    for (std::size_t oi = 0; oi < orders.size(); ++oi) {
        const int order = orders[oi];
        fig.curves.columns.push_back("ks_n" + std::to_string(order));
        const auto target_cdf = sampled_normal_cdf(order);
        const IrwinHallEncoding enc = encode_irwin_hall(order, n_qubits);
        const DiscreteDistribution exact = state_distribution(enc.state, enc.grid);
        fig.floors.rows.push_back({double(order), ks_statistic(exact, target_cdf)});
        auto [circuit, infids] = extract_circuit(enc.state, max_depth);
        for (int d = 1; d <= max_depth; ++d) {
            Circuit prefix;
            prefix.layers.assign(circuit.layers.begin(), circuit.layers.begin() + d);
            const DiscreteDistribution dist =
                state_distribution(simulate_mps(prefix), enc.grid);
            fig.curves.rows[d - 1][oi + 1] = ks_statistic(dist, target_cdf);
        }
    }
    return fig;
}

}  // namespace mpsprep
