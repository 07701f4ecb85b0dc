#include "mpsprep/stats.hpp"

#include <algorithm>
#include <cmath>

#include "mpsprep/distributions.hpp"

namespace mpsprep {

void DiscreteDistribution::validate() const {
    if (x.empty() || x.size() != p.size())
        throw validation_error("support and probabilities must be nonempty and equal-length");
    double sum = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        if (i > 0 && !(x[i] > x[i - 1]))
            throw validation_error("support must be strictly ascending");
        if (p[i] < 0.0) throw validation_error("probabilities must be nonnegative");
        sum += p[i];
    }
    if (std::abs(sum - 1.0) > 1e-9) throw validation_error("probabilities must sum to 1");
}

std::vector<double> DiscreteDistribution::cumulative() const {
    std::vector<double> c(p.size());
    double acc = 0.0;
    for (std::size_t i = 0; i < p.size(); ++i) {
        acc += p[i];
        c[i] = acc;
    }
    return c;
}

double ks_statistic(std::vector<double> samples,
                    const std::function<double(double)>& target_cdf) {
    if (samples.empty()) throw validation_error("need at least one sample");
    std::sort(samples.begin(), samples.end());
    const double s = double(samples.size());
    double d = 0.0;
    std::size_t i = 0;
    while (i < samples.size()) {
        std::size_t j = i;
        while (j < samples.size() && samples[j] == samples[i]) ++j;
        const double f = target_cdf(samples[i]);
        d = std::max(d, std::abs(double(j) / s - f));
        d = std::max(d, std::abs(double(i) / s - f));
        i = j;
    }
    return d;
}

double ks_statistic(const DiscreteDistribution& dist,
                    const std::function<double(double)>& target_cdf) {
    dist.validate();
    double d = 0.0, below = 0.0;
    const auto cum = dist.cumulative();
    for (std::size_t k = 0; k < dist.x.size(); ++k) {
        const double f = target_cdf(dist.x[k]);
        d = std::max(d, std::abs(cum[k] - f));
        d = std::max(d, std::abs(below - f));
        below = cum[k];
    }
    return d;
}

double ks_between(const DiscreteDistribution& a, const DiscreteDistribution& b) {
    a.validate();
    b.validate();
    if (a.x.size() != b.x.size()) throw validation_error("supports differ in size");
    for (std::size_t k = 0; k < a.x.size(); ++k)
        if (std::abs(a.x[k] - b.x[k]) > 1e-9 * std::max(1.0, std::abs(a.x[k])))
            throw validation_error("supports differ");
    const auto ca = a.cumulative(), cb = b.cumulative();
    double d = 0.0;
    for (std::size_t k = 0; k < ca.size(); ++k) d = std::max(d, std::abs(ca[k] - cb[k]));
    return d;
}

double ks_threshold(double alpha, long long samples) {
    if (!(alpha > 0.0 && alpha < 1.0)) throw validation_error("alpha must lie in (0, 1)");
    if (samples < 1) throw validation_error("sample count must be positive");
    return std::sqrt(std::log(2.0 / alpha) / double(samples));
}

DistanceReport pdf_cdf_distances(int order, GridRule rule) {
    if (order < 1) throw validation_error("order must be >= 1");
    const PiecewisePolynomial f = irwin_hall_pieces(IrwinHallSpec(order));
    const StandardizedVariable sv(order);
    const double zmax = std::sqrt(3.0 * order);
    const int npts = 100 * order + 1;
    const double dz = 2.0 * zmax / (npts - 1);

    DistanceReport rep;
    rep.order = order;
    rep.rule = rule;
    rep.grid_points = npts;
    double l1p = 0.0, l1c = 0.0;
    for (int i = 0; i < npts; ++i) {
        const double z = -zmax + i * dz;
        const double x = sv.x_of_z(z);
        double dp, dc;
        if (rule == GridRule::standardized_z) {
            dp = std::abs(sv.sigma_x() * f(x) - normal_pdf(z));
            dc = std::abs(f.cdf(x) - normal_cdf(z));
        } else {
            dp = std::abs(f(x) - normal_pdf(z) / sv.sigma_x());
            dc = std::abs(f.cdf(x) - normal_cdf(z));
        }
        const double w = (i == 0 || i == npts - 1) ? 0.5 : 1.0;  // trapezoid ends
        rep.sup_pdf = std::max(rep.sup_pdf, dp);
        rep.sup_cdf = std::max(rep.sup_cdf, dc);
        l1p += w * dp;
        l1c += w * dc;
    }
    const double spacing = (rule == GridRule::standardized_z) ? dz : dz * sv.sigma_x();
    rep.l1_pdf = l1p * spacing;
    rep.l1_cdf = l1c * spacing;
    rep.ks = rep.sup_cdf;
    return rep;
}

FitResult loglog_slope(const std::vector<double>& xs, const std::vector<double>& ys) {
    if (xs.size() != ys.size()) throw validation_error("coordinate lists differ in length");
    if (xs.size() < 3) throw validation_error("need at least three points to fit");
    const int n = int(xs.size());
    double sx = 0, sy = 0, sxx = 0, sxy = 0, syy = 0;
    for (int i = 0; i < n; ++i) {
        if (!(xs[i] > 0.0) || !(ys[i] > 0.0))
            throw validation_error("log-log fit needs positive data");
        const double lx = std::log(xs[i]), ly = std::log(ys[i]);
        sx += lx;
        sy += ly;
        sxx += lx * lx;
        sxy += lx * ly;
        syy += ly * ly;
    }
    const double vxx = sxx - sx * sx / n;
    const double vxy = sxy - sx * sy / n;
    const double vyy = syy - sy * sy / n;
    // rounding can leave a ~1e-16 residual on exactly-repeated abscissae
    if (!(vxx > 1e-12 * std::max(sxx, 1e-300)))
        throw validation_error("abscissae are degenerate");
    FitResult fit;
    fit.points = n;
    fit.slope = vxy / vxx;
    fit.intercept = (sy - fit.slope * sx) / n;
    fit.r2 = (vyy > 0.0) ? (vxy * vxy) / (vxx * vyy) : 1.0;
    return fit;
}

}  // namespace mpsprep
