#include "mpsprep/distributions.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "ih_exact.hpp"

namespace mpsprep {
namespace detail {

mpz_class binom(unsigned long n, unsigned long k) {
    mpz_class r;
    mpz_bin_uiui(r.get_mpz_t(), n, k);
    return r;
}

ZPoly shift_int(const ZPoly& p, long delta) {
    const std::size_t d = p.size();
    ZPoly q(d, mpz_class(0));
    mpz_class dpow, term;
    for (std::size_t m = 0; m < d; ++m) {
        dpow = 1;
        for (std::size_t i = m; i < d; ++i) {
            term = p[i] * binom(i, m) * dpow;
            q[m] += term;
            dpow *= delta;
        }
    }
    return q;
}

std::vector<mpq_class> shift_rat(const std::vector<mpq_class>& p, const mpq_class& delta) {
    const std::size_t d = p.size();
    std::vector<mpq_class> q(d, mpq_class(0));
    for (std::size_t m = 0; m < d; ++m) {
        mpq_class dpow = 1;
        for (std::size_t i = m; i < d; ++i) {
            q[m] += p[i] * mpq_class(binom(i, m)) * dpow;
            dpow *= delta;
        }
    }
    return q;
}

double to_double(const mpz_class& num, const mpz_class& den) {
    return to_double(mpq_class(num) / mpq_class(den));
}

double to_double(const mpq_class& q) {
    // mpq_get_d truncates toward zero; one scaled refinement step recovers
    // round-to-nearest in all practical cases.
    double d = q.get_d();
    mpq_class r = q - d;
    return d + r.get_d();
}

ExactPieces build_exact_pieces(int n) {
    ExactPieces out;
    out.n = n;
    mpz_fac_ui(out.denom.get_mpz_t(), static_cast<unsigned long>(n - 1));

    // pow[t][e] = t^e for the inner alternating sums.
    std::vector<ZPoly> pw(n);
    for (int t = 0; t < n; ++t) {
        pw[t].resize(n);
        pw[t][0] = 1;
        for (int e = 1; e < n; ++e) pw[t][e] = pw[t][e - 1] * t;
    }
    std::vector<mpz_class> cnk(n + 1);
    for (int k = 0; k <= n; ++k) cnk[k] = binom(n, k);

    out.left.resize(n);
    out.right.resize(n);
    out.global.resize(n);
    for (int j = 0; j < n; ++j) {
        ZPoly c(n, mpz_class(0));
        for (int m = 0; m < n; ++m) {
            mpz_class s = 0;
            const int e = n - 1 - m;
            for (int k = 0; k <= j; ++k) {
                if (k & 1)
                    s -= cnk[k] * pw[j - k][e];
                else
                    s += cnk[k] * pw[j - k][e];
            }
            c[m] = binom(n - 1, m) * s;
        }
        out.left[j] = c;
        out.right[j] = shift_int(c, 1);
        out.global[j] = shift_int(c, -j);
    }

    // Antiderivatives: integrate c_m u^m term by term over the enlarged
    // denominator denom * lcm(1..n), then accumulate exact knot values.
    mpz_class L = 1;
    for (int m = 1; m <= n; ++m) mpz_lcm_ui(L.get_mpz_t(), L.get_mpz_t(), m);
    out.cdf_denom = out.denom * L;
    out.cdf_left.resize(n);
    out.cdf_right.resize(n);
    out.knot_cdf.assign(n + 1, mpz_class(0));
    for (int j = 0; j < n; ++j) {
        ZPoly A(n + 1, mpz_class(0));
        for (int m = 0; m < n; ++m) A[m + 1] = out.left[j][m] * (L / (m + 1));
        out.cdf_left[j] = A;
        mpz_class at1 = 0;
        for (int m = 1; m <= n; ++m) at1 += A[m];
        out.knot_cdf[j + 1] = out.knot_cdf[j] + at1;
        ZPoly As = shift_int(A, 1);
        As[0] = 0;  // drop A(1): right-sided increment is relative to knot j+1
        out.cdf_right[j] = As;
    }
    return out;
}

namespace {

std::vector<double> rounded(const ZPoly& p, const mpz_class& den) {
    std::vector<double> out(p.size());
    for (std::size_t i = 0; i < p.size(); ++i) out[i] = to_double(p[i], den);
    return out;
}

double horner(const std::vector<double>& c, double u) {
    double acc = 0.0;
    for (std::size_t i = c.size(); i-- > 0;) acc = acc * u + c[i];
    return acc;
}

}  // namespace
}  // namespace detail

using detail::horner;

PiecewisePolynomial::PiecewisePolynomial(double lo, double hi,
                                         std::vector<std::vector<double>> coeffs)
    : a(lo), b(hi), pieces(std::move(coeffs)) {
    if (!(b > a)) throw validation_error("interval must satisfy b > a");
    if (pieces.empty()) throw validation_error("need at least one piece");
    const auto count = pieces.size();
    if ((count & (count - 1)) != 0)
        throw validation_error("piece count must be a power of two");
    for (const auto& p : pieces)
        if (p.empty()) throw validation_error("empty coefficient list");
}

int PiecewisePolynomial::support_bits() const {
    int k = 0;
    while ((std::size_t{1} << k) < pieces.size()) ++k;
    return k;
}

int PiecewisePolynomial::degree() const {
    std::size_t d = 1;
    for (const auto& p : pieces) d = std::max(d, p.size());
    return static_cast<int>(d) - 1;
}

int PiecewisePolynomial::piece_index(double x) const {
    const double w = piece_width();
    auto j = static_cast<long long>(std::floor((x - a) / w));
    j = std::clamp<long long>(j, 0, static_cast<long long>(pieces.size()) - 1);
    return static_cast<int>(j);
}

double PiecewisePolynomial::operator()(double x) const {
    if (x < a || x > b) return 0.0;
    const int j = piece_index(x);
    if (tables) {
        const double uL = x - (a + j * piece_width());
        const double uR = x - (a + (j + 1) * piece_width());
        return (uL <= -uR) ? horner(tables->left[j], uL) : horner(tables->right[j], uR);
    }
    return horner(pieces[j], x);
}

double PiecewisePolynomial::cdf(double x) const {
    if (x <= a) return 0.0;
    const double w = piece_width();
    const int j = (x >= b) ? static_cast<int>(pieces.size()) - 1 : piece_index(x);
    const double xc = std::min(x, b);
    if (tables) {
        const double uL = xc - (a + j * w);
        const double uR = xc - (a + (j + 1) * w);
        if (uL <= -uR) return tables->knot_cdf[j] + horner(tables->cdf_left[j], uL);
        return tables->knot_cdf[j + 1] + horner(tables->cdf_right[j], uR);
    }
    // Generic path: integrate the global-basis antiderivative piece by piece.
    auto anti = [](const std::vector<double>& c, double x0, double x1) {
        double p0 = 0.0, p1 = 0.0;
        double pw0 = x0, pw1 = x1;
        for (std::size_t m = 0; m < c.size(); ++m) {
            p0 += c[m] * pw0 / (m + 1);
            p1 += c[m] * pw1 / (m + 1);
            pw0 *= x0;
            pw1 *= x1;
        }
        return p1 - p0;
    };
    double total = 0.0;
    for (int i = 0; i < j; ++i) total += anti(pieces[i], a + i * w, a + (i + 1) * w);
    total += anti(pieces[j], a + j * w, xc);
    return total;
}

double irwin_hall_pdf(const IrwinHallSpec& spec, double x) {
    const int n = spec.n;
    if (x <= 0.0 || x >= n) return 0.0;
    // Two-term recurrence for the order-n uniform B-spline on knots 0..n.
    std::vector<double> v(n);
    for (int s = 0; s < n; ++s) v[s] = (x - s >= 0.0 && x - s < 1.0) ? 1.0 : 0.0;
    for (int k = 2; k <= n; ++k) {
        for (int s = 0; s <= n - k; ++s) {
            const double t = x - s;
            v[s] = (t * v[s] + (k - t) * v[s + 1]) / (k - 1);
        }
    }
    return v[0];
}

double irwin_hall_pdf_signsum(const IrwinHallSpec& spec, double x) {
    const int n = spec.n;
    if (x <= 0.0 || x >= n) return 0.0;
    // 1/(2(n-1)!) sum_k (-1)^k C(n,k) sgn(x-k) (x-k)^{n-1}, accumulated with
    // Neumaier compensation; log-space magnitudes keep the factor ratios sane.
    double sum = 0.0, comp = 0.0;
    for (int k = 0; k <= n; ++k) {
        const double d = x - k;
        if (d == 0.0) continue;
        const double logmag = std::lgamma(n + 1) - std::lgamma(k + 1) - std::lgamma(n - k + 1)
                              + (n - 1) * std::log(std::abs(d));
        double term = std::exp(logmag);
        if (k & 1) term = -term;
        if (d < 0.0 && (n & 1) == 0) term = -term;  // sgn(d) * d^{n-1} parity
        if (d < 0.0) term = -term;                  // sgn factor itself
        const double t = sum + term;
        if (std::abs(sum) >= std::abs(term))
            comp += (sum - t) + term;
        else
            comp += (term - t) + sum;
        sum = t;
    }
    return 0.5 * (sum + comp) / std::exp(std::lgamma(n));
}

PiecewisePolynomial irwin_hall_pieces(const IrwinHallSpec& spec) {
    const int n = spec.n;
    auto exact = detail::build_exact_pieces(n);

    auto tab = std::make_shared<PieceEvalTables>();
    tab->n = n;
    tab->left.reserve(n);
    tab->right.reserve(n);
    tab->cdf_left.reserve(n);
    tab->cdf_right.reserve(n);
    std::vector<std::vector<double>> global;
    global.reserve(n);
    for (int j = 0; j < n; ++j) {
        tab->left.push_back(detail::rounded(exact.left[j], exact.denom));
        tab->right.push_back(detail::rounded(exact.right[j], exact.denom));
        tab->cdf_left.push_back(detail::rounded(exact.cdf_left[j], exact.cdf_denom));
        tab->cdf_right.push_back(detail::rounded(exact.cdf_right[j], exact.cdf_denom));
        global.push_back(detail::rounded(exact.global[j], exact.denom));
    }
    tab->knot_cdf.resize(n + 1);
    for (int j = 0; j <= n; ++j)
        tab->knot_cdf[j] = detail::to_double(exact.knot_cdf[j], exact.cdf_denom);
    tab->exact = std::move(exact);

    // n=1 is a single piece but grids need >= 1 piece anyway; piece counts for
    // the dyadic encoder must be powers of two, which callers check.  Here we
    // only require the count to be representable; pad to the next power of
    // two is deliberately NOT done -- the pieces are the n unit intervals.
    if ((n & (n - 1)) != 0 && n != 1) {
        // Non-power-of-two orders still get exact pieces for evaluation; the
        // PiecewisePolynomial constructor insists on 2^k pieces, so bypass it.
        PiecewisePolynomial out;
        out.a = 0.0;
        out.b = n;
        out.pieces = std::move(global);
        out.tables = std::move(tab);
        return out;
    }
    PiecewisePolynomial out(0.0, static_cast<double>(n), std::move(global));
    out.tables = std::move(tab);
    return out;
}

double irwin_hall_cdf(const IrwinHallSpec& spec, double x) {
    const int n = spec.n;
    if (x <= 0.0) return 0.0;
    if (x >= n) return 1.0;
    static thread_local int cached_n = -1;
    static thread_local PiecewisePolynomial cached;
    if (cached_n != n) {
        cached = irwin_hall_pieces(spec);
        cached_n = n;
    }
    return cached.cdf(x);
}

double StandardizedVariable::sigma_x() const { return std::sqrt(n / 12.0); }
double StandardizedVariable::x_of_z(double z) const { return n / 2.0 + z * sigma_x(); }
double StandardizedVariable::z_of_x(double x) const { return (x - n / 2.0) / sigma_x(); }

double standardized_pdf(int n, double z) {
    StandardizedVariable v(n);
    return v.sigma_x() * irwin_hall_pdf(IrwinHallSpec(n), v.x_of_z(z));
}

double standardized_cdf(int n, double z) {
    StandardizedVariable v(n);
    return irwin_hall_cdf(IrwinHallSpec(n), v.x_of_z(z));
}

namespace {

// sign-exact integer power of a double
double ipow(double base, int e) {
    double acc = 1.0, b = base;
    for (int k = e; k > 0; k >>= 1) {
        if (k & 1) acc *= b;
        b *= b;
    }
    return acc;
}

}  // namespace

double cf_oracle_pdf(int n, double z, double t_max, int steps) {
    if (n < 1) throw validation_error("order must be >= 1");
    if (!(t_max > 0.0)) throw validation_error("t_max must be positive");
    if (steps < 100) throw validation_error("steps must be >= 100");
    if (steps % 2 != 0) ++steps;
    const double c = std::sqrt(3.0 / n);
    auto integrand = [&](double t) {
        const double u = c * t;
        double sinc;
        if (std::abs(u) < 1e-8) {
            const double u2 = u * u;
            sinc = 1.0 - u2 / 6.0 + u2 * u2 / 120.0;
        } else {
            sinc = std::sin(u) / u;
        }
        return std::cos(t * z) * ipow(sinc, n);
    };
    // Composite Simpson on [0, t_max]; the density is (1/pi) * integral.
    const double h = t_max / steps;
    double sum = integrand(0.0) + integrand(t_max);
    for (int i = 1; i < steps; ++i) sum += integrand(i * h) * ((i & 1) ? 4.0 : 2.0);
    return sum * h / 3.0 / M_PI;
}

double normal_pdf(double z) { return std::exp(-0.5 * z * z) / std::sqrt(2.0 * M_PI); }

double normal_cdf(double z) { return 0.5 * std::erfc(-z / std::sqrt(2.0)); }

}  // namespace mpsprep
