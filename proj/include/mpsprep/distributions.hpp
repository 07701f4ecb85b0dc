#pragma once

#include <memory>
#include <vector>

#include "mpsprep/errors.hpp"

namespace mpsprep {

// Hard cap on the distribution order; evaluation is O(n^2) per point and the
// piece-coefficient construction is O(n^3) big-integer work, both fine well
// beyond this, but callers get a clean error instead of a surprise stall.
inline constexpr int kMaxOrder = 1024;

// Order of the sum-of-uniforms distribution: X_n = U_1 + ... + U_n, U_i ~ U(0,1).
struct IrwinHallSpec {
    int n;
    explicit IrwinHallSpec(int order) : n(order) {
        if (n < 1) throw validation_error("order must be >= 1");
        if (n > kMaxOrder) throw validation_error("order exceeds supported maximum 1024");
    }
};

// Opaque exact-arithmetic evaluation tables attached by irwin_hall_pieces();
// holds correctly-rounded piece expansions about both piece edges plus exact
// antiderivative data.  Defined in src/, consumers outside the library see
// only this forward declaration.
struct PieceEvalTables;

// A function on [a,b] split into 2^k equal pieces, piece j owning
// [a + j*w, a + (j+1)*w) with w = (b-a)/2^k (the last piece is closed).
// `pieces[j]` are monomial coefficients in the *global* variable x,
// lowest order first.  Evaluation prefers the attached exact tables when
// present: global-basis Horner loses all relative accuracy for high-order
// distribution pieces, while the nearest-edge local expansions stay
// accurate into the tails.
struct PiecewisePolynomial {
    double a = 0.0, b = 1.0;
    std::vector<std::vector<double>> pieces;
    std::shared_ptr<const PieceEvalTables> tables;

    PiecewisePolynomial() = default;
    PiecewisePolynomial(double lo, double hi, std::vector<std::vector<double>> coeffs);

    int support_bits() const;  // k with pieces.size() == 2^k
    int degree() const;        // max per-piece degree p
    double piece_width() const { return (b - a) / static_cast<double>(pieces.size()); }
    int piece_index(double x) const;  // left-closed pieces, last piece closed

    double operator()(double x) const;  // 0 outside [a,b]
    double cdf(double x) const;         // antiderivative-based, 0 below a, total mass at b
};

// Density of X_n.  Exactly 0 outside (0, n).  Evaluated with the B-spline
// two-term recurrence, which is numerically stable at every order (the
// alternating closed-form sum is not; see irwin_hall_pdf_signsum).
double irwin_hall_pdf(const IrwinHallSpec& spec, double x);

// The closed-form alternating sum  1/(2(n-1)!) sum_k (-1)^k C(n,k) sgn(x-k) (x-k)^{n-1},
// evaluated in log space with sign tracking and compensated accumulation.
// Kept as an independent cross-check; catastrophically cancels for n beyond
// roughly 12, so production code never calls it.
double irwin_hall_pdf_signsum(const IrwinHallSpec& spec, double x);

// Exact degree-(n-1) piece expansion of the density on [j, j+1), j = 0..n-1.
// Coefficients are produced in exact integer arithmetic; the returned value
// carries evaluation tables so that operator() matches irwin_hall_pdf to
// 1e-9 relative accuracy wherever the density exceeds 1e-40 of its peak
// (n <= 64 verified).  Deeper into the tails the correctly-rounded expansion
// coefficients still cancel, and only an absolute guarantee of 1e-40 times
// the peak survives; the outermost pieces become exact again.
PiecewisePolynomial irwin_hall_pieces(const IrwinHallSpec& spec);

// Cumulative distribution of X_n, from the exact piecewise antiderivative
// (no quadrature).  F(0) = 0 and F(n) = 1 exactly.
double irwin_hall_cdf(const IrwinHallSpec& spec, double x);

// Affine standardization Z_n = sqrt(12/n) (X_n - n/2): zero mean, unit
// variance, support [-sqrt(3n), sqrt(3n)].
struct StandardizedVariable {
    int n;
    explicit StandardizedVariable(int order) : n(order) {
        if (n < 1) throw validation_error("order must be >= 1");
    }
    double sigma_x() const;             // sqrt(n/12)
    double x_of_z(double z) const;      // n/2 + z * sigma_x
    double z_of_x(double x) const;
};

// Density of Z_n: sqrt(n/12) * f_X(n/2 + z sqrt(n/12)).
double standardized_pdf(int n, double z);
double standardized_cdf(int n, double z);

// Independent oracle: density of Z_n through the inverse Fourier transform of
// its characteristic function (sin u / u)^n with u = sqrt(3) t / sqrt(n),
// integrated by composite Simpson on [0, t_max].  Defaults hold the
// quadrature error well below 1e-6 for n in {4, 8, 16}, |z| <= 3.
double cf_oracle_pdf(int n, double z, double t_max = 40.0, int steps = 200000);

double normal_pdf(double z);
double normal_cdf(double z);  // via erfc, absolute error far below 1e-12

}  // namespace mpsprep
