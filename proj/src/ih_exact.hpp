#pragma once

// Exact integer/rational machinery behind irwin_hall_pieces and the
// piecewise encoder.  Everything here is library-internal: GMP types must
// not leak into public headers.
//
// The density of the order-n sum of uniforms is, on piece j = [j, j+1),
//   p_j(u) = sum_m c_m^(j) u^m,   u = x - j,
//   c_m^(j) = C(n-1,m)/(n-1)! * sum_{k<=j} (-1)^k C(n,k) (j-k)^(n-1-m),
// which we keep as exact integers over the common denominator (n-1)!.
// Double-precision coefficient sets are derived from these about both piece
// edges: expansions about the nearest edge evaluate with full relative
// accuracy even where the density underflows toward 1e-300, because the
// lowest surviving term dominates there instead of cancelling.

#include <gmpxx.h>

#include <cstdint>
#include <vector>

namespace mpsprep::detail {

using ZPoly = std::vector<mpz_class>;  // coefficients, lowest order first

mpz_class binom(unsigned long n, unsigned long k);

// q(v) = p(delta + v) with integer delta; exact.
ZPoly shift_int(const ZPoly& p, long delta);

// q(v) = p(delta + v) for rational delta; exact.  Used for the region-origin
// shift in the encoder, where delta = ell * (b-a) / (2^k (2^N - 1)).
std::vector<mpq_class> shift_rat(const std::vector<mpq_class>& p, const mpq_class& delta);

struct ExactPieces {
    int n = 0;
    mpz_class denom;                 // (n-1)!
    std::vector<ZPoly> left;         // piece j about u = x - j
    std::vector<ZPoly> global;       // piece j about x = 0 (documented view)
    std::vector<ZPoly> right;        // piece j about v = x - (j+1), v in [-1, 0]
    // Antiderivative data over denominator `denom * lcm(1..n)`:
    mpz_class cdf_denom;
    std::vector<ZPoly> cdf_left;     // integral from knot j, poly in u (constant term 0)
    std::vector<ZPoly> cdf_right;    // integral from knot j+1, poly in v (constant term 0)
    std::vector<mpz_class> knot_cdf; // F(j) * cdf_denom, j = 0..n
};

ExactPieces build_exact_pieces(int n);

double to_double(const mpq_class& q);
double to_double(const mpz_class& num, const mpz_class& den);

}  // namespace mpsprep::detail

namespace mpsprep {

// Definition of the forward-declared public handle.  Doubles are the
// correctly-rounded images of the exact coefficients; `exact` survives for
// consumers that need to re-expand about a different (rational) origin.
struct PieceEvalTables {
    int n = 0;
    std::vector<std::vector<double>> left;       // about u = x - j
    std::vector<std::vector<double>> right;      // about v = x - (j+1)
    std::vector<std::vector<double>> cdf_left;   // cumulative increment from knot j
    std::vector<std::vector<double>> cdf_right;  // (negative) increment from knot j+1
    std::vector<double> knot_cdf;                // F at knots 0..n
    detail::ExactPieces exact;
};

}  // namespace mpsprep
