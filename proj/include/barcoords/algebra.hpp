#pragma once

// The ring of algebraic functions on barcodes: multisymmetric power sums,
// the zero-bar-insensitive subring and its free generators, monomial and
// orbit-sum bases, Hilbert series, and numerical verification oracles.

#include <cstdint>
#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

namespace barcoords {

// A single bar [x, y], x <= y, both finite. Infinite deaths are capped
// before entering this module (see persistence::cap_barcode).
struct Interval {
    double x = 0.0;  // birth / left endpoint
    double y = 0.0;  // death / right endpoint
    bool operator==(const Interval&) const = default;
};

// A barcode is a finite multiset of intervals; order carries no meaning.
using Barcode = std::vector<Interval>;

struct XiEta {
    double xi = 0.0;   // x + y
    double eta = 0.0;  // y - x, nonnegative for valid intervals
};

XiEta to_xi_eta(const Interval& iv);

// Index (a, b) of the power sum sum_i x_i^a y_i^b, (a,b) != (0,0).
struct PowerSumIndex {
    int a = 0;
    int b = 0;
};

// Index (a, b) denoting the free generator p_{a+1,b} - p_{a,b+1}; its
// degree is a + b + 1.
struct GeneratorIndex {
    int a = 0;
    int b = 0;
    int degree() const { return a + b + 1; }
};

// x^e with integer e >= 0; 0^0 == 1.
double ipow(double x, int e);

// sum_i x_i^a y_i^b, empty barcode -> 0.
double eval_power_sum(const Barcode& bc, PowerSumIndex idx);

// p_{a+1,b} - p_{a,b+1}, accumulated per interval as x^a y^b (x - y) so
// that a zero-length bar contributes an exact floating-point zero and
// zero-bar invariance holds with no rounding at all.
double eval_generator(const Barcode& bc, GeneratorIndex g);

// Exponent pair of a basis monomial in (xi, eta) coordinates; the
// zero-bar-insensitive subring is spanned by monomials whose pairs all
// satisfy a > 0 implies b > 0.
struct ExponentPair {
    int a = 0;  // xi exponent
    int b = 0;  // eta exponent
    int weight() const { return a + b; }
    bool operator==(const ExponentPair&) const = default;
};

bool allowed_pair(ExponentPair p);

// Multiset of nonzero allowed exponent pairs, kept in canonical order:
// sorted by (a + b, a) descending.
using BasisMonomial = std::vector<ExponentPair>;

int monomial_degree(const BasisMonomial& m);

// Canonical comparator on exponent pairs: (a + b, a) descending.
bool canonical_pair_greater(ExponentPair p, ExponentPair q);

// Alternative total order on pairs following the enumeration
// (1,0),(1,1),(2,0),(1,2),(2,1),(3,0),... of the mirrored (z, y)
// convention; exposed for fidelity tests only. phi_position is 1-based
// and takes the pair in (z, y) exponents (z exponent >= 1).
int phi_position(int z_exp, int y_exp);
bool phi_order_less(ExponentPair p, ExponentPair q);

// Orbit sum of the monomial m evaluated at the (xi, eta) images of bc:
// one term per distinct monomial in the symmetric-group orbit, i.e. one
// term per matching of the exponent multiset onto distinct intervals.
// Returns 0 when m has more pairs than bc has intervals.
double eval_orbit_sum(const Barcode& bc, const BasisMonomial& m);

// All basis monomials of the given total degree, deterministically
// ordered (pairs canonical within each multiset, multisets
// lexicographic). Degree 0 yields the single empty monomial.
std::vector<BasisMonomial> basis_monomials(int degree);

// Coefficients of prod_{k>=1} (1 - t^k)^{-k} truncated at max_degree;
// coeffs[k] counts basis monomials of degree k.
struct HilbertSeries {
    std::vector<std::int64_t> coeffs;
};

HilbertSeries hilbert_coefficients(int max_degree);

// The k generators of degree k: all (a, b) with a + b = k - 1, a
// descending.
std::vector<GeneratorIndex> generators_in_degree(int k);
int count_generators_in_degree(int k);

// Sparse polynomial in the power sums: sum of coeff * prod p_{a_j,b_j}.
struct MultisymPoly {
    struct Term {
        double coeff = 0.0;
        std::vector<PowerSumIndex> factors;
    };
    std::vector<Term> terms;

    double eval(const Barcode& bc) const;

    static MultisymPoly power_sum(PowerSumIndex idx);
    static MultisymPoly generator(GeneratorIndex g);
    static MultisymPoly constant(double c);
};

using BarcodeFn = std::function<double(const Barcode&)>;

// Result of the diagonal derivation check: for f in the insensitive
// subring, the directional derivative along (d/dx_i + d/dy_i) must
// vanish wherever x_i = y_i.
struct DerivationReport {
    bool ok = true;
    int failing_slot = -1;
    Barcode failing_point;
    double residual = 0.0;
};

DerivationReport check_derivation_condition(const BarcodeFn& f, int n, int trials,
                                            double h, double tol,
                                            std::uint64_t seed = 0x9e3779b9);

// Finite-difference Jacobian rank of all generators of degree <=
// max_degree at a generic barcode of n intervals. Free generation
// predicts rank == number of generators.
struct RankReport {
    int num_generators = 0;
    int rank = 0;
    std::vector<double> singular_values;
};

// Throws std::invalid_argument when 2n < number of generators.
RankReport check_free_generation(int max_degree, int n, double h = 1e-5,
                                 double rel_tol = 1e-8,
                                 std::uint64_t seed = 0x51ce5ea7);

}  // namespace barcoords
