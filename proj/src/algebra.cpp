#include "barcoords/algebra.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <random>

namespace barcoords {

XiEta to_xi_eta(const Interval& iv) { return {iv.x + iv.y, iv.y - iv.x}; }

double ipow(double x, int e) {
    double r = 1.0;
    for (int i = 0; i < e; ++i) r *= x;
    return r;
}

double eval_power_sum(const Barcode& bc, PowerSumIndex idx) {
    double s = 0.0;
    for (const Interval& iv : bc) s += ipow(iv.x, idx.a) * ipow(iv.y, idx.b);
    return s;
}

double eval_generator(const Barcode& bc, GeneratorIndex g) {
    double s = 0.0;
    for (const Interval& iv : bc)
        s += ipow(iv.x, g.a) * ipow(iv.y, g.b) * (iv.x - iv.y);
    return s;
}

bool allowed_pair(ExponentPair p) {
    if (p.a == 0 && p.b == 0) return false;
    return p.a == 0 || p.b > 0;  // a > 0 implies b > 0
}

int monomial_degree(const BasisMonomial& m) {
    int d = 0;
    for (ExponentPair p : m) d += p.weight();
    return d;
}

bool canonical_pair_greater(ExponentPair p, ExponentPair q) {
    if (p.weight() != q.weight()) return p.weight() > q.weight();
    return p.a > q.a;
}

int phi_position(int z_exp, int y_exp) {
    int d = z_exp + y_exp;
    return d * (d - 1) / 2 + z_exp;
}

// The (xi, eta) pair (a, b) mirrors to the (z, y) pair (b, a).
bool phi_order_less(ExponentPair p, ExponentPair q) {
    return phi_position(p.b, p.a) < phi_position(q.b, q.a);
}

double eval_orbit_sum(const Barcode& bc, const BasisMonomial& m) {
    const int n = static_cast<int>(bc.size());
    const int l = static_cast<int>(m.size());
    if (l > n) return 0.0;
    if (l == 0) return 1.0;

    std::vector<XiEta> pts(bc.size());
    std::transform(bc.begin(), bc.end(), pts.begin(), to_xi_eta);

    // Sorted exponent list; next_permutation walks its distinct
    // arrangements, so each monomial of the orbit is counted once.
    std::vector<std::pair<int, int>> exps;
    for (ExponentPair p : m) exps.emplace_back(p.a, p.b);
    std::sort(exps.begin(), exps.end());

    double total = 0.0;
    std::vector<int> subset(l);
    // enumerate l-subsets of {0..n-1}
    std::function<void(int, int)> rec = [&](int start, int depth) {
        if (depth == l) {
            std::vector<std::pair<int, int>> arr = exps;
            do {
                double term = 1.0;
                for (int j = 0; j < l; ++j) {
                    const XiEta& v = pts[subset[j]];
                    term *= ipow(v.xi, arr[j].first) * ipow(v.eta, arr[j].second);
                }
                total += term;
            } while (std::next_permutation(arr.begin(), arr.end()));
            return;
        }
        for (int i = start; i <= n - (l - depth); ++i) {
            subset[depth] = i;
            rec(i + 1, depth + 1);
        }
    };
    rec(0, 0);
    return total;
}

namespace {

// Allowed pairs of weight 1..max, canonically ordered (descending).
std::vector<ExponentPair> allowed_pairs_up_to(int max_weight) {
    std::vector<ExponentPair> out;
    for (int w = 1; w <= max_weight; ++w)
        for (int a = w; a >= 0; --a) {
            ExponentPair p{a, w - a};
            if (allowed_pair(p)) out.push_back(p);
        }
    std::sort(out.begin(), out.end(), canonical_pair_greater);
    return out;
}

}  // namespace

std::vector<BasisMonomial> basis_monomials(int degree) {
    std::vector<BasisMonomial> out;
    if (degree == 0) {
        out.emplace_back();
        return out;
    }
    const std::vector<ExponentPair> pairs = allowed_pairs_up_to(degree);
    BasisMonomial cur;
    // pairs picked in non-increasing canonical order -> each multiset once
    std::function<void(int, int)> rec = [&](int from, int remaining) {
        if (remaining == 0) {
            out.push_back(cur);
            return;
        }
        for (int i = from; i < static_cast<int>(pairs.size()); ++i) {
            if (pairs[i].weight() > remaining) continue;
            cur.push_back(pairs[i]);
            rec(i, remaining - pairs[i].weight());
            cur.pop_back();
        }
    };
    rec(0, degree);
    std::sort(out.begin(), out.end(), [](const BasisMonomial& u, const BasisMonomial& v) {
        return std::lexicographical_compare(
            u.begin(), u.end(), v.begin(), v.end(), [](ExponentPair p, ExponentPair q) {
                return canonical_pair_greater(p, q);
            });
    });
    return out;
}

HilbertSeries hilbert_coefficients(int max_degree) {
    HilbertSeries hs;
    hs.coeffs.assign(static_cast<std::size_t>(max_degree) + 1, 0);
    hs.coeffs[0] = 1;
    for (int k = 1; k <= max_degree; ++k) {
        // multiply by (1 - t^k)^{-k}, i.e. k successive geometric factors
        for (int rep = 0; rep < k; ++rep)
            for (int i = k; i <= max_degree; ++i) hs.coeffs[i] += hs.coeffs[i - k];
    }
    return hs;
}

std::vector<GeneratorIndex> generators_in_degree(int k) {
    std::vector<GeneratorIndex> out;
    for (int a = k - 1; a >= 0; --a) out.push_back({a, k - 1 - a});
    return out;
}

int count_generators_in_degree(int k) { return k; }

double MultisymPoly::eval(const Barcode& bc) const {
    double s = 0.0;
    for (const Term& t : terms) {
        double prod = t.coeff;
        for (PowerSumIndex idx : t.factors) prod *= eval_power_sum(bc, idx);
        s += prod;
    }
    return s;
}

MultisymPoly MultisymPoly::power_sum(PowerSumIndex idx) {
    return {{Term{1.0, {idx}}}};
}

MultisymPoly MultisymPoly::generator(GeneratorIndex g) {
    return {{Term{1.0, {{g.a + 1, g.b}}}, Term{-1.0, {{g.a, g.b + 1}}}}};
}

MultisymPoly MultisymPoly::constant(double c) { return {{Term{c, {}}}}; }

namespace {

Barcode random_barcode(std::mt19937_64& rng, int n) {
    std::uniform_real_distribution<double> birth(-1.0, 1.0);
    std::uniform_real_distribution<double> len(0.0, 2.0);
    Barcode bc(n);
    for (Interval& iv : bc) {
        iv.x = birth(rng);
        iv.y = iv.x + len(rng);
    }
    return bc;
}

}  // namespace

DerivationReport check_derivation_condition(const BarcodeFn& f, int n, int trials,
                                            double h, double tol,
                                            std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> unit(-1.0, 1.0);
    for (int slot = 0; slot < n; ++slot) {
        for (int t = 0; t < trials; ++t) {
            Barcode bc = random_barcode(rng, n);
            const double c = unit(rng);
            bc[slot] = {c, c};  // put slot on the diagonal W_i

            Barcode plus = bc, minus = bc;
            plus[slot] = {c + h, c + h};
            minus[slot] = {c - h, c - h};
            const double deriv = (f(plus) - f(minus)) / (2.0 * h);
            if (std::abs(deriv) > tol)
                return {false, slot, bc, deriv};
        }
    }
    return {};
}

RankReport check_free_generation(int max_degree, int n, double h, double rel_tol,
                                 std::uint64_t seed) {
    std::vector<GeneratorIndex> gens;
    for (int k = 1; k <= max_degree; ++k)
        for (GeneratorIndex g : generators_in_degree(k)) gens.push_back(g);
    const int num = static_cast<int>(gens.size());
    if (2 * n < num)
        throw std::invalid_argument("check_free_generation: 2n < number of generators");

    std::mt19937_64 rng(seed);
    Barcode base = random_barcode(rng, n);

    Eigen::MatrixXd jac(num, 2 * n);
    for (int r = 0; r < num; ++r) {
        for (int i = 0; i < n; ++i) {
            Barcode p = base, m = base;
            p[i].x += h;
            m[i].x -= h;
            jac(r, 2 * i) = (eval_generator(p, gens[r]) - eval_generator(m, gens[r])) / (2 * h);
            p = base;
            m = base;
            p[i].y += h;
            m[i].y -= h;
            jac(r, 2 * i + 1) =
                (eval_generator(p, gens[r]) - eval_generator(m, gens[r])) / (2 * h);
        }
    }

    Eigen::JacobiSVD<Eigen::MatrixXd> svd(jac);
    RankReport rep;
    rep.num_generators = num;
    const auto& sv = svd.singularValues();
    rep.singular_values.assign(sv.data(), sv.data() + sv.size());
    const double cutoff = sv.size() ? sv(0) * rel_tol : 0.0;
    for (double s : rep.singular_values)
        if (s > cutoff) ++rep.rank;
    return rep;
}

}  // namespace barcoords
