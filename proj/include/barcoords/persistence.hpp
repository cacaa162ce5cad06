#pragma once

// Persistent homology of filtered complexes of dimension <= 2: dim 0 by
// union-find with the elder rule, dim 1 by GF(2) column reduction of the
// triangle boundary matrix, plus a brute-force Betti oracle for tests.

#include <limits>
#include <stdexcept>
#include <utility>
#include <vector>

#include "barcoords/algebra.hpp"

namespace barcoords {

struct Cell {
    int id = 0;
    int dim = 0;                 // 0, 1 or 2
    std::vector<int> boundary;   // 2 vertex ids for edges, 3 edge ids for triangles
    double value = 0.0;          // filtration value, >= values of all faces
};

struct FilteredComplex {
    std::vector<Cell> cells;
};

constexpr double kInfDeath = std::numeric_limits<double>::infinity();

struct Bar {
    int dim = 0;
    double birth = 0.0;
    double death = kInfDeath;
    bool essential() const { return death == kInfDeath; }
};

// Raised when a cell's value is below one of its faces'.
struct MonotonicityError : std::runtime_error {
    int face_id;
    int coface_id;
    MonotonicityError(int face, int coface);
};

// Bars in dims 0 and 1. Zero-length pairs are retained; essential
// classes get death = infinity. Deterministic: filtration order is
// (value, dim, id) ascending and elder-rule ties go to the smaller
// representative id.
std::vector<Bar> compute_persistence(const FilteredComplex& cx);

// Betti numbers (b0, b1) of the subcomplex of cells with value <= t,
// computed independently via GF(2) ranks of the boundary matrices.
std::pair<int, int> betti_at(const FilteredComplex& cx, double t);

// Bars of one homology dimension only.
std::vector<Bar> bars_of_dim(const std::vector<Bar>& bars, int dim);

// Replace infinite deaths by `cap` and convert to an algebra Barcode.
// Throws std::invalid_argument if cap < some birth.
Barcode cap_barcode(const std::vector<Bar>& bars, double cap);

}  // namespace barcoords
