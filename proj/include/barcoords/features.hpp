#pragma once

// The selected barcode invariants and feature-matrix assembly. The four
// digit features are sums over bars; the lesion variants divide by the
// bar count. Everything here is zero-bar-insensitive: a zero-length bar
// contributes an exact 0 to each sum and y_max ignores such bars.

#include <array>
#include <iosfwd>
#include <string>
#include <vector>

#include "barcoords/algebra.hpp"

namespace barcoords {

struct BarcodeSummary {
    double y_max = 0.0;  // max right endpoint over positive-length bars
    int n = 0;           // total bar count
};

BarcodeSummary summarize(const Barcode& bc);

// [ sum x(y-x), sum (ymax-y)(y-x), sum x^2 (y-x)^4, sum (ymax-y)^2 (y-x)^4 ]
std::array<double, 4> digit_features(const Barcode& bc, double ymax);

// digit_features / n, with [0,0,0,0] for the empty barcode.
std::array<double, 4> lesion_features(const Barcode& bc, double ymax);

// Concatenated features for the 8 digit barcodes, ordered sweep
// L,R,T,B x dim 0,1 x f1..f4. ymax[i] is the cap/extent of barcode i.
std::vector<double> digit_vector(const std::array<Barcode, 8>& barcodes,
                                 const std::array<double, 8>& ymax);
std::vector<double> digit_vector(const std::array<Barcode, 8>& barcodes,
                                 double extent);

// Averaged features for an arbitrary barcode family (the 56-barcode
// lesion scheme): 4 entries per barcode, one shared ymax.
std::vector<double> lesion_vector(const std::vector<Barcode>& barcodes, double ymax);

struct FeatureMatrix {
    std::vector<std::string> names;
    std::vector<std::vector<double>> rows;

    std::size_t cols() const { return names.size(); }
};

// Per-column min-max scaling fitted on one matrix, applied (with
// clamping) to another. Constant columns map to 0.
struct Scaling {
    std::vector<double> mins;
    std::vector<double> maxs;
};

Scaling fit_scale(const FeatureMatrix& m);
FeatureMatrix apply_scale(const Scaling& s, const FeatureMatrix& m);

// CSV with a header row; column 0 is the sample id, column 1 the label.
void write_feature_csv(std::ostream& os, const FeatureMatrix& m,
                       const std::vector<std::string>& ids,
                       const std::vector<int>& labels);
struct CsvDataset {
    FeatureMatrix matrix;
    std::vector<std::string> ids;
    std::vector<int> labels;
};
CsvDataset read_feature_csv(std::istream& is);

}  // namespace barcoords
