#pragma once

// Wiring of filtration -> persistence -> features for whole images:
// the 4-sweep digit pipeline (32 features) and the sliced lesion
// pipeline (8 * n_slices features under the averaged feature set).

#include <array>
#include <string>
#include <vector>

#include "barcoords/features.hpp"
#include "barcoords/filtrations.hpp"
#include "barcoords/ingest.hpp"

namespace barcoords {

constexpr std::array<SweepDirection, 4> kAllSweeps{
    SweepDirection::LeftToRight, SweepDirection::RightToLeft,
    SweepDirection::TopToBottom, SweepDirection::BottomToTop};

const char* sweep_name(SweepDirection dir);

// Capped barcodes for all four sweeps and both homology dims, ordered
// sweep L,R,T,B x dim 0,1; ymax[i] is the sweep extent.
struct DigitBarcodes {
    std::array<Barcode, 8> barcodes;
    std::array<double, 8> ymax;
};

DigitBarcodes digit_barcodes(const BinaryImage& bin);

std::vector<double> digit_feature_vector(const BinaryImage& bin);
std::vector<std::string> digit_feature_names();

// The 8 * n_slices barcode family (56 for n_slices = 7), capped at the
// intensity range [0, 1], with averaged features: 4 per barcode.
struct LesionBarcodes {
    std::vector<Barcode> barcodes;  // slice-major, then border dir, mode, dim
    std::vector<std::string> tags;
};

LesionBarcodes lesion_barcodes(const GrayImage& img, const BinaryImage& mask,
                               int n_slices = 7);

std::vector<double> lesion_feature_vector(const GrayImage& img,
                                          const BinaryImage& mask,
                                          int n_slices = 7);
std::vector<std::string> lesion_feature_names(int n_slices = 7);

// Feature matrices over whole datasets (rows ordered as the input).
FeatureMatrix digit_feature_matrix(const std::vector<GrayImage>& images,
                                   double thresh = 0.5, int threads = 0);
FeatureMatrix lesion_feature_matrix(const std::vector<LesionSample>& samples,
                                    int n_slices = 7, int threads = 0);

}  // namespace barcoords
