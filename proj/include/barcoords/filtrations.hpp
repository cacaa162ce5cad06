#pragma once

// Filtered complexes from images: thresholding, directional sweeps,
// intensity sublevel/superlevel filtrations, chessboard border-distance
// maps and the sliced lesion scheme. All constructions use 8-adjacency
// and fill every 3-clique (flag rule, value = max of vertices).

#include <functional>
#include <optional>
#include <vector>

#include "barcoords/image.hpp"
#include "barcoords/persistence.hpp"

namespace barcoords {

enum class SweepDirection { LeftToRight, RightToLeft, TopToBottom, BottomToTop };

enum class IntensityMode { Sublevel, Superlevel };

// Chessboard distance to the mask border; -1 on off-pixels.
struct DistanceMap {
    int width = 0;
    int height = 0;
    std::vector<double> dist;

    double at(int row, int col) const { return dist[row * width + col]; }
};

// Pixel on iff intensity strictly exceeds thresh.
BinaryImage binarize(const GrayImage& img, double thresh);

// Flag complex over the active pixels with the given vertex values;
// shared by every filtration below. active(r,c) and value(r,c) are only
// queried for in-bounds coordinates.
FilteredComplex flag_complex(int width, int height,
                             const std::function<bool(int, int)>& active,
                             const std::function<double(int, int)>& value);

// Vertex value = 0-based coordinate along the sweep direction.
FilteredComplex sweep_filtration(const BinaryImage& bin, SweepDirection dir);

// Extent of the sweep coordinate (width for horizontal, height for
// vertical); doubles as the essential-bar cap and the feature y_max.
double sweep_extent(const BinaryImage& bin, SweepDirection dir);

// Vertex value = intensity (sublevel) or 1 - intensity (superlevel),
// over the mask when given. Throws on dimension mismatch.
FilteredComplex intensity_filtration(const GrayImage& img, IntensityMode mode,
                                     const BinaryImage* mask = nullptr);

// Throws std::invalid_argument on an empty mask.
DistanceMap border_distance(const BinaryImage& mask);

struct SliceComplex {
    int slice = 0;
    bool from_border = false;  // near-border-first vs far-first
    IntensityMode mode = IntensityMode::Sublevel;
    FilteredComplex complex;
};

// The n_slices x 2 (border direction) x 2 (intensity direction) lesion
// scheme; with two homology dims downstream this yields 8 * n_slices
// barcodes per image. Bands are equal-width over [0, max_dist] and
// cumulative by default; disjoint_bands switches to the banded variant.
std::vector<SliceComplex> slice_filtrations(const GrayImage& img,
                                            const BinaryImage& mask,
                                            int n_slices = 7,
                                            bool disjoint_bands = false);

}  // namespace barcoords
