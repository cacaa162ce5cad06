#pragma once

// Dataset ingestion: IDX binary tensors (plain or gzipped), PGM images,
// and the seeded synthetic-lesion generator standing in for the private
// CT dataset.

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "barcoords/image.hpp"

namespace barcoords {

struct IdxTensor {
    std::vector<std::uint32_t> dims;
    std::vector<std::uint8_t> data;  // unsigned bytes, row-major
};

struct IdxError : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct IdxBadMagic : IdxError {
    using IdxError::IdxError;
};
struct IdxUnsupportedType : IdxError {
    using IdxError::IdxError;
};
struct IdxTruncated : IdxError {
    using IdxError::IdxError;
};

IdxTensor parse_idx(const std::vector<std::uint8_t>& bytes);
std::vector<std::uint8_t> serialize_idx(const IdxTensor& t);

// Reads a file, transparently inflating gzip (magic 1f 8b) first.
IdxTensor load_idx_file(const std::string& path);

std::vector<std::uint8_t> gunzip(const std::vector<std::uint8_t>& bytes);

// Slice `index` of a rank-3 tensor as a [0,1] grayscale image.
GrayImage idx_to_gray(const IdxTensor& t, int index);

// P2 (ASCII) or P5 (binary) PGM with maxval <= 255.
GrayImage read_pgm(const std::vector<std::uint8_t>& bytes);
GrayImage read_pgm_file(const std::string& path);

enum class LesionLabel : int { Cyst = 0, Metastasis = 1, Hemangioma = 2 };

const char* lesion_label_name(LesionLabel l);

struct LesionSample {
    GrayImage image;
    BinaryImage mask;
    LesionLabel label = LesionLabel::Cyst;
    std::uint64_t seed = 0;
};

// Reproducible synthetic lesions, n per class: cysts are homogeneous
// dark disks, metastases have speckled interiors, hemangiomas carry a
// bright band near the border and a darker center.
std::vector<LesionSample> synth_lesions(int n_per_class, std::uint64_t seed);

// Seeded block-digit images (segments and holes mimicking 0-9) for
// smoke tests and CLI demos.
struct DigitSample {
    GrayImage image;
    int label = 0;
};
std::vector<DigitSample> synth_digits(int count, std::uint64_t seed);

}  // namespace barcoords
