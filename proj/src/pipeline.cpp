#include "barcoords/pipeline.hpp"

#include <atomic>
#include <thread>

#include "barcoords/learn.hpp"

namespace barcoords {

const char* sweep_name(SweepDirection dir) {
    switch (dir) {
        case SweepDirection::LeftToRight: return "L";
        case SweepDirection::RightToLeft: return "R";
        case SweepDirection::TopToBottom: return "T";
        case SweepDirection::BottomToTop: return "B";
    }
    return "?";
}

DigitBarcodes digit_barcodes(const BinaryImage& bin) {
    DigitBarcodes out;
    int slot = 0;
    for (SweepDirection dir : kAllSweeps) {
        const double extent = sweep_extent(bin, dir);
        auto bars = compute_persistence(sweep_filtration(bin, dir));
        for (int dim : {0, 1}) {
            out.barcodes[slot] = cap_barcode(bars_of_dim(bars, dim), extent);
            out.ymax[slot] = extent;
            ++slot;
        }
    }
    return out;
}

std::vector<double> digit_feature_vector(const BinaryImage& bin) {
    DigitBarcodes db = digit_barcodes(bin);
    return digit_vector(db.barcodes, db.ymax);
}

std::vector<std::string> digit_feature_names() {
    std::vector<std::string> names;
    for (SweepDirection dir : kAllSweeps)
        for (int dim : {0, 1})
            for (int f = 1; f <= 4; ++f)
                names.push_back(std::string(sweep_name(dir)) + ".b" +
                                std::to_string(dim) + ".f" + std::to_string(f));
    return names;
}

LesionBarcodes lesion_barcodes(const GrayImage& img, const BinaryImage& mask,
                               int n_slices) {
    LesionBarcodes out;
    for (const SliceComplex& sc : slice_filtrations(img, mask, n_slices)) {
        auto bars = compute_persistence(sc.complex);
        for (int dim : {0, 1}) {
            // intensity values live in [0, 1]; essential bars cap at 1
            out.barcodes.push_back(cap_barcode(bars_of_dim(bars, dim), 1.0));
            out.tags.push_back(
                "s" + std::to_string(sc.slice) + (sc.from_border ? ".near" : ".far") +
                (sc.mode == IntensityMode::Sublevel ? ".sub" : ".sup") + ".b" +
                std::to_string(dim));
        }
    }
    return out;
}

std::vector<double> lesion_feature_vector(const GrayImage& img,
                                          const BinaryImage& mask, int n_slices) {
    return lesion_vector(lesion_barcodes(img, mask, n_slices).barcodes, 1.0);
}

std::vector<std::string> lesion_feature_names(int n_slices) {
    GrayImage img = GrayImage::filled(4, 4, 0.2);
    BinaryImage mask = BinaryImage::filled(4, 4, true);
    LesionBarcodes lb = lesion_barcodes(img, mask, n_slices);
    std::vector<std::string> names;
    for (const std::string& tag : lb.tags)
        for (int f = 1; f <= 4; ++f) names.push_back(tag + ".g" + std::to_string(f));
    return names;
}

namespace {

template <typename Fn>
void parallel_rows(int count, int threads, Fn&& fn) {
    const int nthreads = std::min(resolve_thread_count(threads), std::max(count, 1));
    if (nthreads <= 1) {
        for (int i = 0; i < count; ++i) fn(i);
        return;
    }
    std::atomic<int> next{0};
    std::vector<std::thread> pool;
    for (int t = 0; t < nthreads; ++t)
        pool.emplace_back([&] {
            for (int i = next++; i < count; i = next++) fn(i);
        });
    for (auto& th : pool) th.join();
}

}  // namespace

FeatureMatrix digit_feature_matrix(const std::vector<GrayImage>& images,
                                   double thresh, int threads) {
    FeatureMatrix m;
    m.names = digit_feature_names();
    m.rows.resize(images.size());
    parallel_rows(int(images.size()), threads, [&](int i) {
        m.rows[i] = digit_feature_vector(binarize(images[i], thresh));
    });
    return m;
}

FeatureMatrix lesion_feature_matrix(const std::vector<LesionSample>& samples,
                                    int n_slices, int threads) {
    FeatureMatrix m;
    m.names = lesion_feature_names(n_slices);
    m.rows.resize(samples.size());
    parallel_rows(int(samples.size()), threads, [&](int i) {
        m.rows[i] = lesion_feature_vector(samples[i].image, samples[i].mask, n_slices);
    });
    return m;
}

}  // namespace barcoords
