#include "barcoords/features.hpp"

#include <algorithm>
#include <iomanip>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace barcoords {

BarcodeSummary summarize(const Barcode& bc) {
    BarcodeSummary s;
    s.n = static_cast<int>(bc.size());
    for (const Interval& iv : bc)
        if (iv.y > iv.x) s.y_max = std::max(s.y_max, iv.y);
    return s;
}

std::array<double, 4> digit_features(const Barcode& bc, double ymax) {
    std::array<double, 4> f{0.0, 0.0, 0.0, 0.0};
    for (const Interval& iv : bc) {
        const double len = iv.y - iv.x;
        const double len4 = len * len * len * len;
        const double rem = ymax - iv.y;
        f[0] += iv.x * len;
        f[1] += rem * len;
        f[2] += iv.x * iv.x * len4;
        f[3] += rem * rem * len4;
    }
    return f;
}

std::array<double, 4> lesion_features(const Barcode& bc, double ymax) {
    std::array<double, 4> f = digit_features(bc, ymax);
    if (!bc.empty())
        for (double& v : f) v /= static_cast<double>(bc.size());
    return f;
}

std::vector<double> digit_vector(const std::array<Barcode, 8>& barcodes,
                                 const std::array<double, 8>& ymax) {
    std::vector<double> out;
    out.reserve(32);
    for (int i = 0; i < 8; ++i) {
        auto f = digit_features(barcodes[i], ymax[i]);
        out.insert(out.end(), f.begin(), f.end());
    }
    return out;
}

std::vector<double> digit_vector(const std::array<Barcode, 8>& barcodes,
                                 double extent) {
    std::array<double, 8> ymax;
    ymax.fill(extent);
    return digit_vector(barcodes, ymax);
}

std::vector<double> lesion_vector(const std::vector<Barcode>& barcodes, double ymax) {
    std::vector<double> out;
    out.reserve(barcodes.size() * 4);
    for (const Barcode& bc : barcodes) {
        auto f = lesion_features(bc, ymax);
        out.insert(out.end(), f.begin(), f.end());
    }
    return out;
}

Scaling fit_scale(const FeatureMatrix& m) {
    if (m.rows.empty()) throw std::invalid_argument("fit_scale: empty matrix");
    const std::size_t nc = m.cols();
    Scaling s;
    s.mins.assign(nc, std::numeric_limits<double>::infinity());
    s.maxs.assign(nc, -std::numeric_limits<double>::infinity());
    for (const auto& row : m.rows)
        for (std::size_t j = 0; j < nc; ++j) {
            s.mins[j] = std::min(s.mins[j], row[j]);
            s.maxs[j] = std::max(s.maxs[j], row[j]);
        }
    return s;
}

FeatureMatrix apply_scale(const Scaling& s, const FeatureMatrix& m) {
    FeatureMatrix out = m;
    for (auto& row : out.rows)
        for (std::size_t j = 0; j < row.size(); ++j) {
            const double span = s.maxs[j] - s.mins[j];
            double v = span > 0.0 ? (row[j] - s.mins[j]) / span : 0.0;
            row[j] = std::clamp(v, 0.0, 1.0);
        }
    return out;
}

void write_feature_csv(std::ostream& os, const FeatureMatrix& m,
                       const std::vector<std::string>& ids,
                       const std::vector<int>& labels) {
    os << "id,label";
    for (const auto& n : m.names) os << ',' << n;
    os << '\n';
    os << std::setprecision(17);
    for (std::size_t i = 0; i < m.rows.size(); ++i) {
        os << ids[i] << ',' << labels[i];
        for (double v : m.rows[i]) os << ',' << v;
        os << '\n';
    }
}

CsvDataset read_feature_csv(std::istream& is) {
    CsvDataset ds;
    std::string line;
    if (!std::getline(is, line))
        throw std::runtime_error("read_feature_csv: missing header");
    std::stringstream hs(line);
    std::string tok;
    int col = 0;
    while (std::getline(hs, tok, ',')) {
        if (col >= 2) ds.matrix.names.push_back(tok);
        ++col;
    }
    while (std::getline(is, line)) {
        if (line.empty()) continue;
        std::stringstream ls(line);
        std::vector<double> row;
        col = 0;
        while (std::getline(ls, tok, ',')) {
            if (col == 0)
                ds.ids.push_back(tok);
            else if (col == 1)
                ds.labels.push_back(std::stoi(tok));
            else
                row.push_back(std::stod(tok));
            ++col;
        }
        if (row.size() != ds.matrix.names.size())
            throw std::runtime_error("read_feature_csv: ragged row");
        ds.matrix.rows.push_back(std::move(row));
    }
    return ds;
}

}  // namespace barcoords
