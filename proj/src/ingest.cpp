#include "barcoords/ingest.hpp"

#include <zlib.h>

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstring>
#include <fstream>
#include <random>

namespace barcoords {

IdxTensor parse_idx(const std::vector<std::uint8_t>& bytes) {
    if (bytes.size() < 4) throw IdxTruncated("IDX header truncated");
    if (bytes[0] != 0 || bytes[1] != 0)
        throw IdxBadMagic("IDX magic must start with two zero bytes");
    if (bytes[2] != 0x08)
        throw IdxUnsupportedType("only unsigned-byte IDX tensors are supported");
    const int rank = bytes[3];
    const std::size_t header = 4 + 4 * static_cast<std::size_t>(rank);
    if (bytes.size() < header) throw IdxTruncated("IDX dimension list truncated");

    IdxTensor t;
    std::size_t count = 1;
    for (int d = 0; d < rank; ++d) {
        std::uint32_t v = (std::uint32_t(bytes[4 + 4 * d]) << 24) |
                          (std::uint32_t(bytes[5 + 4 * d]) << 16) |
                          (std::uint32_t(bytes[6 + 4 * d]) << 8) |
                          std::uint32_t(bytes[7 + 4 * d]);
        t.dims.push_back(v);
        count *= v;
    }
    if (bytes.size() < header + count) throw IdxTruncated("IDX payload truncated");
    t.data.assign(bytes.begin() + header, bytes.begin() + header + count);
    return t;
}

std::vector<std::uint8_t> serialize_idx(const IdxTensor& t) {
    std::vector<std::uint8_t> out{0, 0, 0x08, static_cast<std::uint8_t>(t.dims.size())};
    for (std::uint32_t d : t.dims) {
        out.push_back(d >> 24);
        out.push_back((d >> 16) & 0xff);
        out.push_back((d >> 8) & 0xff);
        out.push_back(d & 0xff);
    }
    out.insert(out.end(), t.data.begin(), t.data.end());
    return out;
}

std::vector<std::uint8_t> gunzip(const std::vector<std::uint8_t>& bytes) {
    z_stream zs;
    std::memset(&zs, 0, sizeof(zs));
    if (inflateInit2(&zs, 15 + 16) != Z_OK)
        throw std::runtime_error("gunzip: inflateInit2 failed");
    std::vector<std::uint8_t> out;
    std::uint8_t buf[1 << 16];
    zs.next_in = const_cast<std::uint8_t*>(bytes.data());
    zs.avail_in = static_cast<uInt>(bytes.size());
    int ret = Z_OK;
    while (ret != Z_STREAM_END) {
        zs.next_out = buf;
        zs.avail_out = sizeof(buf);
        ret = inflate(&zs, Z_NO_FLUSH);
        if (ret != Z_OK && ret != Z_STREAM_END) {
            inflateEnd(&zs);
            throw std::runtime_error("gunzip: corrupt stream");
        }
        out.insert(out.end(), buf, buf + (sizeof(buf) - zs.avail_out));
    }
    inflateEnd(&zs);
    return out;
}

namespace {

std::vector<std::uint8_t> read_file(const std::string& path) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw std::runtime_error("cannot open " + path);
    return {std::istreambuf_iterator<char>(is), std::istreambuf_iterator<char>()};
}

}  // namespace

IdxTensor load_idx_file(const std::string& path) {
    std::vector<std::uint8_t> bytes = read_file(path);
    if (bytes.size() >= 2 && bytes[0] == 0x1f && bytes[1] == 0x8b)
        bytes = gunzip(bytes);
    return parse_idx(bytes);
}

GrayImage idx_to_gray(const IdxTensor& t, int index) {
    if (t.dims.size() != 3)
        throw std::invalid_argument("idx_to_gray: rank-3 tensor expected");
    if (index < 0 || static_cast<std::uint32_t>(index) >= t.dims[0])
        throw std::out_of_range("idx_to_gray: image index out of range");
    const int h = static_cast<int>(t.dims[1]);
    const int w = static_cast<int>(t.dims[2]);
    GrayImage img = GrayImage::filled(w, h, 0.0);
    const std::size_t off = static_cast<std::size_t>(index) * w * h;
    for (int i = 0; i < w * h; ++i) img.pixels[i] = t.data[off + i] / 255.0;
    return img;
}

namespace {

struct PgmCursor {
    const std::vector<std::uint8_t>& b;
    std::size_t pos = 0;

    // next whitespace-delimited token, skipping '#' comment lines
    std::string token() {
        for (;;) {
            while (pos < b.size() && std::isspace(b[pos])) ++pos;
            if (pos < b.size() && b[pos] == '#') {
                while (pos < b.size() && b[pos] != '\n') ++pos;
                continue;
            }
            break;
        }
        std::string t;
        while (pos < b.size() && !std::isspace(b[pos])) t.push_back(char(b[pos++]));
        if (t.empty()) throw std::runtime_error("PGM: unexpected end of header");
        return t;
    }
};

}  // namespace

GrayImage read_pgm(const std::vector<std::uint8_t>& bytes) {
    PgmCursor cur{bytes};
    const std::string magic = cur.token();
    if (magic != "P2" && magic != "P5")
        throw std::runtime_error("PGM: unsupported format " + magic);
    const int w = std::stoi(cur.token());
    const int h = std::stoi(cur.token());
    const int maxval = std::stoi(cur.token());
    if (w <= 0 || h <= 0) throw std::runtime_error("PGM: bad dimensions");
    if (maxval <= 0 || maxval > 255) throw std::runtime_error("PGM: maxval > 255");

    GrayImage img = GrayImage::filled(w, h, 0.0);
    if (magic == "P2") {
        for (int i = 0; i < w * h; ++i) img.pixels[i] = std::stoi(cur.token()) / double(maxval);
    } else {
        std::size_t start = cur.pos + 1;  // single whitespace after maxval
        if (start + std::size_t(w) * h > bytes.size())
            throw std::runtime_error("PGM: truncated payload");
        for (int i = 0; i < w * h; ++i) img.pixels[i] = bytes[start + i] / double(maxval);
    }
    return img;
}

GrayImage read_pgm_file(const std::string& path) { return read_pgm(read_file(path)); }

const char* lesion_label_name(LesionLabel l) {
    switch (l) {
        case LesionLabel::Cyst: return "cyst";
        case LesionLabel::Metastasis: return "metastasis";
        case LesionLabel::Hemangioma: return "hemangioma";
    }
    return "?";
}

std::vector<LesionSample> synth_lesions(int n_per_class, std::uint64_t seed) {
    std::vector<LesionSample> out;
    for (int cls = 0; cls < 3; ++cls)
        for (int i = 0; i < n_per_class; ++i) {
            const std::uint64_t sample_seed =
                seed * 1000003ull + std::uint64_t(cls) * 4099ull + std::uint64_t(i);
            std::mt19937_64 rng(sample_seed);
            std::uniform_int_distribution<int> size_dist(32, 96);
            std::normal_distribution<double> noise(0.0, 1.0);

            const int s = size_dist(rng);
            const double cx = s / 2.0, cy = s / 2.0;
            const double radius = s / 2.0 - 3.0;

            LesionSample sample;
            sample.seed = sample_seed;
            sample.label = static_cast<LesionLabel>(cls);
            sample.image = GrayImage::filled(s, s, 0.5);
            sample.mask = BinaryImage::filled(s, s, false);

            for (int r = 0; r < s; ++r)
                for (int c = 0; c < s; ++c) {
                    const double rho = std::hypot(r - cy, c - cx);
                    if (rho > radius) continue;
                    sample.mask.set(r, c, true);
                    double v;
                    switch (sample.label) {
                        case LesionLabel::Cyst:
                            v = 0.15 + 0.02 * noise(rng);
                            break;
                        case LesionLabel::Metastasis: {
                            v = 0.35 + 0.15 * noise(rng);
                            // sparse bright flecks
                            if ((rng() & 7u) == 0) v += 0.3;
                            break;
                        }
                        case LesionLabel::Hemangioma: {
                            const double border = radius - rho;  // 0 at the rim
                            const double band = 0.30 * radius;
                            const double t = 1.0 / (1.0 + std::exp((border - band) / 1.5));
                            v = 0.25 + 0.5 * t + 0.05 * noise(rng);
                            break;
                        }
                        default: v = 0.5;
                    }
                    sample.image.at(r, c) = std::clamp(v, 0.0, 1.0);
                }
            out.push_back(std::move(sample));
        }
    return out;
}

namespace {

// 7-segment geometry on a 28x28 canvas
void draw_segment(GrayImage& img, int r0, int c0, int r1, int c1) {
    for (int r = r0; r <= r1; ++r)
        for (int c = c0; c <= c1; ++c) img.at(r, c) = 1.0;
}

GrayImage block_digit(int digit, int jr, int jc) {
    // segment presence: t, tl, tr, m, bl, br, b
    static const bool seg[10][7] = {
        {1, 1, 1, 0, 1, 1, 1},  // 0
        {0, 0, 1, 0, 0, 1, 0},  // 1
        {1, 0, 1, 1, 1, 0, 1},  // 2
        {1, 0, 1, 1, 0, 1, 1},  // 3
        {0, 1, 1, 1, 0, 1, 0},  // 4
        {1, 1, 0, 1, 0, 1, 1},  // 5
        {1, 1, 0, 1, 1, 1, 1},  // 6
        {1, 0, 1, 0, 0, 1, 0},  // 7
        {1, 1, 1, 1, 1, 1, 1},  // 8
        {1, 1, 1, 1, 0, 1, 1},  // 9
    };
    GrayImage img = GrayImage::filled(28, 28, 0.0);
    const int top = 4 + jr, left = 7 + jc, right = 20 + jc, bot = 23 + jr;
    const int mid = (top + bot) / 2;
    const bool* s = seg[digit];
    if (s[0]) draw_segment(img, top, left, top + 2, right);
    if (s[1]) draw_segment(img, top, left, mid, left + 2);
    if (s[2]) draw_segment(img, top, right - 2, mid, right);
    if (s[3]) draw_segment(img, mid - 1, left, mid + 1, right);
    if (s[4]) draw_segment(img, mid, left, bot, left + 2);
    if (s[5]) draw_segment(img, mid, right - 2, bot, right);
    if (s[6]) draw_segment(img, bot - 2, left, bot, right);
    return img;
}

}  // namespace

std::vector<DigitSample> synth_digits(int count, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<int> jitter(-2, 2);
    std::vector<DigitSample> out;
    for (int i = 0; i < count; ++i) {
        int d = i % 10;
        out.push_back({block_digit(d, jitter(rng), jitter(rng)), d});
    }
    return out;
}

}  // namespace barcoords
