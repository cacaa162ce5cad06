// barcoords: barcodes and barcode-polynomial features from images, plus
// the SVM experiment driver and algebra self-checks.

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <fstream>
#include <iostream>
#include <random>
#include <sstream>

#include "barcoords/learn.hpp"
#include "barcoords/pipeline.hpp"

using json = nlohmann::ordered_json;
using namespace barcoords;

namespace {

int fail_input(const std::string& msg) {
    std::cerr << "error: " << msg << "\n";
    return 2;
}

std::vector<Bar> sorted_bars(std::vector<Bar> bars) {
    std::sort(bars.begin(), bars.end(), [](const Bar& a, const Bar& b) {
        if (a.birth != b.birth) return a.birth < b.birth;
        return a.death < b.death;
    });
    return bars;
}

json bar_json(const Bar& b) {
    json j = json::array();
    j.push_back(b.birth);
    if (b.essential())
        j.push_back("inf");
    else
        j.push_back(b.death);
    return j;
}

void print_bars_plain(std::ostream& os, const std::vector<Bar>& bars) {
    for (const Bar& b : bars) {
        os << b.birth << " ";
        if (b.essential())
            os << "inf";
        else
            os << b.death;
        os << "\n";
    }
}

struct BarcodeGroup {
    std::string tag;
    int dim = 0;
    std::vector<Bar> bars;
};

const char* sweep_flag_name(SweepDirection d) {
    switch (d) {
        case SweepDirection::LeftToRight: return "left";
        case SweepDirection::RightToLeft: return "right";
        case SweepDirection::TopToBottom: return "top";
        case SweepDirection::BottomToTop: return "bottom";
    }
    return "?";
}

int cmd_barcode(const std::string& path, const std::string& sweep,
                const std::string& filtration, int slices, double threshold,
                bool as_json) {
    GrayImage img;
    try {
        img = read_pgm_file(path);
    } catch (const std::exception& e) {
        return fail_input(e.what());
    }

    std::vector<BarcodeGroup> groups;
    try {
        if (filtration == "sweep") {
            std::vector<SweepDirection> dirs;
            for (SweepDirection d : kAllSweeps)
                if (sweep == "all" || sweep == sweep_flag_name(d)) dirs.push_back(d);
            BinaryImage bin = binarize(img, threshold);
            for (SweepDirection d : dirs) {
                auto bars = compute_persistence(sweep_filtration(bin, d));
                for (int dim : {0, 1})
                    groups.push_back({std::string("sweep=") + sweep_flag_name(d),
                                      dim, sorted_bars(bars_of_dim(bars, dim))});
            }
        } else if (filtration == "intensity") {
            for (IntensityMode mode : {IntensityMode::Sublevel, IntensityMode::Superlevel}) {
                auto bars = compute_persistence(intensity_filtration(img, mode));
                std::string tag = mode == IntensityMode::Sublevel
                                      ? "intensity=sublevel" : "intensity=superlevel";
                for (int dim : {0, 1})
                    groups.push_back({tag, dim, sorted_bars(bars_of_dim(bars, dim))});
            }
        } else {  // border-slices
            BinaryImage mask = binarize(img, threshold);
            for (const SliceComplex& sc : slice_filtrations(img, mask, slices)) {
                auto bars = compute_persistence(sc.complex);
                std::string tag = "slice=" + std::to_string(sc.slice) +
                                  (sc.from_border ? " dir=near" : " dir=far") +
                                  (sc.mode == IntensityMode::Sublevel ? " mode=sublevel"
                                                                      : " mode=superlevel");
                for (int dim : {0, 1})
                    groups.push_back({tag, dim, sorted_bars(bars_of_dim(bars, dim))});
            }
        }
    } catch (const std::exception& e) {
        return fail_input(e.what());
    }

    if (as_json) {
        json out;
        out["image"] = path;
        out["filtration"] = filtration;
        out["barcodes"] = json::array();
        for (const BarcodeGroup& g : groups) {
            json jg;
            jg["tag"] = g.tag;
            jg["dim"] = g.dim;
            jg["bars"] = json::array();
            for (const Bar& b : g.bars) jg["bars"].push_back(bar_json(b));
            out["barcodes"].push_back(jg);
        }
        std::cout << out.dump(2) << "\n";
    } else {
        for (const BarcodeGroup& g : groups) {
            std::cout << "# " << g.tag << " dim=" << g.dim << "\n";
            print_bars_plain(std::cout, g.bars);
        }
    }
    return 0;
}

struct Dataset {
    FeatureMatrix X;
    std::vector<std::string> ids;
    std::vector<int> labels;
};

// Builds the feature matrix for any of the supported sources. Throws
// std::runtime_error-family exceptions on malformed inputs.
Dataset build_dataset(int synth_digits_n, int synth_lesions_n,
                      const std::string& idx_images, const std::string& idx_labels,
                      int limit, std::uint64_t seed, double threshold, int slices,
                      int threads) {
    Dataset ds;
    if (synth_digits_n > 0) {
        auto digits = synth_digits(synth_digits_n, seed);
        std::vector<GrayImage> images;
        for (auto& d : digits) {
            images.push_back(d.image);
            ds.labels.push_back(d.label);
        }
        ds.X = digit_feature_matrix(images, threshold, threads);
    } else if (synth_lesions_n > 0) {
        auto samples = synth_lesions(synth_lesions_n, seed);
        for (auto& s : samples) ds.labels.push_back(int(s.label));
        ds.X = lesion_feature_matrix(samples, slices, threads);
    } else if (!idx_images.empty()) {
        if (idx_labels.empty())
            throw std::invalid_argument("--idx-labels required with --idx-images");
        IdxTensor it = load_idx_file(idx_images);
        IdxTensor lt = load_idx_file(idx_labels);
        if (it.dims.size() != 3 || lt.dims.size() != 1)
            throw std::invalid_argument("expected rank-3 images and rank-1 labels");
        if (it.dims[0] != lt.dims[0])
            throw std::invalid_argument("image and label counts differ");
        int n = int(it.dims[0]);
        if (limit > 0) n = std::min(n, limit);
        std::vector<GrayImage> images;
        for (int i = 0; i < n; ++i) {
            images.push_back(idx_to_gray(it, i));
            ds.labels.push_back(lt.data[i]);
        }
        ds.X = digit_feature_matrix(images, threshold, threads);
    } else {
        ds.X.names = digit_feature_names();
    }
    for (std::size_t i = 0; i < ds.X.rows.size(); ++i)
        ds.ids.push_back(std::to_string(i));
    return ds;
}

int cmd_features(int synth_digits_n, int synth_lesions_n,
                 const std::string& idx_images, const std::string& idx_labels,
                 int limit, std::uint64_t seed, double threshold, int slices,
                 int threads, const std::string& out) {
    Dataset ds;
    try {
        ds = build_dataset(synth_digits_n, synth_lesions_n, idx_images, idx_labels,
                           limit, seed, threshold, slices, threads);
    } catch (const std::exception& e) {
        return fail_input(e.what());
    }
    if (out.empty()) {
        write_feature_csv(std::cout, ds.X, ds.ids, ds.labels);
    } else {
        std::ofstream os(out);
        if (!os) return fail_input("cannot open output file: " + out);
        write_feature_csv(os, ds.X, ds.ids, ds.labels);
    }
    return 0;
}

int cmd_classify(const std::string& config_path, const std::string& kernel_flag,
                 double gamma_flag, double coef_a_flag, int degree_flag,
                 const std::vector<double>& c_grid_flag, int folds_flag,
                 bool loocv_flag, std::int64_t seed_flag,
                 const std::string& scale_flag, const std::string& out_flag,
                 int threads) {
    json cfg = json::object();
    if (!config_path.empty()) {
        std::ifstream is(config_path);
        if (!is) return fail_input("cannot read config: " + config_path);
        try {
            is >> cfg;
        } catch (const std::exception& e) {
            return fail_input(std::string("config parse error: ") + e.what());
        }
    }

    // flags override config fields of the same name
    auto str = [&](const char* key, std::string flag, std::string dflt) {
        if (!flag.empty()) return flag;
        return cfg.value(key, dflt);
    };
    std::string kernel = str("kernel", kernel_flag, "gaussian");
    double gamma = gamma_flag >= 0 ? gamma_flag : cfg.value("gamma", 8.0);
    double coef_a = coef_a_flag >= 0 ? coef_a_flag : cfg.value("coef_a", 2.0);
    int degree = degree_flag > 0 ? degree_flag : cfg.value("degree", 3);
    std::vector<double> c_grid = c_grid_flag;
    if (c_grid.empty())
        c_grid = cfg.value("c_grid", std::vector<double>{1, 10, 100, 1000});
    int folds = folds_flag > 0 ? folds_flag : cfg.value("folds", 10);
    bool use_loocv = loocv_flag || cfg.value("loocv", false);
    std::uint64_t seed =
        seed_flag >= 0 ? std::uint64_t(seed_flag) : cfg.value("seed", std::uint64_t(42));
    std::string scale = str("scale", scale_flag, "fold");
    std::string out = str("out", out_flag, "");

    KernelParams k;
    if (kernel == "gaussian") {
        k = {KernelKind::Gaussian, gamma, 0.0, 0};
    } else if (kernel == "poly") {
        k = {KernelKind::Polynomial, gamma, coef_a, degree};
    } else {
        return fail_input("unknown kernel: " + kernel);
    }
    ScaleMode sm;
    if (scale == "fold") {
        sm = ScaleMode::PerFold;
    } else if (scale == "global") {
        sm = ScaleMode::Global;
    } else {
        return fail_input("unknown scale mode: " + scale);
    }
    if (c_grid.empty()) return fail_input("empty C grid");

    Dataset ds;
    try {
        if (cfg.contains("features_csv")) {
            std::ifstream is(cfg["features_csv"].get<std::string>());
            if (!is)
                return fail_input("cannot read features csv: " +
                                  cfg["features_csv"].get<std::string>());
            CsvDataset cd = read_feature_csv(is);
            ds.X = std::move(cd.matrix);
            ds.ids = std::move(cd.ids);
            ds.labels = std::move(cd.labels);
        } else {
            ds = build_dataset(cfg.value("synth_digits", 0), cfg.value("synth_lesions", 0),
                               cfg.value("idx_images", std::string()),
                               cfg.value("idx_labels", std::string()),
                               cfg.value("limit", 0), seed, cfg.value("threshold", 0.5),
                               cfg.value("slices", 7), threads);
        }
    } catch (const std::exception& e) {
        return fail_input(e.what());
    }
    int n = int(ds.X.rows.size());
    if (n == 0) return fail_input("empty dataset");
    if (!use_loocv && (folds < 2 || folds > n))
        return fail_input("folds must lie in [2, n_samples]");

    json report;
    report["kernel"] = kernel;
    report["gamma"] = k.gamma;
    if (k.kind == KernelKind::Polynomial) {
        report["coef_a"] = k.coef_a;
        report["degree"] = k.degree_d;
    }
    report["folds"] = use_loocv ? n : folds;
    report["loocv"] = use_loocv;
    report["seed"] = seed;
    report["scale"] = scale;
    report["n_samples"] = n;
    report["results"] = json::array();

    double best_acc = -1.0, best_c = 0.0;
    try {
        for (double C : c_grid) {
            CvReport rep = use_loocv
                               ? loocv(ds.X, ds.labels, k, C, sm, threads)
                               : cross_validate(ds.X, ds.labels, folds, k, C, seed, sm,
                                                threads);
            json jr;
            jr["C"] = C;
            jr["mean_accuracy"] = rep.mean_accuracy;
            jr["fold_accuracy"] = rep.fold_accuracy;
            jr["classes"] = rep.classes;
            jr["confusion"] = rep.confusion;
            report["results"].push_back(jr);
            std::cout << kernel << " C=" << C
                      << " mean_accuracy=" << rep.mean_accuracy << "\n";
            if (rep.mean_accuracy > best_acc) {
                best_acc = rep.mean_accuracy;
                best_c = C;
            }
        }
    } catch (const SolverError& e) {
        std::cerr << "solver error: " << e.what() << "\n";
        return 3;
    } catch (const std::exception& e) {
        return fail_input(e.what());
    }
    report["best"] = {{"C", best_c}, {"mean_accuracy", best_acc}};
    std::cout << "best: C=" << best_c << " mean_accuracy=" << best_acc << "\n";

    if (!out.empty()) {
        std::ofstream os(out);
        if (!os) return fail_input("cannot open output file: " + out);
        os << report.dump(2) << "\n";
    }
    return 0;
}

int cmd_verify_algebra(int max_degree, int trials, bool inject_bug) {
    std::cout << "hilbert coefficients (enumerated vs series):\n";
    HilbertSeries hs = hilbert_coefficients(max_degree);
    for (int k = 0; k <= max_degree; ++k) {
        std::int64_t enumerated = std::int64_t(basis_monomials(k).size());
        std::cout << "  degree " << k << ": " << enumerated << " vs " << hs.coeffs[k]
                  << "\n";
        if (enumerated != hs.coeffs[k]) {
            std::cout << "FAIL: hilbert mismatch at degree " << k << "\n";
            return 1;
        }
    }

    std::mt19937_64 rng(12345);
    std::uniform_real_distribution<double> coord(-5.0, 5.0);
    auto eval_gen = [&](const Barcode& bc, GeneratorIndex g) {
        if (!inject_bug) return eval_generator(bc, g);
        // deliberately wrong sign: p_{a+1,b} + p_{a,b+1}
        return eval_power_sum(bc, {g.a + 1, g.b}) + eval_power_sum(bc, {g.a, g.b + 1});
    };
    for (int t = 0; t < trials; ++t) {
        Barcode bc;
        int m = int(rng() % 8);
        for (int i = 0; i < m; ++i) {
            double a = coord(rng), b = coord(rng);
            bc.push_back({std::min(a, b), std::max(a, b)});
        }
        Barcode padded = bc;
        for (int i = 0; i < 3; ++i) {
            double c = coord(rng);
            padded.push_back({c, c});
        }
        for (int deg = 1; deg <= 5; ++deg)
            for (GeneratorIndex g : generators_in_degree(deg))
                if (eval_gen(bc, g) != eval_gen(padded, g)) {
                    std::cout << "FAIL: zero-bar invariance broken for generator ("
                              << g.a << "," << g.b << ")\n";
                    return 1;
                }
    }
    std::cout << "zero-bar invariance: ok (" << trials << " trials)\n";

    for (int deg = 1; deg <= 4; ++deg)
        for (GeneratorIndex g : generators_in_degree(deg)) {
            auto rep = check_derivation_condition(
                [&](const Barcode& bc) { return eval_generator(bc, g); }, 4, 100, 1e-5,
                1e-6);
            if (!rep.ok) {
                std::cout << "FAIL: derivation condition for generator (" << g.a << ","
                          << g.b << "), residual " << rep.residual << "\n";
                return 1;
            }
        }
    auto p10 = check_derivation_condition(
        [](const Barcode& bc) { return eval_power_sum(bc, {1, 0}); }, 4, 100, 1e-5,
        1e-6);
    if (p10.ok) {
        std::cout << "FAIL: bare power sum p_{1,0} unexpectedly passed the "
                     "derivation condition\n";
        return 1;
    }
    std::cout << "derivation condition: ok (generators pass, p_{1,0} rejected)\n";

    RankReport rr = check_free_generation(3, 4);
    if (rr.rank != rr.num_generators) {
        std::cout << "FAIL: jacobian rank " << rr.rank << " != " << rr.num_generators
                  << " generators\n";
        return 1;
    }
    std::cout << "free generation: ok (rank " << rr.rank << ")\n";
    std::cout << "all checks passed\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"persistence barcodes and barcode-polynomial features"};
    app.require_subcommand(1);
    int threads = 0;
    app.add_option("--threads", threads, "worker threads (0 = auto)");

    auto* barcode = app.add_subcommand("barcode", "barcodes for one image");
    std::string image_path, sweep = "all", filtration = "sweep";
    int slices = 7;
    double threshold = 0.5;
    bool as_json = false, all_sweeps = false;
    barcode->add_option("image", image_path, "PGM image path")->required();
    barcode->add_option("--sweep", sweep, "left|right|top|bottom|all")
        ->check(CLI::IsMember({"left", "right", "top", "bottom", "all"}));
    barcode->add_flag("--all-sweeps", all_sweeps, "same as --sweep all");
    barcode->add_option("--filtration", filtration, "sweep|intensity|border-slices")
        ->check(CLI::IsMember({"sweep", "intensity", "border-slices"}));
    barcode->add_option("--slices", slices, "slice count for border-slices");
    barcode->add_option("--threshold", threshold, "binarization threshold");
    barcode->add_flag("--json", as_json, "JSON output");

    auto* features = app.add_subcommand("features", "feature matrix as CSV");
    int synth_digits_n = 0, synth_lesions_n = 0, limit = 0;
    std::string idx_images, idx_labels, out;
    std::uint64_t seed = 42;
    double f_threshold = 0.5;
    int f_slices = 7;
    features->add_option("--synth-digits", synth_digits_n, "generate N block digits");
    features->add_option("--synth-lesions", synth_lesions_n,
                         "generate N lesions per class");
    features->add_option("--idx-images", idx_images, "IDX image tensor (.gz ok)");
    features->add_option("--idx-labels", idx_labels, "IDX label tensor (.gz ok)");
    features->add_option("--limit", limit, "use only the first N samples");
    features->add_option("--seed", seed, "generator seed");
    features->add_option("--threshold", f_threshold, "binarization threshold");
    features->add_option("--slices", f_slices, "lesion slice count");
    features->add_option("--out", out, "output CSV path (default stdout)");

    auto* classify = app.add_subcommand("classify", "cross-validated SVM experiment");
    std::string config_path, kernel_flag, scale_flag, out_flag;
    double gamma_flag = -1.0, coef_a_flag = -1.0;
    int degree_flag = 0, folds_flag = 0;
    std::vector<double> c_grid_flag;
    bool loocv_flag = false;
    std::int64_t seed_flag = -1;
    classify->add_option("config", config_path, "experiment config JSON");
    classify->add_option("--kernel", kernel_flag, "gaussian|poly");
    classify->add_option("--gamma", gamma_flag, "kernel gamma");
    classify->add_option("--coef-a", coef_a_flag, "polynomial additive constant");
    classify->add_option("--degree", degree_flag, "polynomial degree");
    classify->add_option("--c-grid", c_grid_flag, "C values to sweep");
    classify->add_option("--folds", folds_flag, "CV fold count");
    classify->add_flag("--loocv", loocv_flag, "leave-one-out CV");
    classify->add_option("--seed", seed_flag, "fold-assignment seed");
    classify->add_option("--scale", scale_flag, "fold|global");
    classify->add_option("--out", out_flag, "JSON report path");

    auto* verify = app.add_subcommand("verify-algebra", "ring self-checks");
    int max_degree = 8, trials = 200;
    bool inject_bug = false;
    verify->add_option("--max-degree", max_degree, "highest Hilbert degree checked");
    verify->add_option("--trials", trials, "fuzzing trials");
    verify->add_flag("--inject-bug", inject_bug)->group("");  // test hook, hidden

    CLI11_PARSE(app, argc, argv);

    if (barcode->parsed())
        return cmd_barcode(image_path, all_sweeps ? "all" : sweep, filtration, slices,
                           threshold, as_json);
    if (features->parsed())
        return cmd_features(synth_digits_n, synth_lesions_n, idx_images, idx_labels,
                            limit, seed, f_threshold, f_slices, threads, out);
    if (classify->parsed())
        return cmd_classify(config_path, kernel_flag, gamma_flag, coef_a_flag,
                            degree_flag, c_grid_flag, folds_flag, loocv_flag, seed_flag,
                            scale_flag, out_flag, threads);
    return cmd_verify_algebra(max_degree, trials, inject_bug);
}
