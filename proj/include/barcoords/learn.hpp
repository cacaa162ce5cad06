#pragma once

// Soft-margin support vector classification: Gaussian and polynomial
// kernels, an SMO dual solver with maximal-violating-pair selection,
// one-vs-one multiclass, k-fold cross-validation / LOOCV, and export to
// the sparse "<label> <idx>:<value>" training-file format.

#include <cstdint>
#include <iosfwd>
#include <stdexcept>
#include <string>
#include <vector>

#include "barcoords/features.hpp"

namespace barcoords {

enum class KernelKind { Gaussian, Polynomial };

struct KernelParams {
    KernelKind kind = KernelKind::Gaussian;
    double gamma = 8.0;
    double coef_a = 0.0;  // polynomial only
    int degree_d = 3;     // polynomial only
};

double kernel_eval(const KernelParams& k, const std::vector<double>& u,
                   const std::vector<double>& v);

struct SolverError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// One binary machine, y in {-1, +1} mapped from a class pair.
struct BinarySvm {
    std::vector<std::vector<double>> support_vectors;
    std::vector<double> coef;  // alpha_i * y_i per support vector
    double bias = 0.0;
    double objective = 0.0;  // dual objective at convergence
    std::vector<double> alpha;  // all alphas, pre-compaction (diagnostics)

    double decision(const KernelParams& k, const std::vector<double>& x) const;
};

struct SvmModel {
    std::vector<int> classes;  // sorted ascending
    KernelParams kernel;
    double C = 1000.0;
    struct PairModel {
        int pos_class = 0;  // mapped to +1
        int neg_class = 0;
        BinarySvm svm;
    };
    std::vector<PairModel> pairs;
};

// Solve the binary dual by SMO. tol is the KKT stopping tolerance.
// Throws SolverError when max_iter is exhausted.
BinarySvm train_binary(const std::vector<std::vector<double>>& X,
                       const std::vector<int>& y,  // +-1
                       const KernelParams& k, double C, double tol = 1e-3,
                       int max_iter = 1000000);

// One-vs-one training; rejects single-class input.
SvmModel train_svc(const FeatureMatrix& X, const std::vector<int>& y,
                   const KernelParams& k, double C, double tol = 1e-3);

// Majority vote over pairs; ties break toward the smaller class label.
int predict(const SvmModel& m, const std::vector<double>& x);

struct CvReport {
    int folds = 0;
    std::vector<double> fold_accuracy;
    double mean_accuracy = 0.0;
    std::vector<int> classes;
    std::vector<std::vector<int>> confusion;  // row true class, col predicted
};

enum class ScaleMode { PerFold, Global };

// Stratified-where-possible k-fold CV with per-fold min-max scaling
// (fit on train, applied to test). threads <= 0 picks hardware
// concurrency, honoring BARCODE_COORDS_THREADS.
CvReport cross_validate(const FeatureMatrix& X, const std::vector<int>& y, int folds,
                        const KernelParams& k, double C, std::uint64_t seed,
                        ScaleMode scale = ScaleMode::PerFold, int threads = 0);

CvReport loocv(const FeatureMatrix& X, const std::vector<int>& y,
               const KernelParams& k, double C,
               ScaleMode scale = ScaleMode::PerFold, int threads = 0);

// Sparse format: one line per sample, 1-based strictly increasing
// indices, zeros omitted.
void export_sparse(const FeatureMatrix& X, const std::vector<int>& y,
                   std::ostream& os);
void export_sparse(const FeatureMatrix& X, const std::vector<int>& y,
                   const std::string& path);
struct SparseDataset {
    std::vector<std::vector<std::pair<int, double>>> samples;
    std::vector<int> labels;
};
SparseDataset import_sparse(std::istream& is);

int resolve_thread_count(int requested);

}  // namespace barcoords
