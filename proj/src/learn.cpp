#include "barcoords/learn.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <map>
#include <numeric>
#include <random>
#include <sstream>
#include <thread>

namespace barcoords {

double kernel_eval(const KernelParams& k, const std::vector<double>& u,
                   const std::vector<double>& v) {
    if (u.size() != v.size())
        throw std::invalid_argument("kernel_eval: dimension mismatch");
    if (k.kind == KernelKind::Gaussian) {
        double d2 = 0.0;
        for (std::size_t i = 0; i < u.size(); ++i) {
            const double d = u[i] - v[i];
            d2 += d * d;
        }
        return std::exp(-k.gamma * d2);
    }
    double dot = 0.0;
    for (std::size_t i = 0; i < u.size(); ++i) dot += u[i] * v[i];
    double base = k.gamma * dot + k.coef_a;
    double r = 1.0;
    for (int i = 0; i < k.degree_d; ++i) r *= base;
    return r;
}

double BinarySvm::decision(const KernelParams& k, const std::vector<double>& x) const {
    double s = bias;
    for (std::size_t i = 0; i < support_vectors.size(); ++i)
        s += coef[i] * kernel_eval(k, support_vectors[i], x);
    return s;
}

BinarySvm train_binary(const std::vector<std::vector<double>>& X,
                       const std::vector<int>& y, const KernelParams& k, double C,
                       double tol, int max_iter) {
    const int n = static_cast<int>(X.size());
    std::vector<double> K(static_cast<std::size_t>(n) * n);
    for (int i = 0; i < n; ++i)
        for (int j = i; j < n; ++j)
            K[i * n + j] = K[j * n + i] = kernel_eval(k, X[i], X[j]);

    std::vector<double> alpha(n, 0.0);
    std::vector<double> grad(n, -1.0);  // grad of 0.5 a'Qa - e'a, Q=yy'K

    auto in_up = [&](int i) {
        return (y[i] > 0 && alpha[i] < C) || (y[i] < 0 && alpha[i] > 0);
    };
    auto in_low = [&](int i) {
        return (y[i] > 0 && alpha[i] > 0) || (y[i] < 0 && alpha[i] < C);
    };

    int iter = 0;
    double m_up = 0.0, m_low = 0.0;
    for (;; ++iter) {
        if (iter >= max_iter) throw SolverError("SMO did not converge");
        // maximal violating pair; ties resolve to the smallest index
        int i = -1, j = -1;
        m_up = -1e300;
        m_low = 1e300;
        for (int t = 0; t < n; ++t) {
            const double g = -y[t] * grad[t];
            if (in_up(t) && g > m_up) {
                m_up = g;
                i = t;
            }
            if (in_low(t) && g < m_low) {
                m_low = g;
                j = t;
            }
        }
        if (i < 0 || j < 0 || m_up - m_low < tol) break;

        // analytic two-variable update
        const double quad =
            std::max(K[i * n + i] + K[j * n + j] - 2.0 * K[i * n + j], 1e-12);
        double delta = (m_up - m_low) / quad;  // step in the y_i a_i direction
        // box-clip: a_i moves by y_i*delta', a_j by -y_j*delta'
        double ai_max = y[i] > 0 ? C - alpha[i] : alpha[i];
        double aj_max = y[j] > 0 ? alpha[j] : C - alpha[j];
        delta = std::min({delta, ai_max, aj_max});
        alpha[i] += y[i] * delta;
        alpha[j] -= y[j] * delta;
        for (int t = 0; t < n; ++t)
            grad[t] += delta * y[t] * (K[i * n + t] - K[j * n + t]);
    }

    BinarySvm svm;
    svm.alpha = alpha;
    svm.bias = (m_up + m_low) / 2.0;
    double obj = 0.0;
    for (int t = 0; t < n; ++t) obj += alpha[t] * (grad[t] - 1.0) / 2.0;
    svm.objective = -obj;  // value of e'a - 0.5 a'Qa
    for (int t = 0; t < n; ++t)
        if (alpha[t] > 0.0) {
            svm.support_vectors.push_back(X[t]);
            svm.coef.push_back(alpha[t] * y[t]);
        }
    return svm;
}

SvmModel train_svc(const FeatureMatrix& X, const std::vector<int>& y,
                   const KernelParams& k, double C, double tol) {
    SvmModel m;
    m.kernel = k;
    m.C = C;
    m.classes = y;
    std::sort(m.classes.begin(), m.classes.end());
    m.classes.erase(std::unique(m.classes.begin(), m.classes.end()), m.classes.end());
    if (m.classes.size() < 2)
        throw std::invalid_argument("train_svc: need at least 2 classes");

    for (std::size_t a = 0; a < m.classes.size(); ++a)
        for (std::size_t b = a + 1; b < m.classes.size(); ++b) {
            std::vector<std::vector<double>> sub;
            std::vector<int> suby;
            for (std::size_t i = 0; i < y.size(); ++i) {
                if (y[i] == m.classes[a]) {
                    sub.push_back(X.rows[i]);
                    suby.push_back(+1);
                } else if (y[i] == m.classes[b]) {
                    sub.push_back(X.rows[i]);
                    suby.push_back(-1);
                }
            }
            SvmModel::PairModel pm;
            pm.pos_class = m.classes[a];
            pm.neg_class = m.classes[b];
            pm.svm = train_binary(sub, suby, k, C, tol);
            m.pairs.push_back(std::move(pm));
        }
    return m;
}

int predict(const SvmModel& m, const std::vector<double>& x) {
    std::map<int, int> votes;
    for (int c : m.classes) votes[c] = 0;
    for (const auto& pm : m.pairs) {
        const double d = pm.svm.decision(m.kernel, x);
        ++votes[d >= 0.0 ? pm.pos_class : pm.neg_class];
    }
    int best = m.classes.front();
    for (int c : m.classes)  // ascending, so ties keep the smaller label
        if (votes[c] > votes[best]) best = c;
    return best;
}

int resolve_thread_count(int requested) {
    if (requested > 0) return requested;
    if (const char* env = std::getenv("BARCODE_COORDS_THREADS")) {
        int v = std::atoi(env);
        if (v > 0) return v;
    }
    unsigned hw = std::thread::hardware_concurrency();
    return hw ? static_cast<int>(hw) : 1;
}

CvReport cross_validate(const FeatureMatrix& X, const std::vector<int>& y, int folds,
                        const KernelParams& k, double C, std::uint64_t seed,
                        ScaleMode scale, int threads) {
    const int n = static_cast<int>(X.rows.size());
    if (folds <= 0 || folds > n)
        throw std::invalid_argument("cross_validate: folds must be in [1, samples]");

    // stratified assignment: shuffle within each class, deal round-robin
    std::vector<int> fold_of(n, 0);
    {
        std::map<int, std::vector<int>> by_class;
        for (int i = 0; i < n; ++i) by_class[y[i]].push_back(i);
        std::mt19937_64 rng(seed);
        int next = 0;
        for (auto& [cls, idxs] : by_class) {
            std::shuffle(idxs.begin(), idxs.end(), rng);
            for (int i : idxs) fold_of[i] = next++ % folds;
        }
    }

    std::vector<int> classes = y;
    std::sort(classes.begin(), classes.end());
    classes.erase(std::unique(classes.begin(), classes.end()), classes.end());
    std::map<int, int> class_row;
    for (std::size_t i = 0; i < classes.size(); ++i) class_row[classes[i]] = (int)i;

    CvReport rep;
    rep.folds = folds;
    rep.classes = classes;
    rep.fold_accuracy.assign(folds, 0.0);
    rep.confusion.assign(classes.size(), std::vector<int>(classes.size(), 0));

    Scaling global;
    if (scale == ScaleMode::Global) global = fit_scale(X);

    std::vector<std::vector<std::vector<int>>> fold_confusion(
        folds, std::vector<std::vector<int>>(classes.size(),
                                             std::vector<int>(classes.size(), 0)));

    auto run_fold = [&](int f) {
        FeatureMatrix train{X.names, {}}, test{X.names, {}};
        std::vector<int> ytrain, ytest;
        for (int i = 0; i < n; ++i) {
            if (fold_of[i] == f) {
                test.rows.push_back(X.rows[i]);
                ytest.push_back(y[i]);
            } else {
                train.rows.push_back(X.rows[i]);
                ytrain.push_back(y[i]);
            }
        }
        if (test.rows.empty()) {
            rep.fold_accuracy[f] = 1.0;
            return;
        }
        Scaling s = scale == ScaleMode::Global ? global : fit_scale(train);
        FeatureMatrix strain = apply_scale(s, train);
        FeatureMatrix stest = apply_scale(s, test);
        SvmModel model = train_svc(strain, ytrain, k, C);
        int correct = 0;
        for (std::size_t i = 0; i < stest.rows.size(); ++i) {
            int pred = predict(model, stest.rows[i]);
            if (pred == ytest[i]) ++correct;
            ++fold_confusion[f][class_row[ytest[i]]][class_row[pred]];
        }
        rep.fold_accuracy[f] = static_cast<double>(correct) / ytest.size();
    };

    const int nthreads = std::min(resolve_thread_count(threads), folds);
    if (nthreads <= 1) {
        for (int f = 0; f < folds; ++f) run_fold(f);
    } else {
        std::vector<std::thread> pool;
        std::atomic<int> next{0};
        for (int t = 0; t < nthreads; ++t)
            pool.emplace_back([&] {
                for (int f = next++; f < folds; f = next++) run_fold(f);
            });
        for (auto& th : pool) th.join();
    }

    for (int f = 0; f < folds; ++f)
        for (std::size_t a = 0; a < classes.size(); ++a)
            for (std::size_t b = 0; b < classes.size(); ++b)
                rep.confusion[a][b] += fold_confusion[f][a][b];
    rep.mean_accuracy =
        std::accumulate(rep.fold_accuracy.begin(), rep.fold_accuracy.end(), 0.0) /
        folds;
    return rep;
}

CvReport loocv(const FeatureMatrix& X, const std::vector<int>& y,
               const KernelParams& k, double C, ScaleMode scale, int threads) {
    return cross_validate(X, y, static_cast<int>(X.rows.size()), k, C, /*seed=*/0,
                          scale, threads);
}

void export_sparse(const FeatureMatrix& X, const std::vector<int>& y,
                   std::ostream& os) {
    os.precision(17);
    for (std::size_t i = 0; i < X.rows.size(); ++i) {
        os << y[i];
        for (std::size_t j = 0; j < X.rows[i].size(); ++j)
            if (X.rows[i][j] != 0.0) os << ' ' << (j + 1) << ':' << X.rows[i][j];
        os << '\n';
    }
}

void export_sparse(const FeatureMatrix& X, const std::vector<int>& y,
                   const std::string& path) {
    std::ofstream os(path);
    if (!os) throw std::runtime_error("export_sparse: cannot open " + path);
    export_sparse(X, y, os);
    if (!os.good()) throw std::runtime_error("export_sparse: write failed: " + path);
}

SparseDataset import_sparse(std::istream& is) {
    SparseDataset ds;
    std::string line;
    while (std::getline(is, line)) {
        if (line.empty()) continue;
        std::istringstream ls(line);
        int label;
        ls >> label;
        ds.labels.push_back(label);
        std::vector<std::pair<int, double>> feats;
        std::string tok;
        while (ls >> tok) {
            auto colon = tok.find(':');
            feats.emplace_back(std::stoi(tok.substr(0, colon)),
                               std::stod(tok.substr(colon + 1)));
        }
        ds.samples.push_back(std::move(feats));
    }
    return ds;
}

}  // namespace barcoords
