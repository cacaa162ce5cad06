#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>
#include <sstream>

#include "barcoords/learn.hpp"
#include "qp_oracle.hpp"

using namespace barcoords;

TEST_CASE("kernel evaluation") {
    KernelParams rbf{KernelKind::Gaussian, 8.0, 0.0, 0};
    std::vector<double> u{1.0, 2.0};
    CHECK(kernel_eval(rbf, u, u) == 1.0);

    // ||u-v||^2 = ln2/8 -> exp(-8 * ln2/8) = 1/2
    std::vector<double> v{1.0 + std::sqrt(std::log(2.0) / 8.0), 2.0};
    CHECK(kernel_eval(rbf, u, v) == doctest::Approx(0.5).epsilon(1e-12));

    KernelParams poly{KernelKind::Polynomial, 2.0, 2.0, 3};
    std::vector<double> a{1.0, 0.0}, b{0.0, 1.0};  // dot = 0
    CHECK(kernel_eval(poly, a, b) == 8.0);

    CHECK_THROWS_AS(kernel_eval(rbf, {1.0}, {1.0, 2.0}), std::invalid_argument);
}

TEST_CASE("separable pair with a linear-like kernel") {
    FeatureMatrix X{{"x"}, {{0.0}, {1.0}}};
    std::vector<int> y{-1, +1};
    KernelParams lin{KernelKind::Polynomial, 1.0, 0.0, 1};
    SvmModel m = train_svc(X, y, lin, 10.0);
    CHECK(predict(m, {0.0}) == -1);
    CHECK(predict(m, {1.0}) == +1);
}

TEST_CASE("XOR with the gaussian kernel") {
    std::vector<std::vector<double>> pts{{0, 0}, {1, 1}, {0, 1}, {1, 0}};
    std::vector<int> y{+1, +1, -1, -1};
    KernelParams k{KernelKind::Gaussian, 8.0, 0.0, 0};
    BinarySvm svm = train_binary(pts, y, k, 1000.0);
    for (int i = 0; i < 4; ++i)
        CHECK((svm.decision(k, pts[i]) >= 0 ? +1 : -1) == y[i]);

    auto oracle = qp_oracle::solve(pts, y, k, 1000.0);
    CHECK(svm.objective ==
          doctest::Approx(oracle.objective).epsilon(1e-6));
}

TEST_CASE("dual feasibility invariants") {
    std::mt19937_64 rng(41);
    std::uniform_real_distribution<double> u(-2, 2);
    for (int t = 0; t < 30; ++t) {
        int n = 4 + int(rng() % 5);
        std::vector<std::vector<double>> X;
        std::vector<int> y;
        for (int i = 0; i < n; ++i) {
            X.push_back({u(rng), u(rng)});
            y.push_back(i % 2 == 0 ? +1 : -1);
        }
        double C = 10.0;
        KernelParams k{KernelKind::Gaussian, 1.5, 0.0, 0};
        BinarySvm svm = train_binary(X, y, k, C);
        double lin = 0.0;
        for (int i = 0; i < n; ++i) {
            CHECK(svm.alpha[i] >= 0.0);
            CHECK(svm.alpha[i] <= C);
            lin += svm.alpha[i] * y[i];
        }
        CHECK(std::abs(lin) < 1e-9);
        CHECK(qp_oracle::kkt_violation(X, y, k, C, svm.alpha) <= 1e-3);
    }
}

TEST_CASE("SMO objective matches the brute-force QP oracle") {
    std::mt19937_64 rng(1234);
    std::uniform_real_distribution<double> u(-1.5, 1.5);
    for (int t = 0; t < 60; ++t) {
        int n = 2 + int(rng() % 5);
        std::vector<std::vector<double>> X;
        std::vector<int> y;
        for (int i = 0; i < n; ++i) {
            X.push_back({u(rng), u(rng)});
            y.push_back(i < (n + 1) / 2 ? +1 : -1);
        }
        KernelParams k;
        if (rng() % 2) {
            k = {KernelKind::Gaussian, 0.5 + (rng() % 8) * 0.5, 0.0, 0};
        } else {
            k = {KernelKind::Polynomial, 1.0, 1.0, 2};
        }
        double C = std::vector<double>{1.0, 10.0, 100.0}[rng() % 3];
        BinarySvm svm = train_binary(X, y, k, C, 1e-4);
        auto oracle = qp_oracle::solve(X, y, k, C);
        CHECK(svm.objective ==
              doctest::Approx(oracle.objective).epsilon(1e-4));
    }
}

TEST_CASE("kernel matrix symmetry and PSD spot check") {
    std::mt19937_64 rng(9);
    std::uniform_real_distribution<double> u(-1, 1);
    std::vector<std::vector<double>> X;
    for (int i = 0; i < 12; ++i) X.push_back({u(rng), u(rng), u(rng)});
    KernelParams k{KernelKind::Gaussian, 2.0, 0.0, 0};
    Eigen::MatrixXd K(12, 12);
    for (int i = 0; i < 12; ++i)
        for (int j = 0; j < 12; ++j) K(i, j) = kernel_eval(k, X[i], X[j]);
    CHECK((K - K.transpose()).norm() < 1e-12);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(K);
    CHECK(es.eigenvalues().minCoeff() > -1e-8);
}

TEST_CASE("prediction invariant under training-order permutation") {
    std::mt19937_64 rng(55);
    std::uniform_real_distribution<double> u(-1, 1);
    FeatureMatrix X{{"a", "b"}, {}};
    std::vector<int> y;
    for (int i = 0; i < 24; ++i) {
        double cx = (i % 3) * 3.0;
        X.rows.push_back({cx + 0.3 * u(rng), 0.3 * u(rng)});
        y.push_back(i % 3);
    }
    KernelParams k{KernelKind::Gaussian, 1.0, 0.0, 0};
    SvmModel m1 = train_svc(X, y, k, 100.0);

    std::vector<int> perm(24);
    for (int i = 0; i < 24; ++i) perm[i] = i;
    std::shuffle(perm.begin(), perm.end(), rng);
    FeatureMatrix X2{X.names, {}};
    std::vector<int> y2;
    for (int i : perm) {
        X2.rows.push_back(X.rows[i]);
        y2.push_back(y[i]);
    }
    SvmModel m2 = train_svc(X2, y2, k, 100.0);
    for (int t = 0; t < 50; ++t) {
        std::vector<double> p{4.0 * u(rng) + 3.0, u(rng)};
        CHECK(predict(m1, p) == predict(m2, p));
    }
}

TEST_CASE("single class rejected") {
    FeatureMatrix X{{"a"}, {{0.0}, {1.0}}};
    CHECK_THROWS_AS(train_svc(X, {3, 3}, KernelParams{}, 1.0),
                    std::invalid_argument);
}

TEST_CASE("three-way tie votes for the smallest label") {
    // one pair model per class pair, arranged so each class wins once
    SvmModel m;
    m.classes = {1, 2, 3};
    // empty machines with biases deciding the vote
    auto make = [](int pos, int neg, double bias) {
        SvmModel::PairModel pm;
        pm.pos_class = pos;
        pm.neg_class = neg;
        pm.svm.bias = bias;
        return pm;
    };
    m.pairs = {make(1, 2, 1.0), make(2, 3, 1.0), make(1, 3, -1.0)};
    CHECK(predict(m, {0.0}) == 1);  // votes: 1,2,3 each get one
}

TEST_CASE("cross-validation on separable clusters") {
    std::mt19937_64 rng(71);
    std::uniform_real_distribution<double> u(-0.4, 0.4);
    FeatureMatrix X{{"a", "b"}, {}};
    std::vector<int> y;
    for (int i = 0; i < 60; ++i) {
        int cls = i % 2;
        X.rows.push_back({cls * 5.0 + u(rng), u(rng)});
        y.push_back(cls);
    }
    KernelParams k{KernelKind::Gaussian, 2.0, 0.0, 0};
    auto rep = cross_validate(X, y, 10, k, 100.0, 42);
    CHECK(rep.mean_accuracy == 1.0);
    CHECK(rep.folds == 10);
    // confusion row sums = class counts
    CHECK(rep.confusion[0][0] + rep.confusion[0][1] == 30);
    CHECK(rep.confusion[1][0] + rep.confusion[1][1] == 30);
}

TEST_CASE("random labels give chance accuracy") {
    std::mt19937_64 rng(101);
    std::uniform_real_distribution<double> u(-1, 1);
    FeatureMatrix X{{"a", "b"}, {}};
    std::vector<int> y;
    for (int i = 0; i < 200; ++i) {
        X.rows.push_back({u(rng), u(rng)});
        y.push_back(i % 2);  // balanced, but unrelated to the features
    }
    KernelParams k{KernelKind::Gaussian, 1.0, 0.0, 0};
    auto rep = cross_validate(X, y, 10, k, 1.0, 7);
    CHECK(rep.mean_accuracy > 0.4);
    CHECK(rep.mean_accuracy < 0.6);
}

TEST_CASE("loocv equals cross_validate with n folds") {
    std::mt19937_64 rng(81);
    std::uniform_real_distribution<double> u(-0.3, 0.3);
    FeatureMatrix X{{"a"}, {}};
    std::vector<int> y;
    for (int i = 0; i < 14; ++i) {
        X.rows.push_back({(i % 2) * 4.0 + u(rng)});
        y.push_back(i % 2);
    }
    KernelParams k{KernelKind::Gaussian, 1.0, 0.0, 0};
    auto a = loocv(X, y, k, 10.0);
    auto b = cross_validate(X, y, 14, k, 10.0, 0);
    CHECK(a.mean_accuracy == b.mean_accuracy);
    CHECK(a.mean_accuracy == 1.0);

    // duplicated separable data stays at 100%
    FeatureMatrix X2{X.names, {}};
    std::vector<int> y2;
    for (int i = 0; i < 14; ++i)
        for (int rep = 0; rep < 2; ++rep) {
            X2.rows.push_back(X.rows[i]);
            y2.push_back(y[i]);
        }
    CHECK(loocv(X2, y2, k, 10.0).mean_accuracy == 1.0);
}

TEST_CASE("folds bounds are enforced") {
    FeatureMatrix X{{"a"}, {{0.0}, {1.0}}};
    CHECK_THROWS_AS(cross_validate(X, {0, 1}, 3, KernelParams{}, 1.0, 0),
                    std::invalid_argument);
}

TEST_CASE("sparse export format") {
    FeatureMatrix X{{"a", "b"}, {{0.0, 0.5}}};
    std::stringstream ss;
    export_sparse(X, {3}, ss);
    CHECK(ss.str() == "3 2:0.5\n");

    std::stringstream empty;
    export_sparse(FeatureMatrix{{"a"}, {}}, {}, empty);
    CHECK(empty.str().empty());
}

TEST_CASE("sparse round trip preserves nonzeros") {
    std::mt19937_64 rng(19);
    std::uniform_real_distribution<double> u(-3, 3);
    FeatureMatrix X{{"a", "b", "c", "d"}, {}};
    std::vector<int> y;
    for (int i = 0; i < 20; ++i) {
        std::vector<double> row;
        for (int j = 0; j < 4; ++j) row.push_back(rng() % 3 == 0 ? 0.0 : u(rng));
        X.rows.push_back(row);
        y.push_back(int(rng() % 5));
    }
    std::stringstream ss;
    export_sparse(X, y, ss);
    auto ds = import_sparse(ss);
    REQUIRE(ds.samples.size() == 20);
    CHECK(ds.labels == y);
    for (int i = 0; i < 20; ++i) {
        int prev = 0;
        for (auto [idx, val] : ds.samples[i]) {
            CHECK(idx > prev);  // strictly increasing 1-based indices
            prev = idx;
            CHECK(val == X.rows[i][idx - 1]);
            CHECK(val != 0.0);
        }
        int nonzeros = 0;
        for (double v : X.rows[i]) nonzeros += v != 0.0;
        CHECK(int(ds.samples[i].size()) == nonzeros);
    }
}
