#include <doctest.h>
#include <nlohmann/json.hpp>

#include "noma/capacity.hpp"
#include "test_systems.hpp"

using nlohmann::json;
using namespace noma;

TEST_CASE("constructor validates dimensions and positivity") {
    Matrix h = Matrix::Ones(2, 2);
    CHECK_THROWS_AS(SystemModel(h, RVector::Ones(3), 0.5), std::invalid_argument);
    CHECK_THROWS_AS(SystemModel(h, RVector::Ones(2), 0.0), std::invalid_argument);
    CHECK_THROWS_AS(SystemModel(h, RVector::Ones(2), -1.0), std::invalid_argument);
    RVector bad = RVector::Ones(2);
    bad[1] = 0.0;
    CHECK_THROWS_AS(SystemModel(h, bad, 0.5), std::invalid_argument);
    CHECK_THROWS_AS(SystemModel(Matrix(0, 0), RVector(0), 0.5), std::invalid_argument);
}

TEST_CASE("effective channel folds the weights in") {
    Matrix h(2, 2);
    h << Complex(1, 0), Complex(2, 0), Complex(3, 0), Complex(4, 0);
    RVector w(2);
    w << 2.0, 0.5;
    const SystemModel sys(h, w, 1.0);
    CHECK(sys.effective_channel()(0, 0) == Complex(2, 0));
    CHECK(sys.effective_channel()(1, 0) == Complex(6, 0));
    CHECK(sys.effective_channel()(0, 1) == Complex(1, 0));
    CHECK(sys.effective_channel()(1, 1) == Complex(2, 0));
    CHECK(sys.column_energy(0) == doctest::Approx(40.0));
    CHECK(sys.column_energy(1) == doctest::Approx(5.0));
}

TEST_CASE("weight folding equals channel-column scaling") {
    std::mt19937_64 rng = substream(11, 0);
    const SystemModel base = noma_test::random_system(rng, 3, 4, 0.7);
    RVector w(4);
    w << 0.5, 2.0, 1.3, 0.9;
    const SystemModel weighted(base.channel(), w, 0.7);
    Matrix scaled = base.channel();
    for (int c = 0; c < 4; ++c) {
        scaled.col(c) *= w[c];
    }
    const SystemModel folded(scaled, RVector::Ones(4), 0.7);
    CHECK(sum_capacity(weighted) == doctest::Approx(sum_capacity(folded)).epsilon(1e-12));
}

TEST_CASE("gram matrix is Hermitian with eigenvalues >= 1") {
    std::mt19937_64 rng = substream(12, 0);
    for (int k = 0; k < 10; ++k) {
        const SystemModel sys = noma_test::random_system(rng, 2 + k % 4, 2 + (k * 7) % 5, 0.5);
        const Matrix b = gram(sys);
        CHECK((b - b.adjoint()).cwiseAbs().maxCoeff() < 1e-12);
        Eigen::SelfAdjointEigenSolver<Matrix> es(b);
        CHECK(es.eigenvalues().minCoeff() >= 1.0 - 1e-10);
    }
}

TEST_CASE("json parsing accepts bare reals and [re, im] pairs") {
    const json cfg = json::parse(R"({
        "channel": [[1.0, [0.0, 2.0]], [[-1.0, 0.5], 3.0]],
        "noise_variance": 0.5
    })");
    const SystemModel sys = build_system(cfg);
    CHECK(sys.num_rx() == 2);
    CHECK(sys.num_users() == 2);
    CHECK(sys.channel()(0, 1) == Complex(0.0, 2.0));
    CHECK(sys.channel()(1, 0) == Complex(-1.0, 0.5));
    CHECK(sys.weights()[0] == 1.0);
}

TEST_CASE("json parsing rejects malformed configs with named fields") {
    const json ragged =
        json::parse(R"({"channel": [[1.0, 2.0], [3.0]], "noise_variance": 0.5})");
    CHECK_THROWS_WITH_AS(build_system(ragged),
                         doctest::Contains("system.channel"), std::invalid_argument);

    const json unknown =
        json::parse(R"({"channel": [[1.0]], "noise_variance": 0.5, "extra": 1})");
    CHECK_THROWS_WITH_AS(build_system(unknown),
                         doctest::Contains("extra"), std::invalid_argument);

    const json missing = json::parse(R"({"channel": [[1.0]]})");
    CHECK_THROWS_WITH_AS(build_system(missing),
                         doctest::Contains("noise_variance"), std::invalid_argument);

    const json badw = json::parse(
        R"({"channel": [[1.0, 1.0]], "weights": [1.0, -2.0], "noise_variance": 0.5})");
    CHECK_THROWS_WITH_AS(build_system(badw),
                         doctest::Contains("system.weights"), std::invalid_argument);
}
