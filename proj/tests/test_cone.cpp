#include <doctest.h>

#include <cmath>

#include "cis/cone.hpp"
#include "helpers.hpp"

using namespace cis;
using Eigen::MatrixXd;
using Eigen::VectorXd;

namespace {
VectorXd vec(std::initializer_list<double> v) {
    VectorXd x(v.size());
    int i = 0;
    for (double e : v) x(i++) = e;
    return x;
}
}  // namespace

TEST_CASE("svec of I2 and an off-diagonal flip") {
    MatrixXd I2 = MatrixXd::Identity(2, 2);
    VectorXd v = svec(I2);
    CHECK(v.size() == 3);
    CHECK(v(0) == 1.0);
    CHECK(v(1) == 0.0);
    CHECK(v(2) == 1.0);

    MatrixXd X(2, 2);
    X << 0, 1, 1, 0;
    VectorXd w = svec(X);
    CHECK(w(0) == 0.0);
    CHECK(w(1) == doctest::Approx(std::sqrt(2.0)).epsilon(1e-15));
    CHECK(w(2) == 0.0);
}

TEST_CASE("svec keeps the trace inner product") {
    MatrixXd X(2, 2), Y(2, 2);
    X << 1, 2, 2, 3;
    Y << 4, 0, 0, 5;
    double trace = (X * Y).trace();  // oracle: direct trace
    CHECK(trace == doctest::Approx(19.0));
    CHECK(svec(X).dot(svec(Y)) == doctest::Approx(trace).epsilon(1e-14));
}

TEST_CASE("svec rejects asymmetric input; smat rejects bad lengths") {
    MatrixXd X(2, 2);
    X << 0, 1, 0, 0;
    CHECK_THROWS_AS((void)svec(X), std::invalid_argument);
    CHECK_THROWS_AS((void)smat(vec({1, 2})), DimensionError);
}

TEST_CASE("svec/smat round trip and inner-product preservation") {
    std::mt19937_64 rng(7);
    std::normal_distribution<double> g;
    for (int n = 1; n <= 5; ++n) {
        for (int rep = 0; rep < 20; ++rep) {
            MatrixXd R(n, n);
            for (int i = 0; i < n * n; ++i) R.data()[i] = g(rng);
            MatrixXd X = R + R.transpose(), Y = R * R.transpose();
            CHECK((smat(svec(X)) - X).cwiseAbs().maxCoeff() <= 1e-14);
            double scale = std::max(1.0, std::abs((X * Y).trace()));
            CHECK(std::abs(svec(X).dot(svec(Y)) - (X * Y).trace()) <= 1e-12 * scale);
        }
    }
}

TEST_CASE("membership examples across the four kinds") {
    CHECK(contains(ConeSpec::orthant(3), vec({1, 2, 3})));
    CHECK_FALSE(contains(ConeSpec::lorentz(3), vec({1, 1, 1})));

    // eigenvalues of [[1,2],[2,1]] via the 2x2 formula: 1 +- 2
    MatrixXd X(2, 2);
    X << 1, 2, 2, 1;
    double lo = 1.0 - 2.0;
    CHECK(lo < 0.0);
    CHECK_FALSE(contains(ConeSpec::psd(2), svec(X)));

    CHECK_FALSE(contains_interior(ConeSpec::orthant(2), vec({1, 0})));
    CHECK(contains_interior(ConeSpec::lorentz(3), vec({1, 0, 0})));
    CHECK(contains_interior(ConeSpec::psd(2), svec(MatrixXd::Identity(2, 2))));
}

TEST_CASE("zero vector is in every cone but never interior") {
    const ConeSpec cones[] = {ConeSpec::orthant(3), ConeSpec::lorentz(3),
                              ConeSpec::psd(2),
                              ConeSpec::polyhedral(MatrixXd::Identity(3, 3))};
    for (const auto& cone : cones) {
        VectorXd zero = VectorXd::Zero(cone.ambient_dim());
        CHECK(contains(cone, zero));
        CHECK_FALSE(contains_interior(cone, zero));
    }
}

TEST_CASE("dimension mismatches throw") {
    CHECK_THROWS_AS((void)contains(ConeSpec::orthant(3), vec({1, 2})), DimensionError);
    CHECK_THROWS_AS((void)dual_contains(ConeSpec::lorentz(3), vec({1})), DimensionError);
}

TEST_CASE("dual membership: self-dual kinds and polyhedral NNLS route") {
    CHECK(dual_contains(ConeSpec::orthant(3), vec({0, 0, 1})));
    CHECK(dual_contains(ConeSpec::polyhedral(MatrixXd::Identity(2, 2)), vec({1, 1})));

    MatrixXd M(2, 2);
    M << 1, 0, 1, 1;
    ConeSpec cone = ConeSpec::polyhedral(M);
    VectorXd y = vec({1, -1});
    // oracle: sample K = {x : Mx >= 0} and look for a separating point
    std::mt19937_64 rng(3);
    std::normal_distribution<double> g;
    bool separated = false;
    for (int k = 0; k < 2000 && !separated; ++k) {
        VectorXd x(2);
        x << g(rng), g(rng);
        if ((M * x).minCoeff() >= 0.0 && x.dot(y) < -1e-9) separated = true;
    }
    CHECK(separated);
    CHECK_FALSE(dual_contains(cone, y));
}

TEST_CASE("polyhedral construction validates pointedness") {
    MatrixXd flat(1, 2);
    flat << 1, 0;  // rank 1 < 2: contains a line
    CHECK_THROWS_AS((void)ConeSpec::polyhedral(flat), std::invalid_argument);
}

TEST_CASE("candidate attack sets") {
    CHECK(candidate_attack_set(ConeSpec::orthant(4)) == std::vector<int>({0, 1, 2, 3}));
    CHECK(candidate_attack_set(ConeSpec::lorentz(5)) == std::vector<int>({0}));
    // PSD in svec coordinates: only diagonal coordinates give PSD matrices;
    // oracle: lambda_min of smat(e_i)
    for (int i = 0; i < 3; ++i) {
        VectorXd e = VectorXd::Unit(3, i);
        Eigen::SelfAdjointEigenSolver<MatrixXd> es(smat(e));
        bool psd = es.eigenvalues().minCoeff() >= -1e-12;
        CHECK(psd == (i == 0 || i == 2));
    }
    CHECK(candidate_attack_set(ConeSpec::psd(2)) == std::vector<int>({0, 2}));

    // a narrow polyhedral cone containing no basis vector
    MatrixXd M(2, 2);
    M << 1, -0.9, -0.9, 1;
    CHECK_THROWS_AS((void)candidate_attack_set(ConeSpec::polyhedral(M)),
                    AssumptionViolated);
}

TEST_CASE("candidate sensor sets") {
    CHECK(candidate_sensor_set(ConeSpec::orthant(3), false) ==
          std::vector<int>({0, 1, 2}));
    CHECK(candidate_sensor_set(ConeSpec::orthant(3), true).empty());
    CHECK(candidate_sensor_set(ConeSpec::lorentz(3), true) == std::vector<int>({0}));
    CHECK(candidate_sensor_set(ConeSpec::psd(2), false) == std::vector<int>({0, 2}));
}

TEST_CASE("interior membership implies membership") {
    std::mt19937_64 rng(11);
    const ConeSpec cones[] = {ConeSpec::orthant(4), ConeSpec::lorentz(4),
                              ConeSpec::psd(3),
                              ConeSpec::polyhedral((MatrixXd(3, 2) << 1, 0, 0, 1, 1, 1)
                                                       .finished())};
    std::normal_distribution<double> g;
    for (const auto& cone : cones) {
        for (int k = 0; k < 200; ++k) {
            VectorXd x(cone.ambient_dim());
            for (int i = 0; i < x.size(); ++i) x(i) = g(rng);
            if (contains_interior(cone, x)) CHECK(contains(cone, x));
        }
    }
}

TEST_CASE("self-duality of orthant, Lorentz, and PSD") {
    std::mt19937_64 rng(13);
    std::normal_distribution<double> g;
    const ConeSpec cones[] = {ConeSpec::orthant(4), ConeSpec::lorentz(4),
                              ConeSpec::psd(3)};
    for (const auto& cone : cones) {
        for (int k = 0; k < 300; ++k) {
            VectorXd x(cone.ambient_dim());
            for (int i = 0; i < x.size(); ++i) x(i) = g(rng);
            CHECK(contains(cone, x) == dual_contains(cone, x));
        }
    }
}

TEST_CASE("strictly dual vectors pair positively with nonzero cone elements") {
    std::mt19937_64 rng(17);
    std::normal_distribution<double> g;
    std::uniform_real_distribution<double> pos(0.1, 2.0);

    SUBCASE("self-dual kinds") {
        const ConeSpec cones[] = {ConeSpec::orthant(4), ConeSpec::lorentz(4),
                                  ConeSpec::psd(2)};
        for (const auto& cone : cones) {
            for (int k = 0; k < 200; ++k) {
                VectorXd y = sample_point(cone, rng);
                if (!contains_interior(cone, y)) continue;
                VectorXd x = (k % 2) ? sample_point(cone, rng) : sample_boundary(cone, rng);
                if (x.norm() < 1e-12) continue;
                CHECK(y.dot(x) > 0.0);
            }
        }
    }

    SUBCASE("polyhedral with square invertible facets") {
        MatrixXd M(2, 2);
        M << 2, -1, -1, 2;
        ConeSpec cone = ConeSpec::polyhedral(M);
        for (int k = 0; k < 200; ++k) {
            VectorXd lambda(2);
            lambda << pos(rng), pos(rng);
            VectorXd y = M.transpose() * lambda;  // strictly dual
            VectorXd x = (k % 2) ? sample_point(cone, rng) : sample_boundary(cone, rng);
            if (x.norm() < 1e-12) continue;
            CHECK(y.dot(x) > 0.0);
        }
    }
}

TEST_CASE("cone samplers land where they claim") {
    std::mt19937_64 rng(23);
    const ConeSpec cones[] = {ConeSpec::orthant(4), ConeSpec::lorentz(4),
                              ConeSpec::psd(3),
                              ConeSpec::polyhedral((MatrixXd(3, 2) << 1, 0, 0, 1, 1, 1)
                                                       .finished())};
    for (const auto& cone : cones) {
        for (int k = 0; k < 100; ++k) {
            CHECK(contains(cone, sample_point(cone, rng)));
            VectorXd b = sample_boundary(cone, rng);
            CHECK(contains(cone, b, 1e-7));
            CHECK_FALSE(contains_interior(cone, b, 1e-7));
            auto [x, y] = sample_complementary_pair(cone, rng);
            CHECK(contains(cone, x, 1e-7));
            CHECK(dual_contains(cone, y, 1e-7));
            CHECK(std::abs(x.dot(y)) <= 1e-9 * std::max(1.0, x.norm() * y.norm()));
        }
    }
}

TEST_CASE("nnls satisfies the KKT conditions") {
    std::mt19937_64 rng(29);
    std::normal_distribution<double> g;
    for (int rep = 0; rep < 50; ++rep) {
        MatrixXd A(6, 4);
        VectorXd b(6);
        for (int i = 0; i < A.size(); ++i) A.data()[i] = g(rng);
        for (int i = 0; i < 6; ++i) b(i) = g(rng);
        VectorXd x = nnls(A, b);
        CHECK(x.minCoeff() >= 0.0);
        VectorXd w = A.transpose() * (b - A * x);
        for (int i = 0; i < 4; ++i) {
            if (x(i) > 1e-10)
                CHECK(std::abs(w(i)) <= 1e-8);
            else
                CHECK(w(i) <= 1e-8);
        }
    }
}
