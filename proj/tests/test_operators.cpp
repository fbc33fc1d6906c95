#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "qisect/operators.hpp"
#include "qisect/profile.hpp"
#include "test_helpers.hpp"

#include <cmath>
#include <random>

using namespace qisect;

TEST_CASE("amplitudes: equal quarters") {
    const auto amps = amplitudes_from_profile(make_profile(4, 1, 1, 1));
    CHECK(amps.alpha == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(amps.beta == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(amps.gamma == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(amps.delta == doctest::Approx(0.5).epsilon(1e-15));
}

TEST_CASE("amplitudes: everything is a target") {
    const auto amps = amplitudes_from_profile(make_profile(100, 0, 0, 100));
    CHECK(amps.alpha == 0.0);
    CHECK(amps.beta == 0.0);
    CHECK(amps.gamma == 1.0);
    CHECK(amps.delta == 0.0);
}

TEST_CASE("amplitudes: direct formula evaluation") {
    const auto amps = amplitudes_from_profile(make_profile(1024, 10, 12, 4));
    CHECK(amps.gamma == 0.0625); // exactly representable
    CHECK(amps.alpha == doctest::Approx(std::sqrt(10.0 / 1024.0)).epsilon(1e-16));
    CHECK(amps.beta == doctest::Approx(std::sqrt(12.0 / 1024.0)).epsilon(1e-16));
    CHECK(amps.delta == doctest::Approx(std::sqrt(998.0 / 1024.0)).epsilon(1e-16));
}

TEST_CASE("profile validation") {
    CHECK_THROWS_AS(amplitudes_from_profile(SetProfile{0, 0, 0, 0, 0}), std::invalid_argument);
    CHECK_THROWS_AS(make_profile(10, 6, 6, 6), std::invalid_argument);
    CHECK_THROWS_AS(make_profile(10, -1, 2, 3), std::invalid_argument);
    SetProfile bad{10, 1, 1, 1, 5}; // sums to 8
    CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
}

TEST_CASE("amplitudes are normalized for random profiles") {
    std::mt19937_64 rng(2024);
    for (int i = 0; i < 200; ++i) {
        const auto p = test_helpers::random_profile(rng, 1 + static_cast<std::int64_t>(rng() % 100000));
        const auto amps = amplitudes_from_profile(p);
        CHECK(std::abs(amps.squared_norm() - 1.0) <= 1e-12);
    }
}

TEST_CASE("reflections are involutions") {
    std::mt19937_64 rng(7);
    for (int i = 0; i < 50; ++i) {
        const auto amps = test_helpers::random_amps(rng);
        auto [ia, ib, is] = build_reflection_matrices(amps);
        for (const auto* op : {&ia, &ib, &is}) {
            const Matrix4<double> sq = op->entries * op->entries;
            CHECK((sq - Matrix4<double>::Identity()).cwiseAbs().maxCoeff() <= 1e-12);
        }
    }
}

TEST_CASE("source reflection for |s> = |t>") {
    auto [ia, ib, is] = build_reflection_matrices(AmplitudeVector<double>{0, 0, 1, 0});
    Matrix4<double> expected = Matrix4<double>::Identity();
    expected(2, 2) = -1.0;
    CHECK((is.entries - expected).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("source reflection for equal quarters") {
    auto [ia, ib, is] = build_reflection_matrices(AmplitudeVector<double>{0.5, 0.5, 0.5, 0.5});
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j)
            CHECK(is.entries(i, j) == doctest::Approx((i == j ? 1.0 : 0.0) - 0.5).epsilon(1e-15));
}

TEST_CASE("search operator: A = B embedding reduces to two Grover steps") {
    const double gamma = 0.1;
    const AmplitudeVector<double> amps{0, 0, gamma, std::sqrt(1 - gamma * gamma)};
    const auto v = build_search_operator(amps);
    const double expected = 1.0 - 8.0 * gamma * gamma * (1.0 - gamma * gamma);
    CHECK(v.entries(2, 2) == doctest::Approx(expected).epsilon(1e-14));
    CHECK(v.entries(2, 2) == doctest::Approx(std::cos(4.0 * std::asin(gamma))).epsilon(1e-14));
}

TEST_CASE("search operator with no marked amplitude") {
    const AmplitudeVector<double> amps{0, 0, 0, 1};
    const auto v = build_search_operator(amps);
    // nothing is rotated toward the target: the |t> and |p> sectors are fixed
    CHECK(v.entries(2, 2) == 1.0);
    CHECK(v.entries(3, 3) == 1.0);
    const Vector4<double> s = amps.as_vector();
    CHECK(((v.entries * s) - s).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("search operator matches the explicit reflection product") {
    const auto amps = amplitudes_from_profile(make_profile(1024, 10, 12, 4));
    const auto v = build_search_operator(amps);
    const auto oracle =
        test_helpers::oracle_search_operator(amps.alpha, amps.beta, amps.gamma, amps.delta);
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j)
            CHECK(std::abs(v.entries(i, j) - oracle[i][j]) <= 1e-15);
}

TEST_CASE("closed form, orthogonality, checkerboard over 1000 random profiles") {
    std::mt19937_64 rng(99);
    double worst_closed = 0.0, worst_orth = 0.0, worst_cb = 0.0;
    for (int i = 0; i < 1000; ++i) {
        const auto amps = test_helpers::random_amps(rng);
        const Matrix4<double> product = product_search_operator(amps);
        const Matrix4<double> closed = closed_form_search_operator(amps);
        worst_closed = std::max(worst_closed, (product - closed).cwiseAbs().maxCoeff());
        worst_orth = std::max(worst_orth, orthogonality_deviation(product));
        worst_cb = std::max(worst_cb, checkerboard_deviation(product));
    }
    CHECK(worst_closed <= 1e-12);
    CHECK(worst_orth <= 1e-12);
    CHECK(worst_cb <= 1e-12);
}

TEST_CASE("closed-form mismatch is reported with the offending entries") {
    std::mt19937_64 rng(5);
    const auto amps = test_helpers::random_amps(rng);
    const Matrix4<double> product = product_search_operator(amps);
    Matrix4<double> corrupted = closed_form_search_operator(amps);
    corrupted(0, 1) = -corrupted(0, 1);
    CHECK_THROWS_WITH_AS(verify_closed_form_agreement(product, corrupted, 1e-12),
                         doctest::Contains("V(1,2)"), ModelError);
}

TEST_CASE("checkerboard deviation trips on an injected sign error") {
    std::mt19937_64 rng(6);
    const auto amps = test_helpers::random_amps(rng);
    Matrix4<double> v = product_search_operator(amps);
    CHECK(checkerboard_deviation(v) <= 1e-12);
    v(0, 1) = -v(0, 1);
    CHECK(checkerboard_deviation(v) > 1e-6);
}
