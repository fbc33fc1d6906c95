#pragma once

#include <Eigen/Core>

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>

namespace qisect {

template <typename Scalar>
using Vector4 = Eigen::Matrix<Scalar, 4, 1>;

template <typename Scalar>
using Matrix4 = Eigen::Matrix<Scalar, 4, 4>;

/// Cardinalities of the four disjoint classes that partition the search
/// space: elements only in A, only in B, in both, and in neither.
struct SetProfile {
    std::int64_t n_total = 0;
    std::int64_t count_a_only = 0;
    std::int64_t count_b_only = 0;
    std::int64_t count_common = 0;
    std::int64_t count_neither = 0;

    std::int64_t count_a() const { return count_a_only + count_common; }
    std::int64_t count_b() const { return count_b_only + count_common; }

    void validate() const {
        if (n_total < 1)
            throw std::invalid_argument("SetProfile: n_total must be >= 1");
        if (count_a_only < 0 || count_b_only < 0 || count_common < 0 || count_neither < 0)
            throw std::invalid_argument("SetProfile: counts must be non-negative");
        if (count_a_only + count_b_only + count_common + count_neither != n_total)
            throw std::invalid_argument(
                "SetProfile: class counts sum to " +
                std::to_string(count_a_only + count_b_only + count_common + count_neither) +
                ", expected n_total = " + std::to_string(n_total));
    }
};

/// Builds a profile from the three requested class sizes, deriving the
/// "neither" count from the remainder.
inline SetProfile make_profile(std::int64_t n_total, std::int64_t a_only,
                               std::int64_t b_only, std::int64_t common) {
    SetProfile p{n_total, a_only, b_only, common,
                 n_total - a_only - b_only - common};
    p.validate();
    return p;
}

/// Coordinates of the uniform source state in the invariant 4D subspace,
/// ordered (A-only, B-only, common, neither). The third entry is always
/// the target-state amplitude.
template <typename Scalar = double>
struct AmplitudeVector {
    Scalar alpha = 0;
    Scalar beta = 0;
    Scalar gamma = 0;
    Scalar delta = 0;

    Vector4<Scalar> as_vector() const {
        return Vector4<Scalar>(alpha, beta, gamma, delta);
    }

    Scalar squared_norm() const {
        return alpha * alpha + beta * beta + gamma * gamma + delta * delta;
    }

    void validate(Scalar tol = Scalar(1e-12)) const {
        using std::abs;
        if (alpha < Scalar(0) || beta < Scalar(0) || gamma < Scalar(0) || delta < Scalar(0) ||
            alpha > Scalar(1) || beta > Scalar(1) || gamma > Scalar(1) || delta > Scalar(1))
            throw std::invalid_argument("AmplitudeVector: entries must lie in [0, 1]");
        if (abs(squared_norm() - Scalar(1)) > tol)
            throw std::invalid_argument("AmplitudeVector: not normalized");
    }
};

/// Source-state amplitudes (sqrt of each class fraction) for a profile.
template <typename Scalar = double>
AmplitudeVector<Scalar> amplitudes_from_profile(const SetProfile& profile) {
    profile.validate();
    const Scalar n = static_cast<Scalar>(profile.n_total);
    using std::sqrt;
    return AmplitudeVector<Scalar>{
        sqrt(static_cast<Scalar>(profile.count_a_only) / n),
        sqrt(static_cast<Scalar>(profile.count_b_only) / n),
        sqrt(static_cast<Scalar>(profile.count_common) / n),
        sqrt(static_cast<Scalar>(profile.count_neither) / n)};
}

} // namespace qisect
