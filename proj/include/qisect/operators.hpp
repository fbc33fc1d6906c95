#pragma once

#include "qisect/profile.hpp"
#include "qisect/tolerances.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>
#include <string>
#include <tuple>

namespace qisect {

/// Raised when two routes that must agree (e.g. the closed-form operator
/// table vs the reflection product) disagree beyond tolerance. Signals a
/// model inconsistency, not a user error.
class ModelError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

enum class OperatorLabel { I_A, I_B, I_s, V };

inline const char* to_string(OperatorLabel label) {
    switch (label) {
        case OperatorLabel::I_A: return "I_A";
        case OperatorLabel::I_B: return "I_B";
        case OperatorLabel::I_s: return "I_s";
        case OperatorLabel::V: return "V";
    }
    return "?";
}

/// A real operator restricted to the invariant 4D subspace, in the fixed
/// (A-only, B-only, common, neither) basis.
template <typename Scalar = double>
struct SubspaceOperator {
    Matrix4<Scalar> entries = Matrix4<Scalar>::Identity();
    OperatorLabel label = OperatorLabel::V;
};

/// Max |M^T M - I| entry: deviation from orthogonality.
template <typename Scalar>
Scalar orthogonality_deviation(const Matrix4<Scalar>& m) {
    return (m.transpose() * m - Matrix4<Scalar>::Identity()).cwiseAbs().maxCoeff();
}

/// Max deviation from the sign pattern M^T_ij = (-1)^{i+j} M_ij
/// (1-based indices), which reduces the 4x4 eigenproblem to two
/// symmetric 2x2 problems.
template <typename Scalar>
Scalar checkerboard_deviation(const Matrix4<Scalar>& m) {
    using std::abs;
    Scalar dev = 0;
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j) {
            const Scalar sign = ((i + j) % 2 == 0) ? Scalar(1) : Scalar(-1);
            dev = std::max(dev, abs(m(j, i) - sign * m(i, j)));
        }
    return dev;
}

/// The three reflections in the subspace basis: the set-A phase flip,
/// the set-B phase flip, and the reflection through the source state.
template <typename Scalar>
std::tuple<SubspaceOperator<Scalar>, SubspaceOperator<Scalar>, SubspaceOperator<Scalar>>
build_reflection_matrices(const AmplitudeVector<Scalar>& amps) {
    amps.validate();
    SubspaceOperator<Scalar> ia{Matrix4<Scalar>::Identity(), OperatorLabel::I_A};
    ia.entries.diagonal() << Scalar(-1), Scalar(1), Scalar(-1), Scalar(1);
    SubspaceOperator<Scalar> ib{Matrix4<Scalar>::Identity(), OperatorLabel::I_B};
    ib.entries.diagonal() << Scalar(1), Scalar(-1), Scalar(-1), Scalar(1);
    const Vector4<Scalar> c = amps.as_vector();
    SubspaceOperator<Scalar> is{
        Matrix4<Scalar>::Identity() - Scalar(2) * (c * c.transpose()),
        OperatorLabel::I_s};
    return {ia, ib, is};
}

/// Search operator as the literal reflection product I_s I_B I_s I_A.
template <typename Scalar>
Matrix4<Scalar> product_search_operator(const AmplitudeVector<Scalar>& amps) {
    auto [ia, ib, is] = build_reflection_matrices(amps);
    return is.entries * ib.entries * is.entries * ia.entries;
}

/// Search operator from the closed-form entry table, written in terms of
/// r = beta^2 + gamma^2 and l_k = 1 - k r.
template <typename Scalar>
Matrix4<Scalar> closed_form_search_operator(const AmplitudeVector<Scalar>& amps) {
    const Scalar a = amps.alpha, b = amps.beta, g = amps.gamma, d = amps.delta;
    const Scalar r = b * b + g * g;
    const Scalar l1 = Scalar(1) - r;
    const Scalar l2 = Scalar(1) - Scalar(2) * r;
    Matrix4<Scalar> v;
    v << Scalar(8) * a * a * r - Scalar(1), Scalar(4) * a * b * l2,
         Scalar(-4) * a * g * l2,           Scalar(-8) * a * d * r,
         Scalar(-4) * a * b * l2,           Scalar(8) * b * b * l1 - Scalar(1),
         Scalar(-8) * b * g * l1,           Scalar(4) * b * d * l2,
         Scalar(-4) * a * g * l2,           Scalar(8) * b * g * l1,
         Scalar(1) - Scalar(8) * g * g * l1, Scalar(4) * g * d * l2,
         Scalar(8) * a * d * r,             Scalar(4) * b * d * l2,
         Scalar(-4) * g * d * l2,           Scalar(1) - Scalar(8) * d * d * r;
    return v;
}

/// Throws a ModelError naming every entry of `closed` that differs from
/// `product` by more than `tol`.
template <typename Scalar>
void verify_closed_form_agreement(const Matrix4<Scalar>& product,
                                  const Matrix4<Scalar>& closed, Scalar tol) {
    using std::abs;
    std::ostringstream bad;
    int mismatches = 0;
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j) {
            const Scalar dev = abs(product(i, j) - closed(i, j));
            if (dev > tol) {
                if (mismatches++) bad << ", ";
                bad << "V(" << i + 1 << "," << j + 1 << ") product=" << product(i, j)
                    << " closed=" << closed(i, j);
            }
        }
    if (mismatches)
        throw ModelError("closed-form search operator disagrees with the reflection product: " +
                         bad.str());
}

/// Search operator V = I_s I_B I_s I_A. Computed both as the reflection
/// product and from the closed-form table; the two must agree entrywise.
/// The product is the value returned.
template <typename Scalar>
SubspaceOperator<Scalar> build_search_operator(
    const AmplitudeVector<Scalar>& amps,
    const Tolerances& tol = default_tolerances()) {
    const Matrix4<Scalar> product = product_search_operator(amps);
    const Matrix4<Scalar> closed = closed_form_search_operator(amps);
    verify_closed_form_agreement(product, closed, static_cast<Scalar>(tol.closed_form_abs));
    return SubspaceOperator<Scalar>{product, OperatorLabel::V};
}

} // namespace qisect
