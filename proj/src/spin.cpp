#include "qmodal/spin.hpp"

#include <algorithm>
#include <cmath>

namespace qmodal {

namespace {

constexpr int kMaxTwoJ = 50;  // j <= 25

struct Quaternion {
    double w, x, y, z;
};

Quaternion quaternion_from_rotation(const RotationVector& u) {
    const double angle = u.angle();
    if (angle < 1e-300) return Quaternion{1.0, 0.0, 0.0, 0.0};
    const double half = 0.5 * angle;
    const double s = std::sin(half) / angle;
    return Quaternion{std::cos(half), s * u.u[0], s * u.u[1], s * u.u[2]};
}

Quaternion multiply(const Quaternion& a, const Quaternion& b) {
    return Quaternion{a.w * b.w - a.x * b.x - a.y * b.y - a.z * b.z,
                      a.w * b.x + a.x * b.w + a.y * b.z - a.z * b.y,
                      a.w * b.y + a.y * b.w + a.z * b.x - a.x * b.z,
                      a.w * b.z + a.z * b.w + a.x * b.y - a.y * b.x};
}

}  // namespace

double RotationVector::angle() const {
    return std::sqrt(u[0] * u[0] + u[1] * u[1] + u[2] * u[2]);
}

std::string format_spin(int twoj) {
    if (twoj % 2 == 0) return std::to_string(twoj / 2);
    return std::to_string(twoj) + "/2";
}

SpinRepresentation spin_matrices(double j) {
    const double twoj_real = 2.0 * j;
    const int twoj = static_cast<int>(std::llround(twoj_real));
    if (j < 0.0 || std::abs(twoj_real - twoj) > 1e-9)
        throw NotHalfInteger("spin must be a nonnegative half-integer");
    if (twoj > kMaxTwoJ) throw TooLarge("spin exceeds the supported maximum of 25");

    const int dim = twoj + 1;
    SpinRepresentation rep{twoj, dim, ComplexMatrix(dim, dim), ComplexMatrix(dim, dim),
                           ComplexMatrix(dim, dim)};
    const double jj = 0.5 * twoj;
    for (int k = 0; k < dim; ++k) rep.jz(k, k) = jj - k;
    // raising element <m+1| j+ |m> = sqrt(j(j+1) - m(m+1)), m = j - k
    for (int k = 1; k < dim; ++k) {
        const double m = jj - k;
        const double amp = std::sqrt(jj * (jj + 1.0) - m * (m + 1.0));
        rep.jx(k - 1, k) += 0.5 * amp;
        rep.jx(k, k - 1) += 0.5 * amp;
        rep.jy(k - 1, k) += complexd(0.0, -0.5) * amp;
        rep.jy(k, k - 1) += complexd(0.0, 0.5) * amp;
    }
    return rep;
}

ComplexMatrix rotation_unitary(const SpinRepresentation& rep, const RotationVector& u) {
    ComplexMatrix h(rep.dim, rep.dim);
    for (int i = 0; i < rep.dim; ++i)
        for (int j = 0; j < rep.dim; ++j)
            h(i, j) = u.u[0] * rep.jx(i, j) + u.u[1] * rep.jy(i, j) + u.u[2] * rep.jz(i, j);
    return unitary_from_generator(h, 1.0);
}

RotationVector rotation_compose(const RotationVector& u1, const RotationVector& u2) {
    Quaternion q = multiply(quaternion_from_rotation(u1), quaternion_from_rotation(u2));
    if (q.w < 0.0) q = Quaternion{-q.w, -q.x, -q.y, -q.z};  // angle in [0, pi]

    const double vec_norm = std::sqrt(q.x * q.x + q.y * q.y + q.z * q.z);
    if (vec_norm < 1e-15) return RotationVector{};
    const double angle = 2.0 * std::atan2(vec_norm, q.w);
    double axis[3] = {q.x / vec_norm, q.y / vec_norm, q.z / vec_norm};
    if (q.w < 1e-15) {
        // angle pi: q and -q describe the same rotation; fix the axis sign
        for (int c = 0; c < 3; ++c) {
            if (std::abs(axis[c]) > 1e-12) {
                if (axis[c] < 0.0)
                    for (int d = 0; d < 3; ++d) axis[d] = -axis[d];
                break;
            }
        }
    }
    return RotationVector{{angle * axis[0], angle * axis[1], angle * axis[2]}};
}

complexd relative_phase(const ComplexMatrix& reference, const ComplexMatrix& actual) {
    const complexd t = trace_product(reference.adjoint(), actual);
    const double mag = std::abs(t);
    if (mag < 1e-12) return complexd(1.0, 0.0);
    return t / mag;
}

double representation_defect(const SpinRepresentation& rep, const RotationVector& u1,
                             const RotationVector& u2) {
    const ComplexMatrix product = rotation_unitary(rep, u1) * rotation_unitary(rep, u2);
    const ComplexMatrix composed = rotation_unitary(rep, rotation_compose(u1, u2));
    const complexd phase = relative_phase(composed, product);
    return (product - phase * composed).frobenius_norm();
}

ComplexMatrix physical_observable(const SpinRepresentation& rep,
                                  const std::array<double, 3>& axis,
                                  const PhysicalScale& scale) {
    const double norm = std::sqrt(axis[0] * axis[0] + axis[1] * axis[1] + axis[2] * axis[2]);
    if (std::abs(norm - 1.0) > 1e-10) throw BadAxis("axis must be normalized");
    if (!(scale.hbar > 0.0)) throw Error("hbar must be positive");
    ComplexMatrix out(rep.dim, rep.dim);
    for (int i = 0; i < rep.dim; ++i)
        for (int j = 0; j < rep.dim; ++j)
            out(i, j) = scale.hbar * (axis[0] * rep.jx(i, j) + axis[1] * rep.jy(i, j) +
                                      axis[2] * rep.jz(i, j));
    return out;
}

Context spin_context(const SpinRepresentation& rep, const std::array<double, 3>& axis,
                     const std::string& id) {
    if (rep.dim < 2) throw BadDimension("spin context needs dim >= 2 (j >= 1/2)");
    ComplexMatrix h = physical_observable(rep, axis, PhysicalScale{1.0});
    HermitianEig eig = hermitian_eigendecomposition(h);
    // descending m: reverse the ascending eigensolver order
    const int n = rep.dim;
    ComplexMatrix basis(n, n);
    std::vector<std::string> labels(n);
    for (int k = 0; k < n; ++k) {
        basis.set_column(k, eig.eigenvectors.column(n - 1 - k));
        const double m = rep.j() - k;
        labels[k] = "m=" + format_spin(static_cast<int>(std::llround(2.0 * m)));
    }
    return make_context(id, std::move(basis), std::move(labels));
}

}  // namespace qmodal
