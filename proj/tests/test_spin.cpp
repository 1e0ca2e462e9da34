#include <doctest.h>

#include <cmath>

#include "qmodal/context.hpp"
#include "qmodal/spin.hpp"
#include "qmodal/translation.hpp"
#include "test_helpers.hpp"

using namespace qmodal;
using namespace qmodal::testing;

namespace {

const double kPi = 3.14159265358979323846;

double commutation_residual(const SpinRepresentation& rep) {
    const complexd iu(0.0, 1.0);
    const double scale = std::max(1.0, rep.jz.frobenius_norm());
    const double xy = (rep.jx * rep.jy - rep.jy * rep.jx - iu * rep.jz).frobenius_norm();
    const double yz = (rep.jy * rep.jz - rep.jz * rep.jy - iu * rep.jx).frobenius_norm();
    const double zx = (rep.jz * rep.jx - rep.jx * rep.jz - iu * rep.jy).frobenius_norm();
    return std::max({xy, yz, zx}) / scale;
}

double casimir_residual(const SpinRepresentation& rep) {
    const double jj = rep.j();
    return (rep.jx * rep.jx + rep.jy * rep.jy + rep.jz * rep.jz -
            (jj * (jj + 1.0)) * ComplexMatrix::identity(rep.dim))
        .frobenius_norm();
}

RotationVector random_rotation(Rng& rng) {
    // direction from three gaussians, angle uniform in (0, 2 pi)
    double v[3] = {rng.gaussian(), rng.gaussian(), rng.gaussian()};
    const double norm = std::sqrt(v[0] * v[0] + v[1] * v[1] + v[2] * v[2]);
    const double angle = rng.uniform() * 2.0 * kPi;
    return RotationVector{{angle * v[0] / norm, angle * v[1] / norm, angle * v[2] / norm}};
}

}  // namespace

TEST_SUITE_BEGIN("spin");

TEST_CASE("spin one-half matrices are the halved paulis") {
    const SpinRepresentation rep = spin_matrices(0.5);
    CHECK(rep.dim == 2);
    CHECK(distance(rep.jx, complexd(0.5, 0.0) * pauli_x()) < 1e-15);
    CHECK(distance(rep.jy, complexd(0.5, 0.0) * pauli_y()) < 1e-15);
    CHECK(distance(rep.jz, complexd(0.5, 0.0) * pauli_z()) < 1e-15);
}

TEST_CASE("spin one ladder construction") {
    const SpinRepresentation rep = spin_matrices(1.0);
    CHECK(rep.jz(0, 0).real() == doctest::Approx(1.0));
    CHECK(rep.jz(1, 1).real() == doctest::Approx(0.0));
    CHECK(rep.jz(2, 2).real() == doctest::Approx(-1.0));
    // <m+1|j+|m> = sqrt(2) for both steps at j=1
    CHECK(rep.jx(0, 1).real() == doctest::Approx(std::sqrt(2.0) / 2.0));
    CHECK(rep.jx(1, 2).real() == doctest::Approx(std::sqrt(2.0) / 2.0));
}

TEST_CASE("commutation relations and casimir across representations") {
    for (const double j : {0.5, 1.0, 1.5, 2.0, 4.5}) {
        const SpinRepresentation rep = spin_matrices(j);
        CHECK(commutation_residual(rep) <= 1e-10);
        CHECK(casimir_residual(rep) <= 1e-10);
    }
}

TEST_CASE("spin argument validation") {
    CHECK_THROWS_AS(spin_matrices(0.3), NotHalfInteger);
    CHECK_THROWS_AS(spin_matrices(-0.5), NotHalfInteger);
    CHECK_THROWS_AS(spin_matrices(25.5), TooLarge);
}

TEST_CASE("rotation unitaries and the double cover") {
    const SpinRepresentation half = spin_matrices(0.5);
    CHECK(distance(rotation_unitary(half, RotationVector{}), ComplexMatrix::identity(2)) < 1e-14);
    CHECK(distance(rotation_unitary(half, RotationVector{{0.0, 0.0, 2.0 * kPi}}),
                   complexd(-1.0, 0.0) * ComplexMatrix::identity(2)) < 1e-12);

    const SpinRepresentation one = spin_matrices(1.0);
    CHECK(distance(rotation_unitary(one, RotationVector{{0.0, 0.0, 2.0 * kPi}}),
                   ComplexMatrix::identity(3)) < 1e-12);
}

TEST_CASE("rotation composition via quaternions") {
    const RotationVector canonical = rotation_compose(RotationVector{{0.0, 0.0, 3.0 * kPi}},
                                                      RotationVector{});
    CHECK(canonical.u[0] == doctest::Approx(0.0));
    CHECK(canonical.u[2] == doctest::Approx(kPi));  // 3 pi wraps to pi

    const RotationVector cancel = rotation_compose(RotationVector{{kPi / 2.0, 0.0, 0.0}},
                                                   RotationVector{{-kPi / 2.0, 0.0, 0.0}});
    CHECK(cancel.angle() < 1e-12);

    // quaternion oracle: (1/2, 1/2, 1/2, 1/2) -> angle 2 pi/3 about (1,1,1)/sqrt3
    const RotationVector composed = rotation_compose(RotationVector{{kPi / 2.0, 0.0, 0.0}},
                                                     RotationVector{{0.0, kPi / 2.0, 0.0}});
    CHECK(composed.angle() == doctest::Approx(2.0 * kPi / 3.0).epsilon(1e-12));
    const double expected = 2.0 * kPi / 3.0 / std::sqrt(3.0);
    for (int c = 0; c < 3; ++c) CHECK(composed.u[c] == doctest::Approx(expected).epsilon(1e-12));
}

TEST_CASE("representation defect vanishes up to the projective phase") {
    const SpinRepresentation half = spin_matrices(0.5);
    CHECK(representation_defect(half, RotationVector{}, RotationVector{}) < 1e-14);

    // two half-turns about z compose to the identity rotation with phase -1
    const RotationVector zpi{{0.0, 0.0, kPi}};
    CHECK(representation_defect(half, zpi, zpi) < 1e-10);
    const ComplexMatrix product = rotation_unitary(half, zpi) * rotation_unitary(half, zpi);
    const ComplexMatrix composed = rotation_unitary(half, rotation_compose(zpi, zpi));
    const complexd phase = relative_phase(composed, product);
    CHECK(std::abs(phase - complexd(-1.0, 0.0)) < 1e-12);

    Rng rng(2718);
    for (const double j : {0.5, 1.0, 1.5, 2.0}) {
        const SpinRepresentation rep = spin_matrices(j);
        for (int trial = 0; trial < 25; ++trial)
            CHECK(representation_defect(rep, random_rotation(rng), random_rotation(rng)) <= 1e-8);
    }
}

TEST_CASE("physical observable carries the hbar scale") {
    const SpinRepresentation half = spin_matrices(0.5);
    const ComplexMatrix jz_obs = physical_observable(half, {0.0, 0.0, 1.0}, PhysicalScale{1.0});
    CHECK(jz_obs(0, 0).real() == doctest::Approx(0.5));
    CHECK(jz_obs(1, 1).real() == doctest::Approx(-0.5));

    const ComplexMatrix doubled = physical_observable(half, {0.0, 0.0, 1.0}, PhysicalScale{2.0});
    CHECK(distance(doubled, complexd(2.0, 0.0) * jz_obs) < 1e-15);

    const SpinRepresentation one = spin_matrices(1.0);
    const HermitianEig eig =
        hermitian_eigendecomposition(physical_observable(one, {1.0, 0.0, 0.0}, PhysicalScale{1.0}));
    CHECK(eig.eigenvalues[0] == doctest::Approx(-1.0).epsilon(1e-12));
    CHECK(eig.eigenvalues[1] == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(eig.eigenvalues[2] == doctest::Approx(1.0).epsilon(1e-12));

    CHECK_THROWS_AS(physical_observable(half, {0.0, 0.0, 2.0}, PhysicalScale{1.0}), BadAxis);
}

TEST_CASE("observable commutes with rotations about its own axis") {
    const SpinRepresentation rep = spin_matrices(1.5);
    const double inv_sqrt3 = 1.0 / std::sqrt(3.0);
    const std::array<double, 3> axis{inv_sqrt3, inv_sqrt3, inv_sqrt3};
    const ComplexMatrix obs = physical_observable(rep, axis, PhysicalScale{1.0});
    const ComplexMatrix rot = rotation_unitary(
        rep, RotationVector{{0.7 * axis[0], 0.7 * axis[1], 0.7 * axis[2]}});
    CHECK(commutator_norm(obs, rot) <= 1e-10);
}

TEST_CASE("spin contexts order outcomes by descending m") {
    const SpinRepresentation one = spin_matrices(1.0);
    const Context ctx = spin_context(one, {0.0, 0.0, 1.0}, "jz");
    CHECK(distance(ctx.basis, ComplexMatrix::identity(3)) < 1e-12);
    CHECK(ctx.outcome_labels[0] == "m=1");
    CHECK(ctx.outcome_labels[1] == "m=0");
    CHECK(ctx.outcome_labels[2] == "m=-1");

    const SpinRepresentation half = spin_matrices(0.5);
    const Context xctx = spin_context(half, {1.0, 0.0, 0.0}, "jx");
    CHECK(xctx.outcome_labels[0] == "m=1/2");
    // first column is the +1/2 eigenvector of jx: (1,1)/sqrt2
    CHECK(std::abs(xctx.basis(0, 0) - 1.0 / std::sqrt(2.0)) < 1e-12);
    CHECK(std::abs(xctx.basis(1, 0) - 1.0 / std::sqrt(2.0)) < 1e-12);
}

TEST_CASE("cyclic translation representation") {
    for (const int n : {2, 3, 5, 8}) {
        const CyclicTranslationRep rep = cyclic_translation_rep(n);
        const TransitionMatrix t =
            transition_matrix(rep.position_context, rep.momentum_context);
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j)
                CHECK(std::abs(t(i, j) - 1.0 / n) < 1e-10);

        // one translation step is the unit cyclic shift
        const ComplexMatrix shift = translation_unitary(rep, 1.0);
        for (int x = 0; x < n; ++x)
            for (int y = 0; y < n; ++y) {
                const double expected = (y == (x + 1) % n) ? 1.0 : 0.0;
                CHECK(std::abs(shift(y, x) - expected) < 1e-10);
            }

        // a full period returns to the identity
        CHECK(distance(translation_unitary(rep, static_cast<double>(n)),
                       ComplexMatrix::identity(n)) < 1e-9);
    }
    CHECK_THROWS_AS(cyclic_translation_rep(1), BadDimension);
}

TEST_CASE("n=2 momentum basis is the hadamard pair") {
    const CyclicTranslationRep rep = cyclic_translation_rep(2);
    const double h = 1.0 / std::sqrt(2.0);
    CHECK(std::abs(rep.momentum_context.basis(0, 0) - h) < 1e-12);
    CHECK(std::abs(rep.momentum_context.basis(1, 0) - h) < 1e-12);
    CHECK(std::abs(rep.momentum_context.basis(0, 1) - h) < 1e-12);
    CHECK(std::abs(rep.momentum_context.basis(1, 1) + h) < 1e-12);
}

TEST_SUITE_END();
