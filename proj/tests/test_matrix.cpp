#include <doctest.h>

#include <cmath>

#include "qmodal/matrix.hpp"
#include "qmodal/rng.hpp"
#include "test_helpers.hpp"

using namespace qmodal;
using namespace qmodal::testing;

namespace {
const double kInvSqrt2 = 1.0 / std::sqrt(2.0);
}

TEST_SUITE_BEGIN("matrix");

TEST_CASE("eigendecomposition of a diagonal matrix sorts ascending") {
    const ComplexMatrix h{{3.0, 0.0, 0.0}, {0.0, 1.0, 0.0}, {0.0, 0.0, 2.0}};
    const HermitianEig eig = hermitian_eigendecomposition(h);
    CHECK(eig.eigenvalues[0] == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(eig.eigenvalues[1] == doctest::Approx(2.0).epsilon(1e-14));
    CHECK(eig.eigenvalues[2] == doctest::Approx(3.0).epsilon(1e-14));
    // eigenvectors are permuted identity columns
    CHECK(std::abs(eig.eigenvectors(1, 0) - 1.0) < 1e-14);
    CHECK(std::abs(eig.eigenvectors(2, 1) - 1.0) < 1e-14);
    CHECK(std::abs(eig.eigenvectors(0, 2) - 1.0) < 1e-14);
}

TEST_CASE("pauli z and pauli x spectra") {
    const HermitianEig z = hermitian_eigendecomposition(pauli_z());
    CHECK(z.eigenvalues[0] == doctest::Approx(-1.0));
    CHECK(z.eigenvalues[1] == doctest::Approx(1.0));

    const HermitianEig x = hermitian_eigendecomposition(pauli_x());
    CHECK(x.eigenvalues[0] == doctest::Approx(-1.0));
    CHECK(x.eigenvalues[1] == doctest::Approx(1.0));
    // hand multiplication: X (1,-1)/sqrt2 = -(1,-1)/sqrt2, X (1,1)/sqrt2 = (1,1)/sqrt2
    CHECK(std::abs(x.eigenvectors(0, 0) - kInvSqrt2) < 1e-12);
    CHECK(std::abs(x.eigenvectors(1, 0) + kInvSqrt2) < 1e-12);
    CHECK(std::abs(x.eigenvectors(0, 1) - kInvSqrt2) < 1e-12);
    CHECK(std::abs(x.eigenvectors(1, 1) - kInvSqrt2) < 1e-12);
}

TEST_CASE("eigendecomposition rejects bad input") {
    CHECK_THROWS_AS(hermitian_eigendecomposition(ComplexMatrix(2, 3)), NotSquare);
    const ComplexMatrix skew{{0.0, 1.0}, {-1.0, 0.0}};
    CHECK_THROWS_AS(hermitian_eigendecomposition(skew), NotHermitian);
}

TEST_CASE("random hermitian reconstruction") {
    Rng rng(2024);
    for (const int n : {2, 3, 5, 8, 16}) {
        const ComplexMatrix h = random_hermitian(n, rng);
        const HermitianEig eig = hermitian_eigendecomposition(h);
        CHECK(is_unitary(eig.eigenvectors, 1e-10));
        ComplexMatrix recon(n, n);
        for (int k = 0; k < n; ++k) {
            const auto col = eig.eigenvectors.column(k);
            for (int i = 0; i < n; ++i)
                for (int j = 0; j < n; ++j)
                    recon(i, j) += eig.eigenvalues[k] * col[i] * std::conj(col[j]);
        }
        CHECK(distance(recon, h) <= 1e-9 * h.frobenius_norm());
        for (std::size_t k = 1; k < eig.eigenvalues.size(); ++k)
            CHECK(eig.eigenvalues[k - 1] <= eig.eigenvalues[k]);
    }
}

TEST_CASE("unitary_from_generator basics") {
    CHECK(distance(unitary_from_generator(ComplexMatrix(3, 3), 1.7),
                   ComplexMatrix::identity(3)) < 1e-14);

    const double pi = 3.14159265358979323846;
    CHECK(distance(unitary_from_generator(pauli_z(), pi),
                   complexd(-1.0, 0.0) * ComplexMatrix::identity(2)) < 1e-12);

    // exp(-i pi/2 X) = -iX, checked against the power-series oracle too
    const ComplexMatrix u = unitary_from_generator(pauli_x(), pi / 2.0);
    CHECK(distance(u, complexd(0.0, -1.0) * pauli_x()) < 1e-12);
    CHECK(distance(u, expm_series(pauli_x(), pi / 2.0)) < 1e-12);
}

TEST_CASE("generator exponentials agree with the series oracle on random input") {
    Rng rng(77);
    for (int trial = 0; trial < 5; ++trial) {
        const ComplexMatrix h = random_hermitian(4, rng);
        const double t = rng.uniform();
        const ComplexMatrix u = unitary_from_generator(h, t);
        CHECK(is_unitary(u, 1e-10));
        CHECK(distance(u, expm_series(h, t)) < 1e-12 * std::max(1.0, u.frobenius_norm()));
    }
}

TEST_CASE("group property U(s) U(t) = U(s+t)") {
    Rng rng(5150);
    const ComplexMatrix h = random_hermitian(5, rng);
    const double s = 0.37, t = -1.21;
    CHECK(distance(unitary_from_generator(h, s) * unitary_from_generator(h, t),
                   unitary_from_generator(h, s + t)) < 1e-10);
}

TEST_CASE("gram_schmidt hand examples") {
    const std::vector<std::vector<complexd>> std_basis{{1.0, 0.0}, {0.0, 1.0}};
    CHECK(distance(gram_schmidt(std_basis), ComplexMatrix::identity(2)) < 1e-14);

    const ComplexMatrix q = gram_schmidt({{1.0, 1.0}, {1.0, 0.0}});
    CHECK(std::abs(q(0, 0) - kInvSqrt2) < 1e-12);
    CHECK(std::abs(q(1, 0) - kInvSqrt2) < 1e-12);
    CHECK(std::abs(q(0, 1) - kInvSqrt2) < 1e-12);
    CHECK(std::abs(q(1, 1) + kInvSqrt2) < 1e-12);

    CHECK_THROWS_AS(gram_schmidt({{1.0, 0.0}, {2.0, 0.0}}), RankDeficient);
    CHECK_THROWS_AS(gram_schmidt({{1.0, 0.0}, {0.0, 1.0}, {1.0, 1.0}}), RankDeficient);
}

TEST_CASE("gram_schmidt is idempotent up to the phase convention") {
    Rng rng(31);
    std::vector<std::vector<complexd>> vectors(4, std::vector<complexd>(4));
    for (auto& v : vectors)
        for (auto& z : v) z = complexd(rng.gaussian(), rng.gaussian());
    const ComplexMatrix once = gram_schmidt(vectors);
    std::vector<std::vector<complexd>> columns;
    for (int j = 0; j < once.cols(); ++j) columns.push_back(once.column(j));
    CHECK(distance(gram_schmidt(columns), once) < 1e-12);
}

TEST_CASE("commutator norms") {
    const ComplexMatrix d1{{1.0, 0.0}, {0.0, 2.0}};
    const ComplexMatrix d2{{5.0, 0.0}, {0.0, -3.0}};
    CHECK(commutator_norm(d1, d2) == 0.0);
    CHECK(commutator_norm(pauli_z(), pauli_x()) ==
          doctest::Approx(2.0 * std::sqrt(2.0)).epsilon(1e-14));
    Rng rng(8);
    const ComplexMatrix a = random_hermitian(3, rng);
    CHECK(commutator_norm(a, a) == 0.0);
    CHECK_THROWS_AS(commutator_norm(a, ComplexMatrix::identity(4)), DimensionMismatch);
}

TEST_CASE("trace_product") {
    CHECK(trace_product(ComplexMatrix::identity(5), ComplexMatrix::identity(5)).real() ==
          doctest::Approx(5.0));
    const ComplexMatrix proj_z{{1.0, 0.0}, {0.0, 0.0}};
    const ComplexMatrix proj_x{{0.5, 0.5}, {0.5, 0.5}};
    CHECK(trace_product(proj_z, proj_x).real() == doctest::Approx(0.5));
    CHECK(std::abs(trace_product(pauli_z(), pauli_x())) < 1e-15);
    CHECK_THROWS_AS(trace_product(ComplexMatrix(2, 3), ComplexMatrix(2, 3)), DimensionMismatch);

    // symmetry under swapping square arguments
    Rng rng(99);
    ComplexMatrix a(3, 3), b(3, 3);
    for (auto& z : a.data()) z = complexd(rng.gaussian(), rng.gaussian());
    for (auto& z : b.data()) z = complexd(rng.gaussian(), rng.gaussian());
    CHECK(std::abs(trace_product(a, b) - trace_product(b, a)) < 1e-12);
}

TEST_CASE("phase convention makes the largest component real positive") {
    ComplexMatrix m(2, 1);
    m(0, 0) = complexd(0.0, -0.8);
    m(1, 0) = complexd(0.6, 0.0);
    apply_phase_convention(m);
    CHECK(m(0, 0).real() == doctest::Approx(0.8));
    CHECK(m(0, 0).imag() == 0.0);
}

TEST_SUITE_END();
