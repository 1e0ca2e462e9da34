#pragma once

#include <complex>
#include <initializer_list>
#include <vector>

#include "qmodal/errors.hpp"

namespace qmodal {

using complexd = std::complex<double>;

// Dense row-major complex matrix for small dimensions (N <= ~64).
// Values are immutable in spirit: every operation returns a new matrix.
class ComplexMatrix {
public:
    ComplexMatrix() : rows_(0), cols_(0) {}
    ComplexMatrix(int rows, int cols)
        : rows_(rows), cols_(cols), data_(static_cast<std::size_t>(rows) * cols) {}
    ComplexMatrix(int rows, int cols, std::vector<complexd> entries);
    ComplexMatrix(std::initializer_list<std::initializer_list<complexd>> rows);

    static ComplexMatrix identity(int n);

    int rows() const { return rows_; }
    int cols() const { return cols_; }
    bool is_square() const { return rows_ == cols_; }

    complexd& operator()(int i, int j) { return data_[static_cast<std::size_t>(i) * cols_ + j]; }
    const complexd& operator()(int i, int j) const {
        return data_[static_cast<std::size_t>(i) * cols_ + j];
    }

    const std::vector<complexd>& data() const { return data_; }
    std::vector<complexd>& data() { return data_; }

    ComplexMatrix adjoint() const;
    ComplexMatrix transpose() const;
    complexd trace() const;
    double frobenius_norm() const;
    bool all_finite() const;

    std::vector<complexd> column(int j) const;
    void set_column(int j, const std::vector<complexd>& v);

    ComplexMatrix& operator+=(const ComplexMatrix& other);
    ComplexMatrix& operator-=(const ComplexMatrix& other);
    ComplexMatrix& operator*=(complexd scalar);

private:
    int rows_, cols_;
    std::vector<complexd> data_;
};

ComplexMatrix operator+(ComplexMatrix lhs, const ComplexMatrix& rhs);
ComplexMatrix operator-(ComplexMatrix lhs, const ComplexMatrix& rhs);
ComplexMatrix operator*(const ComplexMatrix& lhs, const ComplexMatrix& rhs);
ComplexMatrix operator*(complexd scalar, ComplexMatrix m);
ComplexMatrix operator*(ComplexMatrix m, complexd scalar);

struct HermitianEig {
    std::vector<double> eigenvalues;  // ascending
    ComplexMatrix eigenvectors;       // orthonormal columns, phase convention applied
};

// Checks hermiticity at relative tolerance 1e-10 and returns the
// symmetrized matrix (H + H^dagger)/2. Throws NotSquare / NotHermitian.
ComplexMatrix require_hermitian(const ComplexMatrix& h);

// Cyclic Jacobi eigensolver. Converges when the off-diagonal Frobenius
// mass drops below 1e-13 * ||H||_F.
HermitianEig hermitian_eigendecomposition(const ComplexMatrix& h);

// exp(-i t H) for hermitian H, computed through the eigendecomposition.
ComplexMatrix unitary_from_generator(const ComplexMatrix& h, double t);

// Modified Gram-Schmidt with re-orthogonalization. Returns the matrix
// whose columns are the orthonormalized inputs, in order. Throws
// RankDeficient when a residual norm falls below 1e-12.
ComplexMatrix gram_schmidt(const std::vector<std::vector<complexd>>& vectors);

// ||AB - BA||_F for square matrices of equal dimension.
double commutator_norm(const ComplexMatrix& a, const ComplexMatrix& b);

// Tr(AB) accumulated entrywise, without forming the product.
complexd trace_product(const ComplexMatrix& a, const ComplexMatrix& b);

// Deterministic per-column phase fix: the entry of largest modulus
// (ties broken by lowest row index) is made real and positive.
void apply_phase_convention(ComplexMatrix& m);

bool is_unitary(const ComplexMatrix& m, double tol);

}  // namespace qmodal
