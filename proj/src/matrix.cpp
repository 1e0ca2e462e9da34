#include "qmodal/matrix.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace qmodal {

namespace {

constexpr double kHermitianTol = 1e-10;
constexpr double kJacobiTol = 1e-13;
constexpr int kMaxJacobiSweeps = 100;

}  // namespace

ComplexMatrix::ComplexMatrix(int rows, int cols, std::vector<complexd> entries)
    : rows_(rows), cols_(cols), data_(std::move(entries)) {
    if (data_.size() != static_cast<std::size_t>(rows_) * cols_)
        throw DimensionMismatch("entry count does not match rows*cols");
}

ComplexMatrix::ComplexMatrix(std::initializer_list<std::initializer_list<complexd>> rows) {
    rows_ = static_cast<int>(rows.size());
    cols_ = rows_ > 0 ? static_cast<int>(rows.begin()->size()) : 0;
    data_.reserve(static_cast<std::size_t>(rows_) * cols_);
    for (const auto& row : rows) {
        if (static_cast<int>(row.size()) != cols_)
            throw DimensionMismatch("ragged initializer list");
        data_.insert(data_.end(), row.begin(), row.end());
    }
}

ComplexMatrix ComplexMatrix::identity(int n) {
    ComplexMatrix m(n, n);
    for (int i = 0; i < n; ++i) m(i, i) = 1.0;
    return m;
}

ComplexMatrix ComplexMatrix::adjoint() const {
    ComplexMatrix out(cols_, rows_);
    for (int i = 0; i < rows_; ++i)
        for (int j = 0; j < cols_; ++j) out(j, i) = std::conj((*this)(i, j));
    return out;
}

ComplexMatrix ComplexMatrix::transpose() const {
    ComplexMatrix out(cols_, rows_);
    for (int i = 0; i < rows_; ++i)
        for (int j = 0; j < cols_; ++j) out(j, i) = (*this)(i, j);
    return out;
}

complexd ComplexMatrix::trace() const {
    if (!is_square()) throw NotSquare("trace of a non-square matrix");
    complexd t = 0.0;
    for (int i = 0; i < rows_; ++i) t += (*this)(i, i);
    return t;
}

double ComplexMatrix::frobenius_norm() const {
    double s = 0.0;
    for (const auto& z : data_) s += std::norm(z);
    return std::sqrt(s);
}

bool ComplexMatrix::all_finite() const {
    for (const auto& z : data_)
        if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) return false;
    return true;
}

std::vector<complexd> ComplexMatrix::column(int j) const {
    std::vector<complexd> v(rows_);
    for (int i = 0; i < rows_; ++i) v[i] = (*this)(i, j);
    return v;
}

void ComplexMatrix::set_column(int j, const std::vector<complexd>& v) {
    if (static_cast<int>(v.size()) != rows_)
        throw DimensionMismatch("column length does not match row count");
    for (int i = 0; i < rows_; ++i) (*this)(i, j) = v[i];
}

ComplexMatrix& ComplexMatrix::operator+=(const ComplexMatrix& other) {
    if (rows_ != other.rows_ || cols_ != other.cols_)
        throw DimensionMismatch("matrix addition shape mismatch");
    for (std::size_t k = 0; k < data_.size(); ++k) data_[k] += other.data_[k];
    return *this;
}

ComplexMatrix& ComplexMatrix::operator-=(const ComplexMatrix& other) {
    if (rows_ != other.rows_ || cols_ != other.cols_)
        throw DimensionMismatch("matrix subtraction shape mismatch");
    for (std::size_t k = 0; k < data_.size(); ++k) data_[k] -= other.data_[k];
    return *this;
}

ComplexMatrix& ComplexMatrix::operator*=(complexd scalar) {
    for (auto& z : data_) z *= scalar;
    return *this;
}

ComplexMatrix operator+(ComplexMatrix lhs, const ComplexMatrix& rhs) { return lhs += rhs; }
ComplexMatrix operator-(ComplexMatrix lhs, const ComplexMatrix& rhs) { return lhs -= rhs; }

ComplexMatrix operator*(const ComplexMatrix& lhs, const ComplexMatrix& rhs) {
    if (lhs.cols() != rhs.rows()) throw DimensionMismatch("matrix product shape mismatch");
    ComplexMatrix out(lhs.rows(), rhs.cols());
    for (int i = 0; i < lhs.rows(); ++i) {
        for (int k = 0; k < lhs.cols(); ++k) {
            const complexd a = lhs(i, k);
            if (a == complexd(0.0)) continue;
            for (int j = 0; j < rhs.cols(); ++j) out(i, j) += a * rhs(k, j);
        }
    }
    return out;
}

ComplexMatrix operator*(complexd scalar, ComplexMatrix m) { return m *= scalar; }
ComplexMatrix operator*(ComplexMatrix m, complexd scalar) { return m *= scalar; }

ComplexMatrix require_hermitian(const ComplexMatrix& h) {
    if (!h.is_square()) throw NotSquare("hermitian operation requires a square matrix");
    const double hnorm = h.frobenius_norm();
    double defect = 0.0;
    for (int i = 0; i < h.rows(); ++i)
        for (int j = 0; j < h.cols(); ++j) defect += std::norm(h(i, j) - std::conj(h(j, i)));
    if (std::sqrt(defect) > kHermitianTol * std::max(1.0, hnorm))
        throw NotHermitian("matrix is not hermitian within tolerance");
    ComplexMatrix sym(h.rows(), h.cols());
    for (int i = 0; i < h.rows(); ++i)
        for (int j = 0; j < h.cols(); ++j) sym(i, j) = 0.5 * (h(i, j) + std::conj(h(j, i)));
    return sym;
}

namespace {

double offdiagonal_mass(const ComplexMatrix& a) {
    double s = 0.0;
    for (int i = 0; i < a.rows(); ++i)
        for (int j = 0; j < a.cols(); ++j)
            if (i != j) s += std::norm(a(i, j));
    return std::sqrt(s);
}

}  // namespace

HermitianEig hermitian_eigendecomposition(const ComplexMatrix& h) {
    ComplexMatrix a = require_hermitian(h);
    const int n = a.rows();
    ComplexMatrix v = ComplexMatrix::identity(n);
    const double threshold = kJacobiTol * h.frobenius_norm();

    int sweep = 0;
    while (offdiagonal_mass(a) > threshold) {
        if (++sweep > kMaxJacobiSweeps)
            throw Error("jacobi eigensolver failed to converge");
        for (int p = 0; p < n - 1; ++p) {
            for (int q = p + 1; q < n; ++q) {
                const complexd apq = a(p, q);
                const double mag = std::abs(apq);
                if (mag < 1e-300) continue;

                // Unitarily reduce the (p,q) block: a phase rotation makes it
                // real symmetric, then a classical Jacobi rotation zeroes it.
                const complexd phase = apq / mag;
                const double app = a(p, p).real();
                const double aqq = a(q, q).real();
                const double tau = (aqq - app) / (2.0 * mag);
                const double t =
                    (tau >= 0.0 ? 1.0 : -1.0) / (std::abs(tau) + std::sqrt(1.0 + tau * tau));
                const double c = 1.0 / std::sqrt(1.0 + t * t);
                const double s = t * c;
                const complexd sq = s * std::conj(phase);  // entry R(q,p) = -sq
                const complexd cq = c * std::conj(phase);  // entry R(q,q)

                // A <- R^dagger A R applied as column then row updates.
                for (int i = 0; i < n; ++i) {
                    const complexd aip = a(i, p);
                    const complexd aiq = a(i, q);
                    a(i, p) = c * aip - sq * aiq;
                    a(i, q) = s * aip + cq * aiq;
                }
                for (int j = 0; j < n; ++j) {
                    const complexd apj = a(p, j);
                    const complexd aqj = a(q, j);
                    a(p, j) = c * apj - std::conj(sq) * aqj;
                    a(q, j) = s * apj + std::conj(cq) * aqj;
                }
                a(p, q) = 0.0;
                a(q, p) = 0.0;
                for (int i = 0; i < n; ++i) {
                    const complexd vip = v(i, p);
                    const complexd viq = v(i, q);
                    v(i, p) = c * vip - sq * viq;
                    v(i, q) = s * vip + cq * viq;
                }
            }
        }
    }

    std::vector<int> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&a](int i, int j) { return a(i, i).real() < a(j, j).real(); });

    HermitianEig out;
    out.eigenvalues.resize(n);
    out.eigenvectors = ComplexMatrix(n, n);
    for (int k = 0; k < n; ++k) {
        out.eigenvalues[k] = a(order[k], order[k]).real();
        for (int i = 0; i < n; ++i) out.eigenvectors(i, k) = v(i, order[k]);
    }
    apply_phase_convention(out.eigenvectors);
    return out;
}

ComplexMatrix unitary_from_generator(const ComplexMatrix& h, double t) {
    const HermitianEig eig = hermitian_eigendecomposition(h);
    const int n = h.rows();
    ComplexMatrix scaled = eig.eigenvectors;
    for (int j = 0; j < n; ++j) {
        const complexd ph = std::exp(complexd(0.0, -t * eig.eigenvalues[j]));
        for (int i = 0; i < n; ++i) scaled(i, j) *= ph;
    }
    return scaled * eig.eigenvectors.adjoint();
}

ComplexMatrix gram_schmidt(const std::vector<std::vector<complexd>>& vectors) {
    if (vectors.empty()) throw DimensionMismatch("gram_schmidt requires at least one vector");
    const int n = static_cast<int>(vectors.front().size());
    const int m = static_cast<int>(vectors.size());
    for (const auto& v : vectors)
        if (static_cast<int>(v.size()) != n)
            throw DimensionMismatch("gram_schmidt vectors of unequal length");
    if (m > n) throw RankDeficient("more vectors than dimensions");

    ComplexMatrix q(n, m);
    for (int k = 0; k < m; ++k) {
        std::vector<complexd> v = vectors[k];
        // two projection passes for numerical orthogonality
        for (int pass = 0; pass < 2; ++pass) {
            for (int i = 0; i < k; ++i) {
                complexd dot = 0.0;
                for (int r = 0; r < n; ++r) dot += std::conj(q(r, i)) * v[r];
                for (int r = 0; r < n; ++r) v[r] -= dot * q(r, i);
            }
        }
        double norm = 0.0;
        for (const auto& z : v) norm += std::norm(z);
        norm = std::sqrt(norm);
        if (norm < 1e-12) throw RankDeficient("residual norm below 1e-12");
        for (int r = 0; r < n; ++r) q(r, k) = v[r] / norm;
    }
    apply_phase_convention(q);
    return q;
}

double commutator_norm(const ComplexMatrix& a, const ComplexMatrix& b) {
    if (!a.is_square() || !b.is_square()) throw NotSquare("commutator of non-square matrices");
    if (a.rows() != b.rows()) throw DimensionMismatch("commutator dimension mismatch");
    return (a * b - b * a).frobenius_norm();
}

complexd trace_product(const ComplexMatrix& a, const ComplexMatrix& b) {
    if (a.cols() != b.rows() || a.rows() != b.cols())
        throw DimensionMismatch("trace_product shape mismatch");
    complexd t = 0.0;
    for (int i = 0; i < a.rows(); ++i)
        for (int j = 0; j < a.cols(); ++j) t += a(i, j) * b(j, i);
    return t;
}

void apply_phase_convention(ComplexMatrix& m) {
    for (int j = 0; j < m.cols(); ++j) {
        int best = 0;
        double best_mag = std::abs(m(0, j));
        for (int i = 1; i < m.rows(); ++i) {
            const double mag = std::abs(m(i, j));
            if (mag > best_mag) {
                best_mag = mag;
                best = i;
            }
        }
        if (best_mag == 0.0) continue;
        const complexd ph = std::conj(m(best, j)) / best_mag;
        for (int i = 0; i < m.rows(); ++i) m(i, j) *= ph;
        m(best, j) = best_mag;  // exactly real after the rotation
    }
}

bool is_unitary(const ComplexMatrix& m, double tol) {
    if (!m.is_square()) return false;
    return (m.adjoint() * m - ComplexMatrix::identity(m.rows())).frobenius_norm() <= tol;
}

}  // namespace qmodal
