#pragma once

#include <complex>
#include <stdexcept>
#include <vector>

#include "mqw/tolerances.hpp"

// Dense complex vectors and square matrices for dimensions up to 16.
// Row-major storage, value semantics, no views into foreign memory.

namespace mqw {

using cplx = std::complex<double>;

inline constexpr int kMaxDim = 16;

struct ComplexVector {
    std::vector<cplx> entries;

    ComplexVector() = default;
    explicit ComplexVector(int dim) : entries(static_cast<size_t>(dim)) {}
    explicit ComplexVector(std::vector<cplx> e) : entries(std::move(e)) {}

    int dim() const { return static_cast<int>(entries.size()); }
    cplx& operator[](int i) { return entries[static_cast<size_t>(i)]; }
    const cplx& operator[](int i) const { return entries[static_cast<size_t>(i)]; }

    double norm() const;
    // Normalizes in place; throws std::domain_error on the zero vector.
    void normalize();

    static ComplexVector basis(int dim, int index);
};

// <a|b> with the left argument conjugated.
cplx dotc(const ComplexVector& a, const ComplexVector& b);

ComplexVector operator+(const ComplexVector& a, const ComplexVector& b);
ComplexVector operator-(const ComplexVector& a, const ComplexVector& b);
ComplexVector operator*(cplx s, const ComplexVector& v);

struct ComplexMatrix {
    int dim = 0;
    std::vector<cplx> entries;  // row-major, dim*dim

    ComplexMatrix() = default;
    explicit ComplexMatrix(int d)
        : dim(d), entries(static_cast<size_t>(d) * static_cast<size_t>(d)) {
        if (d <= 0 || d > kMaxDim) throw std::invalid_argument("ComplexMatrix: bad dimension");
    }

    cplx& operator()(int i, int j) { return entries[static_cast<size_t>(i) * dim + j]; }
    const cplx& operator()(int i, int j) const {
        return entries[static_cast<size_t>(i) * dim + j];
    }

    static ComplexMatrix identity(int d);

    ComplexMatrix adjoint() const;
    cplx trace() const;
    double frobeniusNorm() const;
    double maxAbsEntry() const;

    // max_ij |A_ij - conj(A_ji)|
    double hermiticityDefect() const;
    bool isHermitian(double relTol = tol::kHermitian) const;
};

ComplexMatrix operator*(const ComplexMatrix& a, const ComplexMatrix& b);
ComplexVector operator*(const ComplexMatrix& a, const ComplexVector& v);
ComplexMatrix operator*(cplx s, const ComplexMatrix& a);
ComplexMatrix operator+(const ComplexMatrix& a, const ComplexMatrix& b);
ComplexMatrix operator-(const ComplexMatrix& a, const ComplexMatrix& b);

// Determinant by LU with partial pivoting.
cplx determinant(ComplexMatrix a);

// Solves A x = b by LU with partial pivoting. Vanishing pivots are clamped to
// a tiny magnitude, so near-singular systems return a large (but finite)
// solution; inverse iteration relies on exactly that.
ComplexVector solveClamped(ComplexMatrix a, ComplexVector b);

}  // namespace mqw
