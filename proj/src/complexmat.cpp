#include "mqw/complexmat.hpp"

#include <cmath>

namespace mqw {

double ComplexVector::norm() const {
    double s = 0.0;
    for (const cplx& z : entries) s += std::norm(z);
    return std::sqrt(s);
}

void ComplexVector::normalize() {
    const double n = norm();
    if (n == 0.0) throw std::domain_error("normalize: zero vector");
    for (cplx& z : entries) z /= n;
}

ComplexVector ComplexVector::basis(int dim, int index) {
    ComplexVector v(dim);
    v[index] = 1.0;
    return v;
}

cplx dotc(const ComplexVector& a, const ComplexVector& b) {
    cplx s = 0.0;
    for (int i = 0; i < a.dim(); ++i) s += std::conj(a[i]) * b[i];
    return s;
}

ComplexVector operator+(const ComplexVector& a, const ComplexVector& b) {
    ComplexVector r(a.dim());
    for (int i = 0; i < a.dim(); ++i) r[i] = a[i] + b[i];
    return r;
}

ComplexVector operator-(const ComplexVector& a, const ComplexVector& b) {
    ComplexVector r(a.dim());
    for (int i = 0; i < a.dim(); ++i) r[i] = a[i] - b[i];
    return r;
}

ComplexVector operator*(cplx s, const ComplexVector& v) {
    ComplexVector r(v.dim());
    for (int i = 0; i < v.dim(); ++i) r[i] = s * v[i];
    return r;
}

ComplexMatrix ComplexMatrix::identity(int d) {
    ComplexMatrix m(d);
    for (int i = 0; i < d; ++i) m(i, i) = 1.0;
    return m;
}

ComplexMatrix ComplexMatrix::adjoint() const {
    ComplexMatrix r(dim);
    for (int i = 0; i < dim; ++i)
        for (int j = 0; j < dim; ++j) r(j, i) = std::conj((*this)(i, j));
    return r;
}

cplx ComplexMatrix::trace() const {
    cplx t = 0.0;
    for (int i = 0; i < dim; ++i) t += (*this)(i, i);
    return t;
}

double ComplexMatrix::frobeniusNorm() const {
    double s = 0.0;
    for (const cplx& z : entries) s += std::norm(z);
    return std::sqrt(s);
}

double ComplexMatrix::maxAbsEntry() const {
    double m = 0.0;
    for (const cplx& z : entries) m = std::max(m, std::abs(z));
    return m;
}

double ComplexMatrix::hermiticityDefect() const {
    double d = 0.0;
    for (int i = 0; i < dim; ++i)
        for (int j = i; j < dim; ++j)
            d = std::max(d, std::abs((*this)(i, j) - std::conj((*this)(j, i))));
    return d;
}

bool ComplexMatrix::isHermitian(double relTol) const {
    const double scale = maxAbsEntry();
    if (scale == 0.0) return true;
    return hermiticityDefect() <= relTol * scale;
}

ComplexMatrix operator*(const ComplexMatrix& a, const ComplexMatrix& b) {
    ComplexMatrix r(a.dim);
    for (int i = 0; i < a.dim; ++i)
        for (int k = 0; k < a.dim; ++k) {
            const cplx aik = a(i, k);
            if (aik == cplx(0.0)) continue;
            for (int j = 0; j < a.dim; ++j) r(i, j) += aik * b(k, j);
        }
    return r;
}

ComplexVector operator*(const ComplexMatrix& a, const ComplexVector& v) {
    ComplexVector r(a.dim);
    for (int i = 0; i < a.dim; ++i) {
        cplx s = 0.0;
        for (int j = 0; j < a.dim; ++j) s += a(i, j) * v[j];
        r[i] = s;
    }
    return r;
}

ComplexMatrix operator*(cplx s, const ComplexMatrix& a) {
    ComplexMatrix r = a;
    for (cplx& z : r.entries) z *= s;
    return r;
}

ComplexMatrix operator+(const ComplexMatrix& a, const ComplexMatrix& b) {
    ComplexMatrix r = a;
    for (size_t i = 0; i < r.entries.size(); ++i) r.entries[i] += b.entries[i];
    return r;
}

ComplexMatrix operator-(const ComplexMatrix& a, const ComplexMatrix& b) {
    ComplexMatrix r = a;
    for (size_t i = 0; i < r.entries.size(); ++i) r.entries[i] -= b.entries[i];
    return r;
}

namespace {

// LU with partial pivoting, in place. Returns the permutation sign and the
// pivot row order; pivots smaller than `clamp` are replaced by `clamp`.
int luDecompose(ComplexMatrix& a, std::vector<int>& perm, double clamp) {
    const int n = a.dim;
    perm.resize(static_cast<size_t>(n));
    for (int i = 0; i < n; ++i) perm[static_cast<size_t>(i)] = i;
    int sign = 1;
    for (int col = 0; col < n; ++col) {
        int piv = col;
        double best = std::abs(a(col, col));
        for (int r = col + 1; r < n; ++r) {
            const double m = std::abs(a(r, col));
            if (m > best) {
                best = m;
                piv = r;
            }
        }
        if (piv != col) {
            for (int j = 0; j < n; ++j) std::swap(a(col, j), a(piv, j));
            std::swap(perm[static_cast<size_t>(col)], perm[static_cast<size_t>(piv)]);
            sign = -sign;
        }
        cplx p = a(col, col);
        if (clamp > 0.0 && std::abs(p) < clamp) {
            p = (p == cplx(0.0)) ? cplx(clamp) : p * (clamp / std::abs(p));
            a(col, col) = p;
        }
        if (p == cplx(0.0)) continue;  // det path tolerates exact zeros
        for (int r = col + 1; r < n; ++r) {
            const cplx f = a(r, col) / p;
            a(r, col) = f;
            for (int j = col + 1; j < n; ++j) a(r, j) -= f * a(col, j);
        }
    }
    return sign;
}

}  // namespace

cplx determinant(ComplexMatrix a) {
    std::vector<int> perm;
    const int sign = luDecompose(a, perm, 0.0);
    cplx d = static_cast<double>(sign);
    for (int i = 0; i < a.dim; ++i) d *= a(i, i);
    return d;
}

ComplexVector solveClamped(ComplexMatrix a, ComplexVector b) {
    const int n = a.dim;
    const double clamp = std::max(a.maxAbsEntry(), 1.0) * 1e-150;
    std::vector<int> perm;
    luDecompose(a, perm, clamp);
    ComplexVector x(n);
    for (int i = 0; i < n; ++i) x[i] = b[perm[static_cast<size_t>(i)]];
    for (int i = 1; i < n; ++i)
        for (int j = 0; j < i; ++j) x[i] -= a(i, j) * x[j];
    for (int i = n - 1; i >= 0; --i) {
        for (int j = i + 1; j < n; ++j) x[i] -= a(i, j) * x[j];
        x[i] /= a(i, i);
    }
    return x;
}

}  // namespace mqw
