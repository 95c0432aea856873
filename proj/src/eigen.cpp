#include "mqw/eigen.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numeric>

namespace mqw {

namespace {

double pairResidual(const ComplexMatrix& a, const ComplexVector& v, cplx lambda) {
    double s = 0.0;
    for (int i = 0; i < a.dim; ++i) {
        cplx r = -lambda * v[i];
        for (int j = 0; j < a.dim; ++j) r += a(i, j) * v[j];
        s += std::norm(r);
    }
    return std::sqrt(s);
}

cplx rayleigh(const ComplexMatrix& a, const ComplexVector& v) {
    return dotc(v, a * v);  // v has unit norm
}

// ---------------------------------------------------------------------------
// Hermitian path: cyclic Jacobi with complex rotations.
// ---------------------------------------------------------------------------

double offDiagonalMass(const ComplexMatrix& m) {
    double s = 0.0;
    for (int i = 0; i < m.dim; ++i)
        for (int j = 0; j < m.dim; ++j)
            if (i != j) s += std::norm(m(i, j));
    return std::sqrt(s);
}

}  // namespace

double EigenSystem::maxAbsEigenvalue() const {
    double m = 0.0;
    for (const cplx& z : eigenvalues) m = std::max(m, std::abs(z));
    return m;
}

EigenSystem hermitianEigendecompose(const ComplexMatrix& a) {
    if (!a.isHermitian()) throw NotHermitianError();
    const int n = a.dim;
    const double frobA = a.frobeniusNorm();

    // Work on the Hermitian average so the diagonal is exactly real.
    ComplexMatrix m(n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) m(i, j) = 0.5 * (a(i, j) + std::conj(a(j, i)));
    ComplexMatrix q = ComplexMatrix::identity(n);

    const double target = tol::kJacobiOffDiag * frobA;
    bool converged = frobA == 0.0 || offDiagonalMass(m) <= target;
    for (int sweep = 0; sweep < 60 && !converged; ++sweep) {
        for (int p = 0; p < n - 1; ++p) {
            for (int qq = p + 1; qq < n; ++qq) {
                const cplx apq = m(p, qq);
                const double mag = std::abs(apq);
                if (mag == 0.0) continue;
                const cplx ph = apq / mag;
                const double app = m(p, p).real();
                const double aqq = m(qq, qq).real();
                const double theta = (aqq - app) / (2.0 * mag);
                const double t = (theta >= 0.0 ? 1.0 : -1.0) /
                                 (std::abs(theta) + std::sqrt(1.0 + theta * theta));
                const double c = 1.0 / std::sqrt(1.0 + t * t);
                const double s = t * c;

                // rows p,q of V^dag M
                for (int j = 0; j < n; ++j) {
                    const cplx mp = m(p, j), mq = m(qq, j);
                    m(p, j) = c * mp - ph * s * mq;
                    m(qq, j) = s * mp + ph * c * mq;
                }
                // columns p,q of (V^dag M) V
                for (int i = 0; i < n; ++i) {
                    const cplx mp = m(i, p), mq = m(i, qq);
                    m(i, p) = c * mp - std::conj(ph) * s * mq;
                    m(i, qq) = s * mp + std::conj(ph) * c * mq;
                }
                m(p, p) = app - t * mag;
                m(qq, qq) = aqq + t * mag;
                m(p, qq) = 0.0;
                m(qq, p) = 0.0;
                // accumulate Q <- Q V
                for (int i = 0; i < n; ++i) {
                    const cplx qp = q(i, p), qq2 = q(i, qq);
                    q(i, p) = c * qp - std::conj(ph) * s * qq2;
                    q(i, qq) = s * qp + std::conj(ph) * c * qq2;
                }
            }
        }
        converged = offDiagonalMass(m) <= target;
    }
    if (!converged) throw NoConvergenceError("Jacobi sweep cap exceeded");

    std::vector<int> order(static_cast<size_t>(n));
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(),
              [&](int i, int j) { return m(i, i).real() < m(j, j).real(); });

    EigenSystem out;
    for (int k : order) {
        const double lambda = m(k, k).real();
        ComplexVector v(n);
        for (int i = 0; i < n; ++i) v[i] = q(i, k);
        out.eigenvalues.push_back(lambda);
        out.residuals.push_back(pairResidual(a, v, lambda));
        out.rightVectors.push_back(std::move(v));
    }
    return out;
}

// ---------------------------------------------------------------------------
// General path: characteristic cubic for dim 3, Hessenberg QR above that,
// eigenvectors from clustered null spaces / inverse iteration.
// ---------------------------------------------------------------------------

namespace {

// Roots of lambda^3 + a2 lambda^2 + a1 lambda + a0 via the complex Cardano
// formula, plus a few Newton polish steps.
std::array<cplx, 3> cubicRoots(cplx a2, cplx a1, cplx a0) {
    const cplx p = a1 - a2 * a2 / 3.0;
    const cplx q = 2.0 * a2 * a2 * a2 / 27.0 - a2 * a1 / 3.0 + a0;
    const cplx shift = -a2 / 3.0;

    std::array<cplx, 3> x;
    if (std::abs(p) == 0.0 && std::abs(q) == 0.0) {
        x = {cplx(0.0), cplx(0.0), cplx(0.0)};
    } else {
        const cplx disc = std::sqrt(q * q / 4.0 + p * p * p / 27.0);
        cplx u3 = -q / 2.0 + disc;
        const cplx alt = -q / 2.0 - disc;
        if (std::abs(alt) > std::abs(u3)) u3 = alt;
        const cplx u = std::pow(u3, 1.0 / 3.0);
        const cplx v = (std::abs(u) > 0.0) ? -p / (3.0 * u) : cplx(0.0);
        const cplx w(-0.5, std::sqrt(3.0) / 2.0);  // exp(2 pi i / 3)
        const cplx w2 = std::conj(w);
        x = {u + v, w * u + w2 * v, w2 * u + w * v};
    }

    std::array<cplx, 3> roots;
    for (int k = 0; k < 3; ++k) {
        cplx r = x[k] + shift;
        for (int it = 0; it < 3; ++it) {
            const cplx f = ((r + a2) * r + a1) * r + a0;
            const double ar = std::abs(r);
            const double fFloor = ((ar + std::abs(a2)) * ar + std::abs(a1)) * ar + std::abs(a0);
            // residual at rounding level: a Newton step would only add noise
            // (and near a multiple root it amplifies it by 1/|f'|)
            if (std::abs(f) <= 1e-14 * std::max(fFloor, 1e-300)) break;
            const cplx fp = (3.0 * r + 2.0 * a2) * r + a1;
            if (std::abs(fp) <= 1e-12 * std::max(1.0, fFloor)) break;
            const cplx step = f / fp;
            if (std::abs(step) > 0.5) break;
            r -= step;
        }
        roots[k] = r;
    }
    return roots;
}

ComplexVector crossRows(const ComplexVector& a, const ComplexVector& b) {
    ComplexVector c(3);
    c[0] = a[1] * b[2] - a[2] * b[1];
    c[1] = a[2] * b[0] - a[0] * b[2];
    c[2] = a[0] * b[1] - a[1] * b[0];
    return c;
}

// Orthonormal basis (up to `want` vectors) of the null space of the 3x3
// matrix m, by the largest-pivot cross-product method. Rows negligible
// against the original matrix scale are treated as zero before the rank of
// the remainder is judged.
std::vector<ComplexVector> nullSpace3(const ComplexMatrix& m, int want, double scale) {
    const double rowCut = 1e-10 * std::max(scale, 1e-300);
    std::array<ComplexVector, 3> rows;
    std::array<double, 3> rowNorms{};
    std::vector<int> live;
    for (int i = 0; i < 3; ++i) {
        rows[static_cast<size_t>(i)] = ComplexVector(3);
        for (int j = 0; j < 3; ++j) rows[static_cast<size_t>(i)][j] = m(i, j);
        rowNorms[static_cast<size_t>(i)] = rows[static_cast<size_t>(i)].norm();
        if (rowNorms[static_cast<size_t>(i)] >= rowCut) live.push_back(i);
    }

    auto planeFromRow = [&](int idx) {
        // null space of a rank-1 matrix: the plane r . v = 0 (unconjugated)
        const ComplexVector& r = rows[static_cast<size_t>(idx)];
        int piv = 0;
        for (int i = 1; i < 3; ++i)
            if (std::abs(r[i]) > std::abs(r[piv])) piv = i;
        std::vector<ComplexVector> basis;
        for (int j = 0; j < 3; ++j) {
            if (j == piv) continue;
            ComplexVector v(3);
            v[j] = 1.0;
            v[piv] = -r[j] / r[piv];
            for (const ComplexVector& u : basis) v = v - dotc(u, v) * u;
            v.normalize();
            basis.push_back(std::move(v));
        }
        return basis;
    };

    std::vector<ComplexVector> basis;
    if (live.empty()) {
        for (int j = 0; j < 3; ++j) basis.push_back(ComplexVector::basis(3, j));
    } else if (live.size() == 1) {
        basis = planeFromRow(live.front());
    } else {
        // most independent pair among the significant rows
        double bestRel = -1.0;
        ComplexVector bestCross;
        for (size_t a = 0; a < live.size(); ++a) {
            for (size_t b = a + 1; b < live.size(); ++b) {
                const int i = live[a], j = live[b];
                ComplexVector c = crossRows(rows[static_cast<size_t>(i)],
                                            rows[static_cast<size_t>(j)]);
                const double rel = c.norm() / (rowNorms[static_cast<size_t>(i)] *
                                               rowNorms[static_cast<size_t>(j)]);
                if (rel > bestRel) {
                    bestRel = rel;
                    bestCross = std::move(c);
                }
            }
        }
        if (bestRel < 1e-8) {
            int largest = live.front();
            for (int i : live)
                if (rowNorms[static_cast<size_t>(i)] > rowNorms[static_cast<size_t>(largest)])
                    largest = i;
            basis = planeFromRow(largest);
        } else {
            bestCross.normalize();
            basis.push_back(std::move(bestCross));
        }
    }
    if (static_cast<int>(basis.size()) > want)
        basis.resize(static_cast<size_t>(want));
    return basis;
}

// One inverse-iteration step; keeps the refined vector only if it lowers the
// residual against the Rayleigh quotient.
void refineVector(const ComplexMatrix& a, cplx lambda, ComplexVector& v, double frobA) {
    const double before = pairResidual(a, v, rayleigh(a, v));
    if (before <= tol::kRefineTrigger * std::max(frobA, 1e-300)) return;
    ComplexMatrix shifted = a;
    for (int i = 0; i < a.dim; ++i) shifted(i, i) -= lambda;
    ComplexVector w = solveClamped(shifted, v);
    double peak = 0.0;
    for (int i = 0; i < a.dim; ++i) peak = std::max(peak, std::abs(w[i]));
    if (peak == 0.0 || !std::isfinite(peak)) return;
    for (int i = 0; i < a.dim; ++i) w[i] /= peak;
    w.normalize();
    if (pairResidual(a, w, rayleigh(a, w)) < before) v = std::move(w);
}

std::vector<std::vector<int>> clusterEigenvalues(const std::vector<cplx>& lambda,
                                                 double scale) {
    const double tolc = tol::kEigenCluster * std::max(scale, 1e-300);
    const int n = static_cast<int>(lambda.size());
    std::vector<int> group(static_cast<size_t>(n), -1);
    std::vector<std::vector<int>> clusters;
    for (int i = 0; i < n; ++i) {
        if (group[static_cast<size_t>(i)] >= 0) continue;
        std::vector<int> c = {i};
        group[static_cast<size_t>(i)] = static_cast<int>(clusters.size());
        for (int j = i + 1; j < n; ++j) {
            if (group[static_cast<size_t>(j)] >= 0) continue;
            for (int k : c) {
                if (std::abs(lambda[static_cast<size_t>(k)] - lambda[static_cast<size_t>(j)]) <= tolc) {
                    c.push_back(j);
                    group[static_cast<size_t>(j)] = group[static_cast<size_t>(i)];
                    break;
                }
            }
        }
        clusters.push_back(std::move(c));
    }
    return clusters;
}

// Eigenvalues of a Hessenberg matrix by explicit single-shift QR with
// deflation; unshifted steps first, Wilkinson shift afterwards.
std::vector<cplx> hessenbergQrEigenvalues(ComplexMatrix h) {
    const int n = h.dim;
    const int cap = 100 * n * n;
    int total = 0;
    int m = n - 1;
    int itersThisEig = 0;
    auto negligible = [&](int i) {
        return std::abs(h(i, i - 1)) <=
               1e-16 * (std::abs(h(i - 1, i - 1)) + std::abs(h(i, i)));
    };
    while (m > 0) {
        int l = m;
        while (l > 0 && !negligible(l)) --l;
        if (l == m) {
            h(m, m - 1) = 0.0;
            --m;
            itersThisEig = 0;
            continue;
        }
        if (++total > cap) throw NoConvergenceError("QR iteration cap exceeded");

        cplx shift = 0.0;
        if (itersThisEig >= 3) {
            // Wilkinson: eigenvalue of the trailing 2x2 closest to h(m,m)
            const cplx a = h(m - 1, m - 1), b = h(m - 1, m);
            const cplx c = h(m, m - 1), d = h(m, m);
            const cplx tr = a + d;
            const cplx disc = std::sqrt(tr * tr - 4.0 * (a * d - b * c));
            const cplx e1 = (tr + disc) / 2.0, e2 = (tr - disc) / 2.0;
            shift = (std::abs(e1 - d) < std::abs(e2 - d)) ? e1 : e2;
        }
        ++itersThisEig;

        for (int i = l; i <= m; ++i) h(i, i) -= shift;
        std::vector<double> cs(static_cast<size_t>(m));
        std::vector<cplx> sn(static_cast<size_t>(m));
        for (int i = l; i < m; ++i) {
            const cplx x = h(i, i), y = h(i + 1, i);
            const double r = std::sqrt(std::norm(x) + std::norm(y));
            double c;
            cplx s;
            if (r == 0.0) {
                c = 1.0;
                s = 0.0;
            } else if (std::abs(x) == 0.0) {
                c = 0.0;
                s = std::conj(y) / std::abs(y);
            } else {
                c = std::abs(x) / r;
                s = (x / std::abs(x)) * std::conj(y) / r;
            }
            cs[static_cast<size_t>(i)] = c;
            sn[static_cast<size_t>(i)] = s;
            for (int j = i; j <= m; ++j) {
                const cplx hi = h(i, j), hj = h(i + 1, j);
                h(i, j) = c * hi + s * hj;
                h(i + 1, j) = -std::conj(s) * hi + c * hj;
            }
        }
        for (int i = l; i < m; ++i) {
            const double c = cs[static_cast<size_t>(i)];
            const cplx s = sn[static_cast<size_t>(i)];
            const int top = l;
            const int bottom = std::min(i + 2, m);
            for (int r = top; r <= bottom; ++r) {
                const cplx hi = h(r, i), hj = h(r, i + 1);
                h(r, i) = c * hi + std::conj(s) * hj;
                h(r, i + 1) = -s * hi + c * hj;
            }
        }
        for (int i = l; i <= m; ++i) h(i, i) += shift;
    }
    std::vector<cplx> out(static_cast<size_t>(n));
    for (int i = 0; i < n; ++i) out[static_cast<size_t>(i)] = h(i, i);
    return out;
}

ComplexMatrix hessenbergForm(ComplexMatrix a) {
    const int n = a.dim;
    for (int col = 0; col < n - 2; ++col) {
        // Householder vector annihilating a(col+2.., col)
        double nrm = 0.0;
        for (int i = col + 1; i < n; ++i) nrm += std::norm(a(i, col));
        nrm = std::sqrt(nrm);
        if (nrm == 0.0) continue;
        const cplx x0 = a(col + 1, col);
        const cplx phase = (std::abs(x0) > 0.0) ? x0 / std::abs(x0) : cplx(1.0);
        const cplx alpha = -phase * nrm;
        std::vector<cplx> v(static_cast<size_t>(n), 0.0);
        v[static_cast<size_t>(col + 1)] = x0 - alpha;
        for (int i = col + 2; i < n; ++i) v[static_cast<size_t>(i)] = a(i, col);
        double vnorm2 = 0.0;
        for (int i = col + 1; i < n; ++i) vnorm2 += std::norm(v[static_cast<size_t>(i)]);
        if (vnorm2 == 0.0) continue;
        // A <- P A P with P = I - 2 v v^dag / |v|^2
        for (int j = 0; j < n; ++j) {
            cplx s = 0.0;
            for (int i = col + 1; i < n; ++i) s += std::conj(v[static_cast<size_t>(i)]) * a(i, j);
            s *= 2.0 / vnorm2;
            for (int i = col + 1; i < n; ++i) a(i, j) -= s * v[static_cast<size_t>(i)];
        }
        for (int i = 0; i < n; ++i) {
            cplx s = 0.0;
            for (int j = col + 1; j < n; ++j) s += a(i, j) * v[static_cast<size_t>(j)];
            s *= 2.0 / vnorm2;
            for (int j = col + 1; j < n; ++j) a(i, j) -= s * std::conj(v[static_cast<size_t>(j)]);
        }
        for (int i = col + 2; i < n; ++i) a(i, col) = 0.0;
    }
    return a;
}

// Inverse-iteration eigenvector for one eigenvalue of a general matrix,
// orthogonalized against previously found vectors of the same cluster.
ComplexVector inverseIterationVector(const ComplexMatrix& a, cplx lambda,
                                     const std::vector<ComplexVector>& avoid, int tag) {
    const int n = a.dim;
    ComplexMatrix shifted = a;
    for (int i = 0; i < n; ++i) shifted(i, i) -= lambda;
    ComplexVector v(n);
    for (int i = 0; i < n; ++i)
        v[i] = cplx(std::cos(1.0 + i + 3.7 * tag), std::sin(2.0 + 0.9 * i + 1.3 * tag));
    for (const ComplexVector& u : avoid) v = v - dotc(u, v) * u;
    v.normalize();
    for (int it = 0; it < 3; ++it) {
        ComplexVector w = solveClamped(shifted, v);
        double peak = 0.0;
        for (int i = 0; i < n; ++i) peak = std::max(peak, std::abs(w[i]));
        if (peak == 0.0 || !std::isfinite(peak)) break;
        for (int i = 0; i < n; ++i) w[i] /= peak;
        for (const ComplexVector& u : avoid) w = w - dotc(u, w) * u;
        const double nn = w.norm();
        if (nn < 1e-8) break;  // cluster exhausted, keep previous iterate
        for (int i = 0; i < n; ++i) w[i] /= nn;
        v = std::move(w);
    }
    return v;
}

}  // namespace

EigenSystem generalEigendecompose(const ComplexMatrix& a, bool wantLeft) {
    const int n = a.dim;
    const double frobA = a.frobeniusNorm();
    EigenSystem out;

    if (frobA == 0.0) {
        for (int k = 0; k < n; ++k) {
            out.eigenvalues.push_back(0.0);
            out.rightVectors.push_back(ComplexVector::basis(n, k));
            if (wantLeft) out.leftVectors.push_back(ComplexVector::basis(n, k));
            out.residuals.push_back(0.0);
        }
        return out;
    }

    // Eigenvalues, on the matrix scaled to unit size.
    const double scale = a.maxAbsEntry();
    ComplexMatrix as = (cplx(1.0 / scale)) * a;
    std::vector<cplx> lambdas;
    if (n == 3) {
        const cplx tr = as.trace();
        cplx minors = 0.0;
        for (int i = 0; i < 3; ++i)
            for (int j = i + 1; j < 3; ++j)
                minors += as(i, i) * as(j, j) - as(i, j) * as(j, i);
        const cplx det = determinant(as);
        const auto roots = cubicRoots(-tr, minors, -det);
        lambdas.assign(roots.begin(), roots.end());
    } else {
        lambdas = hessenbergQrEigenvalues(hessenbergForm(as));
    }
    for (cplx& l : lambdas) l *= scale;

    const auto clusters = clusterEigenvalues(lambdas, frobA);

    std::vector<cplx> evs(static_cast<size_t>(n));
    std::vector<ComplexVector> right(static_cast<size_t>(n));
    std::vector<ComplexVector> left(static_cast<size_t>(n));
    bool defective = false;

    const ComplexMatrix adag = a.adjoint();
    for (const auto& cluster : clusters) {
        const int mult = static_cast<int>(cluster.size());
        cplx mean = 0.0;
        for (int idx : cluster) mean += lambdas[static_cast<size_t>(idx)];
        mean /= static_cast<double>(mult);

        std::vector<ComplexVector> vecs;
        std::vector<ComplexVector> lvecs;
        if (n == 3) {
            ComplexMatrix m = a;
            for (int i = 0; i < 3; ++i) m(i, i) -= mean;
            vecs = nullSpace3(m, mult, frobA);
            if (wantLeft) {
                ComplexMatrix md = adag;
                for (int i = 0; i < 3; ++i) md(i, i) -= std::conj(mean);
                lvecs = nullSpace3(md, mult, frobA);
            }
        } else {
            for (int k = 0; k < mult; ++k) {
                vecs.push_back(inverseIterationVector(a, mean, vecs, k));
                if (wantLeft)
                    lvecs.push_back(inverseIterationVector(adag, std::conj(mean), lvecs, k));
            }
        }
        if (static_cast<int>(vecs.size()) < mult) {
            defective = true;
            while (static_cast<int>(vecs.size()) < mult) vecs.push_back(vecs.back());
        }
        if (wantLeft) {
            if (static_cast<int>(lvecs.size()) < mult) {
                defective = true;
                while (static_cast<int>(lvecs.size()) < mult) lvecs.push_back(lvecs.back());
            }
        }

        for (ComplexVector& v : vecs) refineVector(a, mean, v, frobA);
        if (wantLeft)
            for (ComplexVector& u : lvecs) refineVector(adag, std::conj(mean), u, frobA);

        // Pair left vectors with right ones inside a degenerate group so that
        // <u_i|v_j> is diagonal; a singular pairing marks the group defective.
        if (wantLeft && mult == 2) {
            const cplx b00 = dotc(lvecs[0], vecs[0]), b01 = dotc(lvecs[0], vecs[1]);
            const cplx b10 = dotc(lvecs[1], vecs[0]), b11 = dotc(lvecs[1], vecs[1]);
            const cplx det2 = b00 * b11 - b01 * b10;
            if (std::abs(det2) > 1e-12) {
                // rows of conj(B^{-1}) combine the left vectors
                const cplx i00 = b11 / det2, i01 = -b01 / det2;
                const cplx i10 = -b10 / det2, i11 = b00 / det2;
                ComplexVector u0 = std::conj(i00) * lvecs[0] + std::conj(i01) * lvecs[1];
                ComplexVector u1 = std::conj(i10) * lvecs[0] + std::conj(i11) * lvecs[1];
                if (u0.norm() > 0.0 && u1.norm() > 0.0) {
                    u0.normalize();
                    u1.normalize();
                    lvecs[0] = std::move(u0);
                    lvecs[1] = std::move(u1);
                }
            }
        }

        for (int k = 0; k < mult; ++k) {
            const int idx = cluster[static_cast<size_t>(k)];
            ComplexVector v = vecs[static_cast<size_t>(k)];
            cplx lam = (mult > 1) ? rayleigh(a, v) : lambdas[static_cast<size_t>(idx)];
            if (mult == 1) {
                // keep the sharper of polished root and Rayleigh quotient
                const cplx ray = rayleigh(a, v);
                if (pairResidual(a, v, ray) < pairResidual(a, v, lam)) lam = ray;
            }
            evs[static_cast<size_t>(idx)] = lam;
            right[static_cast<size_t>(idx)] = std::move(v);
            if (wantLeft) left[static_cast<size_t>(idx)] = lvecs[static_cast<size_t>(k)];
        }
    }

    out.eigenvalues = std::move(evs);
    out.rightVectors = std::move(right);
    if (wantLeft) out.leftVectors = std::move(left);
    for (int k = 0; k < n; ++k)
        out.residuals.push_back(
            pairResidual(a, out.rightVectors[static_cast<size_t>(k)], out.eigenvalues[static_cast<size_t>(k)]));
    if (wantLeft) {
        for (int k = 0; k < n; ++k)
            if (std::abs(dotc(out.leftVectors[static_cast<size_t>(k)],
                              out.rightVectors[static_cast<size_t>(k)])) < tol::kBiorthogonal)
                defective = true;
    }
    out.defective = defective;
    return out;
}

ComplexMatrix unitaryFromHamiltonian(const ComplexMatrix& h, double t) {
    const EigenSystem eig = hermitianEigendecompose(h);
    const int n = h.dim;
    ComplexMatrix u(n);
    for (int k = 0; k < n; ++k) {
        const double e = eig.eigenvalues[static_cast<size_t>(k)].real();
        const cplx phase = std::exp(cplx(0.0, -e * t));
        const ComplexVector& v = eig.rightVectors[static_cast<size_t>(k)];
        for (int i = 0; i < n; ++i) {
            const cplx vi = phase * v[i];
            for (int j = 0; j < n; ++j) u(i, j) += vi * std::conj(v[j]);
        }
    }
    return u;
}

}  // namespace mqw
