#include "mqw/spectra.hpp"

#include <algorithm>
#include <cmath>

namespace mqw {

namespace {

ComplexMatrix survivalOperator(const ModelParams& p, int target) {
    ComplexMatrix s = unitaryFromHamiltonian(buildHamiltonian(p), p.tau);
    for (int j = 0; j < s.dim; ++j) s(target, j) = 0.0;  // (I - P) U zeroes the row
    return s;
}

ComplexMatrix gtarOperator(const ModelParams& p, int target) {
    ComplexMatrix g = stochasticMatrix(p);
    for (int i = 0; i < g.dim; ++i) g(i, target) = 0.0;  // G (I - P) zeroes the column
    return g;
}

SurvivalSpectrum fromEigensystem(const ModelParams& p, ProtocolKind protocol,
                                 const EigenSystem& eig, int target) {
    SurvivalSpectrum out;
    out.params = p;
    out.protocol = protocol;
    out.eigenvalues = eig.eigenvalues;
    out.maxAbs = eig.maxAbsEigenvalue();
    out.defective = eig.defective;
    for (size_t k = 0; k < eig.eigenvalues.size(); ++k) {
        out.targetOverlaps.push_back(std::abs(eig.rightVectors[k][target]));
        if (!eig.leftVectors.empty())
            out.leftRightOverlaps.push_back(
                std::abs(dotc(eig.leftVectors[k], eig.rightVectors[k])));
    }
    return out;
}

}  // namespace

SurvivalSpectrum survivalSpectrumOnsite(const ModelParams& p, int target) {
    const EigenSystem eig = generalEigendecompose(survivalOperator(p, target), true);
    return fromEigensystem(p, ProtocolKind::OnSite, eig, target);
}

SurvivalSpectrum gtarSpectrum(const ModelParams& p, int target) {
    const EigenSystem eig = generalEigendecompose(gtarOperator(p, target), true);
    return fromEigensystem(p, ProtocolKind::Tracking, eig, target);
}

double nullMeasurementSpectral(const ModelParams& p, const ComplexVector& initial,
                               int target, int N) {
    const ComplexMatrix g = stochasticMatrix(p);
    const EigenSystem eig = generalEigendecompose(gtarOperator(p, target), true);

    const std::vector<double> p0 = bornVector(initial);
    ComplexVector gp0(p.dim);
    for (int i = 0; i < p.dim; ++i) {
        cplx s = 0.0;
        for (int j = 0; j < p.dim; ++j) s += g(i, j) * p0[static_cast<size_t>(j)];
        gp0[i] = s;
    }

    cplx sum = 0.0;
    for (size_t k = 0; k < eig.eigenvalues.size(); ++k) {
        const cplx mu = eig.eigenvalues[k];
        const ComplexVector& vr = eig.rightVectors[k];
        const ComplexVector& vl = eig.leftVectors[k];
        const cplx tarOverlap = vr[target];
        if (std::abs(tarOverlap) < 1e-11) {
            // A mode the target cannot see may still hold surviving mass. The
            // sum rests on full asymptotic detection, so a populated
            // unit-modulus dark mode invalidates it.
            if (std::abs(mu) > 1.0 - 1e-9 && std::abs(dotc(vl, gp0)) > 1e-11)
                throw DefectiveDecompositionError();
            continue;
        }
        const cplx muPowN = std::pow(mu, static_cast<double>(N));
        if (std::abs(muPowN) == 0.0) continue;
        const cplx pairing = dotc(vl, vr);
        if (std::abs(pairing) < tol::kBiorthogonal) throw DefectiveDecompositionError();
        if (std::abs(1.0 - mu) < 1e-10) throw DefectiveDecompositionError();
        sum += muPowN / (1.0 - mu) * dotc(vl, gp0) / pairing * tarOverlap;
    }
    if (std::abs(sum.imag()) > tol::kSpectralImag) throw DefectiveDecompositionError();
    return sum.real();
}

double nullMeasurementRecursion(const ModelParams& p, ProtocolKind protocol,
                                const ComplexVector& initial, int target, int N) {
    DetectionSetup s;
    s.params = p;
    s.protocol = protocol;
    s.initial = initial;
    s.targetIndex = target;
    s.N = N;
    const FirstDetectionDistribution d =
        (protocol == ProtocolKind::OnSite) ? fnOnsite(s) : fnTracking(s);
    return d.survival.back();
}

std::vector<std::pair<int, std::optional<double>>> crossoverCurve(
    const ModelParams& p, ProtocolKind protocol, const std::vector<int>& Ns) {
    std::vector<std::pair<int, std::optional<double>>> out;
    out.reserve(Ns.size());
    for (int n : Ns) {
        const DetectionSetup s = DetectionSetup::returnProblem(p, protocol, n);
        const FirstDetectionDistribution d =
            (protocol == ProtocolKind::OnSite) ? fnOnsite(s) : fnTracking(s);
        out.emplace_back(n, d.meanN);
    }
    return out;
}

namespace {

double maxAbsAt(double alpha, ProtocolKind protocol, double gtau, int target) {
    const ModelParams p = ModelParams::fromGammaTau(gtau, alpha);
    const ComplexMatrix op = (protocol == ProtocolKind::OnSite)
                                 ? survivalOperator(p, target)
                                 : gtarOperator(p, target);
    return generalEigendecompose(op).maxAbsEigenvalue();
}

}  // namespace

std::vector<double> unitEigenvalueCrossings(double alpha, ProtocolKind protocol,
                                            double gtauMin, double gtauMax,
                                            double scanStep, int target) {
    const double threshold = 1.0 - tol::kUnitEigen;
    auto f = [&](double g) { return maxAbsAt(alpha, protocol, g, target) - threshold; };

    const int count = std::max(2, static_cast<int>((gtauMax - gtauMin) / scanStep) + 1);
    std::vector<double> xs(static_cast<size_t>(count));
    std::vector<double> vals(static_cast<size_t>(count));
    for (int i = 0; i < count; ++i) {
        xs[static_cast<size_t>(i)] = gtauMin + (gtauMax - gtauMin) * i / (count - 1);
        vals[static_cast<size_t>(i)] = maxAbsAt(alpha, protocol, xs[static_cast<size_t>(i)], target);
    }

    auto bisect = [&](double lo, double hi) {
        // f(lo) and f(hi) have opposite signs
        double flo = f(lo);
        for (int it = 0; it < 80 && hi - lo > tol::kCrossingWidth; ++it) {
            const double mid = 0.5 * (lo + hi);
            const double fm = f(mid);
            if ((flo <= 0.0) == (fm <= 0.0)) {
                lo = mid;
                flo = fm;
            } else {
                hi = mid;
            }
        }
        return 0.5 * (lo + hi);
    };

    std::vector<double> crossings;
    for (int i = 1; i + 1 < count; ++i) {
        const size_t u = static_cast<size_t>(i);
        if (vals[u] < vals[u - 1] || vals[u] < vals[u + 1]) continue;  // not a local max
        // refine the peak by golden-section inside the bracketing pair
        double a = xs[u - 1], b = xs[u + 1];
        const double gr = 0.5 * (std::sqrt(5.0) - 1.0);
        double x1 = b - gr * (b - a), x2 = a + gr * (b - a);
        double f1 = maxAbsAt(alpha, protocol, x1, target);
        double f2 = maxAbsAt(alpha, protocol, x2, target);
        for (int it = 0; it < 60 && b - a > 1e-10; ++it) {
            if (f1 < f2) {
                a = x1;
                x1 = x2;
                f1 = f2;
                x2 = a + gr * (b - a);
                f2 = maxAbsAt(alpha, protocol, x2, target);
            } else {
                b = x2;
                x2 = x1;
                f2 = f1;
                x1 = b - gr * (b - a);
                f1 = maxAbsAt(alpha, protocol, x1, target);
            }
        }
        const double peakX = 0.5 * (a + b);
        if (maxAbsAt(alpha, protocol, peakX, target) < threshold) continue;

        // walk outward until the threshold is undercut, then bisect both flanks
        double lo = peakX;
        while (lo > gtauMin && f(lo) > 0.0) lo = std::max(gtauMin, lo - scanStep);
        if (f(lo) <= 0.0) crossings.push_back(bisect(lo, peakX));
        double hi = peakX;
        while (hi < gtauMax && f(hi) > 0.0) hi = std::min(gtauMax, hi + scanStep);
        if (f(hi) <= 0.0) crossings.push_back(bisect(peakX, hi));
    }
    std::sort(crossings.begin(), crossings.end());
    std::vector<double> unique;
    for (double x : crossings)
        if (unique.empty() || x - unique.back() > 2.0 * tol::kCrossingWidth)
            unique.push_back(x);
    return unique;
}

}  // namespace mqw
