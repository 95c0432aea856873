#include "mqw/model.hpp"

#include <cmath>

namespace mqw {

namespace {

double reduceAngle(double a) {
    a = std::fmod(a, 2.0 * kPi);
    if (a > kPi) a -= 2.0 * kPi;
    if (a < -kPi) a += 2.0 * kPi;
    return a;
}

}  // namespace

ModelParams::ModelParams(double gamma_, double alpha_, double tau_)
    : gamma(gamma_), alpha(reduceAngle(alpha_)), tau(tau_) {
    if (gamma <= 0.0) throw std::invalid_argument("ModelParams: gamma must be positive");
    if (tau < 0.0) throw std::invalid_argument("ModelParams: tau must be nonnegative");
}

ModelParams ModelParams::fromGammaTau(double gtau, double alpha_) {
    return ModelParams(1.0, alpha_, gtau);
}

ComplexMatrix buildHamiltonian(const ModelParams& p) {
    const cplx hop = -p.gamma * std::exp(cplx(0.0, p.alpha));
    ComplexMatrix h(3);
    h(0, 1) = hop;
    h(1, 2) = hop;
    h(2, 0) = hop;
    h(1, 0) = std::conj(hop);
    h(2, 1) = std::conj(hop);
    h(0, 2) = std::conj(hop);
    return h;
}

EigenSystem closedFormSpectrum(const ModelParams& p) {
    const ComplexMatrix h = buildHamiltonian(p);
    EigenSystem out;
    for (int k = 0; k < 3; ++k) {
        const double e = -2.0 * p.gamma * std::cos(2.0 * kPi * k / 3.0 + p.alpha);
        ComplexVector v(3);
        // w^{k(x-2)} / sqrt(3) with w = e^{2 pi i/3}: site-2 component real positive
        for (int x = 0; x < 3; ++x)
            v[x] = std::exp(cplx(0.0, 2.0 * kPi / 3.0 * k * (x - 2))) / std::sqrt(3.0);
        double res = 0.0;
        for (int i = 0; i < 3; ++i) {
            cplx r = -e * v[i];
            for (int j = 0; j < 3; ++j) r += h(i, j) * v[j];
            res += std::norm(r);
        }
        out.eigenvalues.push_back(e);
        out.rightVectors.push_back(std::move(v));
        out.residuals.push_back(std::sqrt(res));
    }
    return out;
}

std::array<cplx, 3> phaseFactors(const ModelParams& p) {
    std::array<cplx, 3> f;
    for (int k = 0; k < 3; ++k) {
        const double e = -2.0 * p.gamma * std::cos(2.0 * kPi * k / 3.0 + p.alpha);
        f[static_cast<size_t>(k)] = std::exp(cplx(0.0, -e * p.tau));
    }
    return f;
}

bool PhaseFactorClassification::pairMatched(int k, int l) const {
    if (k > l) std::swap(k, l);
    for (const auto& pr : matchedPairs)
        if (pr.first == k && pr.second == l) return true;
    return false;
}

PhaseFactorClassification classifyPhaseFactors(const ModelParams& p, double tol) {
    PhaseFactorClassification out;
    out.factors = phaseFactors(p);
    std::array<int, 3> group = {0, 1, 2};
    for (int k = 0; k < 3; ++k) {
        for (int l = k + 1; l < 3; ++l) {
            if (std::abs(out.factors[static_cast<size_t>(k)] -
                         out.factors[static_cast<size_t>(l)]) <= tol) {
                out.matchedPairs.emplace_back(k, l);
                // union by relabeling: merge the groups of k and l
                const int from = group[static_cast<size_t>(l)];
                const int to = group[static_cast<size_t>(k)];
                for (int& g : group)
                    if (g == from) g = to;
            }
        }
    }
    int distinct = 0;
    for (int g = 0; g < 3; ++g)
        if (group[static_cast<size_t>(g)] == g) ++distinct;
    out.distinctCount = distinct;
    return out;
}

double MatchingCurve::gammaTau(double alpha) const {
    double denom = 0.0;
    double numer = 0.0;
    if (pair == std::pair<int, int>(1, 2)) {
        denom = std::sqrt(3.0) * std::sin(alpha);
        numer = (family == 0) ? 2.0 * branchIndex * kPi : -(2.0 * branchIndex + 1.0) * kPi;
    } else if (pair == std::pair<int, int>(1, 0)) {
        denom = std::sin(alpha + kPi / 6.0) + std::cos(alpha);
        numer = branchIndex * kPi;
    } else if (pair == std::pair<int, int>(2, 0)) {
        denom = std::sin(-alpha + kPi / 6.0) + std::cos(alpha);
        numer = branchIndex * kPi;
    } else {
        throw DomainError("matching curve: unsupported pair");
    }
    if (std::abs(denom) < 1e-12)
        throw DomainError("matching curve: denominator vanishes at this alpha");
    return numer / denom;
}

std::vector<MatchingCurve> matchingCurves(std::pair<int, int> pair, int branchMin,
                                          int branchMax) {
    if (pair != std::pair<int, int>(1, 2) && pair != std::pair<int, int>(1, 0) &&
        pair != std::pair<int, int>(2, 0))
        throw DomainError("matching curves defined for pairs (1,2), (1,0), (2,0)");
    std::vector<MatchingCurve> out;
    for (int n = branchMin; n <= branchMax; ++n) {
        out.push_back(MatchingCurve{pair, n, 0});
        if (pair == std::pair<int, int>(1, 2)) out.push_back(MatchingCurve{pair, n, 1});
    }
    return out;
}

namespace {

ComplexMatrix kron2(const std::array<cplx, 4>& a, const std::array<cplx, 4>& b) {
    ComplexMatrix m(4);
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j)
            for (int k = 0; k < 2; ++k)
                for (int l = 0; l < 2; ++l)
                    m(2 * i + k, 2 * j + l) =
                        a[static_cast<size_t>(2 * i + j)] * b[static_cast<size_t>(2 * k + l)];
    return m;
}

double blockResidual(const ComplexMatrix& hq, const std::array<int, 3>& siteToQubit,
                     const ComplexMatrix& href) {
    double r = 0.0;
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j)
            r = std::max(r, std::abs(hq(siteToQubit[static_cast<size_t>(i)],
                                        siteToQubit[static_cast<size_t>(j)]) -
                                     href(i, j)));
    return r;
}

}  // namespace

QubitEncodingReport buildQubitHamiltonian(const ModelParams& p) {
    const std::array<cplx, 4> id = {1.0, 0.0, 0.0, 1.0};
    const std::array<cplx, 4> sx = {0.0, 1.0, 1.0, 0.0};
    const std::array<cplx, 4> sy = {0.0, cplx(0.0, -1.0), cplx(0.0, 1.0), 0.0};
    const std::array<cplx, 4> sz = {1.0, 0.0, 0.0, -1.0};

    const double ca = std::cos(p.alpha);
    const double sa = std::sin(p.alpha);
    ComplexMatrix hc = kron2(sx, id) + kron2(id, sx) + kron2(sz, sx) + kron2(sx, sz) +
                       kron2(sx, sx) + kron2(sy, sy);
    ComplexMatrix hs = kron2(sy, id) - kron2(id, sy) + kron2(sy, sz) - kron2(sz, sy) +
                       kron2(sx, sy) - kron2(sy, sx);
    ComplexMatrix hq = cplx(-0.5 * p.gamma) * (cplx(ca) * hc + cplx(sa) * hs);

    QubitEncodingReport rep;
    rep.qubitHamiltonian = hq;
    for (int x = 0; x < 3; ++x)
        rep.decoupledResidual = std::max(rep.decoupledResidual, std::abs(hq(3, x)));

    // basis indices: |00> = 0, |01> = 1, |10> = 2
    const std::array<int, 3> trackingMap = {0, 1, 2};  // site -> qubit index
    const std::array<int, 3> onsiteMap = {1, 0, 2};

    const ComplexMatrix hPlus = buildHamiltonian(p);
    rep.trackingMappingResidual = blockResidual(hq, trackingMap, hPlus);
    rep.onsiteMappingResidual = blockResidual(hq, onsiteMap, hPlus);

    ModelParams flipped = p;
    flipped.alpha = -p.alpha;
    const double onsiteMinus = blockResidual(hq, onsiteMap, buildHamiltonian(flipped));
    rep.onsiteAlphaSignFlipped = onsiteMinus < rep.onsiteMappingResidual;
    return rep;
}

}  // namespace mqw
