#include "mqw/detection.hpp"

#include <cassert>
#include <cmath>

namespace mqw {

std::string protocolName(ProtocolKind k) {
    return k == ProtocolKind::OnSite ? "onsite" : "tracking";
}

DetectionSetup DetectionSetup::returnProblem(const ModelParams& p, ProtocolKind protocol,
                                             int N) {
    DetectionSetup s;
    s.params = p;
    s.protocol = protocol;
    s.initial = ComplexVector::basis(p.dim, 0);
    s.targetIndex = 0;
    s.N = N;
    return s;
}

void DetectionSetup::validate() const {
    if (initial.dim() != params.dim)
        throw std::invalid_argument("initial state dimension differs from the model");
    if (std::abs(initial.norm() - 1.0) > 1e-12)
        throw std::invalid_argument("initial state is not normalized");
    if (targetIndex < 0 || targetIndex >= params.dim)
        throw std::invalid_argument("target index outside the ring");
    if (N < 1) throw std::invalid_argument("at least one measurement is required");
}

FirstDetectionDistribution assembleDistribution(std::vector<double> f) {
    FirstDetectionDistribution out;
    double cum = 0.0;
    double weighted = 0.0;
    out.survival.reserve(f.size());
    for (size_t i = 0; i < f.size(); ++i) {
        double& fi = f[i];
        if (fi < 0.0) {
            if (fi < -tol::kNegativeF)
                throw std::logic_error("first-detection probability went negative");
            fi = 0.0;
        }
        cum += fi;
        weighted += static_cast<double>(i + 1) * fi;
        out.survival.push_back(std::min(1.0, std::max(0.0, 1.0 - cum)));
    }
    out.F = std::move(f);
    out.pDet = cum;
    if (cum > tol::kNoDetection) out.meanN = weighted / cum;
    return out;
}

ComplexMatrix stochasticMatrix(const ModelParams& p) {
    const ComplexMatrix u = unitaryFromHamiltonian(buildHamiltonian(p), p.tau);
    ComplexMatrix g(p.dim);
    for (int i = 0; i < p.dim; ++i)
        for (int j = 0; j < p.dim; ++j) g(i, j) = std::norm(u(i, j));
    return g;
}

FirstDetectionDistribution fnOnsite(const ComplexMatrix& u, const ComplexVector& initial,
                                    int target, int N) {
    std::vector<double> f(static_cast<size_t>(N));
    ComplexVector phi = initial;
    for (int n = 1; n <= N; ++n) {
        phi = u * phi;
        f[static_cast<size_t>(n - 1)] = std::norm(phi[target]);
        phi[target] = 0.0;
    }
    return assembleDistribution(std::move(f));
}

FirstDetectionDistribution fnOnsite(const DetectionSetup& setup) {
    assert(setup.protocol == ProtocolKind::OnSite);
    setup.validate();
    const ComplexMatrix u = unitaryFromHamiltonian(buildHamiltonian(setup.params),
                                                   setup.params.tau);
    return fnOnsite(u, setup.initial, setup.targetIndex, setup.N);
}

std::vector<double> bornVector(const ComplexVector& psi) {
    std::vector<double> p(static_cast<size_t>(psi.dim()));
    for (int i = 0; i < psi.dim(); ++i) p[static_cast<size_t>(i)] = std::norm(psi[i]);
    return p;
}

FirstDetectionDistribution fnTracking(const ComplexMatrix& g, std::vector<double> p0,
                                      int target, int N) {
    const int d = g.dim;
    std::vector<double> f(static_cast<size_t>(N));
    std::vector<double> cur = std::move(p0);
    std::vector<double> next(static_cast<size_t>(d));
    for (int n = 1; n <= N; ++n) {
        for (int i = 0; i < d; ++i) {
            double s = 0.0;
            for (int j = 0; j < d; ++j) s += g(i, j).real() * cur[static_cast<size_t>(j)];
            next[static_cast<size_t>(i)] = s;
        }
        f[static_cast<size_t>(n - 1)] = next[static_cast<size_t>(target)];
        next[static_cast<size_t>(target)] = 0.0;
        std::swap(cur, next);
    }
    return assembleDistribution(std::move(f));
}

FirstDetectionDistribution fnTracking(const DetectionSetup& setup) {
    assert(setup.protocol == ProtocolKind::Tracking);
    setup.validate();
    return fnTracking(stochasticMatrix(setup.params), bornVector(setup.initial),
                      setup.targetIndex, setup.N);
}

int recurrenceTheoremPrediction(const ModelParams& p, double tol) {
    return classifyPhaseFactors(p, tol).distinctCount;
}

ComplexVector darkStateVector(const ModelParams& p, std::pair<int, int> pair, double tol) {
    const auto cls = classifyPhaseFactors(p, tol);
    if (!cls.pairMatched(pair.first, pair.second)) throw PairNotMatchedError();
    const EigenSystem spec = closedFormSpectrum(p);
    const ComplexVector& ek = spec.rightVectors[static_cast<size_t>(pair.first)];
    const ComplexVector& el = spec.rightVectors[static_cast<size_t>(pair.second)];
    ComplexVector psi = ek[0] * el - el[0] * ek;  // <0|E_k>|E_l> - <0|E_l>|E_k>
    psi.normalize();
    return psi;
}

ComplexVector phasedInitialState(double phi) {
    ComplexVector psi(3);
    psi[1] = 1.0 / std::sqrt(2.0);
    psi[2] = std::exp(cplx(0.0, phi)) / std::sqrt(2.0);
    return psi;
}

std::vector<double> AxisSpec::values() const {
    std::vector<double> v(static_cast<size_t>(steps));
    if (steps == 1) {
        v[0] = min;
        return v;
    }
    const double h = (max - min) / (steps - 1);
    for (int i = 0; i < steps; ++i) v[static_cast<size_t>(i)] = min + h * i;
    return v;
}

namespace {

double pdetFor(ProtocolKind protocol, const ModelParams& p, const ComplexVector& initial,
               int target, int N) {
    DetectionSetup s;
    s.params = p;
    s.protocol = protocol;
    s.initial = initial;
    s.targetIndex = target;
    s.N = N;
    return (protocol == ProtocolKind::OnSite) ? fnOnsite(s).pDet : fnTracking(s).pDet;
}

}  // namespace

Grid detectionProbabilityMap(ProtocolKind protocol, int N, const AxisSpec& axis1,
                             const AxisSpec& axis2, double alphaFixed, double phiFixed) {
    const bool phiMode = axis1.name == "phi" || axis2.name == "phi";
    Grid grid{axis1, axis2, {}};
    grid.values.resize(static_cast<size_t>(axis1.steps) * static_cast<size_t>(axis2.steps));
    const auto v1 = axis1.values();
    const auto v2 = axis2.values();
    for (int i = 0; i < axis1.steps; ++i) {
        for (int j = 0; j < axis2.steps; ++j) {
            double gtau = 0.0, alpha = alphaFixed, phi = phiFixed;
            auto assign = [&](const std::string& name, double value) {
                if (name == "gtau") gtau = value;
                else if (name == "alpha") alpha = value;
                else if (name == "phi") phi = value;
            };
            assign(axis1.name, v1[static_cast<size_t>(i)]);
            assign(axis2.name, v2[static_cast<size_t>(j)]);
            const ModelParams p = ModelParams::fromGammaTau(gtau, alpha);
            const ComplexVector initial =
                phiMode ? phasedInitialState(phi) : ComplexVector::basis(3, 1);
            grid.values[static_cast<size_t>(i) * axis2.steps + j] =
                pdetFor(protocol, p, initial, 0, N);
        }
    }
    return grid;
}

Grid chiralAsymmetryMap(ProtocolKind protocol, int N, const AxisSpec& gtauAxis,
                        const AxisSpec& alphaAxis) {
    Grid grid{gtauAxis, alphaAxis, {}};
    grid.values.resize(static_cast<size_t>(gtauAxis.steps) *
                       static_cast<size_t>(alphaAxis.steps));
    const auto gv = gtauAxis.values();
    const auto av = alphaAxis.values();
    for (int i = 0; i < gtauAxis.steps; ++i) {
        for (int j = 0; j < alphaAxis.steps; ++j) {
            const ModelParams p =
                ModelParams::fromGammaTau(gv[static_cast<size_t>(i)], av[static_cast<size_t>(j)]);
            const double p1 = pdetFor(protocol, p, ComplexVector::basis(3, 1), 0, N);
            const double p2 = pdetFor(protocol, p, ComplexVector::basis(3, 2), 0, N);
            grid.values[static_cast<size_t>(i) * alphaAxis.steps + j] = p1 - p2;
        }
    }
    return grid;
}

}  // namespace mqw
