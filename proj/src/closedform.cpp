#include "mqw/closedform.hpp"

#include <algorithm>

namespace mqw::closedform {

namespace {
constexpr double kPi = 3.141592653589793238462643383279502884;
// |xi|^2 this close to one is treated as the revival point itself.
constexpr double kRevival = 1e-12;
}  // namespace

int nearestTransitionIndex(double gtau) {
    return std::max(0, static_cast<int>(std::lround(3.0 * gtau / (2.0 * kPi))));
}

ClosedFormParams paramsAt(double gtau) {
    ClosedFormParams p;
    const double c = std::cos(3.0 * gtau);
    p.zSq = 5.0 / 9.0 + 4.0 / 9.0 * c;
    p.etaSq = 2.0 / 9.0 - 2.0 / 9.0 * c;
    p.xiSq = p.zSq + p.etaSq;
    p.k = nearestTransitionIndex(gtau);
    const double d = 3.0 * gtau - 2.0 * kPi * p.k;
    p.epsSq = 2.0 / 9.0 * d * d;
    return p;
}

double fnOnsiteClosed(double gtau, int n) {
    const double z2 = paramsAt(gtau).zSq;
    if (n == 1) return z2;
    return (1.0 - z2) * (1.0 - z2) * std::pow(z2, n - 2);
}

double meanOnsiteFinite(double gtau, int N) {
    const double z2 = paramsAt(gtau).zSq;
    const double zPow = std::pow(z2, N - 1);
    const double num = 2.0 - zPow * (1.0 + N * (1.0 - z2));
    const double den = 1.0 - zPow * (1.0 - z2);
    return num / den;
}

double meanOnsiteBroadened(double gtau, int N, int k) {
    const double d = 3.0 * gtau - 2.0 * kPi * k;
    const double b = N * 2.0 / 9.0 * d * d;
    return 2.0 - std::exp(-b) * (1.0 + b);
}

double fnTrackingClosed(double gtau, int n) {
    const ClosedFormParams p = paramsAt(gtau);
    if (n == 1) return p.zSq;
    return 2.0 * p.etaSq * p.etaSq * std::pow(p.xiSq, n - 2);
}

double meanTrackingFinite(double gtau, int N) {
    const ClosedFormParams p = paramsAt(gtau);
    const double xi2 = p.xiSq;
    if (xi2 > 1.0 - kRevival) return 1.0;  // analytic limit at the revival
    const double eta4 = p.etaSq * p.etaSq;
    const double z2 = p.zSq;
    const double xiPowN = std::pow(xi2, N);
    const double shared = 2.0 * eta4 * (xi2 - xiPowN) - xi2 * z2 * (xi2 - 1.0);
    const double first = 2.0 * eta4 *
                         (xi2 * xi2 - 2.0 * xi2 + xiPowN * (-N * xi2 + N + 1.0)) /
                         ((xi2 - 1.0) * shared);
    const double second = xi2 * z2 * (xi2 - 1.0) / shared;
    return first - second;
}

double meanTrackingBroadened(double gtau, int N, int k) {
    const double d = 3.0 * gtau - 2.0 * kPi * k;
    const double b = N * 2.0 / 9.0 * d * d;
    return 3.0 - 2.0 * std::exp(-b / 2.0) * (1.0 + b / 2.0);
}

}  // namespace mqw::closedform
