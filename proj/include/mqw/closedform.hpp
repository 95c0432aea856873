#pragma once

#include <cmath>

// Closed forms for the zero-flux ring: the exact first-detection sequences of
// both protocols, the finite-N conditional means built from them, and the
// near-transition broadening approximations.

namespace mqw::closedform {

struct ClosedFormParams {
    double zSq = 0.0;    // |z|^2  = 5/9 + 4/9 cos(3 gtau)
    double etaSq = 0.0;  // |eta|^2 = 2/9 - 2/9 cos(3 gtau)
    double xiSq = 0.0;   // |xi|^2 = |z|^2 + |eta|^2
    double epsSq = 0.0;  // (2/9)(3 gtau - 2 pi k)^2
    int k = 0;           // nearest transition index
};

ClosedFormParams paramsAt(double gtau);

// round(3 gtau / 2 pi), clamped at zero
int nearestTransitionIndex(double gtau);

// F_1 = |z|^2, F_n = (1-|z|^2)^2 |z|^{2(n-2)} for n >= 2.
double fnOnsiteClosed(double gtau, int n);

// Finite-N conditional mean for the on-site return problem.
double meanOnsiteFinite(double gtau, int N);

// 2 - e^{-N eps^2} (1 + N eps^2) near the k-th transition.
double meanOnsiteBroadened(double gtau, int N, int k);

// F_1 = |z|^2, F_n = 2 |eta|^4 (|eta|^2 + |z|^2)^{n-2} for n >= 2.
double fnTrackingClosed(double gtau, int n);

// Finite-N conditional mean for the tracking return problem.
double meanTrackingFinite(double gtau, int N);

// 3 - 2 e^{-N eps^2 / 2} (1 + N eps^2 / 2) near the k-th transition.
double meanTrackingBroadened(double gtau, int N, int k);

}  // namespace mqw::closedform
