#include <doctest.h>

#include <cmath>

#include "mqw/eigen.hpp"
#include "mqw/model.hpp"
#include "oracles.hpp"

using namespace mqw;

namespace {

ComplexMatrix diag3(cplx a, cplx b, cplx c) {
    ComplexMatrix m(3);
    m(0, 0) = a;
    m(1, 1) = b;
    m(2, 2) = c;
    return m;
}

double reconstructionError(const ComplexMatrix& a, const EigenSystem& eig) {
    ComplexMatrix r(a.dim);
    for (size_t k = 0; k < eig.eigenvalues.size(); ++k) {
        const ComplexVector& v = eig.rightVectors[k];
        for (int i = 0; i < a.dim; ++i)
            for (int j = 0; j < a.dim; ++j)
                r(i, j) += eig.eigenvalues[k] * v[i] * std::conj(v[j]);
    }
    return (a - r).frobeniusNorm();
}

}  // namespace

TEST_CASE("hermitian eigendecompose: identity") {
    const auto eig = hermitianEigendecompose(ComplexMatrix::identity(3));
    for (int k = 0; k < 3; ++k) {
        CHECK(eig.eigenvalues[k].real() == doctest::Approx(1.0).epsilon(1e-14));
        CHECK(eig.residuals[k] <= 1e-14);
    }
}

TEST_CASE("hermitian eigendecompose: triangle Hamiltonian at alpha = 0") {
    const auto h = buildHamiltonian(ModelParams(1.0, 0.0, 1.0));
    const auto eig = hermitianEigendecompose(h);
    CHECK(eig.eigenvalues[0].real() == doctest::Approx(-2.0).epsilon(1e-12));
    CHECK(eig.eigenvalues[1].real() == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(eig.eigenvalues[2].real() == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("hermitian eigendecompose: alpha = 0.5 matches the cosine spectrum") {
    const auto h = buildHamiltonian(ModelParams(1.0, 0.5, 1.0));
    const auto eig = hermitianEigendecompose(h);
    std::vector<double> expected;
    for (int k = 0; k < 3; ++k) expected.push_back(-2.0 * std::cos(2.0 * kPi * k / 3.0 + 0.5));
    std::sort(expected.begin(), expected.end());
    for (int k = 0; k < 3; ++k)
        CHECK(eig.eigenvalues[k].real() == doctest::Approx(expected[k]).epsilon(1e-12));
}

TEST_CASE("hermitian eigendecompose: random matrices reconstruct and stay orthonormal") {
    CounterRng rng(7, 0);
    for (int trial = 0; trial < 20; ++trial) {
        const int dim = 2 + static_cast<int>(rng.uniform() * 11);  // up to 12
        const ComplexMatrix a = oracle::randomHermitian(rng, dim, 2.0);
        const auto eig = hermitianEigendecompose(a);
        const double frob = a.frobeniusNorm();
        for (int k = 0; k < dim; ++k) {
            CHECK(std::abs(eig.eigenvalues[k].imag()) <= 1e-12 * frob);
            CHECK(eig.residuals[k] <= tol::kEigenResidual * frob);
            CHECK(eig.rightVectors[k].norm() == doctest::Approx(1.0).epsilon(1e-12));
            if (k > 0)
                CHECK(eig.eigenvalues[k - 1].real() <= eig.eigenvalues[k].real() + 1e-13);
            for (int l = k + 1; l < dim; ++l)
                CHECK(std::abs(dotc(eig.rightVectors[k], eig.rightVectors[l])) <= 1e-10);
        }
        CHECK(reconstructionError(a, eig) <= tol::kEigenResidual * std::max(frob, 1.0));
    }
}

TEST_CASE("hermitian eigendecompose: rejects non-Hermitian input") {
    ComplexMatrix a(3);
    a(0, 1) = 1.0;
    CHECK_THROWS_AS(hermitianEigendecompose(a), NotHermitianError);
}

TEST_CASE("general eigendecompose: diagonal case") {
    const auto eig = generalEigendecompose(diag3(1.0, cplx(0.0, 2.0), -3.0));
    std::vector<cplx> got = eig.eigenvalues;
    std::sort(got.begin(), got.end(),
              [](cplx a, cplx b) { return a.real() < b.real(); });
    CHECK(std::abs(got[0] - cplx(-3.0)) <= 1e-12);
    CHECK(std::abs(got[1] - cplx(0.0, 2.0)) <= 1e-12);
    CHECK(std::abs(got[2] - cplx(1.0)) <= 1e-12);
}

TEST_CASE("general eigendecompose: determinant and trace identities, dim 3") {
    CounterRng rng(11, 0);
    for (int trial = 0; trial < 30; ++trial) {
        const ComplexMatrix a = oracle::randomMatrix(rng, 3, 1.5);
        const auto eig = generalEigendecompose(a);
        cplx prod = 1.0, sum = 0.0;
        for (const cplx& l : eig.eigenvalues) {
            prod *= l;
            sum += l;
        }
        const cplx det = determinant(a);
        const cplx tr = a.trace();
        CHECK(std::abs(prod - det) <= 1e-9 * std::max(1.0, std::abs(det)));
        CHECK(std::abs(sum - tr) <= 1e-10 * std::max(1.0, std::abs(tr)));
        const double frob = a.frobeniusNorm();
        for (size_t k = 0; k < 3; ++k) CHECK(eig.residuals[k] <= tol::kEigenResidual * frob);
    }
}

TEST_CASE("general eigendecompose: residuals and identities above dim 3") {
    CounterRng rng(13, 0);
    for (int dim : {4, 6, 8, 12}) {
        const ComplexMatrix a = oracle::randomMatrix(rng, dim, 1.0);
        const auto eig = generalEigendecompose(a, true);
        const double frob = a.frobeniusNorm();
        cplx prod = 1.0, sum = 0.0;
        for (const cplx& l : eig.eigenvalues) {
            prod *= l;
            sum += l;
        }
        const cplx det = determinant(a);
        CHECK(std::abs(prod - det) <= 1e-9 * std::max(1.0, std::abs(det)));
        CHECK(std::abs(sum - a.trace()) <= 1e-10 * std::max(1.0, std::abs(a.trace())));
        for (int k = 0; k < dim; ++k) {
            CHECK(eig.residuals[k] <= tol::kEigenResidual * frob);
            // left vectors are eigenvectors of the adjoint
            const ComplexMatrix ad = a.adjoint();
            double res = 0.0;
            const ComplexVector& u = eig.leftVectors[k];
            const ComplexVector au = ad * u;
            for (int i = 0; i < dim; ++i)
                res += std::norm(au[i] - std::conj(eig.eigenvalues[k]) * u[i]);
            CHECK(std::sqrt(res) <= tol::kEigenResidual * frob);
        }
        CHECK(!eig.defective);
    }
}

TEST_CASE("general eigendecompose: exact double eigenvalue stays clean") {
    // projector complement I - |0><0|: spectrum {0, 1, 1}, diagonalizable
    ComplexMatrix m = ComplexMatrix::identity(3);
    m(0, 0) = 0.0;
    const auto eig = generalEigendecompose(m, true);
    std::vector<double> mods;
    for (const cplx& l : eig.eigenvalues) mods.push_back(std::abs(l));
    std::sort(mods.begin(), mods.end());
    CHECK(mods[0] <= 1e-12);
    CHECK(mods[1] == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(mods[2] == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(!eig.defective);
    for (double r : eig.residuals) CHECK(r <= 1e-10);
}

TEST_CASE("general eigendecompose: defective matrix is flagged, residuals honest") {
    ComplexMatrix m(3);  // single Jordan block for eigenvalue 0.5
    m(0, 0) = 0.5;
    m(1, 1) = 0.5;
    m(2, 2) = 0.5;
    m(0, 1) = 1.0;
    m(1, 2) = 1.0;
    const auto eig = generalEigendecompose(m, true);
    CHECK(eig.defective);
}

TEST_CASE("unitary from Hamiltonian: zero time gives the identity") {
    const auto h = buildHamiltonian(ModelParams(1.0, 0.3, 1.0));
    const auto u = unitaryFromHamiltonian(h, 0.0);
    CHECK((u - ComplexMatrix::identity(3)).frobeniusNorm() <= 1e-13);
}

TEST_CASE("unitary from Hamiltonian: revival at gtau = 2 pi / 3 is a phase") {
    const ModelParams p = ModelParams::fromGammaTau(2.0 * kPi / 3.0);
    const auto u = unitaryFromHamiltonian(buildHamiltonian(p), p.tau);
    const cplx phase = u(0, 0);
    CHECK(std::abs(phase) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK((u - phase * ComplexMatrix::identity(3)).frobeniusNorm() <= 1e-10);
}

TEST_CASE("unitary from Hamiltonian: agrees with the Taylor-series oracle") {
    CounterRng rng(17, 0);
    for (int trial = 0; trial < 10; ++trial) {
        const ModelParams p(1.0, oracle::uniformIn(rng, -1.5, 1.5),
                            oracle::uniformIn(rng, 0.0, 4.0));
        const auto h = buildHamiltonian(p);
        const auto u = unitaryFromHamiltonian(h, p.tau);
        const auto ref = oracle::taylorUnitary(h, p.tau);
        CHECK((u - ref).frobeniusNorm() <= 1e-9);
        // unitarity
        CHECK((u.adjoint() * u - ComplexMatrix::identity(3)).frobeniusNorm() <=
              tol::kUnitarity);
    }
    // the spec'd point: alpha = 0.5, tau = 1
    const auto h = buildHamiltonian(ModelParams(1.0, 0.5, 1.0));
    CHECK((unitaryFromHamiltonian(h, 1.0) - oracle::taylorUnitary(h, 1.0)).frobeniusNorm() <=
          1e-9);
}

TEST_CASE("unitary preserves norms of random states") {
    CounterRng rng(19, 0);
    for (int trial = 0; trial < 20; ++trial) {
        const ModelParams p(1.0, oracle::uniformIn(rng, -3.0, 3.0),
                            oracle::uniformIn(rng, 0.0, 5.0));
        const auto u = unitaryFromHamiltonian(buildHamiltonian(p), p.tau);
        const ComplexVector psi = oracle::randomState(rng, 3);
        CHECK((u * psi).norm() == doctest::Approx(1.0).epsilon(1e-12));
    }
}

TEST_CASE("general eigendecompose: survival operator special values") {
    // S(tau) has a unit-modulus eigenvalue on the matching curve
    const double gtau = 3.62;
    const ModelParams p = ModelParams::fromGammaTau(gtau, 0.5);
    ComplexMatrix s = unitaryFromHamiltonian(buildHamiltonian(p), p.tau);
    for (int j = 0; j < 3; ++j) s(0, j) = 0.0;
    const auto eig = generalEigendecompose(s);
    CHECK(eig.maxAbsEigenvalue() >= 0.999);
}

TEST_CASE("general eigendecompose: G_tar unit eigenvalue at the triple point") {
    const ModelParams p = ModelParams::fromGammaTau(2.0 * kPi / std::sqrt(3.0), kPi / 6.0);
    const auto u = unitaryFromHamiltonian(buildHamiltonian(p), p.tau);
    ComplexMatrix g(3);
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) g(i, j) = std::norm(u(i, j));
    for (int i = 0; i < 3; ++i) g(i, 0) = 0.0;
    const auto eig = generalEigendecompose(g);
    CHECK(eig.maxAbsEigenvalue() == doctest::Approx(1.0).epsilon(1e-10));
}

TEST_CASE("the propagator propagates the Hermiticity check") {
    ComplexMatrix a(3);
    a(0, 1) = 1.0;  // not Hermitian
    CHECK_THROWS_AS(unitaryFromHamiltonian(a, 1.0), NotHermitianError);
}
