#include <doctest.h>

#include <Eigen/Dense>
#include <random>

#include "tmadf/eigen.hpp"
#include "tmadf/errors.hpp"

using namespace tmadf;

namespace {

CMatrix random_hermitian(std::size_t n, std::mt19937_64& rng, bool psd) {
    std::normal_distribution<double> g;
    CMatrix a(n, n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) a(i, j) = {g(rng), g(rng)};
    if (psd) return a * a.adjoint();
    CMatrix h(n, n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) h(i, j) = 0.5 * (a(i, j) + std::conj(a(j, i)));
    return h;
}

Eigen::MatrixXcd to_eigen(const CMatrix& m) {
    Eigen::MatrixXcd out(m.rows(), m.cols());
    for (std::size_t i = 0; i < m.rows(); ++i)
        for (std::size_t j = 0; j < m.cols(); ++j) out(i, j) = m(i, j);
    return out;
}

void check_decomposition(const CMatrix& a, const EigenDecomposition& e, double tol) {
    const std::size_t n = a.rows();
    REQUIRE(e.values.size() == n);
    for (std::size_t i = 1; i < n; ++i) CHECK(e.values[i - 1] >= e.values[i]);
    const CMatrix& v = e.vectors;
    CHECK(frobenius_norm(v.adjoint() * v - CMatrix::identity(n)) < tol);
    CMatrix lambda(n, n);
    for (std::size_t i = 0; i < n; ++i) lambda(i, i) = e.values[i];
    CHECK(frobenius_norm(a - v * lambda * v.adjoint()) <= tol * std::max(1.0, frobenius_norm(a)));
}

}  // namespace

TEST_CASE("identity") {
    const auto e = hermitian_eigendecomposition(CMatrix::identity(4));
    for (double v : e.values) CHECK(v == doctest::Approx(1.0));
    check_decomposition(CMatrix::identity(4), e, 1e-12);
}

TEST_CASE("diagonal input keeps the standard basis") {
    CMatrix d(4, 4);
    const double diag[] = {2.0, 4.0, 1.0, 3.0};
    for (std::size_t i = 0; i < 4; ++i) d(i, i) = diag[i];
    const auto e = hermitian_eigendecomposition(d);
    const double expected[] = {4.0, 3.0, 2.0, 1.0};
    const std::size_t basis[] = {1, 3, 0, 2};
    for (std::size_t i = 0; i < 4; ++i) {
        CHECK(e.values[i] == doctest::Approx(expected[i]));
        CHECK(std::abs(e.vectors(basis[i], i)) == doctest::Approx(1.0));
    }
}

TEST_CASE("rank one outer product") {
    const CVector a{{1, 0}, {0, -1}, {-1, 0}, {0, 1}};
    CMatrix r(4, 4);
    for (std::size_t i = 0; i < 4; ++i)
        for (std::size_t j = 0; j < 4; ++j) r(i, j) = a[i] * std::conj(a[j]);
    const auto e = hermitian_eigendecomposition(r);
    CHECK(std::abs(e.values[0] - 4.0) < 1e-10);
    for (std::size_t i = 1; i < 4; ++i) CHECK(std::abs(e.values[i]) < 1e-10);
    Complex overlap{};
    for (std::size_t i = 0; i < 4; ++i) overlap += std::conj(e.vectors(i, 0)) * a[i];
    CHECK(std::abs(overlap) == doctest::Approx(2.0));
    check_decomposition(r, e, 1e-12);
}

TEST_CASE("random Hermitian matrices against Eigen") {
    std::mt19937_64 rng(99);
    for (std::size_t n : {2u, 3u, 4u, 6u, 8u, 12u, 16u})
        for (int trial = 0; trial < 20; ++trial) {
            const CMatrix a = random_hermitian(n, rng, trial % 2 == 0);
            const auto e = hermitian_eigendecomposition(a);
            check_decomposition(a, e, 1e-10);
            Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> ref(to_eigen(a));
            const Eigen::VectorXd w = ref.eigenvalues();  // ascending
            for (std::size_t i = 0; i < n; ++i)
                CHECK(std::abs(e.values[i] - w(static_cast<Eigen::Index>(n - 1 - i))) <=
                      1e-10 * std::max(1.0, std::abs(w(static_cast<Eigen::Index>(n - 1)))));
        }
}

TEST_CASE("repeated eigenvalues") {
    std::mt19937_64 rng(5);
    const CMatrix q = hermitian_eigendecomposition(random_hermitian(5, rng, false)).vectors;
    CMatrix d(5, 5);
    const double diag[] = {3.0, 3.0, 3.0, -1.0, -1.0};
    for (std::size_t i = 0; i < 5; ++i) d(i, i) = diag[i];
    const CMatrix a = q * d * q.adjoint();
    const auto e = hermitian_eigendecomposition(a);
    for (std::size_t i = 0; i < 5; ++i) CHECK(e.values[i] == doctest::Approx(diag[i]).epsilon(1e-10));
    check_decomposition(a, e, 1e-10);
}

TEST_CASE("rejects non-Hermitian input") {
    CMatrix a = CMatrix::identity(3);
    a(0, 1) = {0.0, 1.0};
    try {
        (void)hermitian_eigendecomposition(a);
        FAIL("accepted");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::NotHermitian);
    }
    CHECK_THROWS_AS((void)hermitian_eigendecomposition(CMatrix(2, 3)), Error);
    CMatrix complex_diag = CMatrix::identity(2);
    complex_diag(1, 1) = {1.0, 0.5};
    CHECK_THROWS_AS((void)hermitian_eigendecomposition(complex_diag), Error);
}

TEST_CASE("zero matrix") {
    const auto e = hermitian_eigendecomposition(CMatrix(4, 4));
    for (double v : e.values) CHECK(v == 0.0);
}

TEST_CASE("singular values against Eigen") {
    std::mt19937_64 rng(12);
    std::normal_distribution<double> g;
    CMatrix a(4, 8);
    for (std::size_t i = 0; i < 4; ++i)
        for (std::size_t j = 0; j < 8; ++j) a(i, j) = {g(rng), g(rng)};
    const auto s = singular_values(a);
    Eigen::JacobiSVD<Eigen::MatrixXcd> svd(to_eigen(a));
    REQUIRE(s.size() == 4);
    for (Eigen::Index i = 0; i < 4; ++i) CHECK(s[static_cast<std::size_t>(i)] == doctest::Approx(svd.singularValues()(i)).epsilon(1e-9));
}
