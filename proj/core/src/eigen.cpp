#include "tmadf/eigen.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "tmadf/errors.hpp"

namespace tmadf {

CMatrix operator*(const CMatrix& a, const CMatrix& b) {
    if (a.cols() != b.rows()) throw Error(ErrorCode::LengthMismatch, "matrix product shape mismatch");
    CMatrix out(a.rows(), b.cols());
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t k = 0; k < a.cols(); ++k) {
            const Complex aik = a(i, k);
            for (std::size_t j = 0; j < b.cols(); ++j) out(i, j) += aik * b(k, j);
        }
    return out;
}

CMatrix operator-(const CMatrix& a, const CMatrix& b) {
    if (a.rows() != b.rows() || a.cols() != b.cols())
        throw Error(ErrorCode::LengthMismatch, "matrix difference shape mismatch");
    CMatrix out(a.rows(), a.cols());
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < a.cols(); ++j) out(i, j) = a(i, j) - b(i, j);
    return out;
}

CMatrix operator*(double s, const CMatrix& a) {
    CMatrix out(a.rows(), a.cols());
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < a.cols(); ++j) out(i, j) = s * a(i, j);
    return out;
}

double frobenius_norm(const CMatrix& a) {
    double s = 0.0;
    for (const auto& x : a.data()) s += std::norm(x);
    return std::sqrt(s);
}

double l2_norm(std::span<const Complex> v) {
    double s = 0.0;
    for (const auto& x : v) s += std::norm(x);
    return std::sqrt(s);
}

namespace {

double off_diagonal_mass(const CMatrix& a) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < a.cols(); ++j)
            if (i != j) s += std::norm(a(i, j));
    return std::sqrt(s);
}

// Zeroes a(p,q) with J = D * P, D = diag(1, e^{-j*phi}) making the pivot real,
// P the real symmetric Jacobi rotation. A <- J^H A J, V <- V J.
void rotate(CMatrix& a, CMatrix& v, std::size_t p, std::size_t q) {
    const Complex apq = a(p, q);
    const double mag = std::abs(apq);
    if (mag == 0.0) return;
    const Complex phase = apq / mag;  // e^{j*phi}
    const double app = a(p, p).real();
    const double aqq = a(q, q).real();

    const double theta = (aqq - app) / (2.0 * mag);
    const double t = (theta >= 0.0 ? 1.0 : -1.0) / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
    const double c = 1.0 / std::sqrt(t * t + 1.0);
    const double s = t * c;

    // J columns: col p = (c, -s e^{-j phi}), col q = (s, c e^{-j phi}) in rows (p, q).
    const Complex jpp = c;
    const Complex jqp = -s * std::conj(phase);
    const Complex jpq = s;
    const Complex jqq = c * std::conj(phase);

    const std::size_t n = a.rows();
    for (std::size_t k = 0; k < n; ++k) {
        const Complex akp = a(k, p);
        const Complex akq = a(k, q);
        a(k, p) = akp * jpp + akq * jqp;
        a(k, q) = akp * jpq + akq * jqq;
    }
    for (std::size_t k = 0; k < n; ++k) {
        const Complex apk = a(p, k);
        const Complex aqk = a(q, k);
        a(p, k) = std::conj(jpp) * apk + std::conj(jqp) * aqk;
        a(q, k) = std::conj(jpq) * apk + std::conj(jqq) * aqk;
    }
    a(p, q) = 0.0;
    a(q, p) = 0.0;
    a(p, p) = a(p, p).real();
    a(q, q) = a(q, q).real();

    for (std::size_t k = 0; k < n; ++k) {
        const Complex vkp = v(k, p);
        const Complex vkq = v(k, q);
        v(k, p) = vkp * jpp + vkq * jqp;
        v(k, q) = vkp * jpq + vkq * jqq;
    }
}

}  // namespace

EigenDecomposition hermitian_eigendecomposition(const CMatrix& matrix) {
    const std::size_t n = matrix.rows();
    if (n != matrix.cols()) throw Error(ErrorCode::InvalidArgument, "matrix is not square");

    const double norm = frobenius_norm(matrix);
    if (!std::isfinite(norm)) throw Error(ErrorCode::InvalidArgument, "matrix has non-finite entries");
    if (frobenius_norm(matrix - matrix.adjoint()) > 1e-10 * norm)
        throw Error(ErrorCode::NotHermitian, "input differs from its adjoint");

    // Exact symmetrization so rotations act on a Hermitian matrix.
    CMatrix a(n, n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) a(i, j) = 0.5 * (matrix(i, j) + std::conj(matrix(j, i)));
    CMatrix v = CMatrix::identity(n);

    const double tol = 1e-12 * norm;
    const std::size_t max_rotations = 100 * n * n;
    std::size_t rotations = 0;
    while (off_diagonal_mass(a) > tol) {
        for (std::size_t p = 0; p + 1 < n; ++p)
            for (std::size_t q = p + 1; q < n; ++q) {
                if (std::abs(a(p, q)) == 0.0) continue;
                if (++rotations > max_rotations)
                    throw Error(ErrorCode::ConvergenceFailure,
                                "no convergence after " + std::to_string(max_rotations) + " rotations");
                rotate(a, v, p, q);
            }
    }

    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(),
                     [&a](std::size_t i, std::size_t j) { return a(i, i).real() > a(j, j).real(); });

    EigenDecomposition out;
    out.values.reserve(n);
    out.vectors = CMatrix(n, n);
    for (std::size_t c = 0; c < n; ++c) {
        out.values.push_back(a(order[c], order[c]).real());
        for (std::size_t r = 0; r < n; ++r) out.vectors(r, c) = v(r, order[c]);
    }
    return out;
}

std::vector<double> singular_values(const CMatrix& matrix) {
    const CMatrix gram = matrix.rows() <= matrix.cols() ? matrix * matrix.adjoint() : matrix.adjoint() * matrix;
    auto eig = hermitian_eigendecomposition(gram);
    std::vector<double> out;
    out.reserve(eig.values.size());
    for (double l : eig.values) out.push_back(std::sqrt(std::max(l, 0.0)));
    return out;
}

}  // namespace tmadf
