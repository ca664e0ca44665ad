#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <string>

#include <Eigen/Dense>

#include "ifsframe/error.hpp"

namespace ifsframe {

using ComplexMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;

/// max |M_ij - conj(M_ji)| relative to max(1, max |M_ij|).
inline double hermitian_residual(const ComplexMatrix& m) {
    if (m.rows() != m.cols()) {
        return std::numeric_limits<double>::infinity();
    }
    double scale = std::max(1.0, m.cwiseAbs().maxCoeff());
    return (m - m.adjoint()).cwiseAbs().maxCoeff() / scale;
}

/// Square complex matrix that is Hermitian up to a 1e-12 residual; the stored
/// matrix is the exact Hermitian part.
class HermitianMatrix {
public:
    static constexpr double kResidualTolerance = 1e-12;

    HermitianMatrix() = default;

    explicit HermitianMatrix(ComplexMatrix m) {
        if (m.rows() != m.cols()) {
            throw DomainError("hermitian matrix: not square");
        }
        residual_ = m.size() == 0 ? 0.0 : hermitian_residual(m);
        if (residual_ > kResidualTolerance) {
            throw DomainError("hermitian matrix: conjugate-symmetry residual " +
                              std::to_string(residual_) + " exceeds 1e-12");
        }
        data_ = (m + m.adjoint()) * 0.5;
    }

    Eigen::Index dimension() const noexcept { return data_.rows(); }
    const ComplexMatrix& data() const noexcept { return data_; }
    std::complex<double> operator()(Eigen::Index i, Eigen::Index j) const { return data_(i, j); }
    double input_residual() const noexcept { return residual_; }

private:
    ComplexMatrix data_;
    double residual_ = 0.0;
};

struct EigenExtremes {
    double lambda_min = 0.0;
    double lambda_max = 0.0;
    // ||M v - lambda v|| / (||M|| ||v||) for the two returned eigenpairs.
    double residual_min = 0.0;
    double residual_max = 0.0;
    bool certified = false;
};

/// Extreme eigenvalues via Householder tridiagonalization + implicit QR
/// (Eigen::SelfAdjointEigenSolver), certified by the eigenpair residual
/// ||Mv - lambda v|| <= rel_tol ||M|| ||v||.
inline EigenExtremes hermitian_extremes(const HermitianMatrix& m, double rel_tol = 1e-10) {
    if (m.dimension() == 0) {
        throw UsageError("hermitian_extremes: empty matrix");
    }
    Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(m.data(), Eigen::ComputeEigenvectors);
    if (solver.info() != Eigen::Success) {
        throw DomainError("hermitian_extremes: eigen solver did not converge");
    }
    const auto& values = solver.eigenvalues();
    const auto& vectors = solver.eigenvectors();
    Eigen::Index last = values.size() - 1;
    double norm = std::max(std::abs(values(0)), std::abs(values(last)));
    auto residual = [&](Eigen::Index k) {
        ComplexVector v = vectors.col(k);
        double r = (m.data() * v - values(k) * v).norm();
        double denom = norm * v.norm();
        return denom > 0.0 ? r / denom : r;
    };
    EigenExtremes out;
    out.lambda_min = values(0);
    out.lambda_max = values(last);
    out.residual_min = residual(0);
    out.residual_max = residual(last);
    out.certified = out.residual_min <= rel_tol && out.residual_max <= rel_tol;
    if (!out.certified) {
        throw DomainError("hermitian_extremes: residual certificate failed");
    }
    return out;
}

inline EigenExtremes hermitian_extremes(const ComplexMatrix& m, double rel_tol = 1e-10) {
    return hermitian_extremes(HermitianMatrix(m), rel_tol);
}

} // namespace ifsframe
