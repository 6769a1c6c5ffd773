#pragma once

#include <vector>

#include "snlab/family.hpp"
#include "snlab/measure.hpp"
#include "snlab/orbit.hpp"

// Ulam discretization of the transfer operator of f_t and its noise-averaged
// version. Entries are exact bin-overlap proportions obtained by pulling
// image-bin edges back through the monotone lift, not by subsampling.

namespace snlab {

/// Dense row-stochastic matrix: entry(i,j) = m(bin_i ∩ f^{-1} bin_j) / m(bin_i).
struct TransferMatrix {
    int n = 0;
    std::vector<double> p;  // row-major n*n

    double& at(int i, int j) { return p[static_cast<std::size_t>(i) * n + j]; }
    double at(int i, int j) const { return p[static_cast<std::size_t>(i) * n + j]; }

    double row_sum(int i) const;
    double max_row_sum_error() const;
};

TransferMatrix build_ulam(const MapFamily& fam, double t, int n);

/// Midpoint-quadrature average of build_ulam over the kernel's support.
TransferMatrix averaged_ulam(const MapFamily& fam, const NoiseKernel& kernel,
                             int n, int quad_m);

struct DensityResult {
    EmpiricalMeasure density;
    long iterations = 0;
    double residual = 0.0;
    bool converged = false;
};

/// Left power iteration from the uniform vector until successive iterates
/// differ by < tol in L1 (caps at iter_max; converged flags the outcome).
DensityResult invariant_density(const TransferMatrix& P, double tol = 1e-12,
                                long iter_max = 100000);

/// One application of the adjoint: (P phi)_i = sum_j P(i,j) phi_j.
std::vector<double> apply_to_function(const TransferMatrix& P, const std::vector<double>& phi);

} // namespace snlab
