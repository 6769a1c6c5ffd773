#pragma once

#include <cstdint>
#include <vector>

#include "snlab/circle.hpp"
#include "snlab/family.hpp"

// Histogram probability measures on a uniform circle partition, W1
// comparisons (circular optimal transport), the Entropy-Formula
// right-hand side, and symbolic block entropy of coded orbits.

namespace snlab {

/// Probability measure with weights on bins [i/n, (i+1)/n).
struct EmpiricalMeasure {
    int bins = 0;
    std::vector<double> weights;

    EmpiricalMeasure() = default;
    EmpiricalMeasure(int n, std::vector<double> w);

    double center(int i) const { return (i + 0.5) / bins; }
    int bin_of(CirclePoint p) const {
        int i = static_cast<int>(p.value * bins);
        return i >= bins ? bins - 1 : i;
    }

    /// Point mass approximation: all weight in the bin containing p.
    static EmpiricalMeasure dirac(int n, CirclePoint p);
    static EmpiricalMeasure uniform(int n);
};

/// Normalized bin counts of a sample set.
EmpiricalMeasure histogram_measure(const std::vector<CirclePoint>& samples, int bins);
EmpiricalMeasure histogram_measure_raw(const std::vector<double>& counts);

/// W1 distance from mu to the Dirac mass at p: sum_i w_i d(center_i, p).
double w1_to_dirac(const EmpiricalMeasure& mu, CirclePoint p);

/// Circular W1 between equal-bin measures: min_c (1/n) sum |F_mu - F_nu - c|,
/// with the minimizing c a median of the CDF difference.
double w1_circle(const EmpiricalMeasure& mu, const EmpiricalMeasure& nu);

/// Midpoint quadrature of the Entropy-Formula right-hand side
/// integral of log f_t' against mu.
double integrate_log_deriv(const EmpiricalMeasure& mu, const MapFamily& fam, double t);

/// Finite partition of M by cut points (sorted, in [0,1)).
struct SymbolicPartition {
    std::vector<double> cuts;

    explicit SymbolicPartition(std::vector<double> cut_points);
    static SymbolicPartition uniform(int atoms);

    int atoms() const { return static_cast<int>(cuts.size()); }
    double diameter() const;
    int symbol(double x) const;
};

struct EntropyEstimate {
    double value = 0.0;      // H_m - H_{m-1} difference estimator
    bool undersampled = false;
};

class OrbitRecord;  // orbit.hpp

/// Block-entropy difference estimator of the orbit coded by xi.
EntropyEstimate symbolic_block_entropy(const std::vector<double>& points,
                                       const SymbolicPartition& xi, int max_block);

} // namespace snlab
