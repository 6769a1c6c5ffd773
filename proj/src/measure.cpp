#include "snlab/measure.hpp"

#include <algorithm>
#include <cmath>
#include <unordered_map>

#include "snlab/errors.hpp"

namespace snlab {

namespace {
void normalize(std::vector<double>& w) {
    double s = 0.0;
    for (double v : w) s += v;
    if (!(s > 0.0)) throw DomainError("measure: total mass must be positive");
    for (double& v : w) v /= s;
}
} // namespace

EmpiricalMeasure::EmpiricalMeasure(int n, std::vector<double> w) : bins(n), weights(std::move(w)) {
    if (n < 2) throw DomainError("EmpiricalMeasure: need at least 2 bins");
    if (static_cast<int>(weights.size()) != n)
        throw DomainError("EmpiricalMeasure: weight count != bins");
    for (double v : weights)
        if (!(v >= 0.0)) throw DomainError("EmpiricalMeasure: negative weight");
    normalize(weights);
}

EmpiricalMeasure EmpiricalMeasure::dirac(int n, CirclePoint p) {
    std::vector<double> w(n, 0.0);
    int i = static_cast<int>(p.value * n);
    w[i >= n ? n - 1 : i] = 1.0;
    return EmpiricalMeasure(n, std::move(w));
}

EmpiricalMeasure EmpiricalMeasure::uniform(int n) {
    return EmpiricalMeasure(n, std::vector<double>(n, 1.0));
}

EmpiricalMeasure histogram_measure(const std::vector<CirclePoint>& samples, int bins) {
    if (samples.empty()) throw DomainError("histogram_measure: empty sample");
    std::vector<double> w(bins, 0.0);
    for (CirclePoint p : samples) {
        int i = static_cast<int>(p.value * bins);
        w[i >= bins ? bins - 1 : i] += 1.0;
    }
    return EmpiricalMeasure(bins, std::move(w));
}

EmpiricalMeasure histogram_measure_raw(const std::vector<double>& counts) {
    return EmpiricalMeasure(static_cast<int>(counts.size()), counts);
}

double w1_to_dirac(const EmpiricalMeasure& mu, CirclePoint p) {
    double acc = 0.0;
    for (int i = 0; i < mu.bins; ++i)
        acc += mu.weights[i] * circle_dist(CirclePoint{mu.center(i)}, p);
    return acc;
}

double w1_circle(const EmpiricalMeasure& mu, const EmpiricalMeasure& nu) {
    if (mu.bins != nu.bins) throw DomainError("w1_circle: mismatched bin counts");
    int n = mu.bins;
    std::vector<double> d(n);
    double acc = 0.0;
    for (int i = 0; i < n; ++i) {
        acc += mu.weights[i] - nu.weights[i];
        d[i] = acc;
    }
    std::vector<double> sorted = d;
    std::nth_element(sorted.begin(), sorted.begin() + n / 2, sorted.end());
    double c = sorted[n / 2];
    if (n % 2 == 0) {
        double lower = *std::max_element(sorted.begin(), sorted.begin() + n / 2);
        c = 0.5 * (lower + c);  // any point of the median interval minimizes;
                                // the midpoint negates exactly under mu <-> nu
    }
    double w = 0.0;
    for (double v : d) w += std::fabs(v - c);
    return w / n;
}

double integrate_log_deriv(const EmpiricalMeasure& mu, const MapFamily& fam, double t) {
    fam.require_t(t);
    double acc = 0.0;
    for (int i = 0; i < mu.bins; ++i)
        acc += mu.weights[i] * std::log(lift_d1(fam, mu.center(i)));
    return acc;
}

SymbolicPartition::SymbolicPartition(std::vector<double> cut_points) : cuts(std::move(cut_points)) {
    if (cuts.size() < 2) throw DomainError("SymbolicPartition: need at least 2 cuts");
    std::sort(cuts.begin(), cuts.end());
    for (double c : cuts)
        if (!(c >= 0.0 && c < 1.0)) throw DomainError("SymbolicPartition: cuts must lie in [0,1)");
}

SymbolicPartition SymbolicPartition::uniform(int atoms) {
    std::vector<double> c(atoms);
    for (int i = 0; i < atoms; ++i) c[i] = static_cast<double>(i) / atoms;
    return SymbolicPartition(std::move(c));
}

double SymbolicPartition::diameter() const {
    double d = 0.0;
    for (std::size_t i = 0; i + 1 < cuts.size(); ++i) d = std::max(d, cuts[i + 1] - cuts[i]);
    d = std::max(d, 1.0 - cuts.back() + cuts.front());  // wrap atom
    return d;
}

int SymbolicPartition::symbol(double x) const {
    // Atom j is [cuts[j], cuts[j+1]); points below cuts[0] wrap into the last atom.
    auto it = std::upper_bound(cuts.begin(), cuts.end(), x);
    if (it == cuts.begin()) return atoms() - 1;
    return static_cast<int>(it - cuts.begin()) - 1;
}

EntropyEstimate symbolic_block_entropy(const std::vector<double>& points,
                                       const SymbolicPartition& xi, int max_block) {
    if (max_block < 1) throw DomainError("symbolic_block_entropy: max_block must be >= 1");
    const std::size_t n = points.size();
    if (n < static_cast<std::size_t>(max_block))
        throw DomainError("symbolic_block_entropy: orbit shorter than block length");

    // Pack blocks into 64-bit keys.
    int bits = 1;
    while ((1 << bits) < xi.atoms()) ++bits;
    if (bits * max_block > 62) throw DomainError("symbolic_block_entropy: block too long to pack");
    const std::uint64_t mask_full = (max_block * bits >= 64)
        ? ~0ULL : ((1ULL << (max_block * bits)) - 1);
    const std::uint64_t mask_prev = (max_block == 1)
        ? 0 : ((1ULL << ((max_block - 1) * bits)) - 1);

    std::unordered_map<std::uint64_t, std::uint32_t> full, prev;
    full.reserve(1 << 16);
    prev.reserve(1 << 16);

    std::uint64_t key = 0;
    for (std::size_t i = 0; i < n; ++i) {
        key = ((key << bits) | static_cast<std::uint64_t>(xi.symbol(points[i]))) & mask_full;
        if (i + 1 >= static_cast<std::size_t>(max_block)) {
            ++full[key];
            if (max_block > 1) ++prev[key & mask_prev];
        }
    }

    auto block_entropy = [](const std::unordered_map<std::uint64_t, std::uint32_t>& m) {
        double total = 0.0;
        for (const auto& kv : m) total += kv.second;
        double h = 0.0;
        for (const auto& kv : m) {
            double p = kv.second / total;
            h -= p * std::log(p);
        }
        return h;
    };

    EntropyEstimate out;
    double h_full = block_entropy(full);
    double h_prev = max_block > 1 ? block_entropy(prev) : 0.0;
    out.value = h_full - h_prev;
    out.undersampled = full.size() > 0.2 * static_cast<double>(n);
    return out;
}

} // namespace snlab
