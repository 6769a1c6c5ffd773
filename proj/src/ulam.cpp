#include "snlab/ulam.hpp"

#include <cmath>

#include "snlab/errors.hpp"
#include "snlab/parallel.hpp"

namespace snlab {

double TransferMatrix::row_sum(int i) const {
    double s = 0.0;
    for (int j = 0; j < n; ++j) s += at(i, j);
    return s;
}

double TransferMatrix::max_row_sum_error() const {
    double e = 0.0;
    for (int i = 0; i < n; ++i) e = std::max(e, std::fabs(row_sum(i) - 1.0));
    return e;
}

namespace {
// Pull a lift value back through f_t restricted to [lo,hi] (monotone).
double pull_back(const MapFamily& fam, double t, double target, double lo, double hi) {
    for (int i = 0; i < 64; ++i) {
        double mid = 0.5 * (lo + hi);
        if (lift(fam, t, mid) < target) lo = mid;
        else hi = mid;
    }
    return 0.5 * (lo + hi);
}
} // namespace

TransferMatrix build_ulam(const MapFamily& fam, double t, int n) {
    fam.require_t(t);
    if (n < 2) throw DomainError("build_ulam: need at least 2 bins");
    // f' > 0 for every family kind (checked at family construction), so the
    // lift restricted to one bin is a single monotone branch.
    TransferMatrix P;
    P.n = n;
    P.p.assign(static_cast<std::size_t>(n) * n, 0.0);

    parallel_for(static_cast<std::size_t>(n), [&](std::size_t lo_i, std::size_t hi_i) {
        for (std::size_t iu = lo_i; iu < hi_i; ++iu) {
            int i = static_cast<int>(iu);
            double x0 = static_cast<double>(i) / n;
            double x1 = static_cast<double>(i + 1) / n;
            double u0 = lift(fam, t, x0);
            double u1 = lift(fam, t, x1);
            // Lift bin edges strictly inside (u0, u1).
            long m0 = static_cast<long>(std::ceil(u0 * n));
            if (static_cast<double>(m0) == u0 * n) ++m0;
            long m1 = static_cast<long>(std::floor(u1 * n));
            if (static_cast<double>(m1) == u1 * n) --m1;

            double seg_lo = x0;
            double v_lo = u0;
            auto deposit = [&](double seg_hi, double v_hi) {
                double v_mid = 0.5 * (v_lo + v_hi);
                double frac = v_mid - std::floor(v_mid);
                int j = static_cast<int>(frac * n);
                if (j >= n) j = n - 1;
                P.at(i, j) += (seg_hi - seg_lo) * n;
                seg_lo = seg_hi;
                v_lo = v_hi;
            };
            for (long m = m0; m <= m1; ++m) {
                double v_hi = static_cast<double>(m) / n;
                deposit(pull_back(fam, t, v_hi, seg_lo, x1), v_hi);
            }
            deposit(x1, u1);
        }
    });
    return P;
}

TransferMatrix averaged_ulam(const MapFamily& fam, const NoiseKernel& kernel,
                             int n, int quad_m) {
    if (quad_m < 2) throw DomainError("averaged_ulam: quad_m must be >= 2");
    TransferMatrix acc;
    acc.n = n;
    acc.p.assign(static_cast<std::size_t>(n) * n, 0.0);
    double w = 1.0 / quad_m;
    for (int q = 0; q < quad_m; ++q) {
        double t_q = kernel.lo + kernel.epsilon * (q + 0.5) / quad_m;
        TransferMatrix Pq = build_ulam(fam, t_q, n);
        for (std::size_t k = 0; k < acc.p.size(); ++k) acc.p[k] += w * Pq.p[k];
    }
    return acc;
}

DensityResult invariant_density(const TransferMatrix& P, double tol, long iter_max) {
    const int n = P.n;
    if (P.max_row_sum_error() > 1e-8)
        throw DomainError("invariant_density: matrix is not row-stochastic");
    std::vector<double> v(n, 1.0 / n), w(n);
    DensityResult out;
    for (long it = 1; it <= iter_max; ++it) {
        std::fill(w.begin(), w.end(), 0.0);
        for (int i = 0; i < n; ++i) {
            double vi = v[i];
            if (vi == 0.0) continue;
            const double* row = &P.p[static_cast<std::size_t>(i) * n];
            for (int j = 0; j < n; ++j) w[j] += vi * row[j];
        }
        double diff = 0.0;
        for (int j = 0; j < n; ++j) diff += std::fabs(w[j] - v[j]);
        v.swap(w);
        out.iterations = it;
        out.residual = diff;
        if (diff < tol) {
            out.converged = true;
            break;
        }
    }
    double total = 0.0;
    for (double x : v) total += x;
    for (double& x : v) x /= total;
    out.density = EmpiricalMeasure(n, std::move(v));
    return out;
}

std::vector<double> apply_to_function(const TransferMatrix& P, const std::vector<double>& phi) {
    if (static_cast<int>(phi.size()) != P.n)
        throw DomainError("apply_to_function: size mismatch");
    std::vector<double> out(P.n, 0.0);
    for (int i = 0; i < P.n; ++i) {
        const double* row = &P.p[static_cast<std::size_t>(i) * P.n];
        double acc = 0.0;
        for (int j = 0; j < P.n; ++j) acc += row[j] * phi[j];
        out[i] = acc;
    }
    return out;
}

} // namespace snlab
