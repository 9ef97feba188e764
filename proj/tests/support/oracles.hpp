#pragma once

// Independent reference implementations used only by tests. None of these
// call into the library's quadrature, root finding or inverse routines.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <vector>

namespace oracle {

struct Uniform {
    double total;  // kWh
    double lo;     // u_min
    double hi;     // u_max
};

inline double phi(const Uniform& p, double u) {
    if (u <= p.lo) return p.total;
    if (u >= p.hi) return 0.0;
    return p.total * (p.hi - u) / (p.hi - p.lo);
}

inline double phi_inverse(const Uniform& p, double q) {
    if (q <= 0.0) return p.hi;
    if (q >= p.total) return p.lo;
    return p.hi - q * (p.hi - p.lo) / p.total;
}

inline double power_law(double x, double scale, double reference, double exponent) {
    return scale * std::pow(x / reference, exponent);
}

struct Net {
    double capacity;
    double d0;
    double sigma;
    double truncation;  // in sigmas
};

inline double congestion_price(const Uniform& p, const Net& n, double d) {
    return phi_inverse(p, n.capacity - n.d0 - d);
}

// E[h(D)] for truncated normal D by composite Simpson on a uniform z-grid
// per piece, normalized by the Simpson mass of the same grid. `breaks` are
// values of D where h jumps.
inline double expectation(const Net& n, const std::function<double(double)>& h, int intervals = 400'000,
                          std::vector<double> breaks = {}) {
    if (n.sigma == 0.0) return h(0.0);
    const double k = n.truncation;
    std::vector<double> cuts{-k, k};
    for (double b : breaks) {
        const double z = b / n.sigma;
        if (z > -k && z < k) cuts.push_back(z);
    }
    std::sort(cuts.begin(), cuts.end());
    double acc = 0.0;
    double mass = 0.0;
    for (std::size_t p = 0; p + 1 < cuts.size(); ++p) {
        const double a = cuts[p], b = cuts[p + 1];
        int m = std::max(2, static_cast<int>(intervals * (b - a) / (2.0 * k)));
        m += m % 2;
        const double step = (b - a) / m;
        for (int i = 0; i <= m; ++i) {
            // Evaluate a hair inside the piece so a jump at the cut is not sampled twice.
            const double z = i == 0 ? a + 1e-4 * step : (i == m ? b - 1e-4 * step : a + step * i);
            const double w = (i == 0 || i == m) ? 1.0 : (i % 2 ? 4.0 : 2.0);
            const double pdf = std::exp(-0.5 * z * z);
            acc += w * step * pdf * h(n.sigma * z);
            mass += w * step * pdf;
        }
    }
    return acc / mass;
}

inline double expected_excess(const Uniform& p, const Net& n, double u_d, int intervals = 400'000) {
    return expectation(
        n, [&](double d) { return std::max(0.0, congestion_price(p, n, d) - u_d); }, intervals);
}

// E[max(u, Pi^r)], Pi^r = U^c when U^c > u_d, else 0.
inline double bid_price(const Uniform& p, const Net& n, double u, double u_d, int intervals = 400'000) {
    return expectation(
        n,
        [&](double d) {
            const double uc = congestion_price(p, n, d);
            const double pi_r = uc > u_d ? uc : 0.0;
            return std::max(u, pi_r);
        },
        intervals, {n.capacity - n.d0 - phi(p, u_d)});
}

// Locates every sign change of f on a uniform grid and refines each by
// regula falsi with the Illinois modification.
inline std::vector<double> roots_by_scan(const std::function<double(double)>& f, double a, double b,
                                         int points = 20'001) {
    std::vector<double> roots;
    double x0 = a;
    double f0 = f(a);
    for (int i = 1; i < points; ++i) {
        const double x1 = a + (b - a) * i / (points - 1);
        const double f1 = f(x1);
        if ((f0 < 0.0 && f1 >= 0.0) || (f0 > 0.0 && f1 <= 0.0)) {
            double lo = x0, hi = x1, flo = f0, fhi = f1;
            int side = 0;
            for (int it = 0; it < 200 && hi - lo > 1e-15; ++it) {
                const double x = (lo * fhi - hi * flo) / (fhi - flo);
                const double fx = f(x);
                if (fx == 0.0) {
                    lo = hi = x;
                    break;
                }
                if ((fx < 0.0) == (flo < 0.0)) {
                    lo = x;
                    flo = fx;
                    if (side == -1) fhi *= 0.5;
                    side = -1;
                } else {
                    hi = x;
                    fhi = fx;
                    if (side == 1) flo *= 0.5;
                    side = 1;
                }
            }
            roots.push_back(0.5 * (lo + hi));
        }
        x0 = x1;
        f0 = f1;
    }
    return roots;
}

// Brute-force maximum of h over n+1 evenly spaced points of [0, top].
inline double grid_max(const std::function<double(double)>& h, double top, int n = 1000) {
    double best = -INFINITY;
    for (int i = 0; i <= n; ++i) best = std::max(best, h(top * i / n));
    return best;
}

}  // namespace oracle
