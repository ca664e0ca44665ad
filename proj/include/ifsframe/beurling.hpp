#pragma once

// Beurling densities and dimension of finite measures, estimated on explicit
// geometric grids of window radii. Limits are never claimed: every estimate
// carries the grid it was computed on.

#include <algorithm>
#include <cmath>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "ifsframe/error.hpp"
#include "ifsframe/measure.hpp"

namespace ifsframe {

/// [x, x+R) windows, or centered (x - R/2, x + R/2] windows.
enum class WindowShape { anchored, centered };

namespace detail {

inline Ends window_ends(WindowShape shape) {
    return shape == WindowShape::anchored ? Ends::closed_open : Ends::open_closed;
}

// x-positions where nu(window at x) can change: atoms and bin edges, and the
// same shifted left by R.
inline std::vector<double> window_breakpoints(const Measure& nu, double R) {
    std::vector<double> pts;
    for_each_part(nu, [&](const MeasurePart& p) {
        std::visit(overloaded{[&](const AtomicMeasure& a) {
                                  for (const Atom& atom : a.atoms()) {
                                      pts.push_back(atom.point);
                                      pts.push_back(atom.point - R);
                                  }
                              },
                              [&](const DensityMeasure& d) {
                                  for (std::size_t k = 0; k <= d.bins(); ++k) {
                                      pts.push_back(d.bin_edge(k));
                                      pts.push_back(d.bin_edge(k) - R);
                                  }
                              }},
                   p);
    });
    std::sort(pts.begin(), pts.end());
    pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
    return pts;
}

// Window mass is piecewise linear in x between breakpoints, so its extremes
// over [lo, hi] are among the one-sided limits at breakpoints and ends. From
// the right of x the limit is nu((x, x+R]), from the left nu([x, x+R)).
template <class Pick>
double scan_windows(const Measure& nu, double R, Ends ends, double lo, double hi, double init,
                    Pick pick) {
    std::vector<double> xs{lo};
    for (double p : window_breakpoints(nu, R)) {
        if (p > lo && p < hi) {
            xs.push_back(p);
        }
    }
    if (hi > lo) {
        xs.push_back(hi);
    }
    double best = init;
    for (double x : xs) {
        bool from_left = x > lo || ends == Ends::closed_open;
        bool from_right = x < hi || ends == Ends::open_closed;
        if (from_left) {
            best = pick(best, interval_mass(nu, x, x + R, Ends::closed_open));
        }
        if (from_right) {
            best = pick(best, interval_mass(nu, x, x + R, Ends::open_closed));
        }
    }
    return best;
}

// Exact sup for a purely atomic measure with a sorted two-pointer sweep: an
// optimal [x, x+R) window can slide right until x is an atom, an optimal
// (x, x+R] window can slide left until x+R is an atom.
inline double atomic_sup_window(const AtomicMeasure& a, double R, Ends ends) {
    const auto& atoms = a.atoms();
    double best = 0.0;
    if (ends == Ends::closed_open) {
        std::size_t j = 0;
        for (std::size_t i = 0; i < atoms.size(); ++i) {
            j = std::max(j, i);
            while (j < atoms.size() && atoms[j].point < atoms[i].point + R) {
                ++j;
            }
            best = std::max(best, a.mass_of_range(i, j));
        }
    } else {
        std::size_t i = 0;
        for (std::size_t j = 0; j < atoms.size(); ++j) {
            while (i < j && !(atoms[i].point > atoms[j].point - R)) {
                ++i;
            }
            best = std::max(best, a.mass_of_range(i, j + 1));
        }
    }
    return best;
}

inline void check_radii(const std::vector<double>& radii, std::size_t min_count, const char* op) {
    if (radii.size() < min_count) {
        throw UsageError(std::string(op) + ": need at least " + std::to_string(min_count) +
                         " radii, got " + std::to_string(radii.size()));
    }
    for (std::size_t i = 0; i < radii.size(); ++i) {
        if (!(radii[i] > 0.0) || (i > 0 && !(radii[i] > radii[i - 1]))) {
            throw UsageError(std::string(op) + ": radii must be positive and increasing");
        }
    }
}

inline double median(std::vector<double> v) {
    std::sort(v.begin(), v.end());
    std::size_t n = v.size();
    return n % 2 == 1 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

} // namespace detail

/// sup_x nu(x + R Q) with Q = [0,1) (anchored) or (-1/2, 1/2] (centered).
inline double sup_window_mass(const Measure& nu, double R,
                              WindowShape shape = WindowShape::anchored) {
    if (!(R > 0.0)) {
        throw DomainError("sup_window_mass: R must be positive");
    }
    Ends ends = detail::window_ends(shape);
    if (const auto* a = std::get_if<AtomicMeasure>(&nu)) {
        return detail::atomic_sup_window(*a, R, ends);
    }
    auto hull = support_hull(nu);
    if (!hull) {
        return 0.0;
    }
    return detail::scan_windows(nu, R, ends, hull->first - R, hull->second, 0.0,
                                [](double a, double b) { return std::max(a, b); });
}

/// R_k = 2^(k/2) for k = first..last.
inline std::vector<double> default_radii(int first = 4, int last = 28) {
    std::vector<double> r;
    for (int k = first; k <= last; ++k) {
        r.push_back(std::exp2(0.5 * k));
    }
    return r;
}

/// `count` geometrically spaced radii from lo to hi inclusive.
inline std::vector<double> geometric_radii(double lo, double hi, std::size_t count) {
    if (!(lo > 0.0) || !(hi > lo) || count < 2) {
        throw UsageError("geometric radii: need 0 < lo < hi and count >= 2");
    }
    std::vector<double> r;
    double step = std::log(hi / lo) / static_cast<double>(count - 1);
    for (std::size_t i = 0; i < count; ++i) {
        r.push_back(lo * std::exp(step * static_cast<double>(i)));
    }
    r.back() = hi;
    return r;
}

struct DensityScan {
    double alpha = 0.0;
    std::vector<double> radii;
    std::vector<double> sup_masses;
    std::vector<double> ratios; // sup_mass / R^alpha
    double estimate = 0.0;      // max ratio over the top decade of radii
};

inline DensityScan upper_density(const Measure& nu, double alpha, const std::vector<double>& radii,
                                 WindowShape shape = WindowShape::anchored) {
    detail::check_radii(radii, 4, "upper_density");
    if (!(alpha >= 0.0)) {
        throw DomainError("upper_density: alpha must be nonnegative");
    }
    DensityScan scan;
    scan.alpha = alpha;
    scan.radii = radii;
    double top = radii.back() / 10.0;
    for (double R : radii) {
        double s = sup_window_mass(nu, R, shape);
        scan.sup_masses.push_back(s);
        scan.ratios.push_back(s / std::pow(R, alpha));
        if (R >= top) {
            scan.estimate = std::max(scan.estimate, scan.ratios.back());
        }
    }
    return scan;
}

struct LowerDensityScan {
    std::vector<double> radii;
    std::vector<double> inf_ratios; // inf_x nu([x, x+R)) / R over the hull
    double value = 0.0;             // min over the grid
};

/// inf over x in [hull.first, hull.second - R] of nu([x, x+R)) / R, minimized
/// over the radii. The hull should sit strictly inside the truncated support.
inline LowerDensityScan lower_density_scan(const Measure& nu, const std::vector<double>& radii,
                                           std::pair<double, double> hull) {
    detail::check_radii(radii, 1, "lower_density");
    if (hull.second - hull.first < radii.back()) {
        throw UsageError("lower_density: hull is narrower than the largest radius");
    }
    LowerDensityScan scan;
    scan.radii = radii;
    scan.value = std::numeric_limits<double>::infinity();
    for (double R : radii) {
        double inf = detail::scan_windows(nu, R, Ends::closed_open, hull.first, hull.second - R,
                                          std::numeric_limits<double>::infinity(),
                                          [](double a, double b) { return std::min(a, b); });
        scan.inf_ratios.push_back(inf / R);
        scan.value = std::min(scan.value, inf / R);
    }
    return scan;
}

inline double lower_density(const Measure& nu, const std::vector<double>& radii,
                            std::pair<double, double> hull) {
    return lower_density_scan(nu, radii, hull).value;
}

struct DimensionEstimate {
    /// Allowed gap between the least-squares slope and the bisection bracket.
    static constexpr double kFitTolerance = 0.05;

    double slope = 0.0;
    double alpha_lo = 0.0;
    double alpha_hi = 0.0;
    std::pair<double, double> fit_range{0.0, 0.0};
    double residual = 0.0; // RMS of the log-log fit
    bool degenerate = false;
    std::vector<double> radii;
    std::vector<double> sup_masses;
};

/// Least-squares slope of log sup_mass against log R over the middle half of
/// the grid, plus a bisection bracket on alpha for the growth/decay change of
/// sup_mass / R^alpha. A ratio sequence counts as growing (decaying) when its
/// median pairwise log-log slope (Theil-Sen) is above (below) +-kFitTolerance.
inline DimensionEstimate dimension(const Measure& nu, const std::vector<double>& radii,
                                   WindowShape shape = WindowShape::anchored) {
    detail::check_radii(radii, 16, "dimension");
    if (radii.back() / radii.front() < 100.0) {
        throw UsageError("dimension: radii must span at least two decades");
    }
    DimensionEstimate est;
    est.radii = radii;
    for (double R : radii) {
        est.sup_masses.push_back(sup_window_mass(nu, R, shape));
    }
    std::size_t atoms_or_bins = 0;
    detail::for_each_part(nu, [&](const MeasurePart& p) {
        std::visit(detail::overloaded{[&](const AtomicMeasure& a) {
                                          for (const Atom& x : a.atoms()) {
                                              atoms_or_bins += x.weight > 0.0 ? 1 : 0;
                                          }
                                      },
                                      [&](const DensityMeasure& d) {
                                          // a density is never a single point
                                          atoms_or_bins += d.mass() > 0.0 ? 2 : 0;
                                      }},
                   p);
    });
    if (atoms_or_bins <= 1) {
        est.degenerate = true;
        return est;
    }

    std::size_t n = radii.size();
    std::vector<double> lx, ly;
    for (std::size_t i = 0; i < n; ++i) {
        lx.push_back(std::log(radii[i]));
        ly.push_back(std::log(std::max(est.sup_masses[i], 1e-300)));
    }
    std::size_t first = n / 4;
    std::size_t last = n - n / 4;
    double mx = 0.0, my = 0.0;
    for (std::size_t i = first; i < last; ++i) {
        mx += lx[i];
        my += ly[i];
    }
    auto cnt = static_cast<double>(last - first);
    mx /= cnt;
    my /= cnt;
    double sxx = 0.0, sxy = 0.0;
    for (std::size_t i = first; i < last; ++i) {
        sxx += (lx[i] - mx) * (lx[i] - mx);
        sxy += (lx[i] - mx) * (ly[i] - my);
    }
    est.slope = sxy / sxx;
    double ss = 0.0;
    for (std::size_t i = first; i < last; ++i) {
        double e = ly[i] - (my + est.slope * (lx[i] - mx));
        ss += e * e;
    }
    est.residual = std::sqrt(ss / cnt);
    est.fit_range = {radii[first], radii[last - 1]};

    std::vector<double> pair_slopes;
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            pair_slopes.push_back((ly[j] - ly[i]) / (lx[j] - lx[i]));
        }
    }
    double ts = detail::median(std::move(pair_slopes));
    // Growth and decay are called only outside a band of kFitTolerance
    // around the transition; the bracket is the undecided region.
    const double band = DimensionEstimate::kFitTolerance;
    auto grows = [&](double alpha) { return ts - alpha > band; };
    auto decays = [&](double alpha) { return ts - alpha < -band; };
    auto boundary = [](double lo, double hi, auto&& below) {
        // brackets the first x >= lo with !below(x) to width 1e-3
        if (!below(lo)) {
            return std::pair{lo, lo};
        }
        while (below(hi)) {
            hi *= 2.0;
        }
        while (hi - lo > 1e-3) {
            double mid = 0.5 * (lo + hi);
            (below(mid) ? lo : hi) = mid;
        }
        return std::pair{lo, hi};
    };
    double top = std::max(2.0, est.slope + 1.0);
    est.alpha_lo = boundary(0.0, top, grows).first;
    est.alpha_hi = boundary(0.0, top, [&](double a) { return !decays(a); }).second;
    return est;
}

/// {k r : nu([k r, (k+1) r)) >= delta}.
inline std::vector<double> lambda_set(const Measure& nu, double r, double delta) {
    if (!(r > 0.0) || !(delta > 0.0)) {
        throw DomainError("lambda_set: r and delta must be positive");
    }
    std::vector<double> out;
    AtomicMeasure cells = discretize(nu, r, PointRule::left());
    for (const Atom& a : cells.atoms()) {
        if (a.weight >= delta) {
            out.push_back(a.point);
        }
    }
    return out;
}

} // namespace ifsframe
