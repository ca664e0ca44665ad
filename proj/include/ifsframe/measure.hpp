#pragma once

// Finite Borel measures on the line: weighted point sets, piecewise-constant
// densities on uniform grids, and finite sums of the two. All values are
// immutable after construction.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <limits>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "ifsframe/error.hpp"

namespace ifsframe {

struct Atom {
    double point = 0.0;
    double weight = 0.0;

    friend bool operator==(const Atom&, const Atom&) = default;
};

/// Two atom locations are identified when they differ by at most
/// 1e-12 * max(1, |x|, |y|).
inline bool same_point(double x, double y) {
    return std::abs(x - y) <= 1e-12 * std::max({1.0, std::abs(x), std::abs(y)});
}

/// Which endpoints a window includes. Beurling windows are [x, x+R); the
/// centered variant used for shape-robustness checks is (x-R/2, x+R/2].
enum class Ends { closed_open, open_closed, closed_closed };

class AtomicMeasure {
public:
    AtomicMeasure() : prefix_{0.0} {}

    /// Sorts by point and merges coincident points by adding weights.
    AtomicMeasure(std::span<const double> points, std::span<const double> weights) {
        if (points.size() != weights.size()) {
            throw UsageError("make_atomic: " + std::to_string(points.size()) + " points but " +
                             std::to_string(weights.size()) + " weights");
        }
        std::vector<Atom> raw;
        raw.reserve(points.size());
        for (std::size_t i = 0; i < points.size(); ++i) {
            raw.push_back({points[i], weights[i]});
        }
        *this = AtomicMeasure(std::move(raw));
    }

    explicit AtomicMeasure(std::vector<Atom> atoms) {
        for (const Atom& a : atoms) {
            if (!std::isfinite(a.point)) {
                throw DomainError("atomic measure: non-finite atom location");
            }
            if (!(a.weight >= 0.0) || !std::isfinite(a.weight)) {
                throw DomainError("atomic measure: weights must be finite and nonnegative");
            }
        }
        std::stable_sort(atoms.begin(), atoms.end(),
                         [](const Atom& a, const Atom& b) { return a.point < b.point; });
        for (const Atom& a : atoms) {
            if (!atoms_.empty() && same_point(atoms_.back().point, a.point)) {
                atoms_.back().weight += a.weight;
            } else {
                atoms_.push_back(a);
            }
        }
        prefix_.assign(atoms_.size() + 1, 0.0);
        for (std::size_t i = 0; i < atoms_.size(); ++i) {
            prefix_[i + 1] = prefix_[i] + atoms_[i].weight;
        }
    }

    static AtomicMeasure dirac(double x, double weight = 1.0) {
        return AtomicMeasure(std::vector<Atom>{{x, weight}});
    }

    const std::vector<Atom>& atoms() const noexcept { return atoms_; }
    std::size_t size() const noexcept { return atoms_.size(); }
    bool empty() const noexcept { return atoms_.empty(); }
    double mass() const noexcept { return prefix_.back(); }

    /// Mass of the atoms with index in [first, last).
    double mass_of_range(std::size_t first, std::size_t last) const noexcept {
        return prefix_[last] - prefix_[first];
    }

    double interval_mass(double a, double b, Ends ends = Ends::closed_open) const {
        if (!(b > a) && !(ends == Ends::closed_closed && b == a)) {
            return 0.0;
        }
        auto key = [](const Atom& atom, double v) { return atom.point < v; };
        auto key_upper = [](double v, const Atom& atom) { return v < atom.point; };
        std::size_t lo = 0;
        std::size_t hi = 0;
        if (ends == Ends::open_closed) {
            lo = std::upper_bound(atoms_.begin(), atoms_.end(), a, key_upper) - atoms_.begin();
        } else {
            lo = std::lower_bound(atoms_.begin(), atoms_.end(), a, key) - atoms_.begin();
        }
        if (ends == Ends::closed_open) {
            hi = std::lower_bound(atoms_.begin(), atoms_.end(), b, key) - atoms_.begin();
        } else {
            hi = std::upper_bound(atoms_.begin(), atoms_.end(), b, key_upper) - atoms_.begin();
        }
        return hi > lo ? mass_of_range(lo, hi) : 0.0;
    }

    friend bool operator==(const AtomicMeasure& a, const AtomicMeasure& b) {
        return a.atoms_ == b.atoms_;
    }

private:
    std::vector<Atom> atoms_;
    std::vector<double> prefix_;
};

/// Piecewise-constant density: bin k covers
/// [start + k*bin_width, start + (k+1)*bin_width) and carries masses[k].
class DensityMeasure {
public:
    DensityMeasure() : DensityMeasure(0.0, 1.0, {}) {}

    DensityMeasure(double start, double bin_width, std::vector<double> masses)
        : start_(start), width_(bin_width), masses_(std::move(masses)) {
        if (!std::isfinite(start_)) {
            throw DomainError("density measure: non-finite support start");
        }
        if (!(width_ > 0.0) || !std::isfinite(width_)) {
            throw DomainError("density measure: bin width must be positive");
        }
        for (double m : masses_) {
            if (!(m >= 0.0) || !std::isfinite(m)) {
                throw DomainError("density measure: bin masses must be finite and nonnegative");
            }
        }
        prefix_.assign(masses_.size() + 1, 0.0);
        for (std::size_t i = 0; i < masses_.size(); ++i) {
            prefix_[i + 1] = prefix_[i] + masses_[i];
        }
    }

    /// Uniform probability (or `mass`) on [a, a + width) as a single bin.
    static DensityMeasure uniform(double a, double width, double mass = 1.0) {
        return DensityMeasure(a, width, {mass});
    }

    double start() const noexcept { return start_; }
    double bin_width() const noexcept { return width_; }
    double end() const noexcept { return start_ + width_ * static_cast<double>(masses_.size()); }
    const std::vector<double>& masses() const noexcept { return masses_; }
    std::size_t bins() const noexcept { return masses_.size(); }
    bool empty() const noexcept { return masses_.empty(); }
    double mass() const noexcept { return prefix_.back(); }
    double bin_edge(std::size_t k) const noexcept {
        return start_ + width_ * static_cast<double>(k);
    }

    /// Cumulative mass of (-inf, x).
    double cdf(double x) const noexcept {
        if (masses_.empty() || x <= start_) {
            return 0.0;
        }
        double pos = (x - start_) / width_;
        if (pos >= static_cast<double>(masses_.size())) {
            return mass();
        }
        auto k = static_cast<std::size_t>(pos);
        double frac = pos - static_cast<double>(k);
        return prefix_[k] + frac * masses_[k];
    }

    double interval_mass(double a, double b, Ends = Ends::closed_open) const noexcept {
        return b > a ? std::max(0.0, cdf(b) - cdf(a)) : 0.0;
    }

    /// Splits every bin into `factor` equal bins.
    DensityMeasure refine(std::size_t factor) const {
        if (factor == 0) {
            throw DomainError("refine: factor must be positive");
        }
        std::vector<double> out;
        out.reserve(masses_.size() * factor);
        for (double m : masses_) {
            for (std::size_t j = 0; j < factor; ++j) {
                out.push_back(m / static_cast<double>(factor));
            }
        }
        return DensityMeasure(start_, width_ / static_cast<double>(factor), std::move(out));
    }

    friend bool operator==(const DensityMeasure& a, const DensityMeasure& b) {
        return a.start_ == b.start_ && a.width_ == b.width_ && a.masses_ == b.masses_;
    }

private:
    double start_;
    double width_;
    std::vector<double> masses_;
    std::vector<double> prefix_;
};

using MeasurePart = std::variant<AtomicMeasure, DensityMeasure>;

/// Finite sum of atomic and density parts, e.g. Lebesgue on [0,1] plus a
/// unit mass at 2.
struct SumMeasure {
    std::vector<MeasurePart> parts;

    friend bool operator==(const SumMeasure&, const SumMeasure&) = default;
};

using Measure = std::variant<AtomicMeasure, DensityMeasure, SumMeasure>;

namespace detail {

template <class... Fs>
struct overloaded : Fs... {
    using Fs::operator()...;
};
template <class... Fs>
overloaded(Fs...) -> overloaded<Fs...>;

template <class F>
void for_each_part(const Measure& nu, F&& f) {
    std::visit(overloaded{[&](const AtomicMeasure& a) { f(MeasurePart{a}); },
                          [&](const DensityMeasure& d) { f(MeasurePart{d}); },
                          [&](const SumMeasure& s) {
                              for (const MeasurePart& p : s.parts) {
                                  f(p);
                              }
                          }},
               nu);
}

inline double relative_gap(double x, double step) {
    double q = x / step;
    return std::abs(q - std::round(q)) / std::max(1.0, std::abs(q));
}

// Cell index of x in the grid step*[k, k+1), snapping values that sit on a
// grid line up to float noise.
inline std::int64_t cell_index(double x, double step) {
    double q = x / step;
    double r = std::round(q);
    if (std::abs(q - r) <= 1e-9 * std::max(1.0, std::abs(q))) {
        return static_cast<std::int64_t>(r);
    }
    return static_cast<std::int64_t>(std::floor(q));
}

// Smallest q <= max_factor such that width/q divides every offset (within
// float noise); 0 when there is none.
inline std::size_t aligning_factor(double width, std::span<const double> offsets,
                                   std::size_t max_factor = 64) {
    for (std::size_t q = 1; q <= max_factor; ++q) {
        double g = width / static_cast<double>(q);
        bool ok = std::all_of(offsets.begin(), offsets.end(),
                              [g](double off) { return relative_gap(off, g) <= 1e-9; });
        if (ok) {
            return q;
        }
    }
    return 0;
}

// Adds `mass` spread uniformly over [lo, lo + len) into the grid
// (start, g, out), prorating by overlap.
inline void deposit(std::vector<double>& out, double start, double g, double lo, double len,
                    double mass) {
    if (mass == 0.0) {
        return;
    }
    double pos = (lo - start) / g;
    double span = len / g;
    double r = std::round(pos);
    if (std::abs(pos - r) <= 1e-9 * std::max(1.0, std::abs(pos))) {
        pos = r;
    }
    double rs = std::round(span);
    if (std::abs(span - rs) <= 1e-9 * std::max(1.0, span)) {
        span = rs;
    }
    double end = pos + span;
    auto first = static_cast<std::int64_t>(std::floor(pos));
    auto last = static_cast<std::int64_t>(std::ceil(end));
    for (std::int64_t k = first; k < last; ++k) {
        double overlap = std::min(end, static_cast<double>(k + 1)) -
                         std::max(pos, static_cast<double>(k));
        if (overlap <= 0.0) {
            continue;
        }
        auto idx = static_cast<std::size_t>(std::clamp<std::int64_t>(
            k, 0, static_cast<std::int64_t>(out.size()) - 1));
        out[idx] += mass * overlap / span;
    }
}

} // namespace detail

inline AtomicMeasure make_atomic(std::span<const double> points, std::span<const double> weights) {
    return AtomicMeasure(points, weights);
}

inline double total_mass(const Measure& nu) {
    double m = 0.0;
    detail::for_each_part(nu, [&](const MeasurePart& p) {
        m += std::visit([](const auto& x) { return x.mass(); }, p);
    });
    return m;
}

inline double interval_mass(const Measure& nu, double a, double b,
                            Ends ends = Ends::closed_open) {
    double m = 0.0;
    detail::for_each_part(nu, [&](const MeasurePart& p) {
        m += std::visit([&](const auto& x) { return x.interval_mass(a, b, ends); }, p);
    });
    return m;
}

/// nu([x, x+R)).
inline double window_mass(const Measure& nu, double x, double R) {
    return interval_mass(nu, x, x + R, Ends::closed_open);
}

/// Closed hull [lo, hi] of the support, or nothing for the zero measure.
inline std::optional<std::pair<double, double>> support_hull(const Measure& nu) {
    double lo = std::numeric_limits<double>::infinity();
    double hi = -lo;
    detail::for_each_part(nu, [&](const MeasurePart& p) {
        std::visit(detail::overloaded{[&](const AtomicMeasure& a) {
                                          for (const Atom& atom : a.atoms()) {
                                              if (atom.weight > 0.0) {
                                                  lo = std::min(lo, atom.point);
                                                  hi = std::max(hi, atom.point);
                                              }
                                          }
                                      },
                                      [&](const DensityMeasure& d) {
                                          for (std::size_t k = 0; k < d.bins(); ++k) {
                                              if (d.masses()[k] > 0.0) {
                                                  lo = std::min(lo, d.bin_edge(k));
                                                  hi = std::max(hi, d.bin_edge(k + 1));
                                              }
                                          }
                                      }},
                   p);
    });
    if (lo > hi) {
        return std::nullopt;
    }
    return std::make_pair(lo, hi);
}

/// Exact bin masses of nu on the grid start + width*[k, k+1), k < bins.
/// Density parts that do not align with the grid are prorated by overlap.
inline DensityMeasure project_to_grid(const Measure& nu, double start, double width,
                                      std::size_t bins) {
    std::vector<double> out(bins, 0.0);
    detail::for_each_part(nu, [&](const MeasurePart& p) {
        std::visit(detail::overloaded{
                       [&](const AtomicMeasure& a) {
                           for (const Atom& atom : a.atoms()) {
                               std::int64_t k = detail::cell_index(atom.point - start, width);
                               if (k >= 0 && k < static_cast<std::int64_t>(bins)) {
                                   out[static_cast<std::size_t>(k)] += atom.weight;
                               }
                           }
                       },
                       [&](const DensityMeasure& d) {
                           for (std::size_t k = 0; k < d.bins(); ++k) {
                               detail::deposit(out, start, width, d.bin_edge(k), d.bin_width(),
                                               d.masses()[k]);
                           }
                       }},
                   p);
    });
    return DensityMeasure(start, width, std::move(out));
}

namespace detail {

// Finest common grid for a set of densities: width divides every bin width and
// every start offset when such a grid exists with refinement <= 64, otherwise
// the smallest width (and the others are prorated onto it).
inline DensityMeasure merge_densities(const std::vector<DensityMeasure>& parts) {
    std::vector<const DensityMeasure*> live;
    for (const DensityMeasure& d : parts) {
        if (!d.empty()) {
            live.push_back(&d);
        }
    }
    if (live.empty()) {
        return DensityMeasure();
    }
    if (live.size() == 1) {
        return *live.front();
    }
    double wmin = live.front()->bin_width();
    double lo = live.front()->start();
    double hi = live.front()->end();
    for (const DensityMeasure* d : live) {
        wmin = std::min(wmin, d->bin_width());
        lo = std::min(lo, d->start());
        hi = std::max(hi, d->end());
    }
    std::vector<double> offsets;
    for (const DensityMeasure* d : live) {
        offsets.push_back(d->bin_width());
        offsets.push_back(d->start() - lo);
    }
    std::size_t q = aligning_factor(wmin, offsets);
    double g = wmin / static_cast<double>(q == 0 ? 1 : q);
    auto bins = static_cast<std::size_t>(std::ceil((hi - lo) / g - 1e-9));
    SumMeasure sum;
    for (const DensityMeasure* d : live) {
        sum.parts.emplace_back(*d);
    }
    return project_to_grid(Measure{sum}, lo, g, bins);
}

inline Measure simplify(std::vector<AtomicMeasure> atomics, std::vector<DensityMeasure> densities) {
    std::vector<Atom> atoms;
    for (const AtomicMeasure& a : atomics) {
        atoms.insert(atoms.end(), a.atoms().begin(), a.atoms().end());
    }
    std::erase_if(densities, [](const DensityMeasure& d) { return d.empty(); });
    if (densities.empty()) {
        return AtomicMeasure(std::move(atoms));
    }
    if (atoms.empty() && densities.size() == 1) {
        return densities.front();
    }
    SumMeasure s;
    if (!atoms.empty()) {
        s.parts.emplace_back(AtomicMeasure(std::move(atoms)));
    }
    for (DensityMeasure& d : densities) {
        s.parts.emplace_back(std::move(d));
    }
    return s;
}

inline AtomicMeasure convolve_parts(const AtomicMeasure& a, const AtomicMeasure& b) {
    std::vector<Atom> out;
    out.reserve(a.size() * b.size());
    for (const Atom& x : a.atoms()) {
        for (const Atom& y : b.atoms()) {
            out.push_back({x.point + y.point, x.weight * y.weight});
        }
    }
    return AtomicMeasure(std::move(out));
}

// Sum of shifted copies of d, one per atom. The grid is refined until every
// atom offset lands on a grid line; otherwise each copy is prorated, which
// keeps bin masses exact.
inline DensityMeasure convolve_parts(const AtomicMeasure& a, const DensityMeasure& d) {
    if (a.empty() || d.empty()) {
        return DensityMeasure();
    }
    double x0 = a.atoms().front().point;
    double x1 = a.atoms().back().point;
    std::vector<double> offsets;
    offsets.reserve(a.size());
    for (const Atom& atom : a.atoms()) {
        offsets.push_back(atom.point - x0);
    }
    std::size_t q = aligning_factor(d.bin_width(), offsets);
    std::size_t refine = q == 0 ? 1 : q;
    double g = d.bin_width() / static_cast<double>(refine);
    double start = d.start() + x0;
    auto bins = static_cast<std::size_t>(std::ceil((x1 - x0) / g - 1e-9)) + d.bins() * refine + 1;
    std::vector<double> out(bins, 0.0);
    for (const Atom& atom : a.atoms()) {
        if (atom.weight == 0.0) {
            continue;
        }
        double off = (atom.point - x0) / g;
        if (q != 0) {
            auto j = static_cast<std::size_t>(std::llround(off));
            for (std::size_t k = 0; k < d.bins(); ++k) {
                double m = atom.weight * d.masses()[k] / static_cast<double>(refine);
                for (std::size_t s = 0; s < refine; ++s) {
                    out[j + k * refine + s] += m;
                }
            }
        } else {
            for (std::size_t k = 0; k < d.bins(); ++k) {
                deposit(out, start, g, start + off * g + d.bin_edge(k) - d.start(), d.bin_width(),
                        atom.weight * d.masses()[k]);
            }
        }
    }
    while (!out.empty() && out.back() == 0.0) {
        out.pop_back();
    }
    return DensityMeasure(start, g, std::move(out));
}

// Two piecewise-constant densities on a common grid g convolve to a
// piecewise-linear density; each box pair yields a triangle on
// [(i+j)g, (i+j+2)g) with half its mass on either side, so the bin masses
// below are exact.
inline DensityMeasure convolve_parts(const DensityMeasure& u, const DensityMeasure& v) {
    if (u.empty() || v.empty()) {
        return DensityMeasure();
    }
    double wmin = std::min(u.bin_width(), v.bin_width());
    std::array<double, 2> widths{u.bin_width(), v.bin_width()};
    std::size_t q = aligning_factor(wmin, widths);
    double g = wmin / static_cast<double>(q == 0 ? 1 : q);
    auto regrid = [g](const DensityMeasure& d) {
        auto bins = static_cast<std::size_t>(std::ceil((d.end() - d.start()) / g - 1e-9));
        return project_to_grid(Measure{d}, d.start(), g, bins);
    };
    DensityMeasure a = regrid(u);
    DensityMeasure b = regrid(v);
    std::vector<double> out(a.bins() + b.bins(), 0.0);
    for (std::size_t i = 0; i < a.bins(); ++i) {
        double mi = a.masses()[i];
        if (mi == 0.0) {
            continue;
        }
        for (std::size_t j = 0; j < b.bins(); ++j) {
            double half = 0.5 * mi * b.masses()[j];
            out[i + j] += half;
            out[i + j + 1] += half;
        }
    }
    return DensityMeasure(a.start() + b.start(), g, std::move(out));
}

} // namespace detail

/// nu * rho. Atomic*atomic stays atomic; anything involving a density
/// becomes a density on a common uniform grid.
inline Measure convolve(const Measure& nu, const Measure& rho) {
    std::vector<AtomicMeasure> atomics;
    std::vector<DensityMeasure> densities;
    detail::for_each_part(nu, [&](const MeasurePart& p) {
        detail::for_each_part(rho, [&](const MeasurePart& q) {
            std::visit(detail::overloaded{
                           [&](const AtomicMeasure& a, const AtomicMeasure& b) {
                               atomics.push_back(detail::convolve_parts(a, b));
                           },
                           [&](const AtomicMeasure& a, const DensityMeasure& d) {
                               densities.push_back(detail::convolve_parts(a, d));
                           },
                           [&](const DensityMeasure& d, const AtomicMeasure& a) {
                               densities.push_back(detail::convolve_parts(a, d));
                           },
                           [&](const DensityMeasure& a, const DensityMeasure& b) {
                               densities.push_back(detail::convolve_parts(a, b));
                           }},
                       p, q);
        });
    });
    return detail::simplify(std::move(atomics), std::move(densities));
}

/// Convolution with the uniform probability density on [0, kernel_width).
inline DensityMeasure mollify(const Measure& nu, double kernel_width) {
    if (!(kernel_width > 0.0)) {
        throw DomainError("mollify: kernel width must be positive");
    }
    Measure out = convolve(nu, Measure{DensityMeasure::uniform(0.0, kernel_width)});
    return std::visit(detail::overloaded{
                          [](const AtomicMeasure&) { return DensityMeasure(); },
                          [](const DensityMeasure& d) { return d; },
                          [](const SumMeasure& s) {
                              std::vector<DensityMeasure> ds;
                              for (const MeasurePart& p : s.parts) {
                                  if (const auto* d = std::get_if<DensityMeasure>(&p)) {
                                      ds.push_back(*d);
                                  }
                              }
                              return detail::merge_densities(ds);
                          }},
                      out);
}

/// Where the atom of cell r*[k, k+1) is placed.
struct PointRule {
    enum class Kind { left, center, custom };
    Kind kind = Kind::left;
    // custom: cell k uses offsets[k mod offsets.size()], each in [0, r).
    std::vector<double> offsets;

    static PointRule left() { return {Kind::left, {}}; }
    static PointRule center() { return {Kind::center, {}}; }
    static PointRule custom(std::vector<double> offsets) {
        return {Kind::custom, std::move(offsets)};
    }
};

/// One atom per nonempty cell r*[k, k+1) carrying the cell's mass.
inline AtomicMeasure discretize(const Measure& nu, double r, const PointRule& rule = PointRule::left()) {
    if (!(r > 0.0) || !std::isfinite(r)) {
        throw DomainError("discretize: cell size must be positive");
    }
    if (rule.kind == PointRule::Kind::custom) {
        if (rule.offsets.empty()) {
            throw UsageError("discretize: custom rule needs at least one offset");
        }
        for (double o : rule.offsets) {
            if (!(o >= 0.0 && o < r)) {
                throw DomainError("discretize: custom offsets must lie in [0, r)");
            }
        }
    }
    std::map<std::int64_t, double> cells;
    detail::for_each_part(nu, [&](const MeasurePart& p) {
        std::visit(detail::overloaded{
                       [&](const AtomicMeasure& a) {
                           for (const Atom& atom : a.atoms()) {
                               cells[detail::cell_index(atom.point, r)] += atom.weight;
                           }
                       },
                       [&](const DensityMeasure& d) {
                           if (d.empty()) {
                               return;
                           }
                           std::int64_t k0 = detail::cell_index(d.start(), r);
                           std::int64_t k1 = detail::cell_index(d.end(), r);
                           for (std::int64_t k = k0; k <= k1; ++k) {
                               double m = d.interval_mass(static_cast<double>(k) * r,
                                                          static_cast<double>(k + 1) * r);
                               if (m > 0.0) {
                                   cells[k] += m;
                               }
                           }
                       }},
                   p);
    });
    std::vector<Atom> atoms;
    atoms.reserve(cells.size());
    for (const auto& [k, m] : cells) {
        if (m <= 0.0) {
            continue;
        }
        double base = static_cast<double>(k) * r;
        double x = base;
        switch (rule.kind) {
        case PointRule::Kind::left:
            break;
        case PointRule::Kind::center:
            x = base + 0.5 * r;
            break;
        case PointRule::Kind::custom: {
            auto n = static_cast<std::int64_t>(rule.offsets.size());
            x = base + rule.offsets[static_cast<std::size_t>(((k % n) + n) % n)];
            break;
        }
        }
        atoms.push_back({x, m});
    }
    return AtomicMeasure(std::move(atoms));
}

/// Shift every atom / bin by s.
inline Measure translate(const Measure& nu, double s) {
    auto shift_part = [s](const MeasurePart& p) -> MeasurePart {
        return std::visit(detail::overloaded{
                              [s](const AtomicMeasure& a) -> MeasurePart {
                                  std::vector<Atom> atoms = a.atoms();
                                  for (Atom& atom : atoms) {
                                      atom.point += s;
                                  }
                                  return AtomicMeasure(std::move(atoms));
                              },
                              [s](const DensityMeasure& d) -> MeasurePart {
                                  return DensityMeasure(d.start() + s, d.bin_width(), d.masses());
                              }},
                          p);
    };
    return std::visit(detail::overloaded{
                          [&](const SumMeasure& sum) -> Measure {
                              SumMeasure out;
                              for (const MeasurePart& p : sum.parts) {
                                  out.parts.push_back(shift_part(p));
                              }
                              return out;
                          },
                          [&](const auto& single) -> Measure {
                              return std::visit([](auto&& x) -> Measure { return x; },
                                                shift_part(MeasurePart{single}));
                          }},
                      nu);
}

/// Sum_{|n| <= half_width, n integer} delta_n.
inline AtomicMeasure integer_counting(std::int64_t half_width) {
    std::vector<Atom> atoms;
    atoms.reserve(static_cast<std::size_t>(2 * half_width + 1));
    for (std::int64_t n = -half_width; n <= half_width; ++n) {
        atoms.push_back({static_cast<double>(n), 1.0});
    }
    return AtomicMeasure(std::move(atoms));
}

} // namespace ifsframe
