#pragma once

// Frame inequality  A ||f||^2 <= int |(f dmu)^|^2 dnu <= B ||f||^2  restricted
// to the level-n cylinder subspace of L^2(mu_B), where both sides are
// quadratic forms in the N^n cylinder coefficients.

#include <cmath>
#include <complex>
#include <numbers>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "ifsframe/error.hpp"
#include "ifsframe/hermitian.hpp"
#include "ifsframe/ifs.hpp"
#include "ifsframe/measure.hpp"
#include "ifsframe/parallel.hpp"

namespace ifsframe {

/// Step function sum_w c_w chi_w over the level-n cylinders, coefficients in
/// canonical word order.
class CylinderFunction {
public:
    CylinderFunction(AffineIfs ifs, std::size_t level, std::vector<cplx> coeffs)
        : ifs_(std::move(ifs)), level_(level), coeffs_(std::move(coeffs)) {
        detail::require_no_overlap(ifs_, "cylinder function");
        if (coeffs_.size() != count_words(ifs_, level_)) {
            throw UsageError("cylinder function: expected " +
                             std::to_string(count_words(ifs_, level_)) + " coefficients, got " +
                             std::to_string(coeffs_.size()));
        }
        double r = static_cast<double>(ifs_.scale());
        for (const Word& w : level_words(ifs_, level_)) {
            double a = 0.0;
            for (std::int64_t b : w) {
                a = a * r + static_cast<double>(b);
            }
            numerators_.push_back(a);
        }
    }

    static CylinderFunction constant(const AffineIfs& ifs, std::size_t level, cplx value = 1.0) {
        return {ifs, level, std::vector<cplx>(count_words(ifs, level), value)};
    }

    static CylinderFunction indicator(const AffineIfs& ifs, const Word& w) {
        std::vector<cplx> c(count_words(ifs, w.size()), 0.0);
        c[word_index(ifs, w)] = 1.0;
        return {ifs, w.size(), std::move(c)};
    }

    const AffineIfs& ifs() const noexcept { return ifs_; }
    std::size_t level() const noexcept { return level_; }
    const std::vector<cplx>& coefficients() const noexcept { return coeffs_; }

    /// ||f||^2 in L^2(mu_B) = N^{-n} sum |c_w|^2.
    double l2_norm_sq() const {
        double s = 0.0;
        for (const cplx& c : coeffs_) {
            s += std::norm(c);
        }
        return s / static_cast<double>(coeffs_.size());
    }

    /// (f dmu_B)^(t) = N^{-n} mu_B^(t/R^n) sum_w c_w exp(-2 pi i t a_w).
    cplx ft(double t, TruncationBudget budget = {}) const {
        double scaled = t / std::pow(static_cast<double>(ifs_.scale()), static_cast<double>(level_));
        cplx acc{0.0, 0.0};
        for (std::size_t i = 0; i < coeffs_.size(); ++i) {
            if (coeffs_[i] != cplx{0.0, 0.0}) {
                acc += coeffs_[i] * detail::unit_phase(scaled * numerators_[i]);
            }
        }
        return acc * ft_invariant(ifs_, scaled, budget) / static_cast<double>(coeffs_.size());
    }

    CylinderFunction operator*(cplx s) const {
        std::vector<cplx> c = coeffs_;
        for (cplx& x : c) {
            x *= s;
        }
        return {ifs_, level_, std::move(c)};
    }

    CylinderFunction operator+(const CylinderFunction& o) const {
        if (!(o.ifs_ == ifs_) || o.level_ != level_) {
            throw UsageError("cylinder function: sum of functions on different subspaces");
        }
        std::vector<cplx> c = coeffs_;
        for (std::size_t i = 0; i < c.size(); ++i) {
            c[i] += o.coeffs_[i];
        }
        return {ifs_, level_, std::move(c)};
    }

private:
    AffineIfs ifs_;
    std::size_t level_;
    std::vector<cplx> coeffs_;
    std::vector<double> numerators_; // R^n a_w
};

inline constexpr std::uint64_t kMaxGramDimension = 4096;

/// G_{w,w'} = sum_j d_j ft_cylinder(w, l_j) conj(ft_cylinder(w', l_j)).
/// Atoms lighter than 1e-20 are skipped.
inline HermitianMatrix gram_matrix(const AffineIfs& ifs, std::size_t level, const AtomicMeasure& nu,
                                   TruncationBudget budget = {}) {
    detail::require_no_overlap(ifs, "gram_matrix");
    std::uint64_t m64 = count_words(ifs, level);
    if (m64 > kMaxGramDimension) {
        throw SizeError("gram_matrix: N^n = " + std::to_string(m64) + " exceeds 4096");
    }
    const auto m = static_cast<Eigen::Index>(m64);
    const double rn = std::pow(static_cast<double>(ifs.scale()), static_cast<double>(level));
    std::vector<double> numer;
    for (const Word& w : level_words(ifs, level)) {
        double a = 0.0;
        for (std::int64_t b : w) {
            a = a * static_cast<double>(ifs.scale()) + static_cast<double>(b);
        }
        numer.push_back(a);
    }
    std::vector<Atom> atoms;
    for (const Atom& a : nu.atoms()) {
        if (a.weight >= 1e-20) {
            atoms.push_back(a);
        }
    }
    constexpr std::size_t kChunk = 512;
    auto partials = detail::map_chunks(atoms.size(), kChunk, [&](std::size_t lo, std::size_t hi) {
        ComplexMatrix f(m, static_cast<Eigen::Index>(hi - lo));
        for (std::size_t j = lo; j < hi; ++j) {
            double scaled = atoms[j].point / rn;
            cplx base = std::sqrt(atoms[j].weight) * ft_invariant(ifs, scaled, budget) /
                        static_cast<double>(m64);
            for (Eigen::Index w = 0; w < m; ++w) {
                f(w, static_cast<Eigen::Index>(j - lo)) =
                    base * detail::unit_phase(scaled * numer[static_cast<std::size_t>(w)]);
            }
        }
        ComplexMatrix g = f * f.adjoint();
        return g;
    });
    ComplexMatrix g = ComplexMatrix::Zero(m, m);
    for (const ComplexMatrix& p : partials) {
        g += p;
    }
    return HermitianMatrix(std::move(g));
}

/// Frame bounds on the level-n cylinder subspace. A is clamped at 0; the raw
/// smallest eigenvalue is kept in the residuals.
struct FrameReport {
    std::size_t level = 0;
    std::optional<double> lambda_truncation;
    double lower = 0.0; // A_n
    double upper = 0.0; // B_n
    double psd_residual = 0.0;       // max(0, -N^n lambda_min(G))
    double hermitian_residual = 0.0; // of G before symmetrization
    std::string measure_ref;
};

inline FrameReport frame_bounds(const AffineIfs& ifs, std::size_t level, const AtomicMeasure& nu,
                                TruncationBudget budget = {}, double rel_tol = 1e-10) {
    HermitianMatrix g = gram_matrix(ifs, level, nu, budget);
    EigenExtremes ext = hermitian_extremes(g, rel_tol);
    auto scale = static_cast<double>(count_words(ifs, level));
    FrameReport rep;
    rep.level = level;
    rep.lower = std::max(0.0, scale * ext.lambda_min);
    rep.upper = std::max(rep.lower, scale * ext.lambda_max);
    rep.psd_residual = std::max(0.0, -scale * ext.lambda_min);
    rep.hermitian_residual = g.input_residual();
    return rep;
}

struct WeightedExponential {
    double weight = 0.0;
    double frequency = 0.0;
};

/// {sqrt(d_j) e_{l_j}} for nu = sum_j d_j delta_{l_j}; zero weights dropped.
inline std::vector<WeightedExponential> weighted_frame(const AtomicMeasure& nu) {
    std::vector<WeightedExponential> out;
    for (const Atom& a : nu.atoms()) {
        if (a.weight > 0.0) {
            out.push_back({std::sqrt(a.weight), a.point});
        }
    }
    return out;
}

inline AtomicMeasure measure_from_frame(const std::vector<WeightedExponential>& frame) {
    std::vector<Atom> atoms;
    for (const WeightedExponential& e : frame) {
        atoms.push_back({e.frequency, e.weight * e.weight});
    }
    return AtomicMeasure(std::move(atoms));
}

/// sin^2(pi u) / (pi u)^2, equal to 1 for |u| < 1e-8.
inline double sinc_squared(double u) {
    if (std::abs(u) < 1e-8) {
        return 1.0;
    }
    double s = std::sin(std::numbers::pi * detail::centered_frac(u));
    double d = std::numbers::pi * u;
    return s * s / (d * d);
}

/// Sub-intervals per unit length in the midpoint rule over density bins.
inline constexpr double kProbeNodesPerUnit = 64.0;

/// int sin^2(pi(T+t)) / (pi^2 (T+t)^2) dnu(t): the squared L^2(nu) norm of
/// (g dmu)^ for g = e_{-T} chi_[0,1], mu = chi_[0,1] dx + delta_2. Atoms are
/// summed exactly; each density bin uses a composite midpoint rule with
/// ceil(64 * bin_width) nodes.
inline double counterexample_probe(const Measure& nu, double T) {
    double total = 0.0;
    detail::for_each_part(nu, [&](const MeasurePart& p) {
        std::visit(detail::overloaded{
                       [&](const AtomicMeasure& a) {
                           for (const Atom& atom : a.atoms()) {
                               total += atom.weight * sinc_squared(T + atom.point);
                           }
                       },
                       [&](const DensityMeasure& d) {
                           auto sub = static_cast<std::size_t>(
                               std::max(1.0, std::ceil(d.bin_width() * kProbeNodesPerUnit)));
                           double h = d.bin_width() / static_cast<double>(sub);
                           for (std::size_t k = 0; k < d.bins(); ++k) {
                               double m = d.masses()[k];
                               if (m == 0.0) {
                                   continue;
                               }
                               double acc = 0.0;
                               for (std::size_t s = 0; s < sub; ++s) {
                                   double x = d.bin_edge(k) + (static_cast<double>(s) + 0.5) * h;
                                   acc += sinc_squared(T + x);
                               }
                               total += m * acc / static_cast<double>(sub);
                           }
                       }},
                   p);
    });
    return total;
}

struct DecayCertificate {
    std::vector<std::pair<double, double>> rows; // (T, probe)
    bool decreasing = false;
    double last_over_first = 0.0;
};

/// Probe values along a T grid. A decreasing table tending to 0 shows that
/// nu admits no positive lower frame bound for chi_[0,1] dx + delta_2.
inline DecayCertificate lower_bound_decay_certificate(const Measure& nu,
                                                      const std::vector<double>& t_grid) {
    DecayCertificate out;
    for (double T : t_grid) {
        out.rows.emplace_back(T, counterexample_probe(nu, T));
    }
    out.decreasing = !out.rows.empty();
    for (std::size_t i = 1; i < out.rows.size(); ++i) {
        out.decreasing = out.decreasing && out.rows[i].second < out.rows[i - 1].second;
    }
    if (!out.rows.empty() && out.rows.front().second > 0.0) {
        out.last_over_first = out.rows.back().second / out.rows.front().second;
    }
    return out;
}

} // namespace ifsframe
