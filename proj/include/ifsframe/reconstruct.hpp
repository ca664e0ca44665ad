#pragma once

// Direct-sum digit splits D = B (+) C with D a complete residue system mod R:
// mu_B * mu_C = mu_D, the projection p(x + y) = x from X_D onto X_B, and
// Fourier reconstruction of f from (f dmu_B)^ weighted by mu_C^.

#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>
#include <utility>
#include <vector>

#include "ifsframe/error.hpp"
#include "ifsframe/frame.hpp"
#include "ifsframe/ifs.hpp"
#include "ifsframe/parallel.hpp"

namespace ifsframe {

class SplitSystem {
public:
    SplitSystem(AffineIfs base, AffineIfs complement)
        : base_(std::move(base)), complement_(std::move(complement)),
          combined_(make_combined(base_, complement_, split_)) {}

    const AffineIfs& base() const noexcept { return base_; }
    const AffineIfs& complement() const noexcept { return complement_; }
    const AffineIfs& combined() const noexcept { return combined_; }

    /// d -> (b, c) with b + c = d.
    std::pair<std::int64_t, std::int64_t> split(std::int64_t d) const {
        auto it = split_.find(d);
        if (it == split_.end()) {
            throw DomainError("split: " + std::to_string(d) + " is not a combined digit");
        }
        return it->second;
    }

private:
    static AffineIfs make_combined(const AffineIfs& b, const AffineIfs& c,
                                   std::map<std::int64_t, std::pair<std::int64_t, std::int64_t>>& split) {
        if (b.scale() != c.scale()) {
            throw UsageError("split system: base and complement scales differ");
        }
        const std::int64_t r = b.scale();
        std::vector<std::int64_t> d;
        std::vector<char> residue(static_cast<std::size_t>(r), 0);
        for (std::int64_t x : b.digits()) {
            for (std::int64_t y : c.digits()) {
                if (!split.emplace(x + y, std::make_pair(x, y)).second) {
                    throw DomainError("split system: B + C is not a direct sum");
                }
                d.push_back(x + y);
                residue[static_cast<std::size_t>((((x + y) % r) + r) % r)] += 1;
            }
        }
        if (static_cast<std::int64_t>(d.size()) != r ||
            std::any_of(residue.begin(), residue.end(), [](char k) { return k != 1; })) {
            throw DomainError("split system: B (+) C is not a complete residue system mod R");
        }
        if (!b.distinct_mod_r() || !c.distinct_mod_r()) {
            throw UnsupportedError("split system: base and complement must have no overlap");
        }
        return AffineIfs(r, std::move(d));
    }

    AffineIfs base_;
    AffineIfs complement_;
    std::map<std::int64_t, std::pair<std::int64_t, std::int64_t>> split_;
    AffineIfs combined_;
};

/// Greedy D-digit expansion of z: at each step the largest digit d with
/// R*y - d inside the hull of X_D.
inline Word extract_digits(const AffineIfs& d_ifs, double z, std::size_t depth) {
    const double lo = d_ifs.hull_lo();
    const double hi = d_ifs.hull_hi();
    const double slack = 1e-12 * std::max({1.0, std::abs(lo), std::abs(hi)});
    if (!(z >= lo - slack && z <= hi + slack)) {
        throw DomainError("digit extraction: point outside the attractor hull");
    }
    auto r = static_cast<double>(d_ifs.scale());
    double y = std::clamp(z, lo, hi);
    Word out;
    out.reserve(depth);
    for (std::size_t k = 0; k < depth; ++k) {
        y *= r;
        const std::int64_t* pick = nullptr;
        for (auto it = d_ifs.digits().rbegin(); it != d_ifs.digits().rend(); ++it) {
            double rest = y - static_cast<double>(*it);
            if (rest >= lo - 1e-9 && rest <= hi + 1e-9) {
                pick = &*it;
                break;
            }
        }
        if (pick == nullptr) {
            throw DomainError("digit extraction: no admissible digit at step " + std::to_string(k + 1));
        }
        out.push_back(*pick);
        y = std::clamp(y - static_cast<double>(*pick), lo, hi);
    }
    return out;
}

/// p(z) = sum_k R^{-k} b_k where the D-digits d_k of z split as b_k + c_k.
inline double project_p(const SplitSystem& sys, double z, std::size_t depth = 40) {
    Word d = extract_digits(sys.combined(), z, depth);
    Word b;
    b.reserve(d.size());
    for (std::int64_t x : d) {
        b.push_back(sys.split(x).first);
    }
    return anchor(sys.base(), b);
}

struct ReconstructionReport {
    double t = 0.0;
    cplx value{0.0, 0.0};
    double cutoff = 0.0;
    double step = 0.0;
    double richardson_residual = 0.0; // |I(h/2) - I(h)| / 3
    bool outside_base_hull = false;
    bool near_cylinder_boundary = false;
};

namespace detail {

inline cplx midpoint_rule(const SplitSystem& sys, const CylinderFunction& f, double t, double cutoff,
                          double step, TruncationBudget budget) {
    auto nodes = static_cast<std::size_t>(std::llround(2.0 * cutoff / step));
    if (nodes == 0) {
        throw DomainError("fourier_reconstruct: step larger than the integration range");
    }
    double h = 2.0 * cutoff / static_cast<double>(nodes);
    auto sums = map_chunks(nodes, 4096, [&](std::size_t lo, std::size_t hi) {
        cplx acc{0.0, 0.0};
        for (std::size_t j = lo; j < hi; ++j) {
            double x = -cutoff + (static_cast<double>(j) + 0.5) * h;
            acc += f.ft(x, budget) * ft_invariant(sys.complement(), x, budget) *
                   std::conj(unit_phase(t * x));
        }
        return acc;
    });
    cplx total{0.0, 0.0};
    for (const cplx& s : sums) {
        total += s;
    }
    return total * h;
}

} // namespace detail

/// f(t) ~ int_{-X}^{X} (f dmu_B)^(x) mu_C^(x) exp(2 pi i t x) dx by the
/// composite midpoint rule. Accuracy is reported, not asserted.
inline ReconstructionReport fourier_reconstruct(const SplitSystem& sys, const CylinderFunction& f,
                                                double t, double cutoff, double step,
                                                TruncationBudget budget = {},
                                                std::size_t boundary_depth = 40) {
    if (!(f.ifs() == sys.base())) {
        throw UsageError("fourier_reconstruct: function is not defined over the base system");
    }
    if (!(cutoff > 0.0) || !(step > 0.0)) {
        throw DomainError("fourier_reconstruct: cutoff and step must be positive");
    }
    ReconstructionReport rep;
    rep.t = t;
    rep.cutoff = cutoff;
    rep.step = step;
    rep.value = detail::midpoint_rule(sys, f, t, cutoff, step, budget);
    cplx fine = detail::midpoint_rule(sys, f, t, cutoff, 0.5 * step, budget);
    rep.richardson_residual = std::abs(fine - rep.value) / 3.0;
    rep.outside_base_hull = t < sys.base().hull_lo() || t > sys.base().hull_hi();

    // f o p jumps only at ends of level-n D-cylinders.
    const AffineIfs& d = sys.combined();
    double margin = std::pow(static_cast<double>(d.scale()), -static_cast<double>(boundary_depth));
    if (std::pow(static_cast<double>(d.size()), f.level()) <= 1048576.0) {
        double contraction = std::pow(static_cast<double>(d.scale()), -static_cast<double>(f.level()));
        for (const Word& w : level_words(d, f.level())) {
            double a = anchor(d, w);
            double lo = a + contraction * d.hull_lo();
            double hi = a + contraction * d.hull_hi();
            if (std::abs(t - lo) < margin || std::abs(t - hi) < margin) {
                rep.near_cylinder_boundary = true;
                break;
            }
        }
    }
    return rep;
}

} // namespace ifsframe
