#pragma once

// Affine iterated function systems tau_b(x) = (x + b) / R on the line with an
// integer scale R >= 2 and a finite integer digit set B, together with their
// equal-weight invariant measures mu_B.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <limits>
#include <numbers>
#include <random>
#include <span>
#include <string>
#include <vector>

#include "ifsframe/error.hpp"
#include "ifsframe/measure.hpp"

namespace ifsframe {

using cplx = std::complex<double>;

/// Finite digit sequence (b_1, ..., b_n), most significant first. The empty
/// word stands for the whole attractor.
using Word = std::vector<std::int64_t>;

/// Absolute error target for the infinite-product Fourier transform.
struct TruncationBudget {
    double tol = 1e-12;
};

class AffineIfs {
public:
    AffineIfs(std::int64_t scale, std::vector<std::int64_t> digits)
        : scale_(scale), digits_(std::move(digits)) {
        if (scale_ < 2) {
            throw DomainError("affine IFS: scale R must be an integer >= 2, got " +
                              std::to_string(scale_));
        }
        if (digits_.empty()) {
            throw DomainError("affine IFS: digit set must be nonempty");
        }
        std::sort(digits_.begin(), digits_.end());
        if (std::adjacent_find(digits_.begin(), digits_.end()) != digits_.end()) {
            throw DomainError("affine IFS: duplicate digits");
        }
        if (static_cast<std::int64_t>(digits_.size()) > scale_) {
            throw DomainError("affine IFS: more digits than the scale R");
        }
        std::vector<std::int64_t> residues;
        for (std::int64_t b : digits_) {
            residues.push_back(((b % scale_) + scale_) % scale_);
            max_abs_digit_ = std::max(max_abs_digit_, std::abs(b));
        }
        std::sort(residues.begin(), residues.end());
        distinct_mod_r_ = std::adjacent_find(residues.begin(), residues.end()) == residues.end();
    }

    std::int64_t scale() const noexcept { return scale_; }
    const std::vector<std::int64_t>& digits() const noexcept { return digits_; }
    std::size_t size() const noexcept { return digits_.size(); }
    bool distinct_mod_r() const noexcept { return distinct_mod_r_; }
    std::int64_t max_abs_digit() const noexcept { return max_abs_digit_; }

    bool has_digit(std::int64_t b) const {
        return std::binary_search(digits_.begin(), digits_.end(), b);
    }

    std::size_t digit_position(std::int64_t b) const {
        auto it = std::lower_bound(digits_.begin(), digits_.end(), b);
        if (it == digits_.end() || *it != b) {
            throw DomainError("digit " + std::to_string(b) + " is not in the digit set");
        }
        return static_cast<std::size_t>(it - digits_.begin());
    }

    /// min(X_B) and max(X_B).
    double hull_lo() const noexcept {
        return static_cast<double>(digits_.front()) / static_cast<double>(scale_ - 1);
    }
    double hull_hi() const noexcept {
        return static_cast<double>(digits_.back()) / static_cast<double>(scale_ - 1);
    }

    friend bool operator==(const AffineIfs&, const AffineIfs&) = default;

private:
    std::int64_t scale_;
    std::vector<std::int64_t> digits_;
    bool distinct_mod_r_ = false;
    std::int64_t max_abs_digit_ = 0;
};

inline AffineIfs new_ifs(std::int64_t scale, std::vector<std::int64_t> digits) {
    return AffineIfs(scale, std::move(digits));
}

namespace detail {

inline void check_word(const AffineIfs& ifs, const Word& w) {
    for (std::int64_t b : w) {
        if (!ifs.has_digit(b)) {
            throw DomainError("word digit " + std::to_string(b) + " is not in the digit set");
        }
    }
}

inline void require_no_overlap(const AffineIfs& ifs, const char* op) {
    if (!ifs.distinct_mod_r()) {
        throw UnsupportedError(std::string(op) +
                               ": digits are not distinct mod R (overlap regime refused)");
    }
}

// x - round(x), in [-1/2, 1/2].
inline double centered_frac(double x) { return x - std::nearbyint(x); }

inline cplx unit_phase(double turns) {
    return std::polar(1.0, -2.0 * std::numbers::pi * centered_frac(turns));
}

} // namespace detail

/// sum_k R^{-k} b_k over the word. Horner from the tail for accuracy.
inline double anchor(const AffineIfs& ifs, const Word& w) {
    auto r = static_cast<double>(ifs.scale());
    double x = 0.0;
    for (auto it = w.rbegin(); it != w.rend(); ++it) {
        x = (x + static_cast<double>(*it)) / r;
    }
    return x;
}

/// E_B truncated at `depth` digits. A depth beyond the word length pads with
/// the digit 0, which is only meaningful when 0 is a digit.
inline double encode(const AffineIfs& ifs, const Word& w, std::size_t depth) {
    detail::check_word(ifs, w);
    if (depth < w.size()) {
        throw UsageError("encode: depth " + std::to_string(depth) + " is shorter than the word");
    }
    if (depth > w.size() && !ifs.has_digit(0)) {
        throw DomainError("encode: zero padding needs 0 in the digit set");
    }
    return anchor(ifs, w);
}

inline double encode(const AffineIfs& ifs, const Word& w) { return encode(ifs, w, w.size()); }

/// Exact rational number num/den.
struct Rational {
    std::uint64_t num = 0;
    std::uint64_t den = 1;

    double value() const noexcept { return static_cast<double>(num) / static_cast<double>(den); }
    friend bool operator==(const Rational&, const Rational&) = default;
};

struct Cylinder {
    double lo = 0.0;
    double hi = 0.0;
    Rational mass;
};

/// N^n as an exact integer.
inline std::uint64_t count_words(const AffineIfs& ifs, std::size_t level) {
    std::uint64_t m = 1;
    for (std::size_t k = 0; k < level; ++k) {
        if (m > std::numeric_limits<std::uint64_t>::max() / ifs.size()) {
            throw SizeError("N^n overflows 64 bits at level " + std::to_string(level));
        }
        m *= ifs.size();
    }
    return m;
}

/// tau_{b_1} ... tau_{b_n}(X_B): hull interval and its mu_B-mass N^{-n}.
inline Cylinder cylinder_interval(const AffineIfs& ifs, const Word& w) {
    detail::require_no_overlap(ifs, "cylinder_interval");
    detail::check_word(ifs, w);
    double a = anchor(ifs, w);
    double contraction = std::pow(static_cast<double>(ifs.scale()), -static_cast<double>(w.size()));
    return {a + contraction * ifs.hull_lo(), a + contraction * ifs.hull_hi(),
            Rational{1, count_words(ifs, w.size())}};
}

/// All N^n words of length n in lexicographic B-order, most significant digit
/// first; the position in this list is the canonical coefficient index.
inline std::vector<Word> level_words(const AffineIfs& ifs, std::size_t level) {
    std::uint64_t m = count_words(ifs, level);
    std::vector<Word> out;
    out.reserve(static_cast<std::size_t>(m));
    Word w(level, ifs.digits().front());
    std::vector<std::size_t> pos(level, 0);
    for (std::uint64_t i = 0; i < m; ++i) {
        out.push_back(w);
        for (std::size_t k = level; k-- > 0;) {
            if (++pos[k] < ifs.size()) {
                w[k] = ifs.digits()[pos[k]];
                break;
            }
            pos[k] = 0;
            w[k] = ifs.digits().front();
        }
    }
    return out;
}

inline std::size_t word_index(const AffineIfs& ifs, const Word& w) {
    std::size_t idx = 0;
    for (std::int64_t b : w) {
        idx = idx * ifs.size() + ifs.digit_position(b);
    }
    return idx;
}

/// m_B(s) = (1/N) sum_b exp(-2 pi i s b).
inline cplx digit_multiplier(const AffineIfs& ifs, double s) {
    cplx acc{0.0, 0.0};
    for (std::int64_t b : ifs.digits()) {
        acc += detail::unit_phase(s * static_cast<double>(b));
    }
    return acc / static_cast<double>(ifs.size());
}

/// Smallest K with exp(2 pi max|b| |t| R^{-K} / (R-1)) - 1 < tol. Since
/// |m_B(s) - 1| <= 2 pi max|b| |s|, the omitted factors k > K multiply to
/// within that bound of 1, and the kept partial product has modulus <= 1.
inline std::size_t truncation_depth(const AffineIfs& ifs, double t, double tol) {
    if (!(tol > 0.0)) {
        throw DomainError("truncation tolerance must be positive");
    }
    auto r = static_cast<double>(ifs.scale());
    double x = 2.0 * std::numbers::pi * static_cast<double>(ifs.max_abs_digit()) * std::abs(t) /
               (r - 1.0);
    std::size_t k = 0;
    while (std::expm1(x) >= tol) {
        x /= r;
        ++k;
        if (k > 4096) {
            throw DomainError("truncation depth did not converge");
        }
    }
    return k;
}

/// mu_B^(t) = prod_{k>=1} m_B(t / R^k), with absolute error below budget.tol.
inline cplx ft_invariant(const AffineIfs& ifs, double t, TruncationBudget budget = {}) {
    std::size_t depth = truncation_depth(ifs, t, budget.tol);
    auto r = static_cast<double>(ifs.scale());
    cplx prod{1.0, 0.0};
    double s = t;
    for (std::size_t k = 0; k < depth; ++k) {
        s /= r;
        prod *= digit_multiplier(ifs, s);
    }
    return prod;
}

/// Fourier transform of chi_w dmu_B:
/// N^{-n} exp(-2 pi i t a_w) mu_B^(t / R^n).
inline cplx ft_cylinder(const AffineIfs& ifs, const Word& w, double t, TruncationBudget budget = {}) {
    detail::require_no_overlap(ifs, "ft_cylinder");
    detail::check_word(ifs, w);
    double rn = std::pow(static_cast<double>(ifs.scale()), static_cast<double>(w.size()));
    double numer = 0.0;
    for (std::int64_t b : w) {
        numer = numer * static_cast<double>(ifs.scale()) + static_cast<double>(b);
    }
    double scaled = t / rn;
    return detail::unit_phase(scaled * numer) * ft_invariant(ifs, scaled, budget) /
           static_cast<double>(count_words(ifs, w.size()));
}

/// Every C within {0..c_max} with #C = R/N such that B + C hits each residue
/// mod R exactly once, in lexicographic order.
inline std::vector<std::vector<std::int64_t>> find_complement(const AffineIfs& ifs,
                                                              std::int64_t c_max) {
    std::vector<std::vector<std::int64_t>> found;
    const std::int64_t r = ifs.scale();
    const auto n = static_cast<std::int64_t>(ifs.size());
    if (r % n != 0 || c_max < 0) {
        return found;
    }
    const auto want = static_cast<std::size_t>(r / n);
    std::vector<std::int64_t> b_res;
    for (std::int64_t b : ifs.digits()) {
        b_res.push_back(((b % r) + r) % r);
    }
    std::vector<char> hit(static_cast<std::size_t>(r), 0);
    std::vector<std::int64_t> current;

    auto try_add = [&](std::int64_t c, char mark) {
        for (std::int64_t br : b_res) {
            hit[static_cast<std::size_t>((br + c) % r)] = mark;
        }
    };
    auto fits = [&](std::int64_t c) {
        return std::none_of(b_res.begin(), b_res.end(), [&](std::int64_t br) {
            return hit[static_cast<std::size_t>((br + c) % r)] != 0;
        });
    };

    auto search = [&](auto&& self, std::int64_t next) -> void {
        if (current.size() == want) {
            found.push_back(current);
            return;
        }
        auto remaining = static_cast<std::int64_t>(want - current.size());
        for (std::int64_t c = next; c <= c_max - remaining + 1; ++c) {
            if (!fits(c % r)) {
                continue;
            }
            try_add(c % r, 1);
            current.push_back(c);
            self(self, c + 1);
            current.pop_back();
            try_add(c % r, 0);
        }
    };
    search(search, 0);
    return found;
}

/// sum_gamma |mu_C^(gamma)|^2 delta_gamma; weights below 1e-20 are dropped.
inline AtomicMeasure dual_weights(const AffineIfs& complement, std::span<const double> frequencies,
                                  TruncationBudget budget = {}) {
    std::vector<Atom> atoms;
    atoms.reserve(frequencies.size());
    for (double g : frequencies) {
        double w = std::norm(ft_invariant(complement, g, budget));
        if (w >= 1e-20) {
            atoms.push_back({g, w});
        }
    }
    return AtomicMeasure(std::move(atoms));
}

/// The integers in [-half_width, half_width].
inline std::vector<double> integer_range(std::int64_t half_width) {
    std::vector<double> out;
    out.reserve(static_cast<std::size_t>(2 * half_width + 1));
    for (std::int64_t n = -half_width; n <= half_width; ++n) {
        out.push_back(static_cast<double>(n));
    }
    return out;
}

inline AtomicMeasure dual_weights(const AffineIfs& complement, std::int64_t half_width,
                                  TruncationBudget budget = {}) {
    std::vector<double> freqs = integer_range(half_width);
    return dual_weights(complement, freqs, budget);
}

/// Uniform digit index in [0, n) from one 64-bit draw: floor(u * n) with
/// u = (x >> 11) * 2^-53. Pinned so that seeded runs are reproducible
/// independent of the standard library's distributions.
inline std::size_t uniform_index(std::mt19937_64& gen, std::size_t n) {
    double u = static_cast<double>(gen() >> 11) * 0x1.0p-53;
    return std::min(n - 1, static_cast<std::size_t>(u * static_cast<double>(n)));
}

inline Word random_word(const AffineIfs& ifs, std::size_t depth, std::mt19937_64& gen) {
    Word w(depth);
    for (auto& b : w) {
        b = ifs.digits()[uniform_index(gen, ifs.size())];
    }
    return w;
}

/// `count` samples of E_B applied to `depth` i.i.d. uniform digits
/// (std::mt19937_64 seeded with `seed`).
inline std::vector<double> sample_invariant(const AffineIfs& ifs, std::size_t depth,
                                            std::size_t count, std::uint64_t seed) {
    if (depth == 0 || count == 0) {
        throw UsageError("sample_invariant: depth and count must be >= 1");
    }
    std::mt19937_64 gen(seed);
    std::vector<double> out;
    out.reserve(count);
    for (std::size_t i = 0; i < count; ++i) {
        out.push_back(anchor(ifs, random_word(ifs, depth, gen)));
    }
    return out;
}

} // namespace ifsframe
