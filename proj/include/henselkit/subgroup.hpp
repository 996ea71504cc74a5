#pragma once

#include "henselkit/multipoly.hpp"
#include "henselkit/series.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace hk {

// Exponent window [lo, hi) on the grid (1/den)Z.
struct Window {
    Rational lo;
    Rational hi;
    std::int64_t den = 1;
    std::string to_string() const;
};

// sum_i c_i X^{p^i} with coefficients in F_p((t^{1/d})).
struct AdditivePoly {
    std::uint32_t p = 2;
    std::vector<Series> coeffs;

    Series apply(const Series& x) const;
    // Reads a one-variable polynomial whose monomials all have p-power degree.
    static AdditivePoly from_poly(const MultiPoly<Series>& f, std::uint32_t p);
    std::string to_string() const;
};

using FpVector = std::vector<std::uint32_t>;

// F_p-subspace of the window, as a reduced echelon basis with ascending pivots
// (pivot = lowest exponent with a nonzero coefficient).
class WindowSubspace {
public:
    WindowSubspace(std::uint32_t p, Window w);
    static WindowSubspace span(std::uint32_t p, Window w, const std::vector<FpVector>& vectors);
    static WindowSubspace span_series(std::uint32_t p, Window w, const std::vector<Series>& elements);

    std::uint32_t p() const { return p_; }
    const Window& window() const { return w_; }
    std::size_t width() const { return width_; }
    std::size_t dim() const { return basis_.size(); }
    const std::vector<FpVector>& basis() const { return basis_; }
    std::vector<std::size_t> pivots() const;
    Rational exponent(std::size_t index) const;

    FpVector project(const Series& a) const;
    Series element(const FpVector& v) const;
    bool contains(const FpVector& v) const;
    // Subspace spanned by this and o.
    WindowSubspace operator+(const WindowSubspace& o) const;
    bool operator==(const WindowSubspace& o) const;
    // Every element, for brute-force checks on tiny spaces.
    std::vector<FpVector> enumerate(std::size_t limit = 1u << 16) const;
    std::string to_string() const;

private:
    void insert(FpVector v);
    std::uint32_t p_;
    Window w_;
    std::size_t width_;
    std::vector<FpVector> basis_;
};

struct SubgroupLimits {
    std::size_t max_width = 4096;
};

// Projection of f(K) onto the window, from the inputs t^g whose images meet it.
WindowSubspace image_window(const AdditivePoly& f, const Window& w, const SubgroupLimits& limits = {});

struct PseudoDirectReport {
    bool holds = true;
    std::optional<Series> witness;  // an element of the sum whose leading term no summand reaches
    Rational witness_exponent;
    std::string to_string() const;
};

PseudoDirectReport pseudo_direct_check(const std::vector<WindowSubspace>& parts);

struct Approximation {
    Series best;
    std::vector<Series> components;  // best = sum of components, one per summand
    Value value;                     // v(a' - best), exact below the window top
    bool at_least = false;           // value is only known to reach the window top
    bool best_effort = false;        // the sum is not pseudo-direct on the window
    std::string to_string() const;
};

// Greedy leading-term elimination through the summands' echelon bases.
Approximation optimal_approx(const Series& target, const std::vector<WindowSubspace>& parts);

// Valuation of a window vector: exponent of the first nonzero entry, or infinity.
Value window_value(const WindowSubspace& like, const FpVector& v);

}  // namespace hk
