#pragma once

// Regular grid and sampled scalar fields. The strict sublevel set
// {x : value(x) < 0} encodes reachable tubes and predicate satisfaction
// sets; value algebra implements the pointwise max/min/negation
// correspondence for conjunction, disjunction and negation.

#include <array>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "sff/errors.hpp"

namespace sff::reach {

// Large finite stand-in for "true everywhere" / "empty set" so min/max
// arithmetic stays finite on the grid.
inline constexpr double kSentinel = 1e9;

struct GridAxis {
    double lo = 0.0;
    double hi = 1.0;
    int n = 3;  // >= 3
    double spacing() const { return (hi - lo) / (n - 1); }
};

class Grid {
  public:
    Grid() = default;
    explicit Grid(std::vector<GridAxis> axes);

    int ndims() const { return static_cast<int>(axes_.size()); }
    const GridAxis& axis(int d) const { return axes_[static_cast<std::size_t>(d)]; }
    const std::vector<GridAxis>& axes() const { return axes_; }
    std::size_t size() const { return total_; }

    // Row-major linear index, last axis fastest.
    std::size_t index(std::span<const int> coords) const;
    void coords(std::size_t idx, std::span<int> out) const;
    double coordinate(int d, int i) const {
        return axes_[static_cast<std::size_t>(d)].lo + i * axes_[static_cast<std::size_t>(d)].spacing();
    }
    void point(std::size_t idx, std::span<double> out) const;

    double min_spacing() const;
    double cell_diagonal() const;

    bool operator==(const Grid& other) const;

  private:
    std::vector<GridAxis> axes_;
    std::vector<std::size_t> strides_;
    std::size_t total_ = 0;
};

struct ValueField {
    Grid grid;
    std::vector<double> values;  // one per grid node, finite

    // Optional retained snapshots of the backward evolution, most recent
    // (t = 0) first omitted; snapshot k holds values at snapshot_times[k].
    std::vector<double> snapshot_times;
    std::vector<std::vector<double>> snapshots;

    double min_value() const;
};

ValueField constant_field(const Grid& g, double v);

// Pointwise algebra; fields must share one grid (GridMismatch otherwise).
ValueField value_and(const ValueField& a, const ValueField& b);   // max
ValueField value_or(const ValueField& a, const ValueField& b);    // min
ValueField value_not(const ValueField& a);                        // negate

// Multilinear interpolation at x (OutOfBounds outside the grid hull).
double value_at(const ValueField& f, std::span<const double> x);

// Flat binary dump: header {magic "SFFV", version u32, ndims u32,
// per-axis (lo f64, hi f64, n u64)}, then values f64 row-major.
void dump_field(const ValueField& f, const std::string& path);
ValueField load_field(const std::string& path);

}  // namespace sff::reach
