#include "sff/reach/grid.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <fstream>

namespace sff::reach {

Grid::Grid(std::vector<GridAxis> axes) : axes_(std::move(axes)) {
    if (axes_.empty()) throw Error("grid needs at least one axis");
    for (const auto& a : axes_) {
        if (a.n < 3) throw Error("grid needs at least 3 points per axis");
        if (!(a.lo < a.hi)) throw Error("grid axis needs lo < hi");
    }
    strides_.assign(axes_.size(), 1);
    for (int d = static_cast<int>(axes_.size()) - 2; d >= 0; --d)
        strides_[d] = strides_[d + 1] * static_cast<std::size_t>(axes_[d + 1].n);
    total_ = strides_[0] * static_cast<std::size_t>(axes_[0].n);
}

std::size_t Grid::index(std::span<const int> coords) const {
    std::size_t idx = 0;
    for (std::size_t d = 0; d < axes_.size(); ++d) idx += strides_[d] * static_cast<std::size_t>(coords[d]);
    return idx;
}

void Grid::coords(std::size_t idx, std::span<int> out) const {
    for (std::size_t d = 0; d < axes_.size(); ++d) {
        out[d] = static_cast<int>(idx / strides_[d]);
        idx %= strides_[d];
    }
}

void Grid::point(std::size_t idx, std::span<double> out) const {
    for (std::size_t d = 0; d < axes_.size(); ++d) {
        int c = static_cast<int>(idx / strides_[d]);
        idx %= strides_[d];
        out[d] = axes_[d].lo + c * axes_[d].spacing();
    }
}

double Grid::min_spacing() const {
    double m = axes_[0].spacing();
    for (const auto& a : axes_) m = std::min(m, a.spacing());
    return m;
}

double Grid::cell_diagonal() const {
    double s = 0.0;
    for (const auto& a : axes_) s += a.spacing() * a.spacing();
    return std::sqrt(s);
}

bool Grid::operator==(const Grid& other) const {
    if (axes_.size() != other.axes_.size()) return false;
    for (std::size_t d = 0; d < axes_.size(); ++d) {
        if (axes_[d].lo != other.axes_[d].lo || axes_[d].hi != other.axes_[d].hi ||
            axes_[d].n != other.axes_[d].n)
            return false;
    }
    return true;
}

double ValueField::min_value() const {
    double m = kSentinel;
    for (double v : values) m = std::min(m, v);
    return m;
}

ValueField constant_field(const Grid& g, double v) {
    ValueField f;
    f.grid = g;
    f.values.assign(g.size(), v);
    return f;
}

static void check_same_grid(const ValueField& a, const ValueField& b) {
    if (!(a.grid == b.grid)) throw GridMismatch("value algebra requires identical grids");
}

ValueField value_and(const ValueField& a, const ValueField& b) {
    check_same_grid(a, b);
    ValueField out;
    out.grid = a.grid;
    out.values.resize(a.values.size());
    for (std::size_t i = 0; i < a.values.size(); ++i)
        out.values[i] = std::max(a.values[i], b.values[i]);
    return out;
}

ValueField value_or(const ValueField& a, const ValueField& b) {
    check_same_grid(a, b);
    ValueField out;
    out.grid = a.grid;
    out.values.resize(a.values.size());
    for (std::size_t i = 0; i < a.values.size(); ++i)
        out.values[i] = std::min(a.values[i], b.values[i]);
    return out;
}

ValueField value_not(const ValueField& a) {
    ValueField out;
    out.grid = a.grid;
    out.values.resize(a.values.size());
    for (std::size_t i = 0; i < a.values.size(); ++i) out.values[i] = -a.values[i];
    return out;
}

double value_at(const ValueField& f, std::span<const double> x) {
    const Grid& g = f.grid;
    const int nd = g.ndims();
    if (static_cast<int>(x.size()) < nd)
        throw DimensionMismatch("value_at query has fewer coordinates than grid axes");
    std::vector<int> base(static_cast<std::size_t>(nd));
    std::vector<double> frac(static_cast<std::size_t>(nd));
    for (int d = 0; d < nd; ++d) {
        const GridAxis& a = g.axis(d);
        const double eps = 1e-9 * (a.hi - a.lo);
        if (x[d] < a.lo - eps || x[d] > a.hi + eps)
            throw OutOfBounds("coordinate " + std::to_string(x[d]) + " on axis " +
                              std::to_string(d));
        double u = (std::clamp(x[d], a.lo, a.hi) - a.lo) / a.spacing();
        int i = std::min(static_cast<int>(u), a.n - 2);
        base[static_cast<std::size_t>(d)] = i;
        frac[static_cast<std::size_t>(d)] = u - i;
    }
    // Accumulate over the 2^nd cell corners.
    double acc = 0.0;
    const int corners = 1 << nd;
    std::vector<int> c(static_cast<std::size_t>(nd));
    for (int mask = 0; mask < corners; ++mask) {
        double w = 1.0;
        for (int d = 0; d < nd; ++d) {
            bool hi = mask & (1 << d);
            c[static_cast<std::size_t>(d)] = base[static_cast<std::size_t>(d)] + (hi ? 1 : 0);
            w *= hi ? frac[static_cast<std::size_t>(d)] : 1.0 - frac[static_cast<std::size_t>(d)];
        }
        if (w != 0.0) acc += w * f.values[g.index(c)];
    }
    return acc;
}

// ── binary dump ─────────────────────────────────────────────────────────────

void dump_field(const ValueField& f, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot open '" + path + "' for writing");
    out.write("SFFV", 4);
    std::uint32_t version = 1, ndims = static_cast<std::uint32_t>(f.grid.ndims());
    out.write(reinterpret_cast<const char*>(&version), 4);
    out.write(reinterpret_cast<const char*>(&ndims), 4);
    for (int d = 0; d < f.grid.ndims(); ++d) {
        const GridAxis& a = f.grid.axis(d);
        std::uint64_t n = static_cast<std::uint64_t>(a.n);
        out.write(reinterpret_cast<const char*>(&a.lo), 8);
        out.write(reinterpret_cast<const char*>(&a.hi), 8);
        out.write(reinterpret_cast<const char*>(&n), 8);
    }
    out.write(reinterpret_cast<const char*>(f.values.data()),
              static_cast<std::streamsize>(f.values.size() * sizeof(double)));
}

ValueField load_field(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error("cannot open '" + path + "'");
    char magic[4];
    in.read(magic, 4);
    if (!in || std::memcmp(magic, "SFFV", 4) != 0) throw Error("bad field dump magic");
    std::uint32_t version = 0, ndims = 0;
    in.read(reinterpret_cast<char*>(&version), 4);
    in.read(reinterpret_cast<char*>(&ndims), 4);
    if (version != 1) throw Error("unsupported field dump version");
    std::vector<GridAxis> axes;
    for (std::uint32_t d = 0; d < ndims; ++d) {
        GridAxis a;
        std::uint64_t n = 0;
        in.read(reinterpret_cast<char*>(&a.lo), 8);
        in.read(reinterpret_cast<char*>(&a.hi), 8);
        in.read(reinterpret_cast<char*>(&n), 8);
        a.n = static_cast<int>(n);
        axes.push_back(a);
    }
    ValueField f;
    f.grid = Grid(std::move(axes));
    f.values.resize(f.grid.size());
    in.read(reinterpret_cast<char*>(f.values.data()),
            static_cast<std::streamsize>(f.values.size() * sizeof(double)));
    if (!in) throw Error("truncated field dump");
    return f;
}

}  // namespace sff::reach
