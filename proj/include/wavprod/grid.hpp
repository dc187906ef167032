#ifndef WAVPROD_GRID_HPP
#define WAVPROD_GRID_HPP

#include <array>
#include <bit>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace wavprod {

// A dyadic box [origin, origin + side)^n. The side must be a power of two
// times the unit base length, and the origin must be representable on the
// dyadic lattice at any level we transform to.
struct Box {
    std::array<double, 2> origin{0.0, 0.0};
    double side = 1.0;
    int dims = 1;

    bool operator==(const Box&) const = default;

    void validate() const {
        if (dims != 1 && dims != 2)
            throw std::invalid_argument("Box: dims must be 1 or 2");
        if (!(side > 0.0))
            throw std::invalid_argument("Box: side must be positive");
        double l = std::log2(side);
        if (std::rint(l) != l)
            throw std::invalid_argument("Box: side must be a power of 2");
    }

    // coarsest level at which the box is a single dyadic cell
    int min_level() const { return -static_cast<int>(std::rint(std::log2(side))); }
};

// Index of one wavelet (or scaling) basis element: {x : 2^j x - k in [0,1)^n}.
// lambda == 0 marks a scaling cube; otherwise lambda encodes the orientation
// in {0,1}^n \ {0} as a bit mask.
struct DyadicCube {
    int j = 0;
    std::array<std::int64_t, 2> k{0, 0};
    int lambda = 0;
    int dims = 1;

    double side() const { return std::ldexp(1.0, -j); }

    std::array<double, 2> center() const {
        std::array<double, 2> c{0.0, 0.0};
        for (int a = 0; a < dims; ++a)
            c[a] = std::ldexp(static_cast<double>(k[a]) + 0.5, -j);
        return c;
    }

    bool same_index(const DyadicCube& o) const {
        if (j != o.j || dims != o.dims || lambda != o.lambda) return false;
        for (int a = 0; a < dims; ++a)
            if (k[a] != o.k[a]) return false;
        return true;
    }
};

// Box of same center as I, side dilated by factor kf.
inline Box dilate_cube(const DyadicCube& I, int kf) {
    if (kf < 1) throw std::invalid_argument("dilate_cube: factor must be >= 1");
    Box b;
    b.dims = I.dims;
    b.side = kf * I.side();
    auto c = I.center();
    for (int a = 0; a < I.dims; ++a)
        b.origin[a] = c[a] - 0.5 * b.side;
    return b;
}

// Samples of a real function on the uniform dyadic grid over a box.
// Sample i holds the value at the midpoint of cell i (row-major in 2D).
class GridFunction {
public:
    GridFunction() = default;

    GridFunction(Box box, int level)
        : box_(box), level_(level) {
        box_.validate();
        if (level < box_.min_level())
            throw std::invalid_argument("GridFunction: level finer than box allows");
        samples_.assign(static_cast<std::size_t>(total_cells()), 0.0);
    }

    const Box& box() const { return box_; }
    int level() const { return level_; }
    int dims() const { return box_.dims; }

    // samples per axis
    std::int64_t n() const {
        return static_cast<std::int64_t>(std::rint(box_.side * std::ldexp(1.0, level_)));
    }
    std::int64_t total_cells() const {
        std::int64_t m = n();
        return box_.dims == 2 ? m * m : m;
    }
    double cell_width() const { return std::ldexp(1.0, -level_); }
    double cell_volume() const { return std::pow(cell_width(), box_.dims); }

    double& operator[](std::int64_t i) { return samples_[static_cast<std::size_t>(i)]; }
    double operator[](std::int64_t i) const { return samples_[static_cast<std::size_t>(i)]; }
    double& at(std::int64_t i0, std::int64_t i1) { return samples_[static_cast<std::size_t>(i0 * n() + i1)]; }
    double at(std::int64_t i0, std::int64_t i1) const { return samples_[static_cast<std::size_t>(i0 * n() + i1)]; }

    std::vector<double>& samples() { return samples_; }
    const std::vector<double>& samples() const { return samples_; }

    // physical coordinate of the midpoint of cell (i0, i1)
    std::array<double, 2> midpoint(std::int64_t i0, std::int64_t i1) const {
        double h = cell_width();
        std::array<double, 2> x{box_.origin[0] + (i0 + 0.5) * h, 0.0};
        if (dims() == 2) x[1] = box_.origin[1] + (i1 + 0.5) * h;
        return x;
    }
    // midpoint of the cell with flat (row-major) index i
    std::array<double, 2> midpoint(std::int64_t i) const {
        return dims() == 2 ? midpoint(i / n(), i % n()) : midpoint(i, 0);
    }

    bool same_geometry(const GridFunction& o) const {
        return box_ == o.box_ && level_ == o.level_;
    }

private:
    Box box_;
    int level_ = 0;
    std::vector<double> samples_;
};

inline void require_same_geometry(const GridFunction& f, const GridFunction& g) {
    if (!f.same_geometry(g))
        throw std::invalid_argument("grid functions have mismatched geometry");
}

inline double integrate(const GridFunction& f) {
    double s = 0.0;
    for (double v : f.samples()) s += v;
    return s * f.cell_volume();
}

inline double inner_product(const GridFunction& f, const GridFunction& g) {
    require_same_geometry(f, g);
    double s = 0.0;
    const auto& a = f.samples();
    const auto& b = g.samples();
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s * f.cell_volume();
}

// elementwise helpers used throughout the decomposition code
inline GridFunction operator+(const GridFunction& f, const GridFunction& g) {
    require_same_geometry(f, g);
    GridFunction r = f;
    for (std::size_t i = 0; i < r.samples().size(); ++i) r.samples()[i] += g.samples()[i];
    return r;
}
inline GridFunction operator-(const GridFunction& f, const GridFunction& g) {
    require_same_geometry(f, g);
    GridFunction r = f;
    for (std::size_t i = 0; i < r.samples().size(); ++i) r.samples()[i] -= g.samples()[i];
    return r;
}
inline GridFunction operator*(const GridFunction& f, const GridFunction& g) {
    require_same_geometry(f, g);
    GridFunction r = f;
    for (std::size_t i = 0; i < r.samples().size(); ++i) r.samples()[i] *= g.samples()[i];
    return r;
}
inline GridFunction operator*(double c, const GridFunction& f) {
    GridFunction r = f;
    for (double& v : r.samples()) v *= c;
    return r;
}

// "GFN1" file format: text header, blank line, then row-major samples as
// little-endian IEEE-754 doubles (or one decimal per line with --csv).
inline void write_grid(const GridFunction& f, const std::string& path, bool csv = false) {
    std::ofstream os(path, std::ios::binary);
    if (!os) throw std::runtime_error("write_grid: cannot open " + path);
    os.precision(17);
    os << "GFN1\n";
    os << "dims " << f.dims() << "\n";
    os << "J " << f.level() << "\n";
    os << "origin";
    for (int a = 0; a < f.dims(); ++a) os << " " << f.box().origin[a];
    os << "\n";
    os << "side " << f.box().side << "\n";
    os << "\n";
    if (csv) {
        for (double v : f.samples()) os << v << "\n";
    } else {
        static_assert(std::endian::native == std::endian::little,
                      "GFN1 binary payload assumes a little-endian host");
        os.write(reinterpret_cast<const char*>(f.samples().data()),
                 static_cast<std::streamsize>(f.samples().size() * sizeof(double)));
    }
    if (!os) throw std::runtime_error("write_grid: write failure on " + path);
}

inline GridFunction read_grid(const std::string& path, bool csv = false) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw std::runtime_error("read_grid: cannot open " + path);
    std::string line;
    if (!std::getline(is, line) || line != "GFN1")
        throw std::runtime_error("read_grid: bad magic in " + path);
    Box box;
    int level = 0;
    bool have_dims = false, have_j = false, have_origin = false, have_side = false;
    while (std::getline(is, line) && !line.empty()) {
        std::istringstream ls(line);
        std::string key;
        ls >> key;
        if (key == "dims") { ls >> box.dims; have_dims = true; }
        else if (key == "J") { ls >> level; have_j = true; }
        else if (key == "origin") {
            have_origin = true;
            for (int a = 0; a < box.dims; ++a) ls >> box.origin[a];
        }
        else if (key == "side") { ls >> box.side; have_side = true; }
        else throw std::runtime_error("read_grid: unknown header key '" + key + "'");
        if (!ls) throw std::runtime_error("read_grid: malformed header line '" + line + "'");
    }
    if (!have_dims || !have_j || !have_origin || !have_side)
        throw std::runtime_error("read_grid: incomplete header in " + path);
    GridFunction f(box, level);
    if (csv) {
        for (auto& v : f.samples())
            if (!(is >> v)) throw std::runtime_error("read_grid: sample count mismatch in " + path);
        double extra;
        if (is >> extra) throw std::runtime_error("read_grid: trailing samples in " + path);
    } else {
        is.read(reinterpret_cast<char*>(f.samples().data()),
                static_cast<std::streamsize>(f.samples().size() * sizeof(double)));
        if (is.gcount() != static_cast<std::streamsize>(f.samples().size() * sizeof(double)))
            throw std::runtime_error("read_grid: sample count mismatch in " + path);
        if (is.get() != std::ifstream::traits_type::eof())
            throw std::runtime_error("read_grid: trailing bytes in " + path);
    }
    for (double v : f.samples())
        if (!std::isfinite(v)) throw std::runtime_error("read_grid: non-finite sample in " + path);
    return f;
}

} // namespace wavprod

#endif
