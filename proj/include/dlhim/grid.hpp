#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <stdexcept>
#include <string>

namespace dlhim {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;

class Error : public std::runtime_error {
public:
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

/// Uniform 1D grid on (0,1) with homogeneous Dirichlet boundaries. Only the
/// interior nodes x_i = i*h, i = 1..n_interior are represented; the boundary
/// values u(0) = u(1) = 0 are implicit and never stored.
struct Grid1D {
    int n_interior = 0;
    double h = 0.0;

    static Grid1D with_interior(int n) {
        if (n < 1) throw Error("Grid1D: n_interior must be >= 1, got " + std::to_string(n));
        Grid1D g;
        g.n_interior = n;
        g.h = 1.0 / static_cast<double>(n + 1);
        return g;
    }

    /// Coordinate of interior node i, i in [0, n_interior).
    double node(int i) const { return static_cast<double>(i + 1) * h; }

    Vec nodes() const {
        Vec x(n_interior);
        for (int i = 0; i < n_interior; ++i) x[i] = node(i);
        return x;
    }

    bool operator==(const Grid1D& o) const { return n_interior == o.n_interior; }
    bool operator!=(const Grid1D& o) const { return !(*this == o); }
};

namespace detail {

/// Evaluates the piecewise-linear interpolant of (source grid, values) at x.
/// `left`/`right` are the values at the domain endpoints (0 for interior
/// fields, actual boundary values for coefficient fields).
inline double pl_eval(const Grid1D& from, const Vec& v, double x, double left, double right) {
    const int m = from.n_interior;
    const double pos = x * static_cast<double>(m + 1); // in units of from.h
    int j = static_cast<int>(std::floor(pos));
    if (j < 0) j = 0;
    if (j > m) j = m;
    const double t = pos - static_cast<double>(j);
    const double vl = (j == 0) ? left : v[j - 1];
    const double vr = (j == m) ? right : v[j];
    return (1.0 - t) * vl + t * vr;
}

} // namespace detail

/// Piecewise-linear transfer of an interior-node vector between two grids on
/// [0,1]; the implicit zero Dirichlet boundary values anchor the interpolant.
/// Serves both directions: `interpolate` (coarse -> fine) and `restrict`
/// (fine -> coarse) are the same evaluation with roles swapped.
inline Vec transfer_interior(const Vec& v, const Grid1D& from, const Grid1D& to) {
    if (v.size() != from.n_interior)
        throw Error("transfer_interior: vector length " + std::to_string(v.size()) +
                    " does not match grid n_interior " + std::to_string(from.n_interior));
    Vec out(to.n_interior);
    for (int i = 0; i < to.n_interior; ++i)
        out[i] = detail::pl_eval(from, v, to.node(i), 0.0, 0.0);
    return out;
}

inline Vec interpolate(const Vec& v_coarse, const Grid1D& coarse, const Grid1D& fine) {
    return transfer_interior(v_coarse, coarse, fine);
}

inline Vec restrict_to(const Vec& v_fine, const Grid1D& fine, const Grid1D& coarse) {
    return transfer_interior(v_fine, fine, coarse);
}

/// Transfer for vectors that carry boundary nodes (length n_interior + 2,
/// values at x = 0 and x = 1 included); output is on the target interior.
inline Vec transfer_with_boundary(const Vec& v, const Grid1D& from, const Grid1D& to) {
    if (v.size() != from.n_interior + 2)
        throw Error("transfer_with_boundary: expected length " + std::to_string(from.n_interior + 2) +
                    ", got " + std::to_string(v.size()));
    Vec inner = v.segment(1, from.n_interior);
    Vec out(to.n_interior);
    for (int i = 0; i < to.n_interior; ++i)
        out[i] = detail::pl_eval(from, inner, to.node(i), v[0], v[v.size() - 1]);
    return out;
}

/// Matrix-free interior-to-interior transfer with a transpose, for use as a
/// constant linear operator inside gradient tapes.
struct TransferOp {
    Grid1D from;
    Grid1D to;

    Vec apply(const Vec& v) const { return transfer_interior(v, from, to); }

    Vec apply_transpose(const Vec& bar) const {
        Vec out = Vec::Zero(from.n_interior);
        const int m = from.n_interior;
        for (int i = 0; i < to.n_interior; ++i) {
            const double pos = to.node(i) * static_cast<double>(m + 1);
            int j = static_cast<int>(std::floor(pos));
            if (j < 0) j = 0;
            if (j > m) j = m;
            const double t = pos - static_cast<double>(j);
            if (j >= 1) out[j - 1] += (1.0 - t) * bar[i];
            if (j <= m - 1) out[j] += t * bar[i];
        }
        return out;
    }
};

} // namespace dlhim
