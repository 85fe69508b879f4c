#pragma once

#include <cmath>
#include <string>
#include <vector>

#include "dlhim/grf.hpp"
#include "dlhim/grid.hpp"

namespace dlhim {

enum class ProblemKind { Diffusion, Helmholtz };

inline const char* to_string(ProblemKind k) {
    return k == ProblemKind::Diffusion ? "diffusion" : "helmholtz";
}

/// Tridiagonal system A u = f from a second-order finite-difference
/// discretization on a uniform interior grid. Bands are stored explicitly;
/// sub/super have length n-1. Both problem kinds yield symmetric A.
struct LinearSystem {
    Grid1D grid;
    Vec diag;
    Vec sub;
    Vec super;
    Vec rhs;
    bool spd = false;
    ProblemKind kind = ProblemKind::Diffusion;

    int n() const { return grid.n_interior; }

    Vec matvec(const Vec& x) const {
        const int m = n();
        Vec y(m);
        for (int i = 0; i < m; ++i) {
            double v = diag[i] * x[i];
            if (i > 0) v += sub[i - 1] * x[i - 1];
            if (i < m - 1) v += super[i] * x[i + 1];
            y[i] = v;
        }
        return y;
    }

    /// A is symmetric for both kinds, but keep an explicit transpose apply
    /// so adjoint code does not rely on that.
    Vec matvec_transpose(const Vec& x) const {
        const int m = n();
        Vec y(m);
        for (int i = 0; i < m; ++i) {
            double v = diag[i] * x[i];
            if (i > 0) v += super[i - 1] * x[i - 1];
            if (i < m - 1) v += sub[i] * x[i + 1];
            y[i] = v;
        }
        return y;
    }

    Vec residual(const Vec& u) const { return rhs - matvec(u); }

    /// Max column abs sum.
    double norm1() const {
        const int m = n();
        double best = 0.0;
        for (int j = 0; j < m; ++j) {
            double s = std::abs(diag[j]);
            if (j > 0) s += std::abs(super[j - 1]);
            if (j < m - 1) s += std::abs(sub[j]);
            best = std::max(best, s);
        }
        return best;
    }
};

/// Assembles -(k u')' = f with k given at nodes including boundaries; edge
/// coefficients k_{i+-1/2} are arithmetic means of adjacent node values,
/// which keeps A exactly symmetric. SPD for k >= k_min > 0.
inline LinearSystem assemble_diffusion(const FieldSample& k, const Grid1D& grid) {
    if (!k.includes_boundary || k.grid != grid)
        throw Error("assemble_diffusion: coefficient field must include boundaries on the target grid");
    for (Eigen::Index i = 0; i < k.values.size(); ++i)
        if (!(k.values[i] > 0.0))
            throw Error("assemble_diffusion: coefficient must be positive everywhere, found " +
                        std::to_string(k.values[i]));
    const int m = grid.n_interior;
    const double inv_h2 = 1.0 / (grid.h * grid.h);
    LinearSystem sys;
    sys.grid = grid;
    sys.kind = ProblemKind::Diffusion;
    sys.spd = true;
    sys.diag.resize(m);
    sys.sub.resize(m - 1);
    sys.super.resize(m - 1);
    sys.rhs = Vec::Zero(m);
    for (int i = 0; i < m; ++i) {
        const double k_left = 0.5 * (k.values[i] + k.values[i + 1]);
        const double k_right = 0.5 * (k.values[i + 1] + k.values[i + 2]);
        sys.diag[i] = (k_left + k_right) * inv_h2;
        if (i > 0) sys.sub[i - 1] = -k_left * inv_h2;
        if (i < m - 1) sys.super[i] = -k_right * inv_h2;
    }
    return sys;
}

/// Assembles -u'' - k^2 u = f; the Laplacian stencil uses constant
/// coefficients and k enters only through the diagonal shift. Indefinite for
/// large wavenumbers, so spd = false.
inline LinearSystem assemble_helmholtz(const FieldSample& k, const Grid1D& grid) {
    if (k.grid != grid)
        throw Error("assemble_helmholtz: wavenumber field grid mismatch");
    const Vec ki = k.interior();
    const int m = grid.n_interior;
    const double inv_h2 = 1.0 / (grid.h * grid.h);
    LinearSystem sys;
    sys.grid = grid;
    sys.kind = ProblemKind::Helmholtz;
    sys.spd = false;
    sys.diag.resize(m);
    sys.sub = Vec::Constant(m - 1, -inv_h2);
    sys.super = Vec::Constant(m - 1, -inv_h2);
    sys.rhs = Vec::Zero(m);
    for (int i = 0; i < m; ++i) sys.diag[i] = 2.0 * inv_h2 - ki[i] * ki[i];
    return sys;
}

namespace detail {

/// Thomas algorithm, valid without pivoting for SPD / diagonally dominant
/// systems.
inline Vec thomas_solve(const LinearSystem& sys, const Vec& f) {
    const int m = sys.n();
    Vec c(m), d(m);
    double denom = sys.diag[0];
    if (denom == 0.0) throw Error("direct_solve: singular system (zero pivot in row 0)");
    c[0] = (m > 1) ? sys.super[0] / denom : 0.0;
    d[0] = f[0] / denom;
    for (int i = 1; i < m; ++i) {
        denom = sys.diag[i] - sys.sub[i - 1] * c[i - 1];
        if (denom == 0.0)
            throw Error("direct_solve: singular system (zero pivot in row " + std::to_string(i) + ")");
        c[i] = (i < m - 1) ? sys.super[i] / denom : 0.0;
        d[i] = (f[i] - sys.sub[i - 1] * d[i - 1]) / denom;
    }
    Vec u(m);
    u[m - 1] = d[m - 1];
    for (int i = m - 2; i >= 0; --i) u[i] = d[i] - c[i] * u[i + 1];
    return u;
}

/// Tridiagonal LU with partial pivoting (row interchanges between adjacent
/// rows, one extra superdiagonal of fill-in). Needed for indefinite
/// Helmholtz systems where plain Thomas is untrustworthy.
inline Vec pivoted_tridiag_solve(const LinearSystem& sys, const Vec& f) {
    const int m = sys.n();
    Vec dl(m > 1 ? m - 1 : 0), d = sys.diag, du(m > 1 ? m - 1 : 0), du2(m > 2 ? m - 2 : 0);
    if (m > 1) {
        dl = sys.sub;
        du = sys.super;
    }
    du2.setZero();
    std::vector<int> pivot_next(std::max(m - 1, 0), 0); // 1 if rows i, i+1 swapped

    for (int i = 0; i < m - 1; ++i) {
        if (std::abs(d[i]) >= std::abs(dl[i])) {
            if (d[i] == 0.0)
                throw Error("direct_solve: singular system (zero pivot in row " + std::to_string(i) + ")");
            const double fact = dl[i] / d[i];
            dl[i] = fact;
            d[i + 1] -= fact * du[i];
        } else {
            const double fact = d[i] / dl[i];
            d[i] = dl[i];
            dl[i] = fact;
            const double tmp = du[i];
            du[i] = d[i + 1];
            d[i + 1] = tmp - fact * d[i + 1];
            if (i < m - 2) {
                du2[i] = du[i + 1];
                du[i + 1] = -fact * du[i + 1];
            }
            pivot_next[i] = 1;
        }
    }
    if (d[m - 1] == 0.0)
        throw Error("direct_solve: singular system (zero pivot in row " + std::to_string(m - 1) + ")");

    Vec b = f;
    for (int i = 0; i < m - 1; ++i) {
        if (pivot_next[i]) {
            const double tmp = b[i];
            b[i] = b[i + 1];
            b[i + 1] = tmp - dl[i] * b[i];
        } else {
            b[i + 1] -= dl[i] * b[i];
        }
    }
    b[m - 1] /= d[m - 1];
    if (m > 1) b[m - 2] = (b[m - 2] - du[m - 2] * b[m - 1]) / d[m - 2];
    for (int i = m - 3; i >= 0; --i)
        b[i] = (b[i] - du[i] * b[i + 1] - du2[i] * b[i + 2]) / d[i];
    return b;
}

} // namespace detail

/// Reference solve of A u = f. SPD systems go through plain Thomas; anything
/// else uses the pivoted factorization.
inline Vec direct_solve(const LinearSystem& sys, const Vec& f) {
    if (f.size() != sys.n()) throw Error("direct_solve: rhs length mismatch");
    if (sys.n() == 1) {
        if (sys.diag[0] == 0.0) throw Error("direct_solve: singular system (zero pivot in row 0)");
        return Vec::Constant(1, f[0] / sys.diag[0]);
    }
    return sys.spd ? detail::thomas_solve(sys, f) : detail::pivoted_tridiag_solve(sys, f);
}

inline Vec direct_solve(const LinearSystem& sys) { return direct_solve(sys, sys.rhs); }

} // namespace dlhim
