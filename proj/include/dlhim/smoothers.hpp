#pragma once

#include <cmath>
#include <string>

#include "dlhim/linear_system.hpp"
#include "dlhim/rng.hpp"

namespace dlhim {

enum class SmootherKind { Jacobi, GaussSeidel };

inline const char* to_string(SmootherKind k) {
    return k == SmootherKind::Jacobi ? "jacobi" : "gauss_seidel";
}

/// Stationary smoother u <- u + omega S (f - A u), applied `sweeps` times per
/// call. Jacobi uses S = D^-1, Gauss-Seidel S = (D+L)^-1 by forward
/// substitution.
struct SmootherConfig {
    SmootherKind kind = SmootherKind::Jacobi;
    double omega = 2.0 / 3.0;
    int sweeps = 19;

    void validate() const {
        // omega = 0 (the identity map) is admitted as a degenerate edge case.
        if (!(omega >= 0.0 && omega < 2.0))
            throw Error("SmootherConfig: omega must lie in [0, 2), got " + std::to_string(omega));
        if (sweeps < 0) throw Error("SmootherConfig: sweeps must be >= 0");
    }
};

namespace detail {

inline void check_diagonal(const LinearSystem& sys) {
    for (int i = 0; i < sys.n(); ++i)
        if (sys.diag[i] == 0.0)
            throw Error("smoother: zero diagonal entry in row " + std::to_string(i));
}

inline Vec smoother_apply_s(const LinearSystem& sys, SmootherKind kind, const Vec& r) {
    const int m = sys.n();
    Vec y(m);
    if (kind == SmootherKind::Jacobi) {
        for (int i = 0; i < m; ++i) y[i] = r[i] / sys.diag[i];
    } else {
        // (D + L) y = r, forward substitution over the subdiagonal.
        for (int i = 0; i < m; ++i) {
            double v = r[i];
            if (i > 0) v -= sys.sub[i - 1] * y[i - 1];
            y[i] = v / sys.diag[i];
        }
    }
    return y;
}

/// Transpose of the smoother preconditioner, for adjoint sweeps.
inline Vec smoother_apply_s_transpose(const LinearSystem& sys, SmootherKind kind, const Vec& r) {
    const int m = sys.n();
    Vec y(m);
    if (kind == SmootherKind::Jacobi) {
        for (int i = 0; i < m; ++i) y[i] = r[i] / sys.diag[i];
    } else {
        // (D + L)^T y = r, backward substitution.
        for (int i = m - 1; i >= 0; --i) {
            double v = r[i];
            if (i < m - 1) v -= sys.sub[i] * y[i + 1];
            y[i] = v / sys.diag[i];
        }
    }
    return y;
}

inline Vec sweep_once(const LinearSystem& sys, const Vec& u, const Vec& f, const SmootherConfig& cfg) {
    const Vec r = f - sys.matvec(u);
    return u + cfg.omega * smoother_apply_s(sys, cfg.kind, r);
}

} // namespace detail

/// Applies cfg.sweeps smoother steps against sys.rhs.
inline Vec smoother_sweep(const LinearSystem& sys, const Vec& u, const SmootherConfig& cfg) {
    cfg.validate();
    if (u.size() != sys.n()) throw Error("smoother_sweep: iterate length mismatch");
    detail::check_diagonal(sys);
    Vec v = u;
    for (int s = 0; s < cfg.sweeps; ++s) v = detail::sweep_once(sys, v, sys.rhs, cfg);
    return v;
}

/// Dense error propagation operator E_S^n = (I - omega S A)^n, built by
/// pushing unit errors through the homogeneous (f = 0) sweep. Diagnostic
/// only; refuses above the size cap.
inline Mat error_propagation_matrix(const LinearSystem& sys, const SmootherConfig& cfg) {
    cfg.validate();
    const int m = sys.n();
    if (m > 2048)
        throw Error("error_propagation_matrix: n_interior " + std::to_string(m) +
                    " exceeds the dense diagnostic cap of 2048");
    detail::check_diagonal(sys);
    const Vec zero_f = Vec::Zero(m);
    Mat e(m, m);
    for (int j = 0; j < m; ++j) {
        Vec col = Vec::Unit(m, j);
        for (int s = 0; s < cfg.sweeps; ++s) col = detail::sweep_once(sys, col, zero_f, cfg);
        e.col(j) = col;
    }
    return e;
}

/// Dense residual propagation operator R_S^n = (I - omega A S)^n.
inline Mat residual_propagation_matrix(const LinearSystem& sys, const SmootherConfig& cfg) {
    cfg.validate();
    const int m = sys.n();
    if (m > 2048)
        throw Error("residual_propagation_matrix: n_interior " + std::to_string(m) +
                    " exceeds the dense diagnostic cap of 2048");
    detail::check_diagonal(sys);
    Mat r(m, m);
    for (int j = 0; j < m; ++j) {
        Vec col = Vec::Unit(m, j);
        for (int s = 0; s < cfg.sweeps; ++s)
            col -= cfg.omega * sys.matvec(detail::smoother_apply_s(sys, cfg.kind, col));
        r.col(j) = col;
    }
    return r;
}

struct SpectralRadiusEstimate {
    double value = 0.0;
    bool converged = false;
};

/// Power-iteration estimate of the spectral radius: 5 random restarts, up to
/// 500 iterations each, tolerance 1e-8 on the extrapolated estimate. The raw
/// norm-ratio sequence converges like (lambda2/lambda1)^2k, which is too slow
/// for tightly clustered smoother spectra, so an Aitken delta-squared
/// extrapolation of the scalar estimate sequence is applied.
inline SpectralRadiusEstimate spectral_radius(const Mat& m_in, int restarts = 5, int iters = 500,
                                              double tol = 1e-8, std::uint64_t seed = 0x5eed) {
    if (m_in.rows() != m_in.cols()) throw Error("spectral_radius: matrix must be square");
    const int n = static_cast<int>(m_in.rows());
    SpectralRadiusEstimate best;
    for (int r = 0; r < restarts; ++r) {
        Rng rng(mix_seed(seed, static_cast<std::uint64_t>(r)));
        Vec v(n);
        for (int i = 0; i < n; ++i) v[i] = rng.normal();
        double nv = v.norm();
        if (nv == 0.0) continue;
        v /= nv;
        double e0 = 0.0, e1 = 0.0, e2 = 0.0, extrap_prev = 0.0;
        bool converged = false;
        double estimate = 0.0;
        for (int t = 0; t < iters; ++t) {
            Vec w = m_in * v;
            const double nw = w.norm();
            estimate = nw;
            if (nw <= 1e-300) {
                // Numerically the zero map along this orbit.
                estimate = 0.0;
                converged = true;
                break;
            }
            v = w / nw;
            e0 = e1;
            e1 = e2;
            e2 = estimate;
            if (t >= 2) {
                const double denom = (e2 - e1) - (e1 - e0);
                double extrap = e2;
                if (std::abs(denom) > 1e-14 * std::max(1.0, std::abs(e2)))
                    extrap = e2 - (e2 - e1) * (e2 - e1) / denom;
                if (t >= 3 && std::abs(extrap - extrap_prev) <= tol * std::max(1.0, std::abs(extrap))) {
                    estimate = extrap;
                    converged = true;
                    break;
                }
                extrap_prev = extrap;
            }
        }
        if (!converged && extrap_prev != 0.0) estimate = extrap_prev;
        if (estimate > best.value) {
            best.value = estimate;
            best.converged = converged;
        } else if (converged && std::abs(estimate - best.value) <= tol * std::max(1.0, best.value)) {
            best.converged = true;
        }
    }
    return best;
}

} // namespace dlhim
