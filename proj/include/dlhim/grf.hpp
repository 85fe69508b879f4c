#pragma once

#include <Eigen/Cholesky>
#include <algorithm>
#include <cmath>
#include <string>

#include "dlhim/grid.hpp"
#include "dlhim/rng.hpp"

namespace dlhim {

/// Parameters of a squared-exponential Gaussian random field,
/// Cov(x1,x2) = sigma^2 exp(-|x1-x2|^2 / (2 l^2)), plus the shift/clip
/// applied to coefficient fields.
struct GrfConfig {
    double sigma = 1.0;      ///< standard deviation
    double length = 0.1;     ///< correlation length l in (0,1]
    double mean_shift = 0.0; ///< mu added to coefficient fields
    double clip_min = 0.0;   ///< floor for coefficient fields
    double jitter = 1e-10;   ///< diagonal regularizer for the Cholesky factorization

    void validate() const {
        if (sigma < 0.0) throw Error("GrfConfig: sigma must be >= 0");
        if (length <= 0.0) throw Error("GrfConfig: length must be > 0");
        if (jitter < 0.0) throw Error("GrfConfig: jitter must be >= 0");
    }
};

/// A scalar field sampled on a grid. Coefficient fields keep their boundary
/// values (length n_interior + 2) so stencil averaging can reach them;
/// source/solution fields are interior-only.
struct FieldSample {
    Grid1D grid;
    bool includes_boundary = false;
    Vec values;

    int expected_length() const { return grid.n_interior + (includes_boundary ? 2 : 0); }

    const Vec interior() const {
        return includes_boundary ? Vec(values.segment(1, grid.n_interior)) : values;
    }
};

/// Samples zero-mean GRFs with a fixed (config, grid) pair; the dense
/// covariance Cholesky factor is computed once and reused across seeds.
class GrfSampler {
public:
    GrfSampler(const GrfConfig& cfg, const Grid1D& grid, bool include_boundary)
        : cfg_(cfg), grid_(grid), include_boundary_(include_boundary) {
        cfg_.validate();
        const int n = grid.n_interior + (include_boundary ? 2 : 0);
        Vec coords(n);
        if (include_boundary) {
            coords[0] = 0.0;
            for (int i = 0; i < grid.n_interior; ++i) coords[i + 1] = grid.node(i);
            coords[n - 1] = 1.0;
        } else {
            coords = grid.nodes();
        }
        Mat cov(n, n);
        const double inv2l2 = 1.0 / (2.0 * cfg.length * cfg.length);
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) {
                const double d = coords[i] - coords[j];
                cov(i, j) = cfg.sigma * cfg.sigma * std::exp(-d * d * inv2l2);
            }
        factorize(cov);
    }

    /// Draws the sample for `seed`; identical (config, grid, seed) triples
    /// produce bit-identical output.
    FieldSample sample(std::uint64_t seed) const {
        const int n = static_cast<int>(chol_.rows());
        Rng rng(seed);
        Vec z(n);
        for (int i = 0; i < n; ++i) z[i] = rng.normal();
        FieldSample out;
        out.grid = grid_;
        out.includes_boundary = include_boundary_;
        out.values = chol_.triangularView<Eigen::Lower>() * z;
        return out;
    }

private:
    void factorize(const Mat& cov) {
        const int n = static_cast<int>(cov.rows());
        double jit = cfg_.jitter;
        for (int attempt = 0; attempt < 4; ++attempt) {
            Mat c = cov;
            c.diagonal().array() += jit;
            Eigen::LLT<Mat> llt(c);
            if (llt.info() == Eigen::Success) {
                chol_ = llt.matrixL();
                return;
            }
            jit *= 100.0;
        }
        throw Error("GRF covariance factorization failed for grid size " + std::to_string(n) +
                    " at correlation length " + std::to_string(cfg_.length) +
                    " after jitter escalation");
    }

    GrfConfig cfg_;
    Grid1D grid_;
    bool include_boundary_;
    Mat chol_;
};

inline FieldSample sample_grf(const GrfConfig& cfg, const Grid1D& grid, std::uint64_t seed,
                              bool include_boundary = false) {
    return GrfSampler(cfg, grid, include_boundary).sample(seed);
}

/// Shift-and-clip of a zero-mean GRF sample into an admissible coefficient
/// field: out_i = max(raw_i + mu, k_min). Total function.
inline FieldSample make_coefficient(const FieldSample& raw, double mean_shift, double clip_min) {
    FieldSample out = raw;
    for (Eigen::Index i = 0; i < out.values.size(); ++i)
        out.values[i] = std::max(raw.values[i] + mean_shift, clip_min);
    return out;
}

/// Paper defaults for the two benchmark problems: (mu_k, k_min, sigma_k, l_k)
/// = (1.0, 0.3, 0.3, 0.1) for diffusion, (8.0, 3.0, 2.0, 0.2) for Helmholtz,
/// and (sigma_f, l_f) = (1.0, 0.1) for the source term in both.
inline GrfConfig diffusion_coefficient_defaults() {
    GrfConfig c;
    c.sigma = 0.3;
    c.length = 0.1;
    c.mean_shift = 1.0;
    c.clip_min = 0.3;
    return c;
}

inline GrfConfig helmholtz_coefficient_defaults() {
    GrfConfig c;
    c.sigma = 2.0;
    c.length = 0.2;
    c.mean_shift = 8.0;
    c.clip_min = 3.0;
    return c;
}

inline GrfConfig source_defaults() {
    GrfConfig c;
    c.sigma = 1.0;
    c.length = 0.1;
    return c;
}

} // namespace dlhim
