#include <gtest/gtest.h>

#include <cmath>

#include "dlhim/smoothers.hpp"
#include "oracles.hpp"

using namespace dlhim;

namespace {

LinearSystem laplacian_system(int n) {
    const Grid1D g = Grid1D::with_interior(n);
    FieldSample k;
    k.grid = g;
    k.includes_boundary = true;
    k.values = Vec::Ones(n + 2);
    return assemble_diffusion(k, g);
}

LinearSystem random_diffusion(int n, std::uint64_t seed) {
    const Grid1D g = Grid1D::with_interior(n);
    const GrfConfig cfg = diffusion_coefficient_defaults();
    const FieldSample k = make_coefficient(sample_grf(cfg, g, seed, true), cfg.mean_shift, cfg.clip_min);
    LinearSystem sys = assemble_diffusion(k, g);
    sys.rhs = sample_grf(source_defaults(), g, mix_seed(seed, 1)).values;
    return sys;
}

} // namespace

TEST(SmootherSweep, ExactSolutionIsFixedPoint) {
    for (const SmootherKind kind : {SmootherKind::Jacobi, SmootherKind::GaussSeidel}) {
        LinearSystem sys = random_diffusion(31, 3);
        const Vec u_star = direct_solve(sys);
        SmootherConfig cfg;
        cfg.kind = kind;
        cfg.omega = kind == SmootherKind::Jacobi ? 2.0 / 3.0 : 1.0;
        cfg.sweeps = 7;
        const Vec out = smoother_sweep(sys, u_star, cfg);
        EXPECT_LT((out - u_star).cwiseAbs().maxCoeff(), 1e-11 * u_star.cwiseAbs().maxCoeff());
    }
}

TEST(SmootherSweep, ZeroOmegaIsIdentity) {
    LinearSystem sys = random_diffusion(15, 5);
    SmootherConfig cfg;
    cfg.omega = 0.0;
    cfg.sweeps = 3;
    Rng rng(9);
    Vec u(sys.n());
    for (int i = 0; i < u.size(); ++i) u[i] = rng.normal();
    const Vec out = smoother_sweep(sys, u, cfg);
    for (int i = 0; i < u.size(); ++i) EXPECT_EQ(out[i], u[i]);
}

TEST(SmootherSweep, ZeroSweepsIsIdentity) {
    LinearSystem sys = random_diffusion(15, 6);
    SmootherConfig cfg;
    cfg.sweeps = 0;
    Vec u = Vec::LinSpaced(sys.n(), -1.0, 2.0);
    EXPECT_EQ((smoother_sweep(sys, u, cfg) - u).cwiseAbs().maxCoeff(), 0.0);
}

TEST(SmootherSweep, JacobiErrorPropagationMatchesDenseOracle) {
    LinearSystem sys = laplacian_system(31);
    sys.rhs = sample_grf(source_defaults(), sys.grid, 12).values;
    SmootherConfig cfg;
    cfg.kind = SmootherKind::Jacobi;
    cfg.omega = 2.0 / 3.0;
    cfg.sweeps = 1;
    const Vec u_star = direct_solve(sys);
    const Mat a = oracles::dense_from_tridiag(sys);
    Mat e_dense = Mat::Identity(sys.n(), sys.n());
    for (int i = 0; i < sys.n(); ++i) e_dense.row(i) -= cfg.omega / sys.diag[i] * a.row(i);

    Rng rng(77);
    Vec u(sys.n());
    for (int i = 0; i < u.size(); ++i) u[i] = rng.normal();
    const Vec old_err = u_star - u;
    const Vec new_err = u_star - smoother_sweep(sys, u, cfg);
    const Vec expected = e_dense * old_err;
    EXPECT_LT((new_err - expected).cwiseAbs().maxCoeff(), 1e-10 * old_err.cwiseAbs().maxCoeff());
}

TEST(SmootherSweep, AffineInIterateForBothKinds) {
    // e' = E_S^n e exactly: apply the sweep to two iterates and check the
    // error map is the same linear operator.
    for (const SmootherKind kind : {SmootherKind::Jacobi, SmootherKind::GaussSeidel}) {
        LinearSystem sys = random_diffusion(21, 8);
        SmootherConfig cfg;
        cfg.kind = kind;
        cfg.omega = kind == SmootherKind::Jacobi ? 2.0 / 3.0 : 1.0;
        cfg.sweeps = 4;
        const Mat e_op = error_propagation_matrix(sys, cfg);
        const Vec u_star = direct_solve(sys);
        Rng rng(13);
        for (int t = 0; t < 5; ++t) {
            Vec u(sys.n());
            for (int i = 0; i < u.size(); ++i) u[i] = rng.normal();
            const Vec mapped = u_star - smoother_sweep(sys, u, cfg);
            const Vec predicted = e_op * (u_star - u);
            EXPECT_LT((mapped - predicted).cwiseAbs().maxCoeff(), 1e-9);
        }
    }
}

TEST(ErrorPropagation, ZeroSweepsIsIdentity) {
    LinearSystem sys = random_diffusion(9, 2);
    SmootherConfig cfg;
    cfg.sweeps = 0;
    const Mat e = error_propagation_matrix(sys, cfg);
    EXPECT_EQ((e - Mat::Identity(9, 9)).cwiseAbs().maxCoeff(), 0.0);
}

TEST(ErrorPropagation, JacobiSpectrumIsAnalytic) {
    const int n = 31;
    LinearSystem sys = laplacian_system(n);
    SmootherConfig cfg;
    cfg.kind = SmootherKind::Jacobi;
    cfg.omega = 2.0 / 3.0;
    cfg.sweeps = 1;
    const Mat e = error_propagation_matrix(sys, cfg);
    for (int j = 1; j <= n; ++j) {
        const Vec mode = oracles::sine_mode(j, n);
        const double analytic = 1.0 - cfg.omega * (1.0 - std::cos(j * M_PI * sys.grid.h));
        const Vec mapped = e * mode;
        EXPECT_LT((mapped - analytic * mode).cwiseAbs().maxCoeff(), 1e-10) << "mode " << j;
    }
}

TEST(ErrorPropagation, SimilarityWithResidualPropagation) {
    // R_S^n = A E_S^n A^-1 to 1e-10, computed with dense matrix arithmetic.
    LinearSystem sys = random_diffusion(31, 17);
    SmootherConfig cfg;
    cfg.sweeps = 3;
    const Mat e = error_propagation_matrix(sys, cfg);
    const Mat r = residual_propagation_matrix(sys, cfg);
    const Mat a = oracles::dense_from_tridiag(sys);
    const Mat similar = a * e * oracles::dense_inverse(a);
    EXPECT_LT((r - similar).cwiseAbs().maxCoeff(), 1e-10);
}

TEST(ErrorPropagation, SizeCapRefuses) {
    LinearSystem sys;
    const int n = 2049;
    sys.grid = Grid1D::with_interior(n);
    sys.diag = Vec::Ones(n);
    sys.sub = Vec::Zero(n - 1);
    sys.super = Vec::Zero(n - 1);
    sys.rhs = Vec::Zero(n);
    EXPECT_THROW(error_propagation_matrix(sys, SmootherConfig{}), Error);
}

TEST(Smoother, ZeroDiagonalNamesRow) {
    LinearSystem sys;
    sys.grid = Grid1D::with_interior(3);
    sys.diag = Vec::Ones(3);
    sys.diag[1] = 0.0;
    sys.sub = Vec::Zero(2);
    sys.super = Vec::Zero(2);
    sys.rhs = Vec::Zero(3);
    try {
        smoother_sweep(sys, Vec::Zero(3), SmootherConfig{});
        FAIL() << "expected zero-diagonal error";
    } catch (const Error& e) {
        EXPECT_NE(std::string(e.what()).find("row 1"), std::string::npos);
    }
}

TEST(Smoother, HighFrequencyDampingFactor) {
    // Classical smoothing property: omega = 2/3 Jacobi damps every mode in
    // the upper half of the discrete sine spectrum by at least a factor 3.
    const int n = 31;
    LinearSystem sys = laplacian_system(n);
    SmootherConfig cfg;
    cfg.kind = SmootherKind::Jacobi;
    cfg.omega = 2.0 / 3.0;
    cfg.sweeps = 1;
    const Mat e = error_propagation_matrix(sys, cfg);
    for (int j = (n + 1) / 2; j <= n; ++j) {
        const Vec mode = oracles::sine_mode(j, n);
        const double factor = (e * mode).norm() / mode.norm();
        EXPECT_LE(factor, 1.0 / 3.0 + 1e-6) << "mode " << j;
    }
}

TEST(SpectralRadius, Trivials) {
    EXPECT_NEAR(spectral_radius(Mat::Identity(5, 5)).value, 1.0, 1e-8);
    Mat d = Mat::Zero(2, 2);
    d(0, 0) = 0.5;
    d(1, 1) = -0.9;
    const SpectralRadiusEstimate est = spectral_radius(d);
    EXPECT_NEAR(est.value, 0.9, 1e-7);
}

TEST(SpectralRadius, AnalyticJacobiValue) {
    const int n = 31;
    LinearSystem sys = laplacian_system(n);
    SmootherConfig cfg;
    cfg.kind = SmootherKind::Jacobi;
    cfg.omega = 2.0 / 3.0;
    cfg.sweeps = 1;
    const Mat e = error_propagation_matrix(sys, cfg);
    const double analytic = 1.0 - cfg.omega * (1.0 - std::cos(M_PI * sys.grid.h));
    const SpectralRadiusEstimate est = spectral_radius(e);
    EXPECT_NEAR(est.value, analytic, 1e-6);
}

TEST(SpectralRadius, SimilarityInvariance) {
    LinearSystem sys = random_diffusion(31, 23);
    SmootherConfig cfg;
    cfg.sweeps = 2;
    const double rho_e = spectral_radius(error_propagation_matrix(sys, cfg)).value;
    const double rho_r = spectral_radius(residual_propagation_matrix(sys, cfg)).value;
    EXPECT_NEAR(rho_e, rho_r, 1e-6 * std::max(1.0, rho_e));
}
