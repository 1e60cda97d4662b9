#include "densgeo/spd.hpp"

#include "densgeo/errors.hpp"

#include <cmath>
#include <string>

namespace densgeo::spd {

namespace {

constexpr double eig_floor = 1e-12;

Eigen::SelfAdjointEigenSolver<matrix> eig_of(const matrix& M, const char* what) {
    Eigen::SelfAdjointEigenSolver<matrix> es(M);
    if (es.info() != Eigen::Success)
        throw singular_matrix_error(std::string(what) + ": eigendecomposition failed");
    return es;
}

} // namespace

matrix require_spd(const matrix& m, const char* what) {
    if ((m - m.transpose()).cwiseAbs().maxCoeff() > 1e-12)
        throw error(std::string(what) + ": matrix is not symmetric to 1e-12");
    auto es = eig_of(m, what);
    if (es.eigenvalues().minCoeff() <= eig_floor)
        throw singular_matrix_error(std::string(what) + ": eigenvalue below floor");
    return 0.5 * (m + m.transpose());
}

double spd_metric(const matrix& M, const matrix& U, const matrix& V) {
    Eigen::LLT<matrix> llt(M);
    if (llt.info() != Eigen::Success)
        throw singular_matrix_error("spd_metric: M is not positive definite");
    matrix Mi = llt.solve(matrix::Identity(M.rows(), M.cols()));
    return (Mi * U * Mi * V).trace();
}

matrix ell(const matrix& u) {
    matrix out = matrix::Zero(u.rows(), u.cols());
    for (Eigen::Index i = 0; i < u.rows(); ++i)
        for (Eigen::Index j = 0; j < i; ++j) out(i, j) = u(i, j);
    return out;
}

double gl_metric_identity(const matrix& u, const matrix& v) {
    matrix su = u + u.transpose();
    matrix sv = v + v.transpose();
    return (ell(u).transpose() * ell(v)).trace() + 0.25 * (su * sv).trace();
}

double gl_metric(const matrix& A, const matrix& U, const matrix& V) {
    if (A.determinant() <= 0.0)
        throw singular_matrix_error("gl_metric: det(A) <= 0");
    matrix Ai = A.inverse();
    return gl_metric_identity(U * Ai, V * Ai);
}

namespace {

matrix spectral_map(const matrix& M, double (*f)(double), const char* what, bool need_pos) {
    auto es = eig_of(M, what);
    Eigen::VectorXd lam = es.eigenvalues();
    if (need_pos && lam.minCoeff() <= eig_floor)
        throw singular_matrix_error(std::string(what) + ": eigenvalue below floor 1e-12");
    Eigen::VectorXd mapped(lam.size());
    for (Eigen::Index i = 0; i < lam.size(); ++i) mapped[i] = f(lam[i]);
    return es.eigenvectors() * mapped.asDiagonal() * es.eigenvectors().transpose();
}

} // namespace

matrix spd_sqrt(const matrix& M) { return spectral_map(M, [](double x) { return std::sqrt(x); }, "spd_sqrt", true); }
matrix spd_log(const matrix& M) { return spectral_map(M, [](double x) { return std::log(x); }, "spd_log", true); }
matrix sym_exp(const matrix& S) { return spectral_map(S, [](double x) { return std::exp(x); }, "sym_exp", false); }

matrix spd_geodesic(const matrix& M0, const matrix& M1, double t) {
    matrix r = spd_sqrt(M0);
    matrix ri = r.inverse();
    matrix middle = spd_log(ri * M1 * ri.transpose());
    return r * sym_exp(t * middle) * r.transpose();
}

matrix horizontal_lift_qr(const matrix& A, int n_steps) {
    if (A.determinant() <= 0.0)
        throw singular_matrix_error("horizontal_lift_qr: det(A) <= 0");
    const Eigen::Index n = A.rows();
    // geodesic from I: M(t) = exp(tL), M'(t) = L exp(tL), L = log(A^T A)
    matrix L = spd_log(require_spd(A.transpose() * A, "horizontal_lift_qr"));

    auto mdot = [&](double t) { return (L * sym_exp(t * L)).eval(); };

    // X upper triangular with X + X^T = S (S symmetric)
    auto solve_upper = [n](const matrix& S) {
        matrix X = matrix::Zero(n, n);
        for (Eigen::Index i = 0; i < n; ++i) {
            X(i, i) = 0.5 * S(i, i);
            for (Eigen::Index j = i + 1; j < n; ++j) X(i, j) = S(i, j);
        }
        return X;
    };

    auto rhs = [&](double t, const matrix& R) {
        matrix Ri = R.inverse();
        matrix S = Ri.transpose() * mdot(t) * Ri;
        return (solve_upper(S) * R).eval();
    };

    const double dt = 1.0 / n_steps;
    matrix R = matrix::Identity(n, n);
    for (int s = 0; s < n_steps; ++s) {
        double t = s * dt;
        matrix k1 = rhs(t, R);
        matrix k2 = rhs(t + 0.5 * dt, R + 0.5 * dt * k1);
        matrix k3 = rhs(t + 0.5 * dt, R + 0.5 * dt * k2);
        matrix k4 = rhs(t + dt, R + dt * k3);
        R += (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
        if (R.diagonal().minCoeff() <= 0.0)
            throw step_too_large_error("horizontal_lift_qr: diagonal left the positive cone");
    }
    // the integration preserves triangularity up to roundoff; clean it
    for (Eigen::Index i = 0; i < n; ++i)
        for (Eigen::Index j = 0; j < i; ++j) R(i, j) = 0.0;
    return R;
}

void qr_polar_factorize(const matrix& A, matrix& Q, matrix& R, qr_route route, int n_steps) {
    if (A.determinant() <= 0.0)
        throw singular_matrix_error("qr_polar_factorize: det(A) <= 0");
    if (route == qr_route::ode) {
        R = horizontal_lift_qr(A, n_steps);
    } else {
        matrix M = require_spd(A.transpose() * A, "qr_polar_factorize");
        Eigen::LLT<matrix> llt(M);
        if (llt.info() != Eigen::Success)
            throw singular_matrix_error("qr_polar_factorize: Cholesky failed");
        R = matrix(llt.matrixL()).transpose();
    }
    Q = A * R.inverse();
}

double gl_distance_to_identity(const matrix& A) {
    matrix L = spd_log(require_spd(A.transpose() * A, "gl_distance_to_identity"));
    return 0.5 * L.norm();
}

double segment_length(const matrix& A, const matrix& B, int panels) {
    double acc = 0.0;
    matrix D = B - A;
    for (int k = 0; k < panels; ++k) {
        double t = (k + 0.5) / panels;
        matrix P = A + t * D;
        acc += std::sqrt(gl_metric(P, D, D)) / panels;
    }
    return acc;
}

} // namespace densgeo::spd
