#include <doctest.h>

#include <Eigen/Core>
#include <cmath>

#include "lipdp/dense.hpp"
#include "lipdp/implicit_function.hpp"
#include "lipdp/rng.hpp"

using lipdp::ImplicitProblem;

namespace {

ImplicitProblem affine_problem(double r1, double r2) {
    ImplicitProblem p;
    p.v0 = Eigen::VectorXd::Zero(1);
    p.y0 = Eigen::VectorXd::Zero(1);
    p.r1 = r1;
    p.r2 = r2;
    p.residual = [](const Eigen::VectorXd& v, const Eigen::VectorXd& y) {
        return Eigen::VectorXd::Constant(1, v[0] - y[0]).eval();
    };
    p.jac_v = [](const Eigen::VectorXd&, const Eigen::VectorXd&) {
        return Eigen::MatrixXd::Constant(1, 1, 1.0).eval();
    };
    p.jac_y = [](const Eigen::VectorXd&, const Eigen::VectorXd&) {
        return Eigen::MatrixXd::Constant(1, 1, -1.0).eval();
    };
    return p;
}

ImplicitProblem square_problem(double r1, double r2) {
    ImplicitProblem p;
    p.v0 = Eigen::VectorXd::Ones(1);
    p.y0 = Eigen::VectorXd::Ones(1);
    p.r1 = r1;
    p.r2 = r2;
    p.residual = [](const Eigen::VectorXd& v, const Eigen::VectorXd& y) {
        return Eigen::VectorXd::Constant(1, v[0] * v[0] - y[0]).eval();
    };
    p.jac_v = [](const Eigen::VectorXd& v, const Eigen::VectorXd&) {
        return Eigen::MatrixXd::Constant(1, 1, 2.0 * v[0]).eval();
    };
    p.jac_y = [](const Eigen::VectorXd&, const Eigen::VectorXd&) {
        return Eigen::MatrixXd::Constant(1, 1, -1.0).eval();
    };
    return p;
}

double bisect_sqrt(double target) {
    double lo = 0.0, hi = target + 1.0;
    for (int i = 0; i < 200; ++i) {
        const double mid = 0.5 * (lo + hi);
        (mid * mid <= target ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
}

}  // namespace

TEST_SUITE("ift") {

TEST_CASE("affine radii: margins are exactly (0.1, 0.5)") {
    const auto report = lipdp::verify_radii(affine_problem(1.0, 0.4), 512);
    CHECK(report.ok);
    CHECK(report.residual_sup == doctest::Approx(0.4).epsilon(1e-14));
    CHECK(report.residual_bound == doctest::Approx(0.5).epsilon(1e-14));
    CHECK(report.residual_margin() == doctest::Approx(0.1).epsilon(1e-12));
    CHECK(report.contraction_sup == 0.0);
    CHECK(report.contraction_margin() == doctest::Approx(0.5).epsilon(1e-14));
}

TEST_CASE("affine radii fail when the state ball is too large") {
    const auto report = lipdp::verify_radii(affine_problem(1.0, 0.6), 512);
    CHECK_FALSE(report.ok);
    CHECK(report.residual_margin() < 0.0);
}

TEST_CASE("square-root problem radii, suprema against a dense sweep") {
    const ImplicitProblem p = square_problem(0.1, 0.05);
    const auto report = lipdp::verify_radii(p, 2048);
    CHECK(report.ok);

    double dense_residual = 0.0, dense_contraction = 0.0;
    const Eigen::MatrixXd t0 = lipdp::anchor_inverse(p);
    for (int i = 0; i <= 10000; ++i) {
        const double ty = -1.0 + 2.0 * i / 10000.0;
        Eigen::VectorXd y = p.y0;
        y[0] += p.r2 * ty;
        dense_residual = std::max(dense_residual, p.residual(p.v0, y).norm());
        Eigen::VectorXd v = p.v0;
        v[0] += p.r1 * ty;
        dense_contraction =
            std::max(dense_contraction,
                     lipdp::operator_norm(Eigen::MatrixXd::Identity(1, 1) -
                                          t0 * p.jac_v(v, y)));
    }
    CHECK(report.residual_sup >= dense_residual - 1e-12);
    CHECK(report.contraction_sup >= dense_contraction - 1e-12);
    CHECK(report.residual_sup == doctest::Approx(0.05).epsilon(1e-12));
    CHECK(report.contraction_sup == doctest::Approx(0.1).epsilon(1e-12));
}

TEST_CASE("identity map solves exactly") {
    const ImplicitProblem p = affine_problem(1.0, 0.4);
    Eigen::VectorXd y = Eigen::VectorXd::Constant(1, 0.3);
    const Eigen::VectorXd v = lipdp::solve_implicit(p, y);
    CHECK(v[0] == doctest::Approx(0.3).epsilon(1e-14));
    // Anchor query returns the anchor immediately.
    std::vector<double> trace;
    const Eigen::VectorXd v0 = lipdp::solve_implicit(p, p.y0, 1e-12, 200, &trace);
    CHECK(v0[0] == 0.0);
    CHECK(trace.size() == 1);
}

TEST_CASE("square root against an independent bisection") {
    const ImplicitProblem p = square_problem(0.1, 0.05);
    Eigen::VectorXd y = Eigen::VectorXd::Constant(1, 1.02);
    const Eigen::VectorXd v = lipdp::solve_implicit(p, y, 1e-13);
    CHECK(std::abs(v[0] - bisect_sqrt(1.02)) <= 1e-10);
    CHECK(std::abs(p.residual(v, y)[0]) <= 1e-13);
}

TEST_CASE("residuals contract by at least one half per step") {
    const ImplicitProblem p = square_problem(0.1, 0.05);
    for (double target : {0.96, 1.0, 1.047}) {
        std::vector<double> trace;
        lipdp::solve_implicit(p, Eigen::VectorXd::Constant(1, target), 1e-13, 200, &trace);
        for (std::size_t i = 2; i < trace.size(); ++i) {
            if (trace[i - 1] == 0.0) break;
            CHECK(trace[i] <= (0.5 + 1e-6) * trace[i - 1]);
        }
    }
}

TEST_CASE("all starts in the ball reach the same root") {
    const ImplicitProblem p = square_problem(0.1, 0.05);
    Eigen::VectorXd y = Eigen::VectorXd::Constant(1, 1.03);
    const double tol = 1e-12;
    const Eigen::VectorXd ref = lipdp::solve_implicit(p, y, tol);
    lipdp::SplitMix64 rng(41);
    for (int t = 0; t < 10; ++t) {
        Eigen::VectorXd start = p.v0;
        start[0] += rng.uniform(-p.r1, p.r1);
        const Eigen::VectorXd v =
            lipdp::solve_implicit(p, y, tol, 200, nullptr, &start);
        CHECK((v - ref).norm() <= 10.0 * tol);
    }
}

TEST_CASE("implicit jacobians") {
    CHECK(lipdp::implicit_jacobian(affine_problem(1.0, 0.4),
                                   Eigen::VectorXd::Constant(1, 0.2),
                                   Eigen::VectorXd::Constant(1, 0.2))(0, 0) ==
          doctest::Approx(1.0).epsilon(1e-14));

    const ImplicitProblem sq = square_problem(0.1, 0.05);
    CHECK(lipdp::implicit_jacobian(sq, sq.y0, sq.v0)(0, 0) ==
          doctest::Approx(0.5).epsilon(1e-14));

    // Linear system F = v - A y: the implicit map's jacobian is A itself.
    Eigen::MatrixXd a(2, 2);
    a << 1.0, 2.0, -0.5, 0.75;
    ImplicitProblem lin;
    lin.v0 = Eigen::VectorXd::Zero(2);
    lin.y0 = Eigen::VectorXd::Zero(2);
    lin.r1 = 1.0;
    lin.r2 = 0.25;
    lin.residual = [a](const Eigen::VectorXd& v, const Eigen::VectorXd& y) {
        return (v - a * y).eval();
    };
    lin.jac_v = [](const Eigen::VectorXd&, const Eigen::VectorXd&) {
        return Eigen::MatrixXd::Identity(2, 2).eval();
    };
    lin.jac_y = [a](const Eigen::VectorXd&, const Eigen::VectorXd&) {
        return (-a).eval();
    };
    CHECK(lipdp::implicit_jacobian(lin, lin.y0, lin.v0).isApprox(a, 1e-14));
}

TEST_CASE("implicit jacobian matches finite differences of the solve") {
    const ImplicitProblem p = square_problem(0.1, 0.05);
    const Eigen::VectorXd y = Eigen::VectorXd::Constant(1, 1.01);
    const Eigen::VectorXd v = lipdp::solve_implicit(p, y, 1e-14);
    const double jac = lipdp::implicit_jacobian(p, y, v)(0, 0);
    const double step = 1e-5 * p.r2;
    const double plus =
        lipdp::solve_implicit(p, Eigen::VectorXd::Constant(1, y[0] + step), 1e-14)[0];
    const double minus =
        lipdp::solve_implicit(p, Eigen::VectorXd::Constant(1, y[0] - step), 1e-14)[0];
    const double fd = (plus - minus) / (2.0 * step);
    CHECK(std::abs(jac - fd) / std::abs(fd) <= 1e-4);
}

TEST_CASE("iteration failure modes") {
    // Cubic residual far from the anchor: the frozen-operator iteration
    // oscillates (no radius certificate was checked).
    ImplicitProblem p;
    p.v0 = Eigen::VectorXd::Ones(1);
    p.y0 = Eigen::VectorXd::Ones(1);
    p.r1 = 10.0;
    p.r2 = 5.0;
    p.residual = [](const Eigen::VectorXd& v, const Eigen::VectorXd& y) {
        return Eigen::VectorXd::Constant(1, v[0] * v[0] * v[0] - y[0]).eval();
    };
    p.jac_v = [](const Eigen::VectorXd& v, const Eigen::VectorXd&) {
        return Eigen::MatrixXd::Constant(1, 1, 3.0 * v[0] * v[0]).eval();
    };
    CHECK_THROWS_AS(lipdp::solve_implicit(p, Eigen::VectorXd::Constant(1, 3.0)),
                    lipdp::NoConvergence);
    ImplicitProblem tight = p;
    tight.r1 = 0.3;
    tight.r2 = 5.0;
    CHECK_THROWS_AS(lipdp::solve_implicit(tight, Eigen::VectorXd::Constant(1, 3.0)),
                    lipdp::LeftBall);
    // Queries outside the state ball are rejected.
    CHECK_THROWS_AS(lipdp::solve_implicit(p, Eigen::VectorXd::Constant(1, 20.0)),
                    lipdp::InvalidInput);
}

TEST_CASE("samples leaving a declared domain are reported") {
    ImplicitProblem p = affine_problem(1.0, 0.4);
    p.in_domain = [](const Eigen::VectorXd&, const Eigen::VectorXd& y) {
        return y[0] <= 0.2;  // cuts off part of the state ball
    };
    CHECK_THROWS_AS(lipdp::verify_radii(p, 256), lipdp::DomainViolation);
}

TEST_CASE("anchor validation") {
    ImplicitProblem p = affine_problem(1.0, 0.4);
    p.v0 = Eigen::VectorXd::Constant(1, 0.5);  // not a root of v - y at y0 = 0
    CHECK_THROWS_AS(lipdp::anchor_inverse(p), lipdp::InvalidInput);

    ImplicitProblem flat = affine_problem(1.0, 0.4);
    flat.residual = [](const Eigen::VectorXd&, const Eigen::VectorXd&) {
        return Eigen::VectorXd::Zero(1).eval();
    };
    flat.jac_v = [](const Eigen::VectorXd&, const Eigen::VectorXd&) {
        return Eigen::MatrixXd::Zero(1, 1).eval();
    };
    CHECK_THROWS_AS(lipdp::anchor_inverse(flat), lipdp::SingularJacobian);
}

TEST_CASE("coordinate embedding") {
    Eigen::VectorXd u(3);
    u << 1, 2, 3;
    Eigen::VectorXd v(1);
    v << 9;
    const Eigen::VectorXd out = lipdp::embed_subvector(u, v, {1});
    CHECK(out.isApprox(Eigen::Vector3d(1, 9, 3)));

    Eigen::VectorXd u2(2), v2(2);
    u2 << 1, 2;
    v2 << 5, 6;
    CHECK(lipdp::embed_subvector(u2, v2, {0, 1}).isApprox(Eigen::Vector2d(5, 6)));

    Eigen::VectorXd same(1);
    same << 2;
    CHECK(lipdp::embed_subvector(u, same, {1}).isApprox(u));

    CHECK_THROWS_AS(lipdp::embed_subvector(u, v, {3}), lipdp::InvalidInput);
    CHECK_THROWS_AS(lipdp::embed_subvector(u, v2, {1, 1}), lipdp::InvalidInput);
    CHECK_THROWS_AS(lipdp::embed_subvector(u, v2, {2, 1}), lipdp::InvalidInput);
}

TEST_CASE("entry bound holds for every produced matrix") {
    const ImplicitProblem p = square_problem(0.1, 0.05);
    const Eigen::MatrixXd t0 = lipdp::anchor_inverse(p);
    const Eigen::MatrixXd jq = lipdp::implicit_jacobian(p, p.y0, p.v0);
    for (const Eigen::MatrixXd& s : {t0, jq}) {
        const double entries = std::sqrt(double(s.rows()) * s.cols()) *
                               s.cwiseAbs().maxCoeff();
        CHECK(lipdp::operator_norm(s) <= entries + 1e-12);
    }
}

}  // TEST_SUITE
