#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <numbers>

#include "imspe/cluster.hpp"
#include "imspe/errors.hpp"
#include "imspe/imspe.hpp"
#include "imspe/integrals.hpp"
#include "imspe/linalg.hpp"
#include "imspe/oracle.hpp"
#include "imspe/validate.hpp"
#include "support/reference_forms.hpp"

using namespace imspe;

TEST_CASE("design construction") {
    CHECK_THROWS_AS(make_design(0, {{0.0}}), ValidationError);
    CHECK_THROWS_AS(make_design(1, {}), ValidationError);
    CHECK_THROWS_AS(make_design(2, {{0.0}}), ValidationError);
    CHECK_THROWS_AS(line_design({0.1, 0.1}), NearSingularError);
    CHECK_NOTHROW(line_design({0.1, 0.1}, false));
    CHECK(line_design({0.1, -0.3}).n() == 2);
}

TEST_CASE("n = 1 matrices") {
    for (Family f : kFamilies) {
        const ImspeMatrices m = build_matrices(make_kernel(f, {1.7}), line_design({0.3}));
        Eigen::Matrix2d L;
        L << 0, 1, 1, 1;
        Eigen::Matrix2d Linv;
        Linv << -1, 1, 1, 0;
        CHECK((m.L - L).norm() == 0.0);
        CHECK((m.L.inverse() - Linv).norm() <= 1e-15);
        CHECK(std::abs(m.imspe - 2 * (1 - m.R(0, 1))) <= 1e-15);
    }
}

TEST_CASE("n = 1 closed forms") {
    CHECK(std::abs(imspe_closed_n1(Family::ExpP1, 1, 0) - 2 * std::exp(-1.0)) <= 1e-15);
    CHECK(std::abs(imspe_value(make_kernel(Family::ExpP1, {1}), line_design({0})) - 2 * std::exp(-1.0)) <= 1e-15);
    SplitMix64 g(11);
    for (int k = 0; k < 20; ++k) {
        const double th = g.log_uniform(0.01, 100), x = g.uniform(-1, 1);
        const double s = std::sqrt(th);
        const double ref =
            2 * (1 - std::sqrt(std::numbers::pi / (16 * th)) * (std::erf(s * (1 + x)) + std::erf(s * (1 - x))));
        CHECK(std::abs(imspe_closed_n1(Family::GaussP2, th, x) - ref) <= 1e-14);
        CHECK(std::abs(imspe_value(make_kernel(Family::GaussP2, {th}), line_design({x})) - ref) <= 1e-14);
    }
    const KernelSpec m = make_kernel(Family::Matern52, {4});
    CHECK(std::abs(imspe_closed_n1(Family::Matern52, 4, 0.25) - oracle_imspe(m, line_design({0.25}))) <= 1e-9);
}

TEST_CASE("exponential pair against the expanded six-term form") {
    SplitMix64 g(3);
    for (int k = 0; k < 200; ++k) {
        const double th = g.log_uniform(0.01, 100), a = g.uniform(-1, 1), b = g.uniform(-1, 1);
        if (std::abs(a - b) < 1e-3) continue;
        const double ref = imspe_test::imspe_exp_n2_expanded(th, a, b);
        CHECK(std::abs(imspe_closed_n2_exp(th, a, b) - ref) <= 1e-10);
        CHECK(std::abs(imspe_value(make_kernel(Family::ExpP1, {th}), line_design({a, b})) - ref) <= 1e-10);
    }
    CHECK(std::abs(imspe_closed_n2_exp(1, 0.5, -0.5) - build_matrices(make_kernel(Family::ExpP1, {1}), line_design({0.5, -0.5})).imspe) <= 1e-10);
    const double q = imspe_closed_n2_exp(0.01, 0.35, -0.35);
    CHECK(std::abs(q - imspe_test::imspe_exp_n2_expanded(0.01, 0.35, -0.35)) <= 1e-10);
    CHECK(std::abs(q - oracle_imspe(make_kernel(Family::ExpP1, {0.01}), line_design({0.35, -0.35}))) <= 1e-9);
    CHECK_THROWS_AS(imspe_closed_n2_exp(1, 0.2, 0.2), DomainError);
}

TEST_CASE("pair symmetries") {
    SplitMix64 g(5);
    for (int k = 0; k < 100; ++k) {
        const double th = g.log_uniform(0.01, 100), a = g.uniform(-1, 1), b = g.uniform(-1, 1);
        for (Family f : kFamilies) {
            const double v = imspe_n2(f, th, a, b);
            const double tol = 1e-12 * std::max(1.0, std::abs(v));
            CHECK(std::abs(imspe_n2(f, th, b, a) - v) <= tol);
            CHECK(std::abs(imspe_n2(f, th, -a, -b) - v) <= tol);
        }
    }
}

TEST_CASE("imspe_n2 against other routes") {
    SplitMix64 g(9);
    for (int k = 0; k < 50; ++k) {
        const double th = g.log_uniform(0.05, 20), a = g.uniform(-1, 1), b = g.uniform(-1, 1);
        if (std::abs(a - b) < 0.05) continue;
        for (Family f : kFamilies) {
            const double direct = imspe_value(make_kernel(f, {th}), line_design({a, b}), Precision::Extended);
            CHECK(std::abs(imspe_n2(f, th, a, b) - direct) <= 1e-12);
        }
        CHECK(std::abs(imspe_n2(Family::GaussP2, th, a, b) - imspe_test::imspe_gauss_n2_blocks(th, a, b)) <= 1e-12);
    }
    const KernelSpec m = make_kernel(Family::Matern32, {1});
    CHECK(std::abs(imspe_n2(Family::Matern32, 1, 0.5, -0.5) - oracle_imspe(m, line_design({0.5, -0.5}))) <= 1e-9);
    const KernelSpec gk = make_kernel(Family::GaussP2, {1});
    CHECK(std::abs(imspe_n2(Family::GaussP2, 1, -0.5, 0.5) - oracle_imspe(gk, line_design({-0.5, 0.5}))) <= 1e-9);
    CHECK_THROWS_AS(imspe_n2(Family::Matern52, 1, 0.3, 0.3), DomainError);
    CHECK_THROWS_AS(imspe_n2(Family::Matern52, 0, 0.3, 0.1), ValidationError);
}

TEST_CASE("three-by-three inverse matches the bordered solve") {
    for (Family f : kFamilies) {
        for (double th : {0.1, 1.0, 10.0}) {
            const ImspeMatrices m = build_matrices(make_kernel(f, {th}), line_design({0.45, -0.3}));
            const Eigen::Matrix3d L = m.L;
            const Eigen::Matrix3d closed = inverse_sym3(L);
            const Eigen::Matrix3d solved = L.fullPivLu().solve(Eigen::Matrix3d::Identity());
            CHECK((closed - solved).cwiseAbs().maxCoeff() <= 1e-12);
            const BorderedSolver<double> bs(m.L.bottomRightCorner(2, 2));
            CHECK((bs.solve(Eigen::MatrixXd::Identity(3, 3)) - closed).cwiseAbs().maxCoeff() <= 1e-12);
        }
    }
}

TEST_CASE("trace of a product") {
    SplitMix64 g(13);
    for (int n = 1; n <= 6; ++n) {
        Eigen::MatrixXd a(n, n), b(n, n);
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) {
                a(i, j) = g.uniform(-1, 1);
                b(i, j) = g.uniform(-1, 1);
            }
        CHECK(std::abs(trace_of_product(a, b) - (a * b).trace()) <= 1e-13);
    }
}

TEST_CASE("four-point two-factor scenario against the oracle") {
    const KernelSpec k = make_kernel(Family::GaussP2, {0.064, 0.00016});
    const Design d = make_design(2, {{0.767117, 0}, {-0.767117, 0}, {0.3, 0.2}, {-0.3, -0.2}});
    const double ext = imspe_value(k, d, Precision::Extended);
    CHECK(std::abs(ext - oracle_imspe(k, d)) <= 1e-8);
    CHECK(std::abs(imspe_value(k, d) - ext) <= 1e-8);
}

TEST_CASE("coincident points name the pair") {
    const KernelSpec k = make_kernel(Family::ExpP1, {1});
    try {
        build_matrices(k, line_design({0.1, 0.5, 0.1}, false));
        FAIL("expected NearSingularError");
    } catch (const NearSingularError& e) {
        CHECK(e.first == 0);
        CHECK(e.second == 2);
        CHECK(std::string(e.what()).find("0 and 2") != std::string::npos);
    }
}

TEST_CASE("conditioning honesty as two Gaussian points merge") {
    const KernelSpec k = make_kernel(Family::GaussP2, {1});
    for (double sep : {1e-2, 1e-3, 1e-4, 1e-5, 1e-6, 1e-7, 1e-8}) {
        const double x1 = 0.2 + sep / 2, x2 = 0.2 - sep / 2;
        const double ref = imspe_cluster_gauss(1, 0.2, sep / 2);
        try {
            const ImspeMatrices m = build_matrices(k, line_design({x1, x2}));
            CHECK(m.condition_estimate > 0);
            CHECK(std::abs(m.imspe - ref) <= std::max(1e-10, 1e-14 * m.condition_estimate));
        } catch (const NearSingularError& e) {
            CHECK(e.condition > 1e10);
        }
    }
}

TEST_CASE("excess split") {
    SplitMix64 g(17);
    for (Family f : kFamilies) {
        for (int k = 0; k < 10; ++k) {
            const double th = g.log_uniform(0.1, 30);
            const double a = g.uniform(-1, 1), b = g.uniform(-1, 1), c = g.uniform(-1, 1);
            const KernelSpec ks = make_kernel(f, {th});
            const Design d = line_design({a, b, c});
            const double direct = imspe_value(ks, d, Precision::Extended);
            CHECK(std::abs(excess_constant(ks, 3) + imspe_excess(ks, d) - direct) <= 1e-11);
        }
    }
}

TEST_CASE("domain transform") {
    const auto [t, x] = domain_transform(1.5, 0.2, {-1, 1}, {0, 1});
    CHECK(t == 3.0);
    CHECK(x == 0.6);
    const auto [ti, xi] = domain_transform(1.5, 0.2, {-1, 1}, {-1, 1});
    CHECK(ti == 1.5);
    CHECK(xi == 0.2);
    CHECK_THROWS_AS(domain_transform(1, 0, {0, 0}, {0, 1}), ValidationError);

    SplitMix64 g(19);
    for (int k = 0; k < 50; ++k) {
        const double th = g.log_uniform(0.01, 100), x0 = g.uniform(-1, 1);
        const auto [tu, xu] = domain_transform(th, x0, {-1, 1}, {0, 1});
        const double on_sym = imspe_value(make_kernel(Family::ExpP1, {th}), line_design({x0}));
        const double on_unit = imspe_unit_exp({tu}, line_design({xu}));
        CHECK(std::abs(on_sym - on_unit) <= 1e-12);
        const auto [tb, xb] = domain_transform(tu, xu, {0, 1}, {-1, 1});
        CHECK(std::abs(tb - th) <= 1e-15 * th);
        CHECK(std::abs(xb - x0) <= 1e-15);
    }
}

TEST_CASE("unit-cube exponential IMSPE against the oracle") {
    const Design d = make_design(2, {{0.2, 0.7}, {0.8, 0.4}});
    double ref;
    {
        Eigen::MatrixXd L = Eigen::MatrixXd::Zero(3, 3), R(3, 3);
        const std::vector<double> th{1.3, 0.4};
        R(0, 0) = 1;
        for (int i = 0; i < 2; ++i) {
            L(0, i + 1) = L(i + 1, 0) = 1;
            R(0, i + 1) = R(i + 1, 0) = oracle_unit_element(th, d.points[i]);
            for (int j = 0; j < 2; ++j) {
                L(i + 1, j + 1) = std::exp(-1.3 * std::abs(d.points[i][0] - d.points[j][0]) -
                                           0.4 * std::abs(d.points[i][1] - d.points[j][1]));
                R(i + 1, j + 1) = oracle_unit_element(th, d.points[i], d.points[j]);
            }
        }
        ref = 1 - L.fullPivLu().solve(R).trace();
    }
    CHECK(std::abs(imspe_unit_exp({1.3, 0.4}, d) - ref) <= 1e-10);
}

TEST_CASE("reflection, permutation and range") {
    SplitMix64 g(47);
    for (Family f : kFamilies) {
        for (int k = 0; k < 20; ++k) {
            const KernelSpec ks = make_kernel(f, {g.log_uniform(0.1, 30), g.log_uniform(0.1, 30)});
            std::vector<Point> pts;
            for (int i = 0; i < 4; ++i) pts.push_back({g.uniform(-1, 1), g.uniform(-1, 1)});
            const double v = imspe_value(ks, make_design(2, pts), Precision::Extended);
            CHECK(v > 0);
            CHECK(v < 2);
            std::vector<Point> neg = pts, perm{pts[2], pts[0], pts[3], pts[1]};
            for (auto& p : neg)
                for (auto& c : p) c = -c;
            CHECK(std::abs(imspe_value(ks, make_design(2, neg), Precision::Extended) - v) <= 1e-12);
            CHECK(std::abs(imspe_value(ks, make_design(2, perm), Precision::Extended) - v) <= 1e-12);
        }
    }
}

TEST_CASE("closed form, solve and oracle agree on small designs") {
    SplitMix64 g(53);
    for (Family f : kFamilies) {
        for (int k = 0; k < 4; ++k) {
            const double th = g.log_uniform(0.05, 20), a = g.uniform(-1, 1), b = g.uniform(-1, 1);
            const KernelSpec ks = make_kernel(f, {th});
            CHECK(std::abs(imspe_closed_n1(f, th, a) - oracle_imspe(ks, line_design({a}))) <= 1e-8);
            if (std::abs(a - b) < 0.05) continue;
            const double closed = imspe_n2(f, th, a, b);
            CHECK(std::abs(closed - build_matrices(ks, line_design({a, b})).imspe) <= 1e-8);
            CHECK(std::abs(closed - oracle_imspe(ks, line_design({a, b}))) <= 1e-8);
        }
    }
}
