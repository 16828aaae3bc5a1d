#include <doctest.h>

#include "miniq/legkin.hpp"

#include <cmath>
#include <numbers>
#include <random>

using namespace miniq;

namespace {

constexpr double kPi = std::numbers::pi;

double dist(const FootPoint &a, const FootPoint &b) {
    return std::hypot(a.x - b.x, a.y - b.y);
}

} // namespace

TEST_CASE("geometry validation") {
    CHECK_NOTHROW(validate(LegGeometry{}));
    CHECK_THROWS_AS(validate(LegGeometry{0.0, 0.029}), InvalidParamsError);
    CHECK_THROWS_AS(validate(LegGeometry{0.029, -0.01}), InvalidParamsError);
    CHECK_THROWS_AS(validate(LegGeometry{std::nan(""), 0.029}), InvalidParamsError);
    try {
        validate(LegGeometry{0.029, 0.0});
        FAIL("expected throw");
    } catch (const Error &e) {
        CHECK(std::string(e.name()) == "InvalidParams");
    }
}

TEST_CASE("forward kinematics reference poses") {
    const LegGeometry g; // 0.029 / 0.029
    const double tol = 1e-15;

    FootPoint p = forward_kinematics(g, JointAngles{0.0, 0.0});
    CHECK(p.x == doctest::Approx(g.reach()).epsilon(tol));
    CHECK(std::fabs(p.y) < 1e-16);

    p = forward_kinematics(g, JointAngles{0.0, kPi / 2});
    CHECK(p.x == doctest::Approx(g.l1).epsilon(1e-12));
    CHECK(p.y == doctest::Approx(g.l2).epsilon(1e-12));

    p = forward_kinematics(g, JointAngles{-kPi / 2, 0.0});
    CHECK(std::fabs(p.x) < 1e-16);
    CHECK(p.y == doctest::Approx(-g.reach()).epsilon(tol));

    // Unbounded convention: adding 2pi to q1 moves nothing (up to sin/cos
    // argument rounding far from the principal interval).
    FootPoint p0 = forward_kinematics(g, JointAngles{0.7, -1.3});
    FootPoint p1 = forward_kinematics(g, JointAngles{0.7 + 2.0 * kPi, -1.3});
    CHECK(dist(p0, p1) < 1e-14);
}

TEST_CASE("coupling map is unimodular and invertible") {
    const Mat2 prod = kCoupling.a * kCoupling.a_inv;
    CHECK(prod.a11 == 1.0);
    CHECK(prod.a12 == 0.0);
    CHECK(prod.a21 == 0.0);
    CHECK(prod.a22 == 1.0);
    CHECK(kCoupling.a.det() == 1.0);
    CHECK(kCoupling.a_inv.det() == 1.0);

    const JointAngles q{0.3, -1.1};
    const ActuatorAngles t = joint_to_actuator(q);
    CHECK(t.theta1 == q.q1); // hip is direct drive
    CHECK(t.theta2 == doctest::Approx(q.q1 + q.q2).epsilon(1e-16));

    const JointAngles back = actuator_to_joint(t);
    CHECK(back.q1 == q.q1);
    CHECK(back.q2 == doctest::Approx(q.q2).epsilon(1e-14));
}

TEST_CASE("actuator overload of forward kinematics matches composition") {
    const LegGeometry g;
    const ActuatorAngles act{2.9, -14.6};
    const FootPoint a = forward_kinematics(g, act);
    const FootPoint b = forward_kinematics(g, actuator_to_joint(act));
    CHECK(a.x == b.x);
    CHECK(a.y == b.y);
}

TEST_CASE("inverse kinematics round trip on both branches") {
    const LegGeometry g{0.029, 0.023}; // unequal links: annulus has a hole
    std::mt19937 rng(7);
    std::uniform_real_distribution<double> radius(g.inner_reach() + 1e-6, g.reach() - 1e-6);
    std::uniform_real_distribution<double> angle(-kPi, kPi);

    for (int i = 0; i < 2000; ++i) {
        const double r = radius(rng);
        const double a = angle(rng);
        const FootPoint target{r * std::cos(a), r * std::sin(a)};
        for (Branch br : {Branch::ElbowPlus, Branch::ElbowMinus}) {
            const IKSolution sol = inverse_kinematics(g, target, br);
            CHECK(sol.branch == br);
            CHECK(std::fabs(sol.d) <= 1.0);
            const FootPoint fk = forward_kinematics(g, sol.joints);
            CHECK(dist(fk, target) < 1e-12);
            // actuators field is the coupling image of joints, not a reprojection
            const ActuatorAngles t = joint_to_actuator(sol.joints);
            CHECK(sol.actuators.theta1 == t.theta1);
            CHECK(sol.actuators.theta2 == t.theta2);
        }
    }
}

TEST_CASE("elbow branches bend opposite ways") {
    const LegGeometry g;
    const FootPoint target{0.02, -0.03};
    const IKSolution plus = inverse_kinematics(g, target, Branch::ElbowPlus);
    const IKSolution minus = inverse_kinematics(g, target, Branch::ElbowMinus);
    CHECK(plus.joints.q2 > 0.0);
    CHECK(minus.joints.q2 < 0.0);
    CHECK(plus.joints.q2 == doctest::Approx(-minus.joints.q2).epsilon(1e-12));
    CHECK(dist(forward_kinematics(g, plus.joints), forward_kinematics(g, minus.joints)) < 1e-12);
}

TEST_CASE("workspace boundary handling") {
    const LegGeometry g;

    // Exactly on the rim: D = 1 up to one rounding of the radius algebra,
    // never above 1 after the clamp; the leg comes out straight.
    const IKSolution rim = inverse_kinematics(g, FootPoint{g.reach(), 0.0}, Branch::ElbowPlus);
    CHECK(rim.d >= 1.0 - 3e-16);
    CHECK(rim.d <= 1.0);
    CHECK(std::fabs(rim.joints.q2) < 1e-7);

    // A hair past the rim, within the 1e-12 slack on D: clamps instead of throwing.
    const double r2 = g.l1 * g.l1 + g.l2 * g.l2 + 2.0 * g.l1 * g.l2 * (1.0 + 5e-13);
    const FootPoint barely{std::sqrt(r2), 0.0};
    CHECK(inverse_kinematics(g, barely, Branch::ElbowPlus).d == 1.0);

    // Clearly outside.
    CHECK_THROWS_AS(inverse_kinematics(g, FootPoint{g.reach() + 1e-6, 0.0}, Branch::ElbowPlus),
                    UnreachableError);

    // Equal links: the annulus degenerates to a disk and the origin folds flat.
    const IKSolution fold = inverse_kinematics(g, FootPoint{0.0, 0.0}, Branch::ElbowPlus);
    CHECK(fold.d == -1.0);
    CHECK(std::fabs(std::fabs(fold.joints.q2) - kPi) < 1e-7);

    // Unequal links: inside the hole is unreachable.
    const LegGeometry g2{0.029, 0.020};
    CHECK_THROWS_AS(inverse_kinematics(g2, FootPoint{0.0, 0.004}, Branch::ElbowPlus),
                    UnreachableError);
    try {
        inverse_kinematics(g2, FootPoint{0.1, 0.0}, Branch::ElbowPlus);
        FAIL("expected throw");
    } catch (const Error &e) {
        CHECK(std::string(e.name()) == "Unreachable");
    }
}

TEST_CASE("jacobians match finite differences") {
    const LegGeometry g;
    std::mt19937 rng(11);
    std::uniform_real_distribution<double> angle(-2.0 * kPi, 2.0 * kPi);
    const double h = 1e-7;

    for (int i = 0; i < 200; ++i) {
        const JointAngles q{angle(rng), angle(rng)};
        const JacobianPair jp = jacobians(g, q);

        auto fd = [&](double dq1, double dq2) {
            const FootPoint hi = forward_kinematics(g, JointAngles{q.q1 + dq1, q.q2 + dq2});
            const FootPoint lo = forward_kinematics(g, JointAngles{q.q1 - dq1, q.q2 - dq2});
            return FootPoint{(hi.x - lo.x) / (2.0 * h), (hi.y - lo.y) / (2.0 * h)};
        };
        const FootPoint c1 = fd(h, 0.0);
        const FootPoint c2 = fd(0.0, h);
        CHECK(std::fabs(jp.j_q.a11 - c1.x) < 1e-8);
        CHECK(std::fabs(jp.j_q.a21 - c1.y) < 1e-8);
        CHECK(std::fabs(jp.j_q.a12 - c2.x) < 1e-8);
        CHECK(std::fabs(jp.j_q.a22 - c2.y) < 1e-8);

        // Actuator-space FD through the coupling map.
        const ActuatorAngles t = joint_to_actuator(q);
        auto fdt = [&](double dt1, double dt2) {
            const FootPoint hi =
                forward_kinematics(g, ActuatorAngles{t.theta1 + dt1, t.theta2 + dt2});
            const FootPoint lo =
                forward_kinematics(g, ActuatorAngles{t.theta1 - dt1, t.theta2 - dt2});
            return FootPoint{(hi.x - lo.x) / (2.0 * h), (hi.y - lo.y) / (2.0 * h)};
        };
        const FootPoint d1 = fdt(h, 0.0);
        const FootPoint d2 = fdt(0.0, h);
        CHECK(std::fabs(jp.j_theta.a11 - d1.x) < 1e-8);
        CHECK(std::fabs(jp.j_theta.a21 - d1.y) < 1e-8);
        CHECK(std::fabs(jp.j_theta.a12 - d2.x) < 1e-8);
        CHECK(std::fabs(jp.j_theta.a22 - d2.y) < 1e-8);

        // And the exact algebraic relation used to build it.
        const Mat2 prod = jp.j_q * kCoupling.a;
        CHECK(jp.j_theta.a11 == prod.a11);
        CHECK(jp.j_theta.a12 == prod.a12);
        CHECK(jp.j_theta.a21 == prod.a21);
        CHECK(jp.j_theta.a22 == prod.a22);
    }
}

TEST_CASE("manipulability is l1*l2*|sin q2| in either space") {
    const LegGeometry g{0.029, 0.023};
    std::mt19937 rng(13);
    std::uniform_real_distribution<double> angle(-3.0 * kPi, 3.0 * kPi);

    for (int i = 0; i < 500; ++i) {
        const JointAngles q{angle(rng), angle(rng)};
        const double w = manipulability(g, q);
        const double expect = g.l1 * g.l2 * std::fabs(std::sin(q.q2));
        CHECK(std::fabs(w - expect) <= 1e-12 * g.l1 * g.l2);

        const JacobianPair jp = jacobians(g, q);
        CHECK(std::fabs(manipulability(jp.j_q) - manipulability(jp.j_theta)) <=
              1e-12 * g.l1 * g.l2);
    }

    // Singular configurations collapse to (numerical) zero.
    CHECK(manipulability(g, JointAngles{0.4, 0.0}) <= 1e-15 * g.l1 * g.l2);
    CHECK(manipulability(g, JointAngles{-1.2, kPi}) <= 1e-15 * g.l1 * g.l2);
    // Peak at the right angle.
    CHECK(manipulability(g, JointAngles{0.9, kPi / 2}) ==
          doctest::Approx(g.l1 * g.l2).epsilon(1e-12));
}

TEST_CASE("static torques balance a toe force") {
    const LegGeometry g;

    // L-shaped leg, unit downward load. Holding theta2 while moving theta1
    // translates the toe horizontally here, so the hip channel does no work
    // against a vertical force: tau1 = 0, tau2 = -l2.
    const JointAngles q{-kPi / 2, kPi / 2};
    const ActuatorTorques tau = static_torques(g, q, WrenchForce{0.0, -1.0});
    CHECK(std::fabs(tau.tau1) < 1e-12);
    CHECK(tau.tau2 == doctest::Approx(-g.l2).epsilon(1e-12));

    // Straight leg pointing down: a vertical force is axial, both torques vanish.
    const ActuatorTorques ax = static_torques(g, JointAngles{-kPi / 2, 0.0},
                                              WrenchForce{0.0, -2.5});
    CHECK(std::fabs(ax.tau1) < 1e-12);
    CHECK(std::fabs(ax.tau2) < 1e-12);

    // Transpose wiring: tau_i must be F . (i-th column of J_theta).
    std::mt19937 rng(17);
    std::uniform_real_distribution<double> angle(-kPi, kPi);
    std::uniform_real_distribution<double> force(-3.0, 3.0);
    for (int i = 0; i < 200; ++i) {
        const JointAngles qq{angle(rng), angle(rng)};
        const WrenchForce f{force(rng), force(rng)};
        const Mat2 jt = jacobians(g, qq).j_theta;
        const ActuatorTorques t = static_torques(g, qq, f);
        CHECK(t.tau1 == doctest::Approx(jt.a11 * f.fx + jt.a21 * f.fy).epsilon(1e-15));
        CHECK(t.tau2 == doctest::Approx(jt.a12 * f.fx + jt.a22 * f.fy).epsilon(1e-15));
    }
}
