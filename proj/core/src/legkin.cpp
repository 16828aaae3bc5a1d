#include "miniq/legkin.hpp"

#include <cmath>

namespace miniq {

namespace {

constexpr double kBoundarySlack = 1e-12;

} // namespace

void validate(const LegGeometry &geom) {
    if (!(geom.l1 > 0.0) || !(geom.l2 > 0.0) || !std::isfinite(geom.l1) ||
        !std::isfinite(geom.l2)) {
        throw InvalidParamsError("leg link lengths must be positive and finite");
    }
}

FootPoint forward_kinematics(const LegGeometry &geom, const JointAngles &joints) {
    const double s = joints.q1 + joints.q2;
    return {geom.l1 * std::cos(joints.q1) + geom.l2 * std::cos(s),
            geom.l1 * std::sin(joints.q1) + geom.l2 * std::sin(s)};
}

FootPoint forward_kinematics(const LegGeometry &geom, const ActuatorAngles &act) {
    return forward_kinematics(geom, actuator_to_joint(act));
}

IKSolution inverse_kinematics(const LegGeometry &geom, const FootPoint &target, Branch branch) {
    validate(geom);
    const double r2 = target.x * target.x + target.y * target.y;
    double d = (r2 - geom.l1 * geom.l1 - geom.l2 * geom.l2) / (2.0 * geom.l1 * geom.l2);
    if (d > 1.0) {
        if (d > 1.0 + kBoundarySlack)
            throw UnreachableError("target beyond outer workspace boundary");
        d = 1.0;
    } else if (d < -1.0) {
        if (d < -1.0 - kBoundarySlack)
            throw UnreachableError("target inside inner workspace boundary");
        d = -1.0;
    }
    const double sign = branch == Branch::ElbowPlus ? 1.0 : -1.0;
    const double s2 = sign * std::sqrt(1.0 - d * d);
    const double q2 = std::atan2(s2, d);
    const double q1 =
        std::atan2(target.y, target.x) - std::atan2(geom.l2 * s2, geom.l1 + geom.l2 * d);
    IKSolution sol;
    sol.joints = {q1, q2};
    sol.actuators = joint_to_actuator(sol.joints);
    sol.branch = branch;
    sol.d = d;
    return sol;
}

ActuatorAngles joint_to_actuator(const JointAngles &joints) {
    const Mat2 &m = kCoupling.a_inv;
    return {m.a11 * joints.q1 + m.a12 * joints.q2, m.a21 * joints.q1 + m.a22 * joints.q2};
}

JointAngles actuator_to_joint(const ActuatorAngles &act) {
    const Mat2 &m = kCoupling.a;
    return {m.a11 * act.theta1 + m.a12 * act.theta2, m.a21 * act.theta1 + m.a22 * act.theta2};
}

JacobianPair jacobians(const LegGeometry &geom, const JointAngles &joints) {
    const double s1 = std::sin(joints.q1);
    const double c1 = std::cos(joints.q1);
    const double s12 = std::sin(joints.q1 + joints.q2);
    const double c12 = std::cos(joints.q1 + joints.q2);
    JacobianPair jp;
    jp.j_q = {-geom.l1 * s1 - geom.l2 * s12, -geom.l2 * s12,
              geom.l1 * c1 + geom.l2 * c12, geom.l2 * c12};
    jp.j_theta = jp.j_q * kCoupling.a;
    return jp;
}

double manipulability(const Mat2 &jacobian) { return std::fabs(jacobian.det()); }

double manipulability(const LegGeometry &geom, const JointAngles &joints) {
    return manipulability(jacobians(geom, joints).j_q);
}

ActuatorTorques static_torques(const LegGeometry &geom, const JointAngles &joints,
                               const WrenchForce &load) {
    const Mat2 j = jacobians(geom, joints).j_theta;
    // tau = J^T F with J already in actuator coordinates.
    return {j.a11 * load.fx + j.a21 * load.fy, j.a12 * load.fx + j.a22 * load.fy};
}

} // namespace miniq
