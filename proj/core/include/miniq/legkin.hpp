#pragma once

#include "miniq/errors.hpp"

namespace miniq {

// Link lengths of one planar 2R leg, in meters.
struct LegGeometry {
    double l1 = 0.029; // proximal link
    double l2 = 0.029; // distal link

    double reach() const { return l1 + l2; }
    double inner_reach() const { return l1 > l2 ? l1 - l2 : l2 - l1; }
};

// Throws InvalidParams unless both links are positive and finite.
void validate(const LegGeometry &geom);

// Kinematic joint angles (hip, knee), radians. Unbounded: values are never
// wrapped into any interval anywhere in this module.
struct JointAngles {
    double q1 = 0.0;
    double q2 = 0.0;
};

// Physical actuator angles, radians. Same unbounded convention.
struct ActuatorAngles {
    double theta1 = 0.0;
    double theta2 = 0.0;
};

// Toe position in the leg plane, meters. x forward, y up; the hip is the origin.
struct FootPoint {
    double x = 0.0;
    double y = 0.0;
};

// Elbow branch of the 2R inverse kinematics: sign of sqrt(1 - D^2) in the
// knee-angle solution.
enum class Branch {
    ElbowPlus,
    ElbowMinus,
};

// Minimal 2x2 matrix, row-major named fields.
struct Mat2 {
    double a11 = 0.0, a12 = 0.0;
    double a21 = 0.0, a22 = 0.0;

    double det() const { return a11 * a22 - a12 * a21; }
    Mat2 operator*(const Mat2 &o) const {
        return {a11 * o.a11 + a12 * o.a21, a11 * o.a12 + a12 * o.a22,
                a21 * o.a11 + a22 * o.a21, a21 * o.a12 + a22 * o.a22};
    }
};

// Unimodular map between joint and actuator space. The knee is belt-driven
// from a body-fixed actuator, so q = a * theta and theta = a_inv * q, with
// det(a) = 1 exactly.
struct CouplingMap {
    Mat2 a{1.0, 0.0, -1.0, 1.0};
    Mat2 a_inv{1.0, 0.0, 1.0, 1.0};
};

inline constexpr CouplingMap kCoupling{};

struct IKSolution {
    JointAngles joints;
    ActuatorAngles actuators; // always joint_to_actuator(joints)
    Branch branch = Branch::ElbowPlus;
    double d = 0.0; // intermediate D, clamped to [-1, 1]
};

struct JacobianPair {
    Mat2 j_q;     // d(x,y)/d(q1,q2)
    Mat2 j_theta; // d(x,y)/d(theta1,theta2) = j_q * a
};

// Planar force applied at the toe, newtons.
struct WrenchForce {
    double fx = 0.0;
    double fy = 0.0;
};

// Torques at the two actuators, newton-meters.
struct ActuatorTorques {
    double tau1 = 0.0;
    double tau2 = 0.0;
};

// Toe position from joint angles: the classical 2R forward map.
FootPoint forward_kinematics(const LegGeometry &geom, const JointAngles &joints);

// Toe position from actuator angles (composition with the coupling map).
FootPoint forward_kinematics(const LegGeometry &geom, const ActuatorAngles &act);

// Closed-form 2R inverse kinematics with the requested elbow branch.
// |D| values within 1e-12 above 1 are clamped to the workspace boundary;
// anything farther out throws Unreachable.
IKSolution inverse_kinematics(const LegGeometry &geom, const FootPoint &target, Branch branch);

// theta1 = q1, theta2 = q1 + q2.
ActuatorAngles joint_to_actuator(const JointAngles &joints);

// q1 = theta1, q2 = theta2 - theta1. Exact inverse of joint_to_actuator.
JointAngles actuator_to_joint(const ActuatorAngles &act);

// Joint-space and actuator-space Jacobians at a configuration.
JacobianPair jacobians(const LegGeometry &geom, const JointAngles &joints);

// Yoshikawa manipulability index sqrt(det(J * J^T)); for a square Jacobian
// this is |det J|, which is what gets computed (no squaring underflow).
double manipulability(const Mat2 &jacobian);

// Index at a configuration, computed from the joint-space Jacobian. Equal to
// l1 * l2 * |sin q2|; identical for j_q and j_theta because det(a) = 1.
double manipulability(const LegGeometry &geom, const JointAngles &joints);

// Actuator torques balancing a toe force: tau = j_theta^T * F.
ActuatorTorques static_torques(const LegGeometry &geom, const JointAngles &joints,
                               const WrenchForce &load);

} // namespace miniq
