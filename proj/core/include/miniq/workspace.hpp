#pragma once

#include "miniq/legkin.hpp"

#include <cstdint>
#include <iosfwd>
#include <vector>

namespace miniq {

// Uniform rectangular raster: resolution x resolution cells covering
// [x_min,x_max] x [y_min,y_max]. A cell's sample point is its center.
struct GridSpec {
    double x_min = -0.06, x_max = 0.06;
    double y_min = -0.06, y_max = 0.06;
    int resolution = 401; // cells per axis

    double dx() const { return (x_max - x_min) / resolution; }
    double dy() const { return (y_max - y_min) / resolution; }
    double cell_x(int i) const { return x_min + (i + 0.5) * dx(); }
    double cell_y(int j) const { return y_min + (j + 0.5) * dy(); }
    bool operator==(const GridSpec &) const = default;
};

// Throws InvalidParams unless extents are ordered and resolution >= 2.
void validate(const GridSpec &spec);

// Boolean reachability raster. Row-major: index = j * resolution + i with
// i along x and j along y (j = 0 is y_min).
struct WorkspaceGrid {
    GridSpec spec;
    std::vector<std::uint8_t> reachable;
    double cell_area = 0.0;

    double area() const;
};

// Scalar raster with the same layout; NaN marks unreachable cells.
struct ScalarField {
    GridSpec spec;
    std::vector<double> values;
};

// Five-bar baseline leg: two hips separated by d on the x-axis (centered on
// the origin), proximal links a, distal links b meeting at the toe. Each hip
// actuator is limited to [min,max] radians.
struct FiveBarGeometry {
    double hip_separation = 0.020; // d
    double proximal = 0.020;       // a
    double distal = 0.026;         // b
    double left_min = -2.62, left_max = -0.52;
    double right_min = -2.62, right_max = -0.52;
};

// Throws InvalidParams on bad lengths/limits; DegenerateGeometry when
// a + b < d/2 (the linkage cannot assemble anywhere).
void validate(const FiveBarGeometry &fb);

struct ComparisonReport {
    double area_a = 0.0; // m^2
    double area_b = 0.0; // m^2
    double ratio = 0.0;  // area_b / area_a
    bool b_contained_in_a = false;
};

// Marks cells whose center lies in the annulus |l1-l2| <= r <= l1+l2
// (the full disk when l1 = l2; joints are unbounded so there is no other
// restriction).
WorkspaceGrid serial_workspace(const LegGeometry &geom, const GridSpec &spec);

// Solves the five-bar toe position, or the lack of one, for a pair of hip
// angles. Returns false when the distal circles do not intersect. Of the two
// intersections the one on the far side of the knee chord from the hip
// midpoint is chosen (toe points away from the body; ties broken toward
// lower y).
bool fivebar_toe(const FiveBarGeometry &fb, double q_left, double q_right, FootPoint &out);

// Sweeps both hip angles over their limits on a samples_per_axis^2 lattice
// and marks every cell hit by a solvable toe position. Angle pairs with no
// circle intersection are skipped.
WorkspaceGrid fivebar_workspace(const FiveBarGeometry &fb, const GridSpec &spec,
                                int samples_per_axis);

// Yoshikawa manipulability at each reachable cell center, via IK with the
// requested branch; NaN outside the workspace. Both branches produce the
// same field (w depends only on |sin q2|).
ScalarField manipulability_map(const LegGeometry &geom, const GridSpec &spec, Branch branch);

// Which configuration space a projected field sweeps uniformly.
enum class SampleSpace {
    Joint,    // uniform (q1, q2) grid over [-pi, pi)^2
    Actuator, // uniform (theta1, theta2) grid over [-pi, pi)^2
};

// Sweeps a uniform samples_per_axis^2 grid of the chosen configuration space,
// projects each sample to the workspace through FK, and bins the mean
// manipulability per cell (NaN where no sample lands). Cartesian w is the
// same function of position either way; only the sample coverage differs.
ScalarField projected_manipulability(const LegGeometry &geom, const GridSpec &spec,
                                     int samples_per_axis, SampleSpace space);

// Cell counts times cell area, plus cellwise containment b subseteq a.
// Throws GridMismatch unless both rasters share one GridSpec.
ComparisonReport compare_workspaces(const WorkspaceGrid &a, const WorkspaceGrid &b);

// 8-bit binary PGM heatmap: values scaled so the field maximum maps to 255,
// NaN (or unreachable) to 0; rows written top-down (y_max first).
void save_pgm(std::ostream &out, const ScalarField &field);
void save_pgm(std::ostream &out, const WorkspaceGrid &grid);

// CSV rows `x,y,value` at cell centers; NaN written as nan.
void save_csv(std::ostream &out, const ScalarField &field);
void save_csv(std::ostream &out, const WorkspaceGrid &grid);

} // namespace miniq
