#include "miniq/workspace.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <ostream>

namespace miniq {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

// Locates the cell containing (x, y); false when outside the grid.
bool locate(const GridSpec &spec, double x, double y, int &i, int &j) {
    i = static_cast<int>(std::floor((x - spec.x_min) / spec.dx()));
    j = static_cast<int>(std::floor((y - spec.y_min) / spec.dy()));
    return i >= 0 && i < spec.resolution && j >= 0 && j < spec.resolution;
}

} // namespace

void validate(const GridSpec &spec) {
    if (!(spec.x_max > spec.x_min) || !(spec.y_max > spec.y_min))
        throw InvalidParamsError("grid extents must satisfy x_max > x_min, y_max > y_min");
    if (spec.resolution < 2)
        throw InvalidParamsError("grid resolution must be at least 2");
}

void validate(const FiveBarGeometry &fb) {
    if (!(fb.proximal > 0.0) || !(fb.distal > 0.0))
        throw InvalidParamsError("five-bar link lengths must be positive");
    if (!(fb.hip_separation >= 0.0))
        throw InvalidParamsError("five-bar hip separation must be non-negative");
    if (!(fb.left_min < fb.left_max) || !(fb.right_min < fb.right_max))
        throw InvalidParamsError("five-bar actuator limits must satisfy min < max");
    if (fb.proximal + fb.distal < fb.hip_separation / 2.0)
        throw DegenerateGeometryError("five-bar cannot assemble: a + b < d/2");
}

double WorkspaceGrid::area() const {
    return cell_area * static_cast<double>(std::count(reachable.begin(), reachable.end(),
                                                      std::uint8_t{1}));
}

WorkspaceGrid serial_workspace(const LegGeometry &geom, const GridSpec &spec) {
    validate(geom);
    validate(spec);
    const double outer2 = geom.reach() * geom.reach();
    const double inner2 = geom.inner_reach() * geom.inner_reach();
    WorkspaceGrid grid;
    grid.spec = spec;
    grid.cell_area = spec.dx() * spec.dy();
    grid.reachable.assign(static_cast<std::size_t>(spec.resolution) * spec.resolution, 0);
    for (int j = 0; j < spec.resolution; ++j) {
        const double y = spec.cell_y(j);
        for (int i = 0; i < spec.resolution; ++i) {
            const double x = spec.cell_x(i);
            const double r2 = x * x + y * y;
            if (r2 >= inner2 && r2 <= outer2)
                grid.reachable[static_cast<std::size_t>(j) * spec.resolution + i] = 1;
        }
    }
    return grid;
}

bool fivebar_toe(const FiveBarGeometry &fb, double q_left, double q_right, FootPoint &out) {
    const double hx = fb.hip_separation / 2.0;
    const double k1x = -hx + fb.proximal * std::cos(q_left);
    const double k1y = fb.proximal * std::sin(q_left);
    const double k2x = hx + fb.proximal * std::cos(q_right);
    const double k2y = fb.proximal * std::sin(q_right);

    const double ex = k2x - k1x;
    const double ey = k2y - k1y;
    const double dist2 = ex * ex + ey * ey;
    const double dist = std::sqrt(dist2);
    if (dist > 2.0 * fb.distal || dist == 0.0)
        return false; // circles apart, or coincident (no unique toe)

    // Midpoint of the knee chord plus/minus the half-height along its normal.
    const double mx = 0.5 * (k1x + k2x);
    const double my = 0.5 * (k1y + k2y);
    const double h2 = fb.distal * fb.distal - 0.25 * dist2;
    const double h = h2 > 0.0 ? std::sqrt(h2) : 0.0;
    const double nx = -ey / dist;
    const double ny = ex / dist;

    const double px1 = mx + h * nx, py1 = my + h * ny;
    const double px2 = mx - h * nx, py2 = my - h * ny;
    // The toe points away from the body: take the intersection farther from
    // the hip midpoint (equivalently, across the knee chord from it); break
    // ties toward lower y.
    const double d1 = px1 * px1 + py1 * py1;
    const double d2 = px2 * px2 + py2 * py2;
    const double span = fb.proximal + fb.distal;
    const double tie = 1e-12 * span * span;
    bool first;
    if (std::fabs(d1 - d2) > tie)
        first = d1 > d2;
    else
        first = py1 < py2;
    out = first ? FootPoint{px1, py1} : FootPoint{px2, py2};
    return true;
}

WorkspaceGrid fivebar_workspace(const FiveBarGeometry &fb, const GridSpec &spec,
                                int samples_per_axis) {
    validate(fb);
    validate(spec);
    if (samples_per_axis < 8)
        throw InvalidParamsError("fivebar_workspace needs samples_per_axis >= 8");
    WorkspaceGrid grid;
    grid.spec = spec;
    grid.cell_area = spec.dx() * spec.dy();
    grid.reachable.assign(static_cast<std::size_t>(spec.resolution) * spec.resolution, 0);
    const int n = samples_per_axis;
    for (int li = 0; li < n; ++li) {
        const double ql = fb.left_min + (fb.left_max - fb.left_min) * li / (n - 1);
        for (int ri = 0; ri < n; ++ri) {
            const double qr = fb.right_min + (fb.right_max - fb.right_min) * ri / (n - 1);
            FootPoint toe;
            if (!fivebar_toe(fb, ql, qr, toe))
                continue;
            int i, j;
            if (locate(spec, toe.x, toe.y, i, j))
                grid.reachable[static_cast<std::size_t>(j) * spec.resolution + i] = 1;
        }
    }
    return grid;
}

ScalarField manipulability_map(const LegGeometry &geom, const GridSpec &spec, Branch branch) {
    validate(geom);
    validate(spec);
    ScalarField field;
    field.spec = spec;
    field.values.assign(static_cast<std::size_t>(spec.resolution) * spec.resolution, kNaN);
    for (int j = 0; j < spec.resolution; ++j) {
        const double y = spec.cell_y(j);
        for (int i = 0; i < spec.resolution; ++i) {
            const double x = spec.cell_x(i);
            try {
                const IKSolution sol = inverse_kinematics(geom, {x, y}, branch);
                field.values[static_cast<std::size_t>(j) * spec.resolution + i] =
                    manipulability(geom, sol.joints);
            } catch (const UnreachableError &) {
                // stays NaN
            }
        }
    }
    return field;
}

ScalarField projected_manipulability(const LegGeometry &geom, const GridSpec &spec,
                                     int samples_per_axis, SampleSpace space) {
    validate(geom);
    validate(spec);
    if (samples_per_axis < 8)
        throw InvalidParamsError("projected_manipulability needs samples_per_axis >= 8");
    const std::size_t cells = static_cast<std::size_t>(spec.resolution) * spec.resolution;
    std::vector<double> sum(cells, 0.0);
    std::vector<std::uint32_t> count(cells, 0);
    const int n = samples_per_axis;
    const double pi = std::acos(-1.0);
    for (int ui = 0; ui < n; ++ui) {
        const double u = -pi + 2.0 * pi * ui / n;
        for (int vi = 0; vi < n; ++vi) {
            const double v = -pi + 2.0 * pi * vi / n;
            const JointAngles q = space == SampleSpace::Joint
                                      ? JointAngles{u, v}
                                      : actuator_to_joint(ActuatorAngles{u, v});
            const FootPoint p = forward_kinematics(geom, q);
            int i, j;
            if (!locate(spec, p.x, p.y, i, j))
                continue;
            const std::size_t idx = static_cast<std::size_t>(j) * spec.resolution + i;
            sum[idx] += manipulability(geom, q);
            ++count[idx];
        }
    }
    ScalarField field;
    field.spec = spec;
    field.values.assign(cells, kNaN);
    for (std::size_t idx = 0; idx < cells; ++idx)
        if (count[idx] > 0)
            field.values[idx] = sum[idx] / count[idx];
    return field;
}

ComparisonReport compare_workspaces(const WorkspaceGrid &a, const WorkspaceGrid &b) {
    if (!(a.spec == b.spec))
        throw GridMismatchError("workspace grids have different specs");
    ComparisonReport rep;
    rep.area_a = a.area();
    rep.area_b = b.area();
    if (rep.area_a > 0.0)
        rep.ratio = rep.area_b / rep.area_a;
    else
        rep.ratio = rep.area_b > 0.0 ? std::numeric_limits<double>::infinity() : 0.0;
    rep.b_contained_in_a = true;
    for (std::size_t idx = 0; idx < b.reachable.size(); ++idx) {
        if (b.reachable[idx] && !a.reachable[idx]) {
            rep.b_contained_in_a = false;
            break;
        }
    }
    return rep;
}

namespace {

void write_pgm(std::ostream &out, const GridSpec &spec, const std::vector<double> &values,
               double vmax) {
    out << "P5\n" << spec.resolution << " " << spec.resolution << "\n255\n";
    const double scale = vmax > 0.0 ? 255.0 / vmax : 0.0;
    for (int j = spec.resolution - 1; j >= 0; --j) {
        for (int i = 0; i < spec.resolution; ++i) {
            const double v = values[static_cast<std::size_t>(j) * spec.resolution + i];
            unsigned char byte = 0;
            if (std::isfinite(v) && v > 0.0)
                byte = static_cast<unsigned char>(
                    std::clamp(std::lround(v * scale), 0L, 255L));
            out.put(static_cast<char>(byte));
        }
    }
}

void write_csv(std::ostream &out, const GridSpec &spec, const std::vector<double> &values) {
    out << "x,y,value\n";
    const auto prec = out.precision(10);
    for (int j = 0; j < spec.resolution; ++j)
        for (int i = 0; i < spec.resolution; ++i)
            out << spec.cell_x(i) << "," << spec.cell_y(j) << ","
                << values[static_cast<std::size_t>(j) * spec.resolution + i] << "\n";
    out.precision(prec);
}

std::vector<double> to_values(const WorkspaceGrid &grid) {
    std::vector<double> values(grid.reachable.size());
    for (std::size_t idx = 0; idx < values.size(); ++idx)
        values[idx] = grid.reachable[idx] ? 1.0 : 0.0;
    return values;
}

double finite_max(const std::vector<double> &values) {
    double vmax = 0.0;
    for (double v : values)
        if (std::isfinite(v) && v > vmax)
            vmax = v;
    return vmax;
}

} // namespace

void save_pgm(std::ostream &out, const ScalarField &field) {
    write_pgm(out, field.spec, field.values, finite_max(field.values));
}

void save_pgm(std::ostream &out, const WorkspaceGrid &grid) {
    write_pgm(out, grid.spec, to_values(grid), 1.0);
}

void save_csv(std::ostream &out, const ScalarField &field) {
    write_csv(out, field.spec, field.values);
}

void save_csv(std::ostream &out, const WorkspaceGrid &grid) {
    write_csv(out, grid.spec, to_values(grid));
}

} // namespace miniq
