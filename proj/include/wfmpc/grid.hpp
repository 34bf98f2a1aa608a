#pragma once

#include <Eigen/Dense>
#include <cmath>

#include "wfmpc/common.hpp"
#include "wfmpc/layout.hpp"

namespace wfmpc {

struct GridSpec {
    int nx = 0;
    int ny = 0;
    double dx = 0.0;
    double dy = 0.0;

    GridSpec() = default;
    GridSpec(int nx_, int ny_, double dx_, double dy_) : nx(nx_), ny(ny_), dx(dx_), dy(dy_) {}
    explicit GridSpec(const FarmLayout& layout)
        : nx(layout.nx), ny(layout.ny), dx(layout.dx()), dy(layout.dy()) {}

    int cells() const { return nx * ny; }
    int state_dim() const { return 2 * nx * ny; }
    bool operator==(const GridSpec& o) const = default;
};

// MAC-staggered flow state: vx lives on x-normal faces ((nx+1) x ny),
// vy on y-normal faces (nx x (ny+1)), p at cell centers (nx x ny).
// Index convention: field(i, j) with i the streamwise index.
struct FlowField {
    GridSpec grid;
    Eigen::MatrixXd vx;  // (nx+1) x ny
    Eigen::MatrixXd vy;  // nx x (ny+1)
    Eigen::MatrixXd p;   // nx x ny
    double time = 0.0;

    FlowField() = default;
    explicit FlowField(const GridSpec& g)
        : grid(g),
          vx(Eigen::MatrixXd::Zero(g.nx + 1, g.ny)),
          vy(Eigen::MatrixXd::Zero(g.nx, g.ny + 1)),
          p(Eigen::MatrixXd::Zero(g.nx, g.ny)) {}

    double vx_center(int i, int j) const { return 0.5 * (vx(i, j) + vx(i + 1, j)); }
    double vy_center(int i, int j) const { return 0.5 * (vy(i, j) + vy(i, j + 1)); }

    // Cell-centered snapshot in row-major (nx, ny, 2) order; this is the
    // plant state vector consumed by the reduced-order model.
    Eigen::VectorXd state_vector() const {
        Eigen::VectorXd s(grid.state_dim());
        int k = 0;
        for (int i = 0; i < grid.nx; ++i)
            for (int j = 0; j < grid.ny; ++j) {
                s(k++) = vx_center(i, j);
                s(k++) = vy_center(i, j);
            }
        return s;
    }

    bool finite() const {
        return vx.allFinite() && vy.allFinite() && p.allFinite();
    }

    double max_speed() const {
        const double mx = vx.cwiseAbs().maxCoeff();
        const double my = vy.cwiseAbs().maxCoeff();
        return std::max(mx, my);
    }
};

// Max over cells of the discrete continuity residual (1/s).
inline double divergence_residual(const FlowField& f) {
    const auto& g = f.grid;
    double worst = 0.0;
    for (int i = 0; i < g.nx; ++i)
        for (int j = 0; j < g.ny; ++j) {
            const double div = (f.vx(i + 1, j) - f.vx(i, j)) / g.dx +
                               (f.vy(i, j + 1) - f.vy(i, j)) / g.dy;
            worst = std::max(worst, std::abs(div));
        }
    return worst;
}

// Bilinear sample of cell-centered values at physical position (x, y).
// `values` is indexed (i, j) over cell centers.
inline double sample_centered(const Eigen::MatrixXd& values, const GridSpec& g, double x, double y) {
    const double fx = x / g.dx - 0.5;
    const double fy = y / g.dy - 0.5;
    int i0 = static_cast<int>(std::floor(fx));
    int j0 = static_cast<int>(std::floor(fy));
    double ax = fx - i0;
    double ay = fy - j0;
    i0 = std::clamp(i0, 0, g.nx - 2);
    j0 = std::clamp(j0, 0, g.ny - 2);
    ax = std::clamp(fx - i0, 0.0, 1.0);
    ay = std::clamp(fy - j0, 0.0, 1.0);
    return (1 - ax) * (1 - ay) * values(i0, j0) + ax * (1 - ay) * values(i0 + 1, j0) +
           (1 - ax) * ay * values(i0, j0 + 1) + ax * ay * values(i0 + 1, j0 + 1);
}

}  // namespace wfmpc
