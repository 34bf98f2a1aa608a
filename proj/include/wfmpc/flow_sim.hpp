#pragma once

#include <Eigen/Dense>
#include <Eigen/Sparse>
#include <Eigen/SparseCholesky>
#include <cmath>
#include <string>
#include <vector>

#include "wfmpc/common.hpp"
#include "wfmpc/grid.hpp"
#include "wfmpc/layout.hpp"

namespace wfmpc {

struct PowerReport {
    Eigen::VectorXd turbine_power_w;   // W, per turbine
    Eigen::VectorXd disk_velocity;     // m/s, rotor-perpendicular disk average
    double farm_power_w = 0.0;
};

struct ThrustForce {
    double magnitude = 0.0;  // N/m^2, force per unit rotor area
    double dir_x = 0.0;      // unit vector, -e_perp
    double dir_y = 0.0;
};

// Disk-based thrust: magnitude 1/2 rho U^2 ct', directed against the
// rotor-perpendicular unit vector e_perp = (cos g, sin g).
inline ThrustForce thrust_force(double disk_velocity, double ct_prime, double yaw_deg, double rho) {
    if (ct_prime < 0.0) throw std::domain_error("thrust_force: ct_prime must be non-negative");
    const double g = deg2rad(yaw_deg);
    ThrustForce f;
    f.magnitude = 0.5 * rho * disk_velocity * disk_velocity * ct_prime;
    f.dir_x = -std::cos(g);
    f.dir_y = -std::sin(g);
    return f;
}

// P = 1/2 rho A_d U^3 c_p ct'
inline double turbine_power(double disk_velocity, double ct_prime, double rotor_area,
                            double rho, double cp_loss) {
    return 0.5 * rho * rotor_area * disk_velocity * disk_velocity * disk_velocity *
           cp_loss * ct_prime;
}

namespace detail {

// Sample points along the yawed rotor line. The rotor is a segment of
// length D centered on the hub, perpendicular to e_perp.
inline std::vector<std::pair<double, double>> rotor_samples(const TurbineSpec& t, double yaw_deg,
                                                            int count = 32) {
    const double g = deg2rad(yaw_deg);
    // direction along the rotor line
    const double rx = -std::sin(g);
    const double ry = std::cos(g);
    std::vector<std::pair<double, double>> pts;
    pts.reserve(count);
    for (int k = 0; k < count; ++k) {
        const double s = (k + 0.5) / count - 0.5;  // in (-1/2, 1/2)
        pts.emplace_back(t.x + s * t.rotor_diameter * rx, t.y + s * t.rotor_diameter * ry);
    }
    return pts;
}

}  // namespace detail

// Mean rotor-perpendicular velocity over the yawed rotor line,
// sampled from cell-centered velocities.
inline double rotor_disk_velocity(const Eigen::MatrixXd& vx_c, const Eigen::MatrixXd& vy_c,
                                  const GridSpec& grid, const TurbineSpec& t, double yaw_deg) {
    const double g = deg2rad(yaw_deg);
    const double ex = std::cos(g), ey = std::sin(g);
    const auto pts = detail::rotor_samples(t, yaw_deg);
    double acc = 0.0;
    for (const auto& [x, y] : pts)
        acc += ex * sample_centered(vx_c, grid, x, y) + ey * sample_centered(vy_c, grid, x, y);
    return acc / static_cast<double>(pts.size());
}

inline double rotor_disk_velocity(const FlowField& f, const TurbineSpec& t, double yaw_deg) {
    Eigen::MatrixXd vx_c(f.grid.nx, f.grid.ny), vy_c(f.grid.nx, f.grid.ny);
    for (int i = 0; i < f.grid.nx; ++i)
        for (int j = 0; j < f.grid.ny; ++j) {
            vx_c(i, j) = f.vx_center(i, j);
            vy_c(i, j) = f.vy_center(i, j);
        }
    return rotor_disk_velocity(vx_c, vy_c, f.grid, t, yaw_deg);
}

// Uniform streamwise flow at `freestream`; validates the layout first.
inline FlowField init_domain(const FarmLayout& layout, double freestream) {
    layout.validate();
    if (freestream <= 0) throw ConfigError("init_domain: freestream must be positive");
    FlowField f((GridSpec(layout)));
    f.vx.setConstant(freestream);
    f.vy.setZero();
    f.p.setZero();
    f.time = 0.0;
    return f;
}

// 2D incompressible Navier-Stokes plant on a MAC grid: explicit
// second-order upwind advection, implicit diffusion with a constant
// effective eddy viscosity, and a pressure projection enforcing the
// discrete continuity equation after every step. Turbines enter as
// actuator-disk body forces smeared over the cells crossed by the
// yawed rotor line.
//
// Boundary conditions: Dirichlet inflow (west), zero-gradient outflow
// (east), free-slip walls (north/south).
class FlowSolver {
public:
    explicit FlowSolver(const FarmLayout& layout) : layout_(layout), grid_(layout) {
        layout_.validate();
        inflow_ = layout_.freestream;
        divergence_tol_ = 1e-6 * layout_.freestream / std::min(grid_.dx, grid_.dy);
        build_vx_matrix();
        build_vy_matrix();
        build_pressure_matrix();
    }

    const FarmLayout& layout() const { return layout_; }
    const GridSpec& grid() const { return grid_; }
    double divergence_tolerance() const { return divergence_tol_; }

    // Time-varying uniform inflow speed (applied at the west boundary).
    void set_inflow(double speed) {
        if (speed <= 0) throw ConfigError("inflow speed must be positive");
        inflow_ = speed;
    }
    double inflow() const { return inflow_; }

    // Test-only switch; with forcing disabled the control bounds are not
    // enforced so ct' = 0 can be exercised.
    void set_forcing_enabled(bool on) { forcing_enabled_ = on; }

    FlowField initial_field() const { return init_domain(layout_, inflow_); }

    // Advances one dt. The returned report is computed from the pre-step
    // disk velocities and the applied controls.
    PowerReport step(FlowField& f, const ControlVector& u) const {
        if (!(f.grid == grid_)) throw ConfigError("step: field grid does not match layout");
        if (forcing_enabled_) check_within_bounds(u, layout_);
        if (!f.finite()) throw InstabilityError("step: non-finite field state");

        apply_boundary(f);
        check_stability(f);

        const int nx = grid_.nx, ny = grid_.ny;
        const double dx = grid_.dx, dy = grid_.dy;
        const double dt = layout_.dt, rho = layout_.rho;

        // Cell-centered velocities for disk averaging and force rasterization.
        Eigen::MatrixXd vx_c(nx, ny), vy_c(nx, ny);
        for (int i = 0; i < nx; ++i)
            for (int j = 0; j < ny; ++j) {
                vx_c(i, j) = f.vx_center(i, j);
                vy_c(i, j) = f.vy_center(i, j);
            }

        PowerReport report;
        const int n_turb = layout_.turbine_count();
        report.turbine_power_w.resize(n_turb);
        report.disk_velocity.resize(n_turb);

        Eigen::MatrixXd fx = Eigen::MatrixXd::Zero(nx, ny);  // body force density, N/m^3
        Eigen::MatrixXd fy = Eigen::MatrixXd::Zero(nx, ny);
        for (int ti = 0; ti < n_turb; ++ti) {
            const auto& t = layout_.turbines[ti];
            const double yaw = u.yaw_deg(ti);
            const double U = std::max(0.0, rotor_disk_velocity(vx_c, vy_c, grid_, t, yaw));
            report.disk_velocity(ti) = U;
            report.turbine_power_w(ti) =
                turbine_power(U, u.ct(ti), t.rotor_area(), rho, layout_.cp_loss);
            if (forcing_enabled_) deposit_force(t, yaw, U, u.ct(ti), fx, fy);
        }
        report.farm_power_w = report.turbine_power_w.sum();

        // Explicit advection.
        Eigen::MatrixXd adv_x = advect_vx(f);
        Eigen::MatrixXd adv_y = advect_vy(f);

        // Implicit diffusion: (I - dt nu L) v* = v - dt adv + dt f/rho + BC folds.
        Eigen::VectorXd rhs_x(nx * ny);
        for (int i = 1; i <= nx; ++i)
            for (int j = 0; j < ny; ++j) {
                double r = f.vx(i, j) - dt * adv_x(i - 1, j);
                // face force: average of adjacent cell densities
                const double fcell = (i < nx) ? 0.5 * (fx(i - 1, j) + fx(i, j)) : fx(i - 1, j);
                r += dt * fcell / rho;
                if (i == 1) r += dt * layout_.nu_eff / (dx * dx) * inflow_;
                rhs_x(vx_index(i, j)) = r;
            }
        Eigen::VectorXd vx_star = vx_solver_.solve(rhs_x);
        if (vx_solver_.info() != Eigen::Success)
            throw SolverError("implicit diffusion solve failed for vx");

        Eigen::VectorXd rhs_y(nx * (ny - 1));
        for (int i = 0; i < nx; ++i)
            for (int j = 1; j < ny; ++j) {
                double r = f.vy(i, j) - dt * adv_y(i, j - 1);
                const double fcell = 0.5 * (fy(i, j - 1) + fy(i, j));
                r += dt * fcell / rho;
                rhs_y(vy_index(i, j)) = r;
            }
        Eigen::VectorXd vy_star = vy_solver_.solve(rhs_y);
        if (vy_solver_.info() != Eigen::Success)
            throw SolverError("implicit diffusion solve failed for vy");

        // Scatter the intermediate field.
        for (int i = 1; i <= nx; ++i)
            for (int j = 0; j < ny; ++j) f.vx(i, j) = vx_star(vx_index(i, j));
        for (int i = 0; i < nx; ++i)
            for (int j = 1; j < ny; ++j) f.vy(i, j) = vy_star(vy_index(i, j));
        f.vx.row(0).setConstant(inflow_);
        f.vy.col(0).setZero();
        f.vy.col(ny).setZero();

        // Pressure projection: A p = -(rho/dt) div(v*), A = -Laplacian.
        Eigen::VectorXd rhs_p(nx * ny);
        for (int i = 0; i < nx; ++i)
            for (int j = 0; j < ny; ++j) {
                const double div = (f.vx(i + 1, j) - f.vx(i, j)) / dx +
                                   (f.vy(i, j + 1) - f.vy(i, j)) / dy;
                rhs_p(p_index(i, j)) = -rho / dt * div;
            }
        Eigen::VectorXd p = p_solver_.solve(rhs_p);
        if (p_solver_.info() != Eigen::Success)
            throw SolverError("pressure Poisson solve failed");

        for (int i = 0; i < nx; ++i)
            for (int j = 0; j < ny; ++j) f.p(i, j) = p(p_index(i, j));

        // Velocity correction.
        const double c = dt / rho;
        for (int i = 1; i < nx; ++i)
            for (int j = 0; j < ny; ++j)
                f.vx(i, j) -= c * (p(p_index(i, j)) - p(p_index(i - 1, j))) / dx;
        for (int j = 0; j < ny; ++j)  // outflow face, Dirichlet p = 0 beyond
            f.vx(nx, j) -= c * (-2.0 * p(p_index(nx - 1, j))) / dx;
        for (int i = 0; i < nx; ++i)
            for (int j = 1; j < ny; ++j)
                f.vy(i, j) -= c * (p(p_index(i, j)) - p(p_index(i, j - 1))) / dy;

        f.time += dt;

        const double res = wfmpc::divergence_residual(f);
        if (!(res <= divergence_tol_))
            throw SolverError("projection left divergence residual " + std::to_string(res) +
                              " above tolerance " + std::to_string(divergence_tol_));
        check_stability(f);
        return report;
    }

private:
    FarmLayout layout_;
    GridSpec grid_;
    double inflow_ = 0.0;
    double divergence_tol_ = 0.0;
    bool forcing_enabled_ = true;

    Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>> vx_solver_;
    Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>> vy_solver_;
    Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>> p_solver_;

    int vx_index(int i, int j) const { return (i - 1) * grid_.ny + j; }           // i in [1, nx]
    int vy_index(int i, int j) const { return i * (grid_.ny - 1) + (j - 1); }     // j in [1, ny-1]
    int p_index(int i, int j) const { return i * grid_.ny + j; }

    void check_stability(const FlowField& f) const {
        const double vmax = f.max_speed();
        if (!f.finite() || vmax > 5.0 * layout_.freestream)
            throw InstabilityError("blow-up detector tripped: max |v| = " + std::to_string(vmax));
        const double cfl = std::max(f.vx.cwiseAbs().maxCoeff() * layout_.dt / grid_.dx,
                                    f.vy.cwiseAbs().maxCoeff() * layout_.dt / grid_.dy);
        if (cfl > 1.0)
            throw InstabilityError("advective CFL = " + std::to_string(cfl) + " exceeds 1");
    }

    void apply_boundary(FlowField& f) const {
        f.vx.row(0).setConstant(inflow_);
        f.vy.col(0).setZero();
        f.vy.col(grid_.ny).setZero();
    }

    // --- matrix assembly -------------------------------------------------

    void build_vx_matrix() {
        const int nx = grid_.nx, ny = grid_.ny;
        const double ax = layout_.dt * layout_.nu_eff / (grid_.dx * grid_.dx);
        const double ay = layout_.dt * layout_.nu_eff / (grid_.dy * grid_.dy);
        std::vector<Eigen::Triplet<double>> trips;
        trips.reserve(static_cast<std::size_t>(nx) * ny * 5);
        for (int i = 1; i <= nx; ++i)
            for (int j = 0; j < ny; ++j) {
                const int r = vx_index(i, j);
                double diag = 1.0;
                // west: i-1 == 0 is the Dirichlet inflow face (folded to RHS)
                diag += ax;
                if (i - 1 >= 1) trips.emplace_back(r, vx_index(i - 1, j), -ax);
                // east: beyond i == nx the gradient is zero (ghost = self)
                if (i + 1 <= nx) {
                    diag += ax;
                    trips.emplace_back(r, vx_index(i + 1, j), -ax);
                }
                // free-slip walls: ghost = self
                if (j - 1 >= 0) {
                    diag += ay;
                    trips.emplace_back(r, vx_index(i, j - 1), -ay);
                }
                if (j + 1 < ny) {
                    diag += ay;
                    trips.emplace_back(r, vx_index(i, j + 1), -ay);
                }
                trips.emplace_back(r, r, diag);
            }
        Eigen::SparseMatrix<double> m(nx * ny, nx * ny);
        m.setFromTriplets(trips.begin(), trips.end());
        vx_solver_.compute(m);
        if (vx_solver_.info() != Eigen::Success)
            throw SolverError("factorization failed for the vx diffusion system");
    }

    void build_vy_matrix() {
        const int nx = grid_.nx, ny = grid_.ny;
        const double ax = layout_.dt * layout_.nu_eff / (grid_.dx * grid_.dx);
        const double ay = layout_.dt * layout_.nu_eff / (grid_.dy * grid_.dy);
        std::vector<Eigen::Triplet<double>> trips;
        trips.reserve(static_cast<std::size_t>(nx) * (ny - 1) * 5);
        for (int i = 0; i < nx; ++i)
            for (int j = 1; j < ny; ++j) {
                const int r = vy_index(i, j);
                double diag = 1.0;
                if (i - 1 >= 0) {
                    diag += ax;
                    trips.emplace_back(r, vy_index(i - 1, j), -ax);
                } else {
                    diag += 2.0 * ax;  // Dirichlet 0 at the inflow plane (ghost = -self)
                }
                if (i + 1 < nx) {
                    diag += ax;
                    trips.emplace_back(r, vy_index(i + 1, j), -ax);
                }
                // walls at j == 0 and j == ny carry vy = 0 (folded, zero contribution)
                diag += ay;
                if (j - 1 >= 1) trips.emplace_back(r, vy_index(i, j - 1), -ay);
                diag += ay;
                if (j + 1 <= ny - 1) trips.emplace_back(r, vy_index(i, j + 1), -ay);
                trips.emplace_back(r, r, diag);
            }
        Eigen::SparseMatrix<double> m(nx * (ny - 1), nx * (ny - 1));
        m.setFromTriplets(trips.begin(), trips.end());
        vy_solver_.compute(m);
        if (vy_solver_.info() != Eigen::Success)
            throw SolverError("factorization failed for the vy diffusion system");
    }

    void build_pressure_matrix() {
        const int nx = grid_.nx, ny = grid_.ny;
        const double ax = 1.0 / (grid_.dx * grid_.dx);
        const double ay = 1.0 / (grid_.dy * grid_.dy);
        std::vector<Eigen::Triplet<double>> trips;
        trips.reserve(static_cast<std::size_t>(nx) * ny * 5);
        for (int i = 0; i < nx; ++i)
            for (int j = 0; j < ny; ++j) {
                const int r = p_index(i, j);
                double diag = 0.0;
                if (i - 1 >= 0) {
                    diag += ax;
                    trips.emplace_back(r, p_index(i - 1, j), -ax);
                }
                if (i + 1 < nx) {
                    diag += ax;
                    trips.emplace_back(r, p_index(i + 1, j), -ax);
                } else {
                    diag += 2.0 * ax;  // Dirichlet p = 0 at the outflow face
                }
                if (j - 1 >= 0) {
                    diag += ay;
                    trips.emplace_back(r, p_index(i, j - 1), -ay);
                }
                if (j + 1 < ny) {
                    diag += ay;
                    trips.emplace_back(r, p_index(i, j + 1), -ay);
                }
                trips.emplace_back(r, r, diag);
            }
        Eigen::SparseMatrix<double> m(nx * ny, nx * ny);
        m.setFromTriplets(trips.begin(), trips.end());
        p_solver_.compute(m);
        if (p_solver_.info() != Eigen::Success)
            throw SolverError("factorization failed for the pressure Poisson system");
    }

    // --- turbine forcing --------------------------------------------------

    // Distributes the thrust of one rotor over the cells its line crosses,
    // with a one-cell Gaussian smoothing; cell values are body-force
    // densities so that sum(f_c * dx * dy) equals magnitude * D.
    void deposit_force(const TurbineSpec& t, double yaw_deg, double disk_velocity,
                       double ct_prime, Eigen::MatrixXd& fx, Eigen::MatrixXd& fy) const {
        const ThrustForce tf = thrust_force(disk_velocity, ct_prime, yaw_deg, layout_.rho);
        const auto pts = detail::rotor_samples(t, yaw_deg);
        const double w_sample = t.rotor_diameter / static_cast<double>(pts.size());

        // local patch around the rotor
        const int pad = 6;
        int i_lo = grid_.nx, i_hi = 0, j_lo = grid_.ny, j_hi = 0;
        for (const auto& [x, y] : pts) {
            i_lo = std::min(i_lo, static_cast<int>(std::floor(x / grid_.dx)));
            i_hi = std::max(i_hi, static_cast<int>(std::floor(x / grid_.dx)));
            j_lo = std::min(j_lo, static_cast<int>(std::floor(y / grid_.dy)));
            j_hi = std::max(j_hi, static_cast<int>(std::floor(y / grid_.dy)));
        }
        i_lo = std::max(0, i_lo - pad);
        j_lo = std::max(0, j_lo - pad);
        i_hi = std::min(grid_.nx - 1, i_hi + pad);
        j_hi = std::min(grid_.ny - 1, j_hi + pad);
        const int pw = i_hi - i_lo + 1, ph = j_hi - j_lo + 1;

        Eigen::MatrixXd raw = Eigen::MatrixXd::Zero(pw, ph);
        for (const auto& [x, y] : pts) {
            const double fxi = x / grid_.dx - 0.5 - i_lo;
            const double fyj = y / grid_.dy - 0.5 - j_lo;
            const int i0 = static_cast<int>(std::floor(fxi));
            const int j0 = static_cast<int>(std::floor(fyj));
            const double axw = fxi - i0, ayw = fyj - j0;
            for (int di = 0; di <= 1; ++di)
                for (int dj = 0; dj <= 1; ++dj) {
                    const int ii = i0 + di, jj = j0 + dj;
                    if (ii < 0 || ii >= pw || jj < 0 || jj >= ph) continue;
                    const double w = (di ? axw : 1 - axw) * (dj ? ayw : 1 - ayw);
                    raw(ii, jj) += w_sample * w;
                }
        }

        // separable one-cell Gaussian
        static constexpr int kHalf = 3;
        double kern[2 * kHalf + 1];
        double ksum = 0.0;
        for (int k = -kHalf; k <= kHalf; ++k) {
            kern[k + kHalf] = std::exp(-0.5 * k * k);
            ksum += kern[k + kHalf];
        }
        for (double& k : kern) k /= ksum;

        Eigen::MatrixXd tmp = Eigen::MatrixXd::Zero(pw, ph);
        for (int i = 0; i < pw; ++i)
            for (int j = 0; j < ph; ++j) {
                if (raw(i, j) == 0.0) continue;
                for (int k = -kHalf; k <= kHalf; ++k) {
                    const int ii = std::clamp(i + k, 0, pw - 1);
                    tmp(ii, j) += raw(i, j) * kern[k + kHalf];
                }
            }
        Eigen::MatrixXd smooth = Eigen::MatrixXd::Zero(pw, ph);
        for (int i = 0; i < pw; ++i)
            for (int j = 0; j < ph; ++j) {
                if (tmp(i, j) == 0.0) continue;
                for (int k = -kHalf; k <= kHalf; ++k) {
                    const int jj = std::clamp(j + k, 0, ph - 1);
                    smooth(i, jj) += tmp(i, j) * kern[k + kHalf];
                }
            }

        const double cell_area = grid_.dx * grid_.dy;
        for (int i = 0; i < pw; ++i)
            for (int j = 0; j < ph; ++j) {
                if (smooth(i, j) == 0.0) continue;
                const double density = tf.magnitude * smooth(i, j) / cell_area;
                fx(i_lo + i, j_lo + j) += density * tf.dir_x;
                fy(i_lo + i, j_lo + j) += density * tf.dir_y;
            }
    }

    // --- advection ---------------------------------------------------------

    // d(vx)/dt advective term at vx faces i in [1, nx]; second-order upwind
    // with first-order fallback next to boundaries.
    Eigen::MatrixXd advect_vx(const FlowField& f) const {
        const int nx = grid_.nx, ny = grid_.ny;
        Eigen::MatrixXd adv(nx, ny);
        const auto vx_at = [&](int i, int j) {
            i = std::clamp(i, 0, nx);          // east ghost: zero gradient
            j = std::clamp(j, 0, ny - 1);      // free-slip ghost: mirror
            return f.vx(i, j);
        };
        for (int i = 1; i <= nx; ++i)
            for (int j = 0; j < ny; ++j) {
                const double u = f.vx(i, j);
                const int im = std::min(i, nx - 1);  // vy columns adjacent to face i
                const double v = 0.25 * (f.vy(std::max(im - 1, 0), j) + f.vy(std::max(im - 1, 0), j + 1) +
                                         f.vy(im, j) + f.vy(im, j + 1));
                double dudx;
                if (u >= 0) {
                    dudx = (i >= 2) ? (3 * vx_at(i, j) - 4 * vx_at(i - 1, j) + vx_at(i - 2, j)) / (2 * grid_.dx)
                                    : (vx_at(i, j) - vx_at(i - 1, j)) / grid_.dx;
                } else {
                    dudx = (i + 2 <= nx) ? (-3 * vx_at(i, j) + 4 * vx_at(i + 1, j) - vx_at(i + 2, j)) / (2 * grid_.dx)
                                         : (vx_at(i + 1, j) - vx_at(i, j)) / grid_.dx;
                }
                double dudy;
                if (v >= 0) {
                    dudy = (j >= 2) ? (3 * vx_at(i, j) - 4 * vx_at(i, j - 1) + vx_at(i, j - 2)) / (2 * grid_.dy)
                                    : (vx_at(i, j) - vx_at(i, j - 1)) / grid_.dy;
                } else {
                    dudy = (j + 2 <= ny - 1) ? (-3 * vx_at(i, j) + 4 * vx_at(i, j + 1) - vx_at(i, j + 2)) / (2 * grid_.dy)
                                             : (vx_at(i, j + 1) - vx_at(i, j)) / grid_.dy;
                }
                adv(i - 1, j) = u * dudx + v * dudy;
            }
        return adv;
    }

    // d(vy)/dt advective term at vy faces j in [1, ny-1].
    Eigen::MatrixXd advect_vy(const FlowField& f) const {
        const int nx = grid_.nx, ny = grid_.ny;
        Eigen::MatrixXd adv(nx, ny - 1);
        const auto vy_at = [&](int i, int j) {
            j = std::clamp(j, 0, ny);  // walls hold vy = 0 at j = 0 and j = ny
            if (i < 0) return -f.vy(0, j);      // Dirichlet 0 at the inflow plane
            if (i > nx - 1) return f.vy(nx - 1, j);  // zero-gradient outflow
            return f.vy(i, j);
        };
        for (int i = 0; i < nx; ++i)
            for (int j = 1; j < ny; ++j) {
                const double v = f.vy(i, j);
                const double u = 0.25 * (f.vx(i, j - 1) + f.vx(i, j) +
                                         f.vx(i + 1, j - 1) + f.vx(i + 1, j));
                double dvdx;
                if (u >= 0) {
                    dvdx = (i >= 2) ? (3 * vy_at(i, j) - 4 * vy_at(i - 1, j) + vy_at(i - 2, j)) / (2 * grid_.dx)
                                    : (vy_at(i, j) - vy_at(i - 1, j)) / grid_.dx;
                } else {
                    dvdx = (i + 2 <= nx - 1) ? (-3 * vy_at(i, j) + 4 * vy_at(i + 1, j) - vy_at(i + 2, j)) / (2 * grid_.dx)
                                             : (vy_at(i + 1, j) - vy_at(i, j)) / grid_.dx;
                }
                double dvdy;
                if (v >= 0) {
                    dvdy = (j >= 2) ? (3 * vy_at(i, j) - 4 * vy_at(i, j - 1) + vy_at(i, j - 2)) / (2 * grid_.dy)
                                    : (vy_at(i, j) - vy_at(i, j - 1)) / grid_.dy;
                } else {
                    dvdy = (j + 2 <= ny) ? (-3 * vy_at(i, j) + 4 * vy_at(i, j + 1) - vy_at(i, j + 2)) / (2 * grid_.dy)
                                         : (vy_at(i, j + 1) - vy_at(i, j)) / grid_.dy;
                }
                adv(i, j - 1) = u * dvdx + v * dvdy;
            }
        return adv;
    }
};

}  // namespace wfmpc
