#pragma once

#include <Eigen/Dense>
#include <string>
#include <vector>

#include "wfmpc/common.hpp"

namespace wfmpc {

struct TurbineSpec {
    double x = 0.0;               // rotor center, m
    double y = 0.0;               // rotor center, m
    double rotor_diameter = 126.0;  // m
    double ct_min = 0.1;          // disk-based thrust coefficient bounds
    double ct_max = 2.0;
    double yaw_limit_deg = 25.0;  // symmetric bound, degrees
    double ct_ramp = 0.2;         // per second
    double yaw_ramp_deg = 0.3;    // degrees per second

    double rotor_area() const {
        const double r = 0.5 * rotor_diameter;
        return kPi * r * r;
    }
};

struct FarmLayout {
    std::vector<TurbineSpec> turbines;
    double lx = 3000.0;  // domain size, m
    double ly = 1500.0;
    int nx = 60;         // grid cells
    int ny = 30;
    double dt = 1.0;     // s
    double rho = 1.2;    // kg/m^3
    double nu_eff = 12.0;  // effective kinematic viscosity, m^2/s
    double freestream = 8.0;  // inflow speed, m/s
    double cp_loss = 0.9;     // c_p loss factor

    int turbine_count() const { return static_cast<int>(turbines.size()); }
    int control_dim() const { return 2 * turbine_count(); }
    double dx() const { return lx / nx; }
    double dy() const { return ly / ny; }

    // Throws ConfigError naming the first violated invariant.
    void validate() const {
        if (nx < 4 || ny < 4)
            throw ConfigError("layout: grid must be at least 4x4 cells, got " +
                              std::to_string(nx) + "x" + std::to_string(ny));
        if (lx <= 0 || ly <= 0) throw ConfigError("layout: domain size must be positive");
        if (dt <= 0) throw ConfigError("layout: dt must be positive");
        if (rho <= 0) throw ConfigError("layout: rho must be positive");
        if (nu_eff <= 0) throw ConfigError("layout: nu_eff must be positive");
        if (freestream <= 0) throw ConfigError("layout: freestream must be positive");
        if (turbines.empty()) throw ConfigError("layout: at least one turbine required");
        for (std::size_t i = 0; i < turbines.size(); ++i) {
            const auto& t = turbines[i];
            const std::string tag = "turbine " + std::to_string(i + 1);
            if (t.rotor_diameter <= 0)
                throw ConfigError(tag + ": rotor diameter must be positive");
            if (!(t.ct_min > 0.0 && t.ct_max <= 2.5 && t.ct_min < t.ct_max))
                throw ConfigError(tag + ": ct bounds must satisfy 0 < ct_min < ct_max <= 2.5");
            if (t.yaw_limit_deg <= 0)
                throw ConfigError(tag + ": yaw bound must be positive (symmetric about 0)");
            if (t.ct_ramp <= 0 || t.yaw_ramp_deg <= 0)
                throw ConfigError(tag + ": ramp limits must be strictly positive");
            const double d = t.rotor_diameter;
            // rotor disk strictly inside the domain, >= 1D lateral margin
            if (t.x - 0.5 * d <= 0 || t.x + 0.5 * d >= lx)
                throw ConfigError(tag + ": rotor disk crosses a streamwise boundary");
            if (t.y - 0.5 * d < d || t.y + 0.5 * d > ly - d)
                throw ConfigError(tag + ": rotor disk needs >= 1D margin to lateral boundaries");
            if (dx() >= d || dy() >= d)
                throw ConfigError(tag + ": cell size must be smaller than the rotor diameter");
            if (d / dy() < 2.0)
                throw ConfigError(tag + ": rotor must span at least 2 cells in the spanwise direction");
        }
    }
};

// Per-turbine (ct_prime, yaw_deg) pairs; flattened layout matches
// u = [ct_1, yaw_1, ct_2, yaw_2, ...].
struct ControlVector {
    Eigen::VectorXd ct;       // dimensionless
    Eigen::VectorXd yaw_deg;  // degrees

    ControlVector() = default;
    explicit ControlVector(int n) : ct(Eigen::VectorXd::Zero(n)), yaw_deg(Eigen::VectorXd::Zero(n)) {}

    int turbine_count() const { return static_cast<int>(ct.size()); }

    Eigen::VectorXd flat() const {
        Eigen::VectorXd u(2 * ct.size());
        for (int i = 0; i < ct.size(); ++i) {
            u(2 * i) = ct(i);
            u(2 * i + 1) = yaw_deg(i);
        }
        return u;
    }

    static ControlVector from_flat(const Eigen::VectorXd& u) {
        if (u.size() % 2 != 0) throw ConfigError("control vector length must be 2N");
        ControlVector c(static_cast<int>(u.size() / 2));
        for (int i = 0; i < c.ct.size(); ++i) {
            c.ct(i) = u(2 * i);
            c.yaw_deg(i) = u(2 * i + 1);
        }
        return c;
    }

    static ControlVector greedy(const FarmLayout& layout) {
        ControlVector c(layout.turbine_count());
        for (int i = 0; i < c.ct.size(); ++i) c.ct(i) = layout.turbines[i].ct_max;
        c.yaw_deg.setZero();
        return c;
    }
};

inline void check_within_bounds(const ControlVector& u, const FarmLayout& layout, double tol = 1e-9) {
    if (u.turbine_count() != layout.turbine_count())
        throw ConfigError("control vector size does not match turbine count");
    for (int i = 0; i < u.turbine_count(); ++i) {
        const auto& t = layout.turbines[i];
        if (u.ct(i) < t.ct_min - tol || u.ct(i) > t.ct_max + tol)
            throw ConfigError("ct out of bounds for turbine " + std::to_string(i + 1));
        if (std::abs(u.yaw_deg(i)) > t.yaw_limit_deg + tol)
            throw ConfigError("yaw out of bounds for turbine " + std::to_string(i + 1));
    }
}

// Maps between raw control units and the per-channel normalized [-1, 1]
// coordinates used by the ROM, the excitation generator, and the MPC.
struct ControlNormalizer {
    Eigen::VectorXd lo;  // flat layout, size 2N
    Eigen::VectorXd hi;

    ControlNormalizer() = default;

    explicit ControlNormalizer(const FarmLayout& layout) {
        const int n = layout.turbine_count();
        lo.resize(2 * n);
        hi.resize(2 * n);
        for (int i = 0; i < n; ++i) {
            lo(2 * i) = layout.turbines[i].ct_min;
            hi(2 * i) = layout.turbines[i].ct_max;
            lo(2 * i + 1) = -layout.turbines[i].yaw_limit_deg;
            hi(2 * i + 1) = layout.turbines[i].yaw_limit_deg;
        }
    }

    int dim() const { return static_cast<int>(lo.size()); }

    Eigen::VectorXd normalize(const Eigen::VectorXd& u) const {
        return (2.0 * (u - lo).array() / (hi - lo).array() - 1.0).matrix();
    }
    Eigen::VectorXd denormalize(const Eigen::VectorXd& n) const {
        return (lo.array() + 0.5 * (n.array() + 1.0) * (hi - lo).array()).matrix();
    }
    // Per-step ramp limits expressed in normalized units.
    Eigen::VectorXd ramp_normalized(const FarmLayout& layout) const {
        Eigen::VectorXd r(dim());
        for (int i = 0; i < layout.turbine_count(); ++i) {
            const auto& t = layout.turbines[i];
            r(2 * i) = 2.0 * t.ct_ramp * layout.dt / (t.ct_max - t.ct_min);
            r(2 * i + 1) = 2.0 * t.yaw_ramp_deg * layout.dt / (2.0 * t.yaw_limit_deg);
        }
        return r;
    }
};

}  // namespace wfmpc
