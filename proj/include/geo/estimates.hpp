#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Core>

#include "geo/expr.hpp"
#include "geo/immersion.hpp"

namespace geo {

/// Vector field HH: R^4 -> R^4 defining the direction-dependent mean
/// curvature H(X, Z) = HH(X) . Z, with declared (not estimated) constants.
class MeanCurvatureField {
public:
    /// Components are expressions in x1, x2, x3, x4.
    static MeanCurvatureField from_expressions(const std::array<std::string, 4>& components, double h0 = 0.0,
                                               double h1 = 0.0, double h2 = 0.0, double alpha = 1.0);
    static MeanCurvatureField zero();

    Eigen::Vector4d operator()(const Eigen::Vector4d& X) const;
    double H(const Eigen::Vector4d& X, const Eigen::Vector4d& Z) const { return (*this)(X).dot(Z); }

    const std::array<std::string, 4>& sources() const { return sources_; }
    double h0() const { return h0_; }
    double h1() const { return h1_; }
    double h2() const { return h2_; }
    double alpha() const { return alpha_; }

private:
    std::array<std::string, 4> sources_;
    std::vector<Expr> exprs_;
    double h0_ = 0.0, h1_ = 0.0, h2_ = 0.0, alpha_ = 1.0;
};

/// {"components": [4 strings], "h0", "h1", "h2", "alpha"}. Throws SpecError.
MeanCurvatureField load_mean_curvature_field(std::string_view document);

/// (kappa_1^2 + kappa_2^2)(0,0) R^2 for a surface in R^3 that is conformal
/// at the origin, next to the gradient bound |grad N(0,0)|^2 / W(0,0) R^2.
struct HeinzQuantity {
    double R = 0.0;
    double quantity = 0.0;
    double bound = 0.0;
    std::array<double, 2> kappa{};
    double W = 0.0;
    double conformality_defect = 0.0;
};

/// Throws DimensionError (n != 3) or ConformalityError (defect > 1e-8 at 0).
HeinzQuantity heinz_quantity_r3(const SurfaceSpec& spec, double R);

/// |K_S(0,0)| R^4 / ||X||^2_{C0(B_R)} per normal section, with the sup norm
/// taken over the masked grid on B_R.
struct KnQuantity {
    double R = 0.0;
    double sup_norm = 0.0;
    std::vector<double> K;
    std::vector<double> quantity;
    /// (|X_uu||X_vv| + |X_uv|^2)(0,0) / W(0,0)^2 and the same scaled by R^4/||X||^2.
    double pointwise_bound = 0.0;
    double scaled_bound = 0.0;
    /// |X_uu + X_vv| at the origin.
    double harmonicity_residual = 0.0;
};

KnQuantity kn_quantity_rn(const SurfaceSpec& spec, double R, int nodes = 129);

/// Sup of |X| over the masked grid on B_R.
double sup_norm(const SurfaceSpec& spec, double R, int nodes = 129);

/// Least-squares fit of log ||X||_{C0(B_R)} = log Omega + eps log R.
struct GrowthFit {
    std::vector<double> R;
    std::vector<double> sup_norm;
    double epsilon = 0.0;
    double omega = 0.0;
    bool degenerate = false;
};

/// Needs >= 3 distinct positive R. Throws ConfigError.
GrowthFit growth_exponent_fit(const SurfaceSpec& spec, std::span<const double> R_values, int nodes = 129);

/// Residual of  Delta X = 2 H(X, N_1) W N_1 + 2 H(X, N_2) W N_2.
struct PmcReport {
    int points = 0;
    double max_residual = 0.0;
    double argmax_u = 0.0;
    double argmax_v = 0.0;
    double max_conformality_defect = 0.0;
};

inline constexpr double kPmcConformalTolerance = 1e-6;

/// Throws DimensionError (n != 4) or ConformalityError (defect > 1e-6).
PmcReport pmc_residual(const SurfaceSpec& spec, const MeanCurvatureField& field, int nodes = 65);

/// max |Delta X| / |grad X|^2 against 2 h0.
struct StructureReport {
    double h0 = 0.0;
    double max_ratio = 0.0;
    double argmax_u = 0.0;
    double argmax_v = 0.0;
    bool pass = false;
};

StructureReport structure_constant_check(const SurfaceSpec& spec, double h0, int nodes = 65);

/// Smallest angle between a unit normal and the x1 axis.
///
/// Per section the angle is arccos |N_S . e_1| (gauge dependent). The
/// combined angle sweeps every unit normal of the normal plane, which is
/// arccos |P_normal e_1| and does not depend on the frame.
struct OssermanReport {
    std::vector<double> min_angle_per_section;
    double min_angle = 0.0;
    double argmin_u = 0.0;
    double argmin_v = 0.0;
    double sin_omega = 0.0;
};

OssermanReport osserman_angle(const SurfaceSpec& spec, int nodes = 65);

/// Dirichlet energy by the midpoint rule on a polar grid of the parameter
/// disc, and the shortest of 64 radial curves as an upper bound for the
/// geodesic radius.
struct EnergyReport {
    double energy = 0.0;
    double r_upper = 0.0;
    double d0_estimate = 0.0;
    double argmin_theta = 0.0;
    int radial_cells = 0;
    int angular_cells = 0;
};

EnergyReport dirichlet_energy_and_geodesic_radius(const SurfaceSpec& spec, int nodes = 129);

/// Randomized falsification of
///   |H(X1,Z1) - H(X2,Z2)| <= h1 |X1 - X2|^alpha + h2 |Z1 - Z2|.
struct HolderReport {
    int pairs = 0;
    double max_ratio = 0.0;
    bool pass = true;
    std::array<Eigen::Vector4d, 4> witness{};  ///< X1, Z1, X2, Z2 of the worst pair
};

HolderReport holder_field_check(const MeanCurvatureField& field, int pairs = 1000, double box = 1.0,
                                std::uint64_t seed = 20040601);

}  // namespace geo
