#pragma once

#include <array>
#include <vector>

#include <Eigen/Core>

#include "geo/vecjet.hpp"

namespace geo {

struct TorsionField;

/// g_ij = X_i . X_j, its inverse, and W = sqrt(det g).
struct FundamentalForm {
    Eigen::Matrix2d g;
    Eigen::Matrix2d g_inv;
    double W = 0.0;
};

/// Throws RegularityError if det g <= eps_reg^2.
FundamentalForm first_fundamental_form(const VecJet& X);

/// Orthonormal normal sections N_1 ... N_{n-2}, each carried as a jet
/// vector (2-jets when X is a 3-jet).
struct NormalFrame {
    std::vector<VecJet> normals;
    /// Ambient basis index (0-based) each normal was seeded from.
    std::vector<int> seeds;

    std::size_t size() const { return normals.size(); }
    const VecJet& operator[](std::size_t k) const { return normals[k]; }
};

/// Gram-Schmidt over the seeds e_3, ..., e_n, e_1, e_2, each projected off
/// span{X_u, X_v} and the previously accepted normals, all in jet
/// arithmetic. Seeds whose remainder has squared norm < 1e-8 W are skipped.
/// Throws RegularityError / FrameDegeneracyError.
NormalFrame normal_frame(const VecJet& X);

/// Second fundamental form and curvatures along one normal section.
struct SectionData {
    int index = 0;  ///< 1-based section index
    Eigen::Matrix2d L;
    double H = 0.0;
    double K = 0.0;
    std::array<double, 2> kappa{};  ///< kappa[0] >= kappa[1]
};

/// L_ij = X_ij . N; H, K and the principal curvatures from g^-1 L.
std::vector<SectionData> second_fundamental_form(const VecJet& X, const NormalFrame& frame);
SectionData section_data(const VecJet& X, const VecJet& normal, const FundamentalForm& fff, int index);

/// N = X_u x X_v / |X_u x X_v| with its first derivatives.
struct UnitNormalR3 {
    Eigen::Vector3d N;
    Eigen::Vector3d N_u;
    Eigen::Vector3d N_v;

    double gradient_norm_sq() const { return N_u.squaredNorm() + N_v.squaredNorm(); }
};

/// Throws DimensionError unless n == 3.
UnitNormalR3 unit_normal_r3(const VecJet& X);

/// max over sections and directions of |N_i + L_ij g^jk X_k - sigma_i^Om N_Om|.
double weingarten_residual(const VecJet& X, const NormalFrame& frame, const TorsionField& sigma);

/// Largest |N_S . N_O - delta| and |N_S . X_i| / sqrt(W) in the frame.
struct FrameDeviation {
    double orthonormality = 0.0;
    double tangency = 0.0;
};
FrameDeviation frame_deviation(const VecJet& X, const NormalFrame& frame);

}  // namespace geo
