#pragma once

#include <array>
#include <optional>
#include <span>
#include <vector>

#include <Eigen/Core>

#include "geo/expr.hpp"
#include "geo/geometry.hpp"
#include "geo/grid.hpp"
#include "geo/immersion.hpp"

namespace geo {

/// sigma_{S,i}^O = N_{S,u^i} . N_O for every pair of sections, as jets one
/// order below the frame (1-jets for a frame built from a 3-jet).
/// Indices are 0-based: (s, o, i) is sigma_{s+1, i+1}^{o+1}.
struct TorsionField {
    std::size_t sections = 0;
    std::vector<Jet> entries;

    const Jet& operator()(std::size_t s, std::size_t o, int i) const {
        return entries[(s * sections + o) * 2 + static_cast<std::size_t>(i)];
    }
    Jet& operator()(std::size_t s, std::size_t o, int i) {
        return entries[(s * sections + o) * 2 + static_cast<std::size_t>(i)];
    }

    /// max |sigma_{S,i}^O + sigma_{O,i}^S| over all values.
    double antisymmetry_defect() const;
};

TorsionField torsion_coefficients(const NormalFrame& frame);

inline constexpr double kFlatTolerance = 1e-6;

/// Curvature tensor of the normal bundle for two normal sections.
/// S(s, o, i, j) is S_{s+1, (i+1)(j+1)}^{o+1}.
struct NormalCurvature {
    std::array<double, 16> S{};
    double max_abs = 0.0;
    bool flat = true;

    double operator()(int s, int o, int i, int j) const { return S[static_cast<std::size_t>(((s * 2 + o) * 2 + i) * 2 + j)]; }
    double S_1_12_2() const { return (*this)(0, 1, 0, 1); }
    double S_2_12_1() const { return (*this)(1, 0, 0, 1); }
};

/// S_{S,ij}^O = d_j sigma_{S,i}^O - d_i sigma_{S,j}^O
///            + sigma_{S,i}^T sigma_{T,j}^O - sigma_{S,j}^T sigma_{T,i}^O.
/// Requires exactly two sections carrying first derivatives.
NormalCurvature normal_curvature_tensor(const TorsionField& sigma, double tol_flat = kFlatTolerance);

/// Right-hand side of the Ricci equations, rhs(s, o) =
/// (L_{s,1j} L_{o,k2} - L_{s,2j} L_{o,k1}) g^jk, and max |S_12 - rhs|.
struct RicciCheck {
    Eigen::Matrix2d rhs;
    double residual = 0.0;
};

RicciCheck ricci_residual(const NormalCurvature& S, std::span<const SectionData> sections, const Eigen::Matrix2d& g_inv);

/// N~_1 = cos(phi) N_1 + sin(phi) N_2,  N~_2 = sin(phi) N_1 - cos(phi) N_2.
/// This is a reflection composed with a rotation (determinant -1).
NormalFrame rotate_frame(const NormalFrame& frame, const Jet& phi);

struct TorsionSample {
    TorsionField before;
    TorsionField after;
    Jet phi;
};

/// Fitted s in {+1, -1} minimizing max_i |sigma~_{1,i}^2 - s (sigma_{1,i}^2 + phi_{u^i})|
/// over all samples, and the residual at that s.
struct TorsionTransformFit {
    int sign = 1;
    double residual = 0.0;
};

TorsionTransformFit torsion_transform_check(std::span<const TorsionSample> samples);
TorsionTransformFit torsion_transform_check(const TorsionField& before, const TorsionField& after, const Jet& phi);

/// Everything computed at one parameter point.
struct PointAnalysis {
    VecJet X;
    FundamentalForm fff;
    double conformality_defect = 0.0;
    NormalFrame frame;
    FrameDeviation frame_deviation;
    std::vector<SectionData> sections;
    TorsionField sigma;
    double weingarten_residual = 0.0;
    /// n = 4 only.
    std::optional<NormalCurvature> curvature;
    std::optional<RicciCheck> ricci;
    /// d_v sigma_{1,1}^2 - d_u sigma_{1,2}^2 (n = 4 only).
    std::optional<double> integrability_residual;
};

/// `gauge`, when given, is an angle field phi(u, v) applied to the
/// Gram-Schmidt frame with rotate_frame.
PointAnalysis analyze_point(const SurfaceSpec& spec, double u, double v, const std::optional<Expr>& gauge = {},
                            double tol_flat = kFlatTolerance);

struct CurvatureRecord {
    double u = 0.0;
    double v = 0.0;
    double S_1_12_2 = 0.0;
    double S_2_12_1 = 0.0;
    double max_abs_S = 0.0;
    double ricci_residual = 0.0;
};

struct FlatnessOptions {
    int nodes = 65;
    double tol_flat = kFlatTolerance;
    std::optional<Expr> gauge;
};

struct FlatnessReport {
    bool flat = true;
    double tol_flat = kFlatTolerance;
    int points = 0;
    double max_S = 0.0;
    double argmax_u = 0.0;
    double argmax_v = 0.0;
    double mean_abs_S = 0.0;
    double max_ricci_residual = 0.0;
    /// max |S_1_12^2 - (d_v sigma_{1,1}^2 - d_u sigma_{1,2}^2)|.
    double max_integrability_identity_defect = 0.0;
    double max_torsion_antisymmetry = 0.0;
    double max_curvature_antisymmetry = 0.0;
    /// max |S_{1,ij}^1|, |S_{2,ij}^2|.
    double max_same_section_S = 0.0;
    std::vector<CurvatureRecord> records;
};

/// Requires n = 4. S comes from exact torsion jets; the Ricci right-hand
/// side is evaluated at every point as an independent cross-check.
FlatnessReport flatness_test(const SurfaceSpec& spec, const FlatnessOptions& options = {});

struct SynthesisOptions {
    int nodes = 33;
    std::optional<Expr> gauge;
    /// <= 0 selects max(1e-6, 4 h^2 diam).
    double tol_sync = 0.0;
};

/// Per-node fields on the synthesis grid; NaN outside the disc.
struct RotationField {
    Grid grid{3, 1.0};
    std::vector<double> phi;
    std::vector<double> phi_u;
    std::vector<double> phi_v;
    /// Same integration with the column-first staircase.
    std::vector<double> phi_column_first;
    std::vector<double> integrability;
    std::vector<double> transformed_torsion;
};

struct SynthesisResult {
    bool success = false;
    double tol_sync = 0.0;
    double max_transformed_torsion = 0.0;
    double max_integrability_residual = 0.0;
    double origin_integrability_residual = 0.0;
    double max_path_difference = 0.0;
    TorsionTransformFit transform_fit;
    RotationField field;
};

double sync_tolerance(double spacing, double diameter);

/// Integrates phi_u = -sigma_{1,1}^2, phi_v = -sigma_{1,2}^2 from the grid
/// center along row-first staircases (trapezoidal rule), rotates the frame
/// by phi and measures the remaining sigma~_{1,i}^2.
/// Throws DimensionError (n != 4) or GridError (no center node).
SynthesisResult synthesize_torsion_free(const SurfaceSpec& spec, const SynthesisOptions& options = {});

}  // namespace geo
