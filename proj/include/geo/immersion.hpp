#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Core>

#include "geo/expr.hpp"
#include "geo/grid.hpp"
#include "geo/vecjet.hpp"

namespace geo {

/// W must exceed this for a point to count as regular.
inline constexpr double kRegularityEps = 1e-10;

/// Conformal-only operations refuse when the defect exceeds this.
inline constexpr double kConformalTolerance = 1e-8;

enum class SurfaceKind { builtin, graph, parametric };

/// Catalog surfaces. Each is implemented with closed-form derivatives,
/// independent of the expression pipeline.
enum class Builtin {
    plane,     ///< (u, v, 0, ..., 0) in R^n
    w2,        ///< (w, w^2): (u, v, u^2 - v^2, 2uv)
    z3,        ///< (z, z^3): (u, v, u^3 - 3uv^2, 3u^2 v - v^3)
    clifford,  ///< (cos u, sin u, cos v, sin v) / sqrt 2
    sphere,    ///< (cos u cos v, sin u cos v, sin v, 0)
    enneper,   ///< (u - u^3/3 + uv^2, -v + v^3/3 - u^2 v, u^2 - v^2)
    saddle,    ///< graph (x, y, xy) in R^3
};

const char* builtin_name(Builtin id);
std::optional<Builtin> builtin_from_name(std::string_view name);

/// An immersion X: B_rho -> R^n.
///
/// Besides the three kinds, a spec carries a dilation factor lambda
/// (default 1): the evaluated map is lambda X(u/lambda, v/lambda) on the
/// disc of radius lambda rho.
class SurfaceSpec {
public:
    static SurfaceSpec builtin(Builtin id, int n = 0, double radius = 1.0);
    /// Graph (x, y, phi_1, ..., phi_{n-2}); expressions in x, y.
    static SurfaceSpec graph(std::string name, std::vector<std::string> phis, double radius = 1.0);
    /// n component expressions in u, v.
    static SurfaceSpec parametric(std::string name, std::vector<std::string> components, double radius = 1.0);

    const std::string& name() const { return name_; }
    int n() const { return n_; }
    SurfaceKind kind() const { return kind_; }
    std::optional<Builtin> builtin_id() const { return builtin_; }
    const std::vector<std::string>& component_sources() const { return sources_; }
    double radius() const { return radius_; }
    double scale() const { return scale_; }

    SurfaceSpec with_radius(double radius) const;
    SurfaceSpec with_name(std::string name) const;
    /// (X, rho) -> (lambda X(./lambda), lambda rho).
    SurfaceSpec dilated(double lambda) const;

    bool contains(double u, double v) const { return in_disc(u, v, radius_); }

    /// n-component 3-jet of X at (u, v). Throws OutOfDomainError.
    VecJet evaluate_jet3(double u, double v) const;

    /// Plain value of X, evaluated without jets.
    Eigen::VectorXd evaluate_point(double u, double v) const;

private:
    SurfaceSpec() = default;
    void check_domain(double u, double v) const;
    VecJet evaluate_unscaled(double u, double v) const;

    std::string name_;
    int n_ = 0;
    SurfaceKind kind_ = SurfaceKind::builtin;
    std::optional<Builtin> builtin_;
    std::vector<std::string> sources_;
    std::vector<Expr> exprs_;
    double radius_ = 1.0;
    double scale_ = 1.0;
};

/// Parses a JSON surface document:
///   {"name", "n", "kind": "builtin"|"graph"|"parametric", "id", "params",
///    "components": [...], "radius", "scale"}
/// Throws SpecError (schema or expression problems).
SurfaceSpec load_surface_spec(std::string_view document);
SurfaceSpec load_surface_spec_file(const std::string& path);

/// Serializes back to the document form.
std::string surface_spec_to_json(const SurfaceSpec& spec);

/// max(| |X_u|^2 - |X_v|^2 |, |X_u . X_v|) / max(W, eps_reg).
/// Throws RegularityError if W <= eps_reg.
double conformality_defect(const SurfaceSpec& spec, double u, double v);
double conformality_defect(const VecJet& X);

struct RegularityReport {
    bool regular = true;
    double min_W = 0.0;
    double argmin_u = 0.0;
    double argmin_v = 0.0;
    int samples = 0;
    int failures = 0;
    double max_conformality_defect = 0.0;
    double mean_conformality_defect = 0.0;
};

/// Samples the masked grid; failures are reported, not thrown.
RegularityReport regularity_check(const SurfaceSpec& spec, int grid_nodes);

/// The builtin catalog with the domain radius each entry is documented on.
std::vector<SurfaceSpec> catalog();

}  // namespace geo
