#include "geo/report.hpp"

#include <cmath>
#include <sstream>

#include "geo/expr.hpp"
#include "geo/parallel.hpp"

namespace geo {

namespace {

Json vec(const Eigen::VectorXd& x) {
    Json a = Json::array();
    for (Eigen::Index k = 0; k < x.size(); ++k) a.push_back(x(k));
    return a;
}

Json mat(const Eigen::Matrix2d& m) { return Json::array({{m(0, 0), m(0, 1)}, {m(1, 0), m(1, 1)}}); }

Json jet_json(const Jet& j) {
    Json a = Json::array();
    const std::size_t count = Jet::index(j.order() + 1, 0);
    for (std::size_t k = 0; k < count; ++k) a.push_back(j[k]);
    return a;
}

const char* kind_name(SurfaceKind k) {
    switch (k) {
        case SurfaceKind::builtin: return "builtin";
        case SurfaceKind::graph: return "graph";
        case SurfaceKind::parametric: return "parametric";
    }
    return "?";
}

}  // namespace

Json to_json(const SurfaceSpec& spec) {
    Json j;
    j["name"] = spec.name();
    j["n"] = spec.n();
    j["kind"] = kind_name(spec.kind());
    if (spec.builtin_id()) j["id"] = builtin_name(*spec.builtin_id());
    if (!spec.component_sources().empty()) j["components"] = spec.component_sources();
    j["radius"] = spec.radius();
    if (spec.scale() != 1.0) j["scale"] = spec.scale();
    return j;
}

Json to_json(const PointAnalysis& a) {
    Json j;
    j["point"] = {a.X.u, a.X.v};
    j["X"] = vec(a.X.values());
    j["first_fundamental_form"] = {{"g", mat(a.fff.g)}, {"g_inv", mat(a.fff.g_inv)}, {"W", a.fff.W}};
    j["conformality_defect"] = a.conformality_defect;
    j["tangents"] = {{"X_u", vec(a.X.coeff(1, 0))}, {"X_v", vec(a.X.coeff(0, 1))}};

    Json normals = Json::array();
    for (std::size_t k = 0; k < a.frame.size(); ++k) {
        normals.push_back({{"N", vec(a.frame[k].values())},
                           {"N_u", vec(a.frame[k].coeff(1, 0))},
                           {"N_v", vec(a.frame[k].coeff(0, 1))},
                           {"seed", a.frame.seeds[k] + 1}});
    }
    j["normals"] = normals;
    j["frame_deviation"] = {{"orthonormality", a.frame_deviation.orthonormality},
                            {"tangency", a.frame_deviation.tangency}};

    Json sections = Json::array();
    for (const SectionData& s : a.sections) {
        sections.push_back({{"index", s.index},
                            {"L", mat(s.L)},
                            {"H", s.H},
                            {"K", s.K},
                            {"kappa", {s.kappa[0], s.kappa[1]}}});
    }
    j["sections"] = sections;

    Json torsion = Json::object();
    for (std::size_t s = 0; s < a.sigma.sections; ++s) {
        for (std::size_t o = 0; o < a.sigma.sections; ++o) {
            for (int i = 0; i < 2; ++i) {
                const std::string key =
                    "sigma_" + std::to_string(s + 1) + "_" + std::to_string(i + 1) + "_" + std::to_string(o + 1);
                torsion[key] = jet_json(a.sigma(s, o, i));
            }
        }
    }
    j["torsion"] = torsion;
    j["weingarten_residual"] = a.weingarten_residual;

    if (a.curvature) {
        Json S = Json::object();
        for (int s = 0; s < 2; ++s) {
            for (int o = 0; o < 2; ++o) {
                for (int i = 0; i < 2; ++i) {
                    for (int k = 0; k < 2; ++k) {
                        S["S_" + std::to_string(s + 1) + "_" + std::to_string(i + 1) + std::to_string(k + 1) + "_" +
                          std::to_string(o + 1)] = (*a.curvature)(s, o, i, k);
                    }
                }
            }
        }
        j["normal_curvature"] = {{"components", S},
                                 {"S_1_12_2", a.curvature->S_1_12_2()},
                                 {"S_2_12_1", a.curvature->S_2_12_1()},
                                 {"max_abs", a.curvature->max_abs},
                                 {"flat", a.curvature->flat},
                                 {"integrability_residual", *a.integrability_residual}};
        j["ricci"] = {{"rhs", mat(a.ricci->rhs)}, {"residual", a.ricci->residual}};
    }

    Json summary = Json::object();
    summary["W"] = a.fff.W;
    for (const SectionData& s : a.sections) {
        summary["H_" + std::to_string(s.index)] = s.H;
        summary["K_" + std::to_string(s.index)] = s.K;
    }
    if (a.curvature) {
        summary["S_1_12_2"] = a.curvature->S_1_12_2();
        summary["S_2_12_1"] = a.curvature->S_2_12_1();
        summary["ricci_residual"] = a.ricci->residual;
    }
    summary["weingarten_residual"] = a.weingarten_residual;
    j["summary"] = summary;
    return j;
}

Json to_json(const RegularityReport& r) {
    return {{"regular", r.regular},
            {"samples", r.samples},
            {"failures", r.failures},
            {"min_W", r.min_W},
            {"argmin", {r.argmin_u, r.argmin_v}},
            {"max_conformality_defect", r.max_conformality_defect},
            {"mean_conformality_defect", r.mean_conformality_defect}};
}

Json to_json(const FlatnessReport& r) {
    return {{"flat", r.flat},
            {"tol_flat", r.tol_flat},
            {"points", r.points},
            {"max_S", r.max_S},
            {"argmax", {r.argmax_u, r.argmax_v}},
            {"mean_abs_S", r.mean_abs_S},
            {"max_ricci_residual", r.max_ricci_residual},
            {"max_integrability_identity_defect", r.max_integrability_identity_defect},
            {"max_torsion_antisymmetry", r.max_torsion_antisymmetry},
            {"max_curvature_antisymmetry", r.max_curvature_antisymmetry},
            {"max_same_section_S", r.max_same_section_S}};
}

Json to_json(const SynthesisResult& r) {
    return {{"success", r.success},
            {"tol_sync", r.tol_sync},
            {"max_transformed_torsion", r.max_transformed_torsion},
            {"max_integrability_residual", r.max_integrability_residual},
            {"origin_integrability_residual", r.origin_integrability_residual},
            {"max_path_difference", r.max_path_difference},
            {"transform_sign", r.transform_fit.sign},
            {"transform_residual", r.transform_fit.residual},
            {"grid_nodes", r.field.grid.nodes()}};
}

Json to_json(const HeinzQuantity& q) {
    return {{"R", q.R},
            {"quantity", q.quantity},
            {"gradient_bound", q.bound},
            {"kappa", {q.kappa[0], q.kappa[1]}},
            {"W", q.W},
            {"conformality_defect", q.conformality_defect}};
}

Json to_json(const KnQuantity& q) {
    return {{"R", q.R},
            {"sup_norm", q.sup_norm},
            {"K", q.K},
            {"quantity", q.quantity},
            {"pointwise_bound", q.pointwise_bound},
            {"scaled_bound", q.scaled_bound},
            {"harmonicity_residual", q.harmonicity_residual}};
}

Json to_json(const GrowthFit& f) {
    return {{"R", f.R}, {"sup_norm", f.sup_norm}, {"epsilon", f.epsilon}, {"omega", f.omega}, {"degenerate", f.degenerate}};
}

Json to_json(const PmcReport& r) {
    return {{"points", r.points},
            {"max_residual", r.max_residual},
            {"argmax", {r.argmax_u, r.argmax_v}},
            {"max_conformality_defect", r.max_conformality_defect}};
}

Json to_json(const StructureReport& r) {
    return {{"h0", r.h0}, {"max_ratio", r.max_ratio}, {"argmax", {r.argmax_u, r.argmax_v}}, {"pass", r.pass}};
}

Json to_json(const OssermanReport& r) {
    return {{"min_angle_per_section", r.min_angle_per_section},
            {"min_angle", r.min_angle},
            {"argmin", {r.argmin_u, r.argmin_v}},
            {"sin_omega", r.sin_omega}};
}

Json to_json(const EnergyReport& r) {
    return {{"energy", r.energy},
            {"r_upper", r.r_upper},
            {"d0_estimate", r.d0_estimate},
            {"argmin_theta", r.argmin_theta},
            {"radial_cells", r.radial_cells},
            {"angular_cells", r.angular_cells}};
}

Json to_json(const HolderReport& r) {
    return {{"pairs", r.pairs},
            {"max_ratio", r.max_ratio},
            {"pass", r.pass},
            {"witness",
             {{"X1", vec(r.witness[0])}, {"Z1", vec(r.witness[1])}, {"X2", vec(r.witness[2])}, {"Z2", vec(r.witness[3])}}}};
}

std::string dump(const Json& j) { return j.dump(2) + "\n"; }

CsvTable::CsvTable(std::vector<std::string> header) : header_(std::move(header)) {}

void CsvTable::add_row(const std::vector<double>& values) { rows_.push_back(values); }

std::string CsvTable::str() const {
    std::ostringstream os;
    for (std::size_t k = 0; k < header_.size(); ++k) os << (k ? "," : "") << header_[k];
    os << "\n";
    for (const auto& row : rows_) {
        for (std::size_t k = 0; k < row.size(); ++k) {
            os << (k ? "," : "");
            if (std::isfinite(row[k])) os << format_double(row[k]);
        }
        os << "\n";
    }
    return os.str();
}

CsvTable curvature_csv(const FlatnessReport& r) {
    CsvTable t({"u", "v", "S_1_12_2", "S_2_12_1", "ricci_residual"});
    for (const CurvatureRecord& rec : r.records) t.add_row({rec.u, rec.v, rec.S_1_12_2, rec.S_2_12_1, rec.ricci_residual});
    return t;
}

CsvTable scan_csv(const SurfaceSpec& spec, int nodes) {
    std::vector<std::string> header{"u", "v", "W", "g11", "g12", "g22", "conformality_defect"};
    const int sections = spec.n() - 2;
    for (int s = 1; s <= sections; ++s) {
        for (const char* f : {"H_", "K_", "kappa1_", "kappa2_"}) header.push_back(f + std::to_string(s));
    }
    if (spec.n() == 4) {
        for (const char* f : {"S_1_12_2", "S_2_12_1", "ricci_residual"}) header.emplace_back(f);
    }
    header.emplace_back("weingarten_residual");

    const auto pts = Grid(nodes, spec.radius()).masked_points();
    const auto rows = parallel_map<std::vector<double>>(pts.size(), [&](std::size_t k) {
        const PointAnalysis a = analyze_point(spec, pts[k].u, pts[k].v);
        std::vector<double> row{pts[k].u, pts[k].v, a.fff.W, a.fff.g(0, 0), a.fff.g(0, 1), a.fff.g(1, 1),
                                a.conformality_defect};
        for (const SectionData& s : a.sections) {
            row.insert(row.end(), {s.H, s.K, s.kappa[0], s.kappa[1]});
        }
        if (a.curvature) row.insert(row.end(), {a.curvature->S_1_12_2(), a.curvature->S_2_12_1(), a.ricci->residual});
        row.push_back(a.weingarten_residual);
        return row;
    });
    CsvTable t(header);
    for (const auto& row : rows) t.add_row(row);
    return t;
}

}  // namespace geo
