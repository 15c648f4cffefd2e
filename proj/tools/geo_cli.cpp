// geo: command-line driver for surface analyses.

#include <charconv>
#include <cmath>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "geo/error.hpp"
#include "geo/estimates.hpp"
#include "geo/expr.hpp"
#include "geo/immersion.hpp"
#include "geo/normal_bundle.hpp"
#include "geo/report.hpp"
#include "geo/validation.hpp"

namespace {

using geo::Json;

/// Exit codes.
constexpr int kOk = 0;
constexpr int kInvalid = 1;
constexpr int kIrregular = 2;
constexpr int kNumerical = 3;
constexpr int kInvariantsFailed = 4;

struct RunConfig {
    std::string command;
    std::string spec_path;
    int grid = 65;
    std::string at;
    std::string R;
    std::string experiment;
    std::string out;
    std::string field_path;
    double h0 = 1.0;
    double tol_flat = geo::kFlatTolerance;
    double tol_sync = 0.0;
    std::string gauge;
};

std::vector<double> parse_list(const std::string& text, const char* what) {
    std::vector<double> out;
    std::size_t start = 0;
    while (start <= text.size()) {
        const std::size_t end = std::min(text.find(',', start), text.size());
        const std::string item = text.substr(start, end - start);
        double x = 0.0;
        const char* first = item.data();
        const char* last = first + item.size();
        if (!item.empty() && *first == '+') ++first;
        const auto [ptr, ec] = std::from_chars(first, last, x);
        if (item.empty() || ec != std::errc() || ptr != last || !std::isfinite(x)) {
            throw geo::ConfigError(std::string("bad number '") + item + "' in " + what);
        }
        out.push_back(x);
        start = end + 1;
    }
    return out;
}

std::vector<double> parse_R(const std::string& text) {
    const std::vector<double> R = parse_list(text, "--R");
    for (std::size_t k = 0; k < R.size(); ++k) {
        if (!(R[k] > 0.0)) throw geo::ConfigError("--R values must be positive");
        if (k > 0 && !(R[k] > R[k - 1])) throw geo::ConfigError("--R values must be strictly increasing");
    }
    return R;
}

void write_file(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw geo::ConfigError("cannot write '" + path + "'");
    out << text;
}

bool wants_csv(const std::string& path) { return path.size() >= 4 && path.compare(path.size() - 4, 4, ".csv") == 0; }

/// Writes the report: CSV when --out ends in .csv, JSON otherwise; with no
/// --out the JSON goes to stdout after the summary.
void emit(const RunConfig& cfg, const Json& json, const geo::CsvTable* csv) {
    if (cfg.out.empty()) {
        std::cout << geo::dump(json);
    } else if (wants_csv(cfg.out)) {
        if (!csv) throw geo::ConfigError("command '" + cfg.command + "' has no CSV form");
        write_file(cfg.out, csv->str());
    } else {
        write_file(cfg.out, geo::dump(json));
    }
}

std::string fmt(double x) { return geo::format_double(x); }

int cmd_inspect(const RunConfig& cfg, const geo::SurfaceSpec& spec) {
    if (cfg.at.empty()) throw geo::ConfigError("inspect needs --at u,v");
    const std::vector<double> p = parse_list(cfg.at, "--at");
    if (p.size() != 2) throw geo::ConfigError("--at takes exactly two numbers u,v");
    std::optional<geo::Expr> gauge;
    if (!cfg.gauge.empty()) gauge = geo::parse_expression(cfg.gauge, {"u", "v"});
    const geo::PointAnalysis a = geo::analyze_point(spec, p[0], p[1], gauge, cfg.tol_flat);

    Json j;
    j["surface"] = geo::to_json(spec);
    j["analysis"] = geo::to_json(a);
    std::cout << spec.name() << " at (" << fmt(p[0]) << ", " << fmt(p[1]) << ")\n";
    std::cout << "  W = " << fmt(a.fff.W) << ", conformality defect = " << fmt(a.conformality_defect) << "\n";
    for (const geo::SectionData& s : a.sections) {
        std::cout << "  section " << s.index << ": H = " << fmt(s.H) << ", K = " << fmt(s.K) << "\n";
    }
    if (a.curvature) {
        std::cout << "  S_1_12_2 = " << fmt(a.curvature->S_1_12_2()) << ", ricci residual = " << fmt(a.ricci->residual)
                  << "\n";
    }
    std::cout << "  weingarten residual = " << fmt(a.weingarten_residual) << "\n";

    geo::CsvTable csv({"u", "v", "W"});
    csv.add_row({p[0], p[1], a.fff.W});
    emit(cfg, j, &csv);
    return kOk;
}

int cmd_scan(const RunConfig& cfg, const geo::SurfaceSpec& spec) {
    const geo::RegularityReport reg = geo::regularity_check(spec, cfg.grid);
    const geo::CsvTable table = geo::scan_csv(spec, cfg.grid);
    std::cout << spec.name() << ": " << table.rows() << " grid points, min W = " << fmt(reg.min_W)
              << ", max conformality defect = " << fmt(reg.max_conformality_defect) << "\n";
    if (cfg.out.empty() || wants_csv(cfg.out)) {
        if (cfg.out.empty()) std::cout << table.str();
        else write_file(cfg.out, table.str());
    } else {
        Json j;
        j["surface"] = geo::to_json(spec);
        j["regularity"] = geo::to_json(reg);
        j["grid"] = cfg.grid;
        write_file(cfg.out, geo::dump(j));
    }
    return kOk;
}

int cmd_flatness(const RunConfig& cfg, const geo::SurfaceSpec& spec) {
    geo::FlatnessOptions fo;
    fo.nodes = cfg.grid;
    fo.tol_flat = cfg.tol_flat;
    if (!cfg.gauge.empty()) fo.gauge = geo::parse_expression(cfg.gauge, {"u", "v"});
    const geo::FlatnessReport flat = geo::flatness_test(spec, fo);

    geo::SynthesisOptions so;
    so.nodes = cfg.grid;
    so.gauge = fo.gauge;
    so.tol_sync = cfg.tol_sync;
    const geo::SynthesisResult syn = geo::synthesize_torsion_free(spec, so);

    std::cout << spec.name() << ": flat = " << (flat.flat ? "true" : "false") << " (max |S| = " << fmt(flat.max_S)
              << ", tol " << fmt(flat.tol_flat) << ")\n";
    std::cout << "  synthesis " << (syn.success ? "success" : "failure")
              << ": max transformed torsion = " << fmt(syn.max_transformed_torsion) << ", tol " << fmt(syn.tol_sync)
              << "\n";
    std::cout << "  obstruction at origin = " << fmt(syn.origin_integrability_residual)
              << ", max = " << fmt(syn.max_integrability_residual) << "\n";

    Json j;
    j["surface"] = geo::to_json(spec);
    j["grid"] = cfg.grid;
    j["flatness"] = geo::to_json(flat);
    j["synthesis"] = geo::to_json(syn);
    const geo::CsvTable csv = geo::curvature_csv(flat);
    emit(cfg, j, &csv);
    return kOk;
}

geo::MeanCurvatureField load_field(const std::string& path) {
    if (path.empty()) return geo::MeanCurvatureField::zero();
    std::ifstream in(path);
    if (!in) throw geo::SpecError("cannot open field file '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return geo::load_mean_curvature_field(buf.str());
}

int cmd_estimate(const RunConfig& cfg, const geo::SurfaceSpec& spec) {
    const std::string& ex = cfg.experiment;
    if (ex.empty()) throw geo::ConfigError("estimate needs --experiment");
    const std::vector<double> R = cfg.R.empty() ? std::vector<double>{spec.radius()} : parse_R(cfg.R);

    Json j;
    j["surface"] = geo::to_json(spec);
    j["experiment"] = ex;
    std::optional<geo::CsvTable> csv;

    if (ex == "heinz") {
        csv.emplace(std::vector<std::string>{"R", "quantity", "gradient_bound"});
        Json rows = Json::array();
        for (double r : R) {
            const geo::HeinzQuantity q = geo::heinz_quantity_r3(spec, r);
            rows.push_back(geo::to_json(q));
            csv->add_row({r, q.quantity, q.bound});
            std::cout << "R = " << fmt(r) << ": quantity = " << fmt(q.quantity) << ", bound = " << fmt(q.bound) << "\n";
        }
        j["results"] = rows;
    } else if (ex == "kn") {
        const std::size_t sections = static_cast<std::size_t>(spec.n() - 2);
        std::vector<std::string> header{"R", "sup_norm"};
        for (std::size_t s = 1; s <= sections; ++s) header.push_back("K_" + std::to_string(s));
        for (std::size_t s = 1; s <= sections; ++s) header.push_back("quantity_" + std::to_string(s));
        header.insert(header.end(), {"quantity", "scaled_bound"});
        csv.emplace(header);
        Json rows = Json::array();
        for (double r : R) {
            const geo::KnQuantity q = geo::kn_quantity_rn(spec, r, cfg.grid);
            rows.push_back(geo::to_json(q));
            std::vector<double> row{r, q.sup_norm};
            row.insert(row.end(), q.K.begin(), q.K.end());
            row.insert(row.end(), q.quantity.begin(), q.quantity.end());
            double worst = 0.0;
            for (double x : q.quantity) worst = std::max(worst, x);
            row.insert(row.end(), {worst, q.scaled_bound});
            csv->add_row(row);
            std::cout << "R = " << fmt(r) << ": quantity = " << fmt(worst) << ", sup |X| = " << fmt(q.sup_norm) << "\n";
        }
        j["results"] = rows;
    } else if (ex == "growth") {
        const geo::GrowthFit f = geo::growth_exponent_fit(spec, R, cfg.grid);
        csv.emplace(std::vector<std::string>{"R", "sup_norm"});
        for (std::size_t k = 0; k < f.R.size(); ++k) csv->add_row({f.R[k], f.sup_norm[k]});
        j["results"] = geo::to_json(f);
        std::cout << "epsilon = " << fmt(f.epsilon) << ", Omega = " << fmt(f.omega)
                  << (f.degenerate ? " (degenerate)" : "") << "\n";
    } else if (ex == "pmc") {
        const geo::PmcReport r = geo::pmc_residual(spec, load_field(cfg.field_path), cfg.grid);
        j["results"] = geo::to_json(r);
        std::cout << "max residual = " << fmt(r.max_residual) << " over " << r.points << " points\n";
    } else if (ex == "structure") {
        const geo::StructureReport r = geo::structure_constant_check(spec, cfg.h0, cfg.grid);
        j["results"] = geo::to_json(r);
        std::cout << "max |Delta X| / |grad X|^2 = " << fmt(r.max_ratio) << " vs 2 h0 = " << fmt(2.0 * cfg.h0) << ": "
                  << (r.pass ? "pass" : "fail") << "\n";
    } else if (ex == "osserman") {
        const geo::OssermanReport r = geo::osserman_angle(spec, cfg.grid);
        j["results"] = geo::to_json(r);
        std::cout << "min angle = " << fmt(r.min_angle) << " at (" << fmt(r.argmin_u) << ", " << fmt(r.argmin_v)
                  << ")\n";
    } else if (ex == "energy") {
        const geo::EnergyReport r = geo::dirichlet_energy_and_geodesic_radius(spec, cfg.grid);
        j["results"] = geo::to_json(r);
        std::cout << "energy = " << fmt(r.energy) << ", geodesic radius <= " << fmt(r.r_upper) << "\n";
    } else if (ex == "holder") {
        const geo::HolderReport r = geo::holder_field_check(load_field(cfg.field_path));
        j["results"] = geo::to_json(r);
        std::cout << "max ratio = " << fmt(r.max_ratio) << ": " << (r.pass ? "pass" : "fail") << "\n";
    } else {
        throw geo::ConfigError("unknown experiment '" + ex + "'");
    }
    emit(cfg, j, csv ? &*csv : nullptr);
    return kOk;
}

int cmd_validate(const RunConfig& cfg, const geo::SurfaceSpec& spec) {
    geo::ValidationOptions vo;
    vo.extra = spec;
    const geo::ValidationReport r = geo::run_validation(vo);
    for (const auto& x : r.results) {
        std::cout << (x.pass ? "ok   " : "FAIL ") << x.module << "." << x.name << " = " << fmt(x.value)
                  << " (threshold " << fmt(x.threshold) << ")\n";
    }
    const auto failed = r.failed();
    if (!failed.empty()) {
        std::cout << failed.size() << " invariant(s) failed:";
        for (const auto& f : failed) std::cout << " " << f;
        std::cout << "\n";
    }
    Json j = geo::to_json(r);
    emit(cfg, j, nullptr);
    return failed.empty() ? kOk : kInvariantsFailed;
}

int run(const RunConfig& cfg) {
    if (cfg.grid < 9 || cfg.grid % 2 == 0) throw geo::ConfigError("--grid must be odd and >= 9");
    const geo::SurfaceSpec spec = geo::load_surface_spec_file(cfg.spec_path);
    if (cfg.command == "inspect") return cmd_inspect(cfg, spec);
    if (cfg.command == "scan") return cmd_scan(cfg, spec);
    if (cfg.command == "flatness") return cmd_flatness(cfg, spec);
    if (cfg.command == "estimate") return cmd_estimate(cfg, spec);
    return cmd_validate(cfg, spec);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Geometry of immersed surfaces: curvature, normal bundle and estimate experiments"};
    app.require_subcommand(1);
    RunConfig cfg;

    const std::vector<std::string> commands{"inspect", "scan", "flatness", "estimate", "validate"};
    for (const std::string& name : commands) {
        CLI::App* sub = app.add_subcommand(name);
        sub->add_option("spec", cfg.spec_path, "surface JSON file")->required();
        sub->add_option("--grid", cfg.grid, "grid nodes per axis (odd, >= 9)");
        sub->add_option("--out", cfg.out, "report path (.csv for CSV)");
        if (name == "inspect") {
            sub->add_option("--at", cfg.at, "parameter point u,v")->allow_extra_args(false);
        }
        if (name == "inspect" || name == "flatness") {
            sub->add_option("--gauge", cfg.gauge, "frame rotation angle phi(u, v)");
            sub->add_option("--tol-flat", cfg.tol_flat, "flatness tolerance");
        }
        if (name == "flatness") sub->add_option("--tol-sync", cfg.tol_sync, "synthesis tolerance");
        if (name == "estimate") {
            sub->add_option("--experiment", cfg.experiment, "heinz|kn|growth|pmc|structure|osserman|energy|holder")
                ->required();
            sub->add_option("--R", cfg.R, "radii a,b,c (positive, increasing)");
            sub->add_option("--field", cfg.field_path, "mean curvature field JSON");
            sub->add_option("--h0", cfg.h0, "structure constant");
        }
        sub->callback([&cfg, name] { cfg.command = name; });
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kInvalid;
    }

    try {
        return run(cfg);
    } catch (const geo::RegularityError& e) {
        std::cerr << "error: regularity: " << e.what() << "\n";
        return kIrregular;
    } catch (const geo::SpecError& e) {
        std::cerr << "error: invalid spec: " << e.what() << "\n";
        return kInvalid;
    } catch (const geo::OutOfDomainError& e) {
        std::cerr << "error: out of domain: " << e.what() << "\n";
        return kInvalid;
    } catch (const geo::ParseError& e) {
        std::cerr << "error: expression: " << e.what() << "\n";
        return kInvalid;
    } catch (const geo::ConfigError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kInvalid;
    } catch (const geo::DimensionError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kInvalid;
    } catch (const geo::ConformalityError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kInvalid;
    } catch (const geo::GridError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kInvalid;
    } catch (const geo::Error& e) {
        std::cerr << "error: numerical: " << e.what() << "\n";
        return kNumerical;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kNumerical;
    }
}
