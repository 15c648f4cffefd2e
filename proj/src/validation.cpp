#include "geo/validation.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numbers>

#include <Eigen/LU>

#include "geo/error.hpp"
#include "geo/estimates.hpp"
#include "geo/expr.hpp"
#include "geo/geometry.hpp"
#include "geo/jet.hpp"
#include "geo/normal_bundle.hpp"
#include "geo/parallel.hpp"

namespace geo {

bool ValidationReport::all_pass() const {
    return std::all_of(results.begin(), results.end(), [](const InvariantResult& r) { return r.pass; });
}

std::vector<std::string> ValidationReport::failed() const {
    std::vector<std::string> out;
    for (const auto& r : results) {
        if (!r.pass) out.push_back(r.module + "." + r.name);
    }
    return out;
}

Json to_json(const ValidationReport& r) {
    Json list = Json::array();
    for (const auto& x : r.results) {
        list.push_back({{"module", x.module}, {"name", x.name}, {"value", x.value}, {"threshold", x.threshold},
                        {"pass", x.pass}});
    }
    return {{"all_pass", r.all_pass()}, {"checks", r.results.size()}, {"invariants", list}};
}

namespace {

double uniform(std::mt19937_64& rng, double lo, double hi) {
    return std::uniform_real_distribution<double>(lo, hi)(rng);
}

std::string coefficient(double c) { return "(" + format_double(c) + ")"; }

}  // namespace

SurfaceSpec random_cubic_graph(std::mt19937_64& rng, const std::string& name) {
    static const char* kMonomials[] = {"x", "y", "x^2", "x*y", "y^2", "x^3", "x^2*y", "x*y^2", "y^3"};
    std::vector<std::string> phis;
    for (int k = 0; k < 2; ++k) {
        std::string p = coefficient(uniform(rng, -1.0, 1.0));
        for (const char* m : kMonomials) p += " + " + coefficient(uniform(rng, -1.0, 1.0)) + "*" + m;
        phis.push_back(p);
    }
    return SurfaceSpec::graph(name, phis);
}

std::string random_composite_expression(std::mt19937_64& rng, int depth) {
    auto pick = [&](int n) { return std::uniform_int_distribution<int>(0, n - 1)(rng); };
    if (depth <= 0) {
        switch (pick(3)) {
            case 0: return "u";
            case 1: return "v";
            default: return format_double(std::round(uniform(rng, 0.5, 2.0) * 100.0) / 100.0);
        }
    }
    const std::string a = random_composite_expression(rng, depth - 1);
    const std::string b = random_composite_expression(rng, depth - 1);
    switch (pick(11)) {
        case 0: return "(" + a + " + " + b + ")";
        case 1: return "(" + a + " - " + b + ")";
        case 2: return "(" + a + ")*(" + b + ")";
        case 3: return "(" + a + ")/(2 + (" + b + ")^2)";
        case 4: return "sin(" + a + ")";
        case 5: return "cos(" + a + " - " + b + ")";
        case 6: return "exp(0.5*sin(" + a + "))";
        case 7: return "log(2 + (" + a + ")^2)";
        case 8: return "sqrt(1 + (" + b + ")^2)";
        case 9: return "(" + a + ")^3";
        default: return "(1.5 + sin(" + a + "))^0.7";
    }
}

namespace {

/// Central-difference stencils (offset, weight) for derivative orders 0..3.
const std::vector<std::pair<int, double>>& stencil(int order) {
    static const std::vector<std::pair<int, double>> s[4] = {
        {{0, 1.0}},
        {{-1, -0.5}, {1, 0.5}},
        {{-1, 1.0}, {0, -2.0}, {1, 1.0}},
        {{-2, -0.5}, {-1, 1.0}, {1, -1.0}, {2, 0.5}},
    };
    return s[order];
}

double fd_partial(const std::function<double(double, double)>& f, double u, double v, int a, int b, double h) {
    double sum = 0.0;
    for (const auto& [du, wu] : stencil(a)) {
        for (const auto& [dv, wv] : stencil(b)) sum += wu * wv * f(u + du * h, v + dv * h);
    }
    return sum / std::pow(h, a + b);
}

/// Richardson combination of steps h and 2h (second-order stencils).
double fd_richardson(const std::function<double(double, double)>& f, double u, double v, int a, int b, double h) {
    if (a + b == 0) return f(u, v);
    return (4.0 * fd_partial(f, u, v, a, b, h) - fd_partial(f, u, v, a, b, 2.0 * h)) / 3.0;
}

class Collector {
public:
    void add(const char* module, const std::string& name, double value, double threshold) {
        results.push_back({module, name, value, threshold, std::isfinite(value) && value <= threshold});
    }
    std::vector<InvariantResult> results;
};

struct SweepStats {
    double orthonormality = 0, tangency = 0, metric_inverse = 0, trace = 0, det = 0, weingarten = 0;
};

double rel(double a, double b) { return std::abs(a - b) / std::max(1.0, std::abs(b)); }

SweepStats geometry_sweep(const SurfaceSpec& spec, int nodes) {
    const auto pts = Grid(nodes, spec.radius()).masked_points();
    const auto stats = parallel_map<SweepStats>(pts.size(), [&](std::size_t k) {
        const VecJet X = spec.evaluate_jet3(pts[k].u, pts[k].v);
        const FundamentalForm fff = first_fundamental_form(X);
        const NormalFrame frame = normal_frame(X);
        const FrameDeviation dev = frame_deviation(X, frame);
        SweepStats s;
        s.orthonormality = dev.orthonormality;
        s.tangency = dev.tangency;
        s.metric_inverse = (fff.g * fff.g_inv - Eigen::Matrix2d::Identity()).cwiseAbs().maxCoeff();
        for (const SectionData& sec : second_fundamental_form(X, frame)) {
            const Eigen::Matrix2d A = fff.g_inv * sec.L;
            s.trace = std::max(s.trace, rel(A.trace(), 2.0 * sec.H));
            s.det = std::max(s.det, rel(A.determinant(), sec.K));
        }
        s.weingarten = weingarten_residual(X, frame, torsion_coefficients(frame));
        return s;
    });
    SweepStats out;
    for (const auto& s : stats) {
        out.orthonormality = std::max(out.orthonormality, s.orthonormality);
        out.tangency = std::max(out.tangency, s.tangency);
        out.metric_inverse = std::max(out.metric_inverse, s.metric_inverse);
        out.trace = std::max(out.trace, s.trace);
        out.det = std::max(out.det, s.det);
        out.weingarten = std::max(out.weingarten, s.weingarten);
    }
    return out;
}

void jet_checks(Collector& c, std::mt19937_64& rng, std::vector<std::string>& corpus) {
    const std::vector<std::string> vars{"u", "v"};
    double worst = 0.0;
    for (int k = 0; k < 20; ++k) {
        const std::string src = random_composite_expression(rng);
        corpus.push_back(src);
        const Expr e = parse_expression(src, vars);
        const double u = uniform(rng, -0.5, 0.5), v = uniform(rng, -0.5, 0.5);
        const std::array<Jet, 2> slots{Jet::variable(Var::u, u), Jet::variable(Var::v, v)};
        const Jet j = evaluate_on_jets(e, slots);
        const auto f = [&](double x, double y) {
            const std::array<double, 2> p{x, y};
            return evaluate(e, p);
        };
        for (int order = 0; order <= 3; ++order) {
            for (int b = 0; b <= order; ++b) {
                const int a = order - b;
                const double exact = j.coeff(a, b);
                if (std::abs(exact) < 1e-6) continue;
                const double fd = fd_richardson(f, u, v, a, b, 1e-3);
                worst = std::max(worst, std::abs(exact - fd) / std::max(1.0, std::abs(exact)));
            }
        }
    }
    c.add("jet", "chain_rule_matches_finite_differences", worst, 1e-5);

    auto random_jet = [&](double value) {
        std::array<double, Jet::kSize> a{};
        a[0] = value;
        for (std::size_t k = 1; k < a.size(); ++k) a[k] = uniform(rng, -1.0, 1.0);
        return Jet::from_coeffs(a, 3);
    };
    auto scaled = [](const Jet& x, const Jet& y) {
        double scale = 1.0;
        for (std::size_t k = 0; k < Jet::kSize; ++k) scale = std::max({scale, std::abs(x[k]), std::abs(y[k])});
        return max_abs_diff(x, y) / scale;
    };
    double laws = 0.0;
    for (int k = 0; k < 200; ++k) {
        const Jet a = random_jet(uniform(rng, -2, 2)), b = random_jet(uniform(rng, -2, 2)),
                  d = random_jet(uniform(rng, -2, 2));
        laws = std::max({laws, scaled(a + b, b + a), scaled(a * b, b * a), scaled((a + b) + d, a + (b + d)),
                         scaled((a * b) * d, a * (b * d))});
    }
    c.add("jet", "add_mul_commutative_associative", laws, 1e-14);

    double inverse = 0.0;
    for (int k = 0; k < 200; ++k) {
        const double mag = std::exp(uniform(rng, std::log(1e-3), std::log(10.0)));
        const Jet a = random_jet(k % 2 ? mag : -mag);
        const Jet r = 1.0 / a;
        const Jet p = a * r;
        // Each product coefficient is a sum of a_i r_j terms; rounding
        // scales with the sum of their magnitudes.
        for (int order = 0; order <= 3; ++order) {
            for (int b = 0; b <= order; ++b) {
                const int au = order - b;
                double mass = 0.0;
                for (int i = 0; i <= au; ++i) {
                    for (int jv = 0; jv <= b; ++jv) {
                        mass += std::abs(a.coeff(i, jv) * r.coeff(au - i, b - jv)) *
                                std::tgamma(au + 1) / (std::tgamma(i + 1) * std::tgamma(au - i + 1)) *
                                std::tgamma(b + 1) / (std::tgamma(jv + 1) * std::tgamma(b - jv + 1));
                    }
                }
                const double target = order == 0 ? 1.0 : 0.0;
                inverse = std::max(inverse, std::abs(p.coeff(au, b) - target) / std::max(1.0, mass));
            }
        }
    }
    c.add("jet", "product_with_reciprocal_is_one", inverse, 1e-12);
}

void expr_checks(Collector& c, std::mt19937_64& rng, const std::vector<std::string>& generated) {
    const std::vector<std::string> vars{"u", "v"};
    std::vector<std::string> corpus{
        "u",           "-u^2",          "2^-1",         "u - v - 1",       "u / v / 2",  "2^3^2",
        "-(u + v)*3",  "sin(cos(u))",   "1.5e-3 * v",   ".5 + 4.",         "-2^2",       "exp(log(2 + u*u))",
        "sqrt(4)",     "u^0.5 * v",     "((u))",        "1e10 - 1E-10",    "u*-v",       "- - u",
    };
    corpus.insert(corpus.end(), generated.begin(), generated.end());

    int mismatches = 0;
    double worst = 0.0;
    for (const std::string& s : corpus) {
        const Expr e = parse_expression(s, vars);
        if (!parse_expression(e.to_string(), vars).structurally_equal(e)) ++mismatches;
        const double u = uniform(rng, 0.1, 0.9), v = uniform(rng, 0.1, 0.9);
        const std::array<double, 2> p{u, v};
        const std::array<Jet, 2> j{Jet::constant(u), Jet::constant(v)};
        const double plain = evaluate(e, p);
        worst = std::max(worst, std::abs(evaluate_on_jets(e, j).value() - plain) / std::max(std::abs(plain), 1e-300));
    }
    c.add("expr", "print_parse_round_trip_mismatches", mismatches, 0);
    c.add("expr", "constant_jet_matches_plain_evaluation", worst, 1e-14);

    int crashes = 0;
    std::uniform_int_distribution<int> byte(0, 255), length(0, 24);
    for (int k = 0; k < 10000; ++k) {
        std::string s(static_cast<std::size_t>(length(rng)), '\0');
        for (char& ch : s) ch = static_cast<char>(byte(rng));
        try {
            (void)parse_expression(s, vars);
        } catch (const ParseError&) {
        } catch (...) {
            ++crashes;
        }
    }
    c.add("expr", "fuzz_inputs_not_rejected_as_syntax_errors", crashes, 0);
}

}  // namespace

ValidationReport run_validation(const ValidationOptions& options) {
    Collector c;
    std::mt19937_64 rng(options.seed);
    const int nodes = options.nodes;

    std::vector<std::string> generated;
    jet_checks(c, rng, generated);
    expr_checks(c, rng, generated);

    // immersion
    std::vector<SurfaceSpec> surfaces = catalog();
    surfaces.push_back(random_cubic_graph(rng, "cubic-graph"));
    if (options.extra) surfaces.push_back(*options.extra);
    {
        int failures = 0;
        for (const SurfaceSpec& s : surfaces) failures += regularity_check(s, 65).failures;
        c.add("immersion", "catalog_regular_points_failing", failures, 0);

        double defect = 0.0;
        for (Builtin id : {Builtin::plane, Builtin::w2}) {
            defect = std::max(defect, regularity_check(SurfaceSpec::builtin(id), 65).max_conformality_defect);
        }
        c.add("immersion", "exactly_conformal_defect", defect, 1e-12);

        double lift = 0.0;
        for (const SurfaceSpec& s : surfaces) {
            if (s.kind() != SurfaceKind::graph) continue;
            for (const GridPoint& p : Grid(9, s.radius()).masked_points()) {
                const VecJet X = s.evaluate_jet3(p.u, p.v);
                lift = std::max({lift, max_abs_diff(X[0], Jet::variable(Var::u, p.u)),
                                 max_abs_diff(X[1], Jet::variable(Var::v, p.v))});
            }
        }
        c.add("immersion", "graph_identity_lift", lift, 0.0);
    }

    // geometry
    {
        SweepStats worst;
        double weingarten = 0.0;
        for (const SurfaceSpec& s : surfaces) {
            const SweepStats st = geometry_sweep(s, nodes);
            worst.orthonormality = std::max(worst.orthonormality, st.orthonormality);
            worst.tangency = std::max(worst.tangency, st.tangency);
            worst.metric_inverse = std::max(worst.metric_inverse, st.metric_inverse);
            worst.trace = std::max(worst.trace, st.trace);
            worst.det = std::max(worst.det, st.det);
            weingarten = std::max(weingarten, geometry_sweep(s, 32).weingarten);
        }
        c.add("geometry", "frame_orthonormality", worst.orthonormality, 1e-10);
        c.add("geometry", "frame_tangency", worst.tangency, 1e-10);
        c.add("geometry", "metric_times_inverse_minus_identity", worst.metric_inverse, 1e-12);
        c.add("geometry", "shape_operator_trace_vs_2H", worst.trace, 1e-10);
        c.add("geometry", "shape_operator_det_vs_K", worst.det, 1e-10);
        c.add("geometry", "weingarten_residual_32_grid", weingarten, 1e-8);

        double equality = 0.0, slack = 0.0;
        for (const SurfaceSpec& s : {SurfaceSpec::builtin(Builtin::enneper), SurfaceSpec::builtin(Builtin::plane, 3)}) {
            for (const GridPoint& p : Grid(nodes, s.radius()).masked_points()) {
                const VecJet X = s.evaluate_jet3(p.u, p.v);
                const FundamentalForm fff = first_fundamental_form(X);
                const SectionData sec = section_data(X, normal_frame(X)[0], fff, 1);
                const double lhs = sec.kappa[0] * sec.kappa[0] + sec.kappa[1] * sec.kappa[1];
                const double rhs = unit_normal_r3(X).gradient_norm_sq() / fff.W;
                if (rhs > 0.0) equality = std::max(equality, std::abs(lhs - rhs) / rhs);
                else equality = std::max(equality, std::abs(lhs));
                slack = std::max(slack, lhs - rhs);
            }
        }
        c.add("geometry", "r3_conformal_curvature_gradient_equality", equality, 1e-8);
        c.add("geometry", "r3_curvature_gradient_inequality_excess", slack, 1e-8);
    }

    // normal bundle
    {
        std::vector<SurfaceSpec> four;
        for (const SurfaceSpec& s : surfaces) {
            if (s.n() == 4) four.push_back(s);
        }
        double identity = 0.0, ricci = 0.0, antisym = 0.0, same = 0.0, path_excess = 0.0;
        int verdict_changes = 0;
        const std::vector<std::string> phis{"0.3*u + 0.2*v", "sin(u*v)", "u^2 - v^2 + 0.1"};
        const std::vector<std::string> uv{"u", "v"};
        for (const SurfaceSpec& s : four) {
            FlatnessOptions fo;
            fo.nodes = nodes;
            const FlatnessReport r = flatness_test(s, fo);
            identity = std::max(identity, r.max_integrability_identity_defect);
            ricci = std::max(ricci, r.max_ricci_residual);
            antisym = std::max({antisym, r.max_torsion_antisymmetry, r.max_curvature_antisymmetry});
            same = std::max(same, r.max_same_section_S);
            if (s.name() == "clifford" || s.name() == "w2") {
                for (const std::string& phi : phis) {
                    fo.gauge = parse_expression(phi, uv);
                    if (flatness_test(s, fo).flat != r.flat) ++verdict_changes;
                }
            }
            if (r.flat) {
                SynthesisOptions so;
                so.nodes = nodes;
                const SynthesisResult syn = synthesize_torsion_free(s, so);
                const double h = syn.field.grid.spacing();
                const double bound = 10.0 * h * h * std::numbers::sqrt2 * s.radius();
                path_excess = std::max(path_excess, syn.max_path_difference - bound);
            }
        }
        c.add("normal-bundle", "gauge_changes_flatness_verdict", verdict_changes, 0);
        c.add("normal-bundle", "curvature_equals_torsion_curl", identity, 1e-9);
        c.add("normal-bundle", "ricci_residual", ricci, 1e-7);
        c.add("normal-bundle", "staircase_path_difference_excess", path_excess, 0.0);
        c.add("normal-bundle", "torsion_and_curvature_antisymmetry", antisym, 1e-10);
        c.add("normal-bundle", "same_section_curvature", same, 1e-10);
    }

    // estimates
    {
        const std::vector<SurfaceSpec> conformal{SurfaceSpec::builtin(Builtin::plane), SurfaceSpec::builtin(Builtin::w2),
                                                 SurfaceSpec::builtin(Builtin::z3),
                                                 SurfaceSpec::builtin(Builtin::clifford),
                                                 SurfaceSpec::builtin(Builtin::enneper)};
        double excess = -1e300;
        for (const SurfaceSpec& s : conformal) {
            const KnQuantity q = kn_quantity_rn(s, 1.0, 33);
            for (double K : q.K) excess = std::max(excess, std::abs(K) - q.pointwise_bound);
        }
        c.add("estimates", "gauss_curvature_pointwise_bound_excess", excess, 1e-10);

        double heinz_excess = -1e300;
        for (const SurfaceSpec& s : {SurfaceSpec::builtin(Builtin::saddle), SurfaceSpec::builtin(Builtin::plane, 3)}) {
            const HeinzQuantity q = heinz_quantity_r3(s, 1.0);
            heinz_excess = std::max(heinz_excess, q.quantity - q.bound);
        }
        c.add("estimates", "principal_curvature_gradient_bound_excess", heinz_excess, 1e-10);

        auto rel_change = [](double a, double b) { return std::abs(a - b) / std::max({std::abs(a), std::abs(b), 1e-300}); };
        double dilation = 0.0;
        for (double lambda : {0.5, 2.0, 10.0}) {
            for (Builtin id : {Builtin::enneper, Builtin::saddle}) {
                const SurfaceSpec s = SurfaceSpec::builtin(id);
                dilation = std::max(dilation, rel_change(heinz_quantity_r3(s, 0.8).quantity,
                                                         heinz_quantity_r3(s.dilated(lambda), 0.8 * lambda).quantity));
            }
            for (Builtin id : {Builtin::w2, Builtin::z3, Builtin::clifford}) {
                const SurfaceSpec s = SurfaceSpec::builtin(id);
                const KnQuantity a = kn_quantity_rn(s, 0.8, 33);
                const KnQuantity b = kn_quantity_rn(s.dilated(lambda), 0.8 * lambda, 33);
                for (std::size_t k = 0; k < a.quantity.size(); ++k) {
                    if (a.quantity[k] == 0.0 && b.quantity[k] == 0.0) continue;
                    dilation = std::max(dilation, rel_change(a.quantity[k], b.quantity[k]));
                }
            }
        }
        c.add("estimates", "dilation_invariance", dilation, 1e-9);

        double ratio = 0.0;
        for (Builtin id : {Builtin::plane, Builtin::w2, Builtin::z3, Builtin::clifford, Builtin::enneper}) {
            const SurfaceSpec s = SurfaceSpec::builtin(id);
            const double e0 = dirichlet_energy_and_geodesic_radius(s, 17).energy;
            const double e1 = dirichlet_energy_and_geodesic_radius(s, 33).energy;
            const double e2 = dirichlet_energy_and_geodesic_radius(s, 65).energy;
            const double d1 = std::abs(e1 - e0), d2 = std::abs(e2 - e1);
            if (d1 < 1e-12 * std::abs(e2) && d2 < 1e-12 * std::abs(e2)) continue;
            ratio = std::max(ratio, d2 / d1);
        }
        c.add("estimates", "energy_refinement_change_ratio", ratio, 4.0);

        double pmc = 0.0;
        for (Builtin id : {Builtin::plane, Builtin::w2, Builtin::z3}) {
            pmc = std::max(pmc, pmc_residual(SurfaceSpec::builtin(id), MeanCurvatureField::zero(), nodes).max_residual);
        }
        c.add("estimates", "pmc_residual_harmonic_zero_field", pmc, 1e-9);
    }

    ValidationReport report;
    report.results = std::move(c.results);
    return report;
}

}  // namespace geo
