#include "geo/normal_bundle.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "geo/error.hpp"
#include "geo/parallel.hpp"

namespace geo {

double TorsionField::antisymmetry_defect() const {
    double worst = 0.0;
    for (std::size_t s = 0; s < sections; ++s) {
        for (std::size_t o = 0; o < sections; ++o) {
            for (int i = 0; i < 2; ++i) worst = std::max(worst, std::abs((*this)(s, o, i).value() + (*this)(o, s, i).value()));
        }
    }
    return worst;
}

TorsionField torsion_coefficients(const NormalFrame& frame) {
    TorsionField t;
    t.sections = frame.size();
    t.entries.resize(t.sections * t.sections * 2);
    for (std::size_t s = 0; s < t.sections; ++s) {
        const VecJet dN[2] = {frame[s].partial(Var::u), frame[s].partial(Var::v)};
        for (std::size_t o = 0; o < t.sections; ++o) {
            for (int i = 0; i < 2; ++i) t(s, o, i) = dot(dN[i], frame[o]);
        }
    }
    return t;
}

NormalCurvature normal_curvature_tensor(const TorsionField& sigma, double tol_flat) {
    if (sigma.sections != 2) {
        throw DimensionError("normal curvature tensor needs two normal sections, got " + std::to_string(sigma.sections));
    }
    auto d = [](const Jet& j, int which) { return which == 0 ? j.du() : j.dv(); };
    NormalCurvature nc;
    for (int s = 0; s < 2; ++s) {
        for (int o = 0; o < 2; ++o) {
            for (int i = 0; i < 2; ++i) {
                for (int j = 0; j < 2; ++j) {
                    const auto us = static_cast<std::size_t>(s), uo = static_cast<std::size_t>(o);
                    double value = d(sigma(us, uo, i), j) - d(sigma(us, uo, j), i);
                    for (std::size_t t = 0; t < 2; ++t) {
                        value += sigma(us, t, i).value() * sigma(t, uo, j).value() -
                                 sigma(us, t, j).value() * sigma(t, uo, i).value();
                    }
                    nc.S[static_cast<std::size_t>(((s * 2 + o) * 2 + i) * 2 + j)] = value;
                }
            }
        }
    }
    for (double x : nc.S) nc.max_abs = std::max(nc.max_abs, std::abs(x));
    nc.flat = nc.max_abs <= tol_flat;
    return nc;
}

RicciCheck ricci_residual(const NormalCurvature& S, std::span<const SectionData> sections, const Eigen::Matrix2d& g_inv) {
    if (sections.size() != 2) throw DimensionError("Ricci equations are implemented for two normal sections");
    RicciCheck r;
    for (int s = 0; s < 2; ++s) {
        for (int o = 0; o < 2; ++o) {
            const Eigen::Matrix2d P = sections[static_cast<std::size_t>(s)].L * g_inv * sections[static_cast<std::size_t>(o)].L;
            r.rhs(s, o) = P(0, 1) - P(1, 0);
            r.residual = std::max(r.residual, std::abs(S(s, o, 0, 1) - r.rhs(s, o)));
        }
    }
    return r;
}

NormalFrame rotate_frame(const NormalFrame& frame, const Jet& phi) {
    if (frame.size() != 2) throw DimensionError("rotate_frame needs two normal sections");
    const Jet c = cos(phi), s = sin(phi);
    NormalFrame out;
    out.seeds = frame.seeds;
    out.normals.push_back(c * frame[0] + s * frame[1]);
    out.normals.push_back(s * frame[0] - c * frame[1]);
    return out;
}

namespace {

double transform_residual(const TorsionSample& t, int sign) {
    double worst = 0.0;
    for (int i = 0; i < 2; ++i) {
        const double dphi = i == 0 ? t.phi.du() : t.phi.dv();
        const double predicted = sign * (t.before(0, 1, i).value() + dphi);
        worst = std::max(worst, std::abs(t.after(0, 1, i).value() - predicted));
    }
    return worst;
}

}  // namespace

TorsionTransformFit torsion_transform_check(std::span<const TorsionSample> samples) {
    TorsionTransformFit best{1, std::numeric_limits<double>::infinity()};
    for (int sign : {1, -1}) {
        double worst = 0.0;
        for (const TorsionSample& t : samples) worst = std::max(worst, transform_residual(t, sign));
        if (worst < best.residual) best = {sign, worst};
    }
    return best;
}

TorsionTransformFit torsion_transform_check(const TorsionField& before, const TorsionField& after, const Jet& phi) {
    const TorsionSample sample{before, after, phi};
    return torsion_transform_check(std::span<const TorsionSample>(&sample, 1));
}

PointAnalysis analyze_point(const SurfaceSpec& spec, double u, double v, const std::optional<Expr>& gauge,
                            double tol_flat) {
    PointAnalysis a;
    a.X = spec.evaluate_jet3(u, v);
    a.fff = first_fundamental_form(a.X);
    a.conformality_defect = conformality_defect(a.X);
    a.frame = normal_frame(a.X);
    if (gauge) {
        const std::array<Jet, 2> slots{Jet::variable(Var::u, u), Jet::variable(Var::v, v)};
        a.frame = rotate_frame(a.frame, evaluate_on_jets(*gauge, slots));
    }
    a.frame_deviation = frame_deviation(a.X, a.frame);
    a.sections.reserve(a.frame.size());
    for (std::size_t k = 0; k < a.frame.size(); ++k) {
        a.sections.push_back(section_data(a.X, a.frame[k], a.fff, static_cast<int>(k) + 1));
    }
    a.sigma = torsion_coefficients(a.frame);
    a.weingarten_residual = weingarten_residual(a.X, a.frame, a.sigma);
    if (spec.n() == 4) {
        a.curvature = normal_curvature_tensor(a.sigma, tol_flat);
        a.ricci = ricci_residual(*a.curvature, a.sections, a.fff.g_inv);
        a.integrability_residual = a.sigma(0, 1, 0).dv() - a.sigma(0, 1, 1).du();
    }
    return a;
}

FlatnessReport flatness_test(const SurfaceSpec& spec, const FlatnessOptions& options) {
    if (spec.n() != 4) throw DimensionError("flatness test needs n = 4, got n = " + std::to_string(spec.n()));
    const Grid grid(options.nodes, spec.radius());
    const auto pts = grid.masked_points();

    struct Sample {
        CurvatureRecord record;
        double identity_defect, torsion_antisym, curvature_antisym, same_section;
    };
    const auto samples = parallel_map<Sample>(pts.size(), [&](std::size_t k) {
        const PointAnalysis a = analyze_point(spec, pts[k].u, pts[k].v, options.gauge, options.tol_flat);
        const NormalCurvature& S = *a.curvature;
        Sample s{};
        s.record = {pts[k].u, pts[k].v, S.S_1_12_2(), S.S_2_12_1(), S.max_abs, a.ricci->residual};
        s.identity_defect = std::abs(S.S_1_12_2() - *a.integrability_residual);
        s.torsion_antisym = a.sigma.antisymmetry_defect();
        for (int sec = 0; sec < 2; ++sec) {
            for (int o = 0; o < 2; ++o) {
                for (int i = 0; i < 2; ++i) {
                    for (int j = 0; j < 2; ++j) {
                        s.curvature_antisym = std::max(s.curvature_antisym, std::abs(S(sec, o, i, j) + S(sec, o, j, i)));
                        if (sec == o) s.same_section = std::max(s.same_section, std::abs(S(sec, o, i, j)));
                    }
                }
            }
        }
        return s;
    });

    FlatnessReport r;
    r.tol_flat = options.tol_flat;
    r.points = static_cast<int>(pts.size());
    double sum = 0.0;
    for (const Sample& s : samples) {
        const CurvatureRecord& rec = s.record;
        if (rec.max_abs_S > r.max_S || r.records.empty()) {
            r.max_S = rec.max_abs_S;
            r.argmax_u = rec.u;
            r.argmax_v = rec.v;
        }
        sum += rec.max_abs_S;
        r.max_ricci_residual = std::max(r.max_ricci_residual, rec.ricci_residual);
        r.max_integrability_identity_defect = std::max(r.max_integrability_identity_defect, s.identity_defect);
        r.max_torsion_antisymmetry = std::max(r.max_torsion_antisymmetry, s.torsion_antisym);
        r.max_curvature_antisymmetry = std::max(r.max_curvature_antisymmetry, s.curvature_antisym);
        r.max_same_section_S = std::max(r.max_same_section_S, s.same_section);
        r.records.push_back(rec);
    }
    r.mean_abs_S = pts.empty() ? 0.0 : sum / static_cast<double>(pts.size());
    r.flat = r.max_S <= options.tol_flat;
    return r;
}

double sync_tolerance(double spacing, double diameter) {
    return std::max(1e-6, 4.0 * spacing * spacing * diameter);
}

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

/// Cumulative trapezoid F(k) = integral from x_c to x_k of f, for k in [lo, hi].
std::vector<double> cumulative(const std::vector<double>& f, int c, int lo, int hi, double h) {
    std::vector<double> F(f.size(), kNaN);
    F[static_cast<std::size_t>(c)] = 0.0;
    for (int k = c + 1; k <= hi; ++k) {
        const auto uk = static_cast<std::size_t>(k);
        F[uk] = F[uk - 1] + 0.5 * h * (f[uk - 1] + f[uk]);
    }
    for (int k = c - 1; k >= lo; --k) {
        const auto uk = static_cast<std::size_t>(k);
        F[uk] = F[uk + 1] - 0.5 * h * (f[uk + 1] + f[uk]);
    }
    return F;
}

/// Contiguous index range [lo, hi] of the disc along a line through `c`.
std::pair<int, int> masked_range(const Grid& grid, int fixed, bool along_u) {
    const int c = grid.center();
    int lo = c, hi = c;
    auto inside = [&](int k) { return along_u ? grid.inside(k, fixed) : grid.inside(fixed, k); };
    while (lo - 1 >= 0 && inside(lo - 1)) --lo;
    while (hi + 1 < grid.nodes() && inside(hi + 1)) ++hi;
    return {lo, hi};
}

}  // namespace

SynthesisResult synthesize_torsion_free(const SurfaceSpec& spec, const SynthesisOptions& options) {
    if (spec.n() != 4) throw DimensionError("torsion-free synthesis needs n = 4, got n = " + std::to_string(spec.n()));
    if (options.nodes < 3 || options.nodes % 2 == 0) {
        throw GridError("disconnected grid: " + std::to_string(options.nodes) +
                        " nodes per side leave no center node to integrate from");
    }
    const Grid grid(options.nodes, spec.radius());
    const int n = grid.nodes();
    const int c = grid.center();
    const double h = grid.spacing();
    const std::size_t total = static_cast<std::size_t>(n) * static_cast<std::size_t>(n);

    struct Node {
        bool inside = false;
        NormalFrame frame;
        TorsionField sigma;
        double integrability = kNaN;
    };
    std::vector<Node> nodes = parallel_map<Node>(total, [&](std::size_t k) {
        const int i = static_cast<int>(k % static_cast<std::size_t>(n));
        const int j = static_cast<int>(k / static_cast<std::size_t>(n));
        Node node;
        if (!grid.inside(i, j)) return node;
        node.inside = true;
        const VecJet X = spec.evaluate_jet3(grid.coord(i), grid.coord(j));
        node.frame = normal_frame(X);
        if (options.gauge) {
            const std::array<Jet, 2> slots{Jet::variable(Var::u, X.u), Jet::variable(Var::v, X.v)};
            node.frame = rotate_frame(node.frame, evaluate_on_jets(*options.gauge, slots));
        }
        node.sigma = torsion_coefficients(node.frame);
        node.integrability = node.sigma(0, 1, 0).dv() - node.sigma(0, 1, 1).du();
        return node;
    });

    auto at = [&](int i, int j) -> const Node& { return nodes[grid.flat(i, j)]; };
    auto s11 = [&](int i, int j) { return at(i, j).sigma(0, 1, 0).value(); };
    auto s12 = [&](int i, int j) { return at(i, j).sigma(0, 1, 1).value(); };

    RotationField field;
    field.grid = grid;
    field.phi.assign(total, kNaN);
    field.phi_u.assign(total, kNaN);
    field.phi_v.assign(total, kNaN);
    field.phi_column_first.assign(total, kNaN);
    field.integrability.assign(total, kNaN);
    field.transformed_torsion.assign(total, kNaN);

    const auto sz = static_cast<std::size_t>(n);
    // Row-first: (0,0) -> (u,0) -> (u,v).
    {
        const auto [lo, hi] = masked_range(grid, c, true);
        std::vector<double> f(sz, 0.0);
        for (int i = lo; i <= hi; ++i) f[static_cast<std::size_t>(i)] = -s11(i, c);
        const std::vector<double> base = cumulative(f, c, lo, hi, h);
        for (int i = lo; i <= hi; ++i) {
            const auto [jlo, jhi] = masked_range(grid, i, false);
            std::vector<double> g(sz, 0.0), dg(sz, 0.0);
            for (int j = jlo; j <= jhi; ++j) {
                g[static_cast<std::size_t>(j)] = -s12(i, j);
                dg[static_cast<std::size_t>(j)] = -at(i, j).sigma(0, 1, 1).du();
            }
            const std::vector<double> G = cumulative(g, c, jlo, jhi, h);
            const std::vector<double> dG = cumulative(dg, c, jlo, jhi, h);
            for (int j = jlo; j <= jhi; ++j) {
                const std::size_t k = grid.flat(i, j);
                field.phi[k] = base[static_cast<std::size_t>(i)] + G[static_cast<std::size_t>(j)];
                field.phi_u[k] = -s11(i, c) + dG[static_cast<std::size_t>(j)];
                field.phi_v[k] = -s12(i, j);
            }
        }
    }
    // Column-first: (0,0) -> (0,v) -> (u,v).
    {
        const auto [lo, hi] = masked_range(grid, c, false);
        std::vector<double> f(sz, 0.0);
        for (int j = lo; j <= hi; ++j) f[static_cast<std::size_t>(j)] = -s12(c, j);
        const std::vector<double> base = cumulative(f, c, lo, hi, h);
        for (int j = lo; j <= hi; ++j) {
            const auto [ilo, ihi] = masked_range(grid, j, true);
            std::vector<double> g(sz, 0.0);
            for (int i = ilo; i <= ihi; ++i) g[static_cast<std::size_t>(i)] = -s11(i, j);
            const std::vector<double> G = cumulative(g, c, ilo, ihi, h);
            for (int i = ilo; i <= ihi; ++i) {
                field.phi_column_first[grid.flat(i, j)] = base[static_cast<std::size_t>(j)] + G[static_cast<std::size_t>(i)];
            }
        }
    }

    std::vector<TorsionSample> samples(total);
    parallel_for(total, [&](std::size_t k) {
        if (!nodes[k].inside) return;
        std::array<double, Jet::kSize> coeffs{};
        coeffs[0] = field.phi[k];
        coeffs[1] = field.phi_u[k];
        coeffs[2] = field.phi_v[k];
        const Jet phi = Jet::from_coeffs(coeffs, 1);
        const NormalFrame rotated = rotate_frame(nodes[k].frame, phi);
        samples[k] = {nodes[k].sigma, torsion_coefficients(rotated), phi};
    });

    SynthesisResult result;
    std::vector<TorsionSample> inside_samples;
    for (std::size_t k = 0; k < total; ++k) {
        if (!nodes[k].inside) continue;
        const TorsionSample& s = samples[k];
        const double t = std::max(std::abs(s.after(0, 1, 0).value()), std::abs(s.after(0, 1, 1).value()));
        field.transformed_torsion[k] = t;
        field.integrability[k] = nodes[k].integrability;
        result.max_transformed_torsion = std::max(result.max_transformed_torsion, t);
        result.max_integrability_residual = std::max(result.max_integrability_residual, std::abs(nodes[k].integrability));
        result.max_path_difference = std::max(result.max_path_difference, std::abs(field.phi[k] - field.phi_column_first[k]));
        inside_samples.push_back(s);
    }
    result.origin_integrability_residual = at(c, c).integrability;
    result.transform_fit = torsion_transform_check(inside_samples);
    result.tol_sync = options.tol_sync > 0.0 ? options.tol_sync : sync_tolerance(h, 2.0 * grid.radius());
    result.success = result.max_transformed_torsion <= result.tol_sync;
    result.field = std::move(field);
    return result;
}

}  // namespace geo
