#include <cmath>
#include <numbers>
#include <random>

#include <gtest/gtest.h>

#include "geo/error.hpp"
#include "geo/expr.hpp"
#include "geo/normal_bundle.hpp"
#include "geo/validation.hpp"
#include "oracle.hpp"

using namespace geo;

namespace {

SurfaceSpec builtin(Builtin id) { return SurfaceSpec::builtin(id); }

Jet phi_jet(const std::string& src, double u, double v) {
    const std::array<Jet, 2> slots{Jet::variable(Var::u, u), Jet::variable(Var::v, v)};
    return evaluate_on_jets(parse_expression(src, {"u", "v"}), slots);
}

double max_sigma(const TorsionField& s) {
    double m = 0.0;
    for (const Jet& j : s.entries) m = std::max(m, std::abs(j.value()));
    return m;
}

/// Ricci right-hand side from plain matrices: (L_s g^-1 L_o)_12 - (L_s g^-1 L_o)_21.
double ricci_rhs(const Eigen::Matrix2d& Ls, const Eigen::Matrix2d& Lo, const Eigen::Matrix2d& g) {
    const Eigen::Matrix2d M = Ls * g.inverse() * Lo;
    return M(0, 1) - M(1, 0);
}

}  // namespace

TEST(Torsion, PlaneIsZero) {
    const NormalFrame f = normal_frame(builtin(Builtin::plane).evaluate_jet3(0.2, 0.4));
    const TorsionField s = torsion_coefficients(f);
    for (const Jet& j : s.entries) EXPECT_EQ(max_abs_diff(j, Jet::constant(0.0, j.order())), 0.0);
}

TEST(Torsion, CliffordFramesAreTorsionFree) {
    for (auto [u, v] : {std::pair{0.0, 0.0}, {0.3, -0.6}}) {
        const NormalFrame gs = normal_frame(builtin(Builtin::clifford).evaluate_jet3(u, v));
        EXPECT_LE(max_sigma(torsion_coefficients(gs)), 1e-15);
        // {X, (cos u, sin u, -cos v, -sin v)/sqrt 2} up to sign of the second vector.
        const NormalFrame aligned = rotate_frame(gs, Jet::constant(std::numbers::pi / 4));
        EXPECT_LE(max_sigma(torsion_coefficients(aligned)), 1e-15);
    }
}

TEST(Torsion, W2AtOrigin) {
    const NormalFrame f = normal_frame(builtin(Builtin::w2).evaluate_jet3(0, 0));
    const TorsionField s = torsion_coefficients(f);
    EXPECT_EQ(s(0, 1, 0).value(), 0.0);
    EXPECT_EQ(s(0, 1, 1).value(), 0.0);
    const double curl = s(0, 1, 0).dv() - s(0, 1, 1).du();
    EXPECT_NEAR(std::abs(curl), 8.0, 1e-12);
    EXPECT_LE(s.antisymmetry_defect(), 1e-15);
}

TEST(Torsion, AgainstDifferences) {
    std::mt19937_64 rng(11);
    std::vector<SurfaceSpec> surfaces{builtin(Builtin::w2), builtin(Builtin::z3), builtin(Builtin::sphere),
                                      builtin(Builtin::enneper), random_cubic_graph(rng, "g")};
    for (const SurfaceSpec& s : surfaces) {
        const auto X = [&](double u, double v) { return s.evaluate_point(u, v); };
        for (auto [u, v] : {std::pair{0.1, 0.3}, {-0.4, -0.2}}) {
            const TorsionField sigma = torsion_coefficients(normal_frame(s.evaluate_jet3(u, v)));
            const oracle::Geometry G = oracle::geometry(X, u, v);
            for (std::size_t a = 0; a < sigma.sections; ++a) {
                for (std::size_t b = 0; b < sigma.sections; ++b) {
                    for (int i = 0; i < 2; ++i) {
                        EXPECT_NEAR(sigma(a, b, i).value(), G.sigma[a][b][static_cast<std::size_t>(i)], 1e-6)
                            << s.name();
                    }
                }
            }
            if (s.n() == 4) {
                const NormalCurvature S = normal_curvature_tensor(sigma);
                EXPECT_NEAR(S.S_1_12_2(), G.S_1_12_2, 1e-5 * std::max(1.0, std::abs(G.S_1_12_2))) << s.name();
            }
        }
    }
}

TEST(NormalCurvature, Examples) {
    const auto at = [](Builtin id, double u, double v) {
        return normal_curvature_tensor(torsion_coefficients(normal_frame(builtin(id).evaluate_jet3(u, v))));
    };
    const NormalCurvature plane = at(Builtin::plane, 0.1, 0.2);
    EXPECT_EQ(plane.max_abs, 0.0);
    EXPECT_TRUE(plane.flat);

    const NormalCurvature w2 = at(Builtin::w2, 0, 0);
    EXPECT_NEAR(std::abs(w2.S_1_12_2()), 8.0, 1e-12);
    EXPECT_DOUBLE_EQ(w2.S_2_12_1(), -w2.S_1_12_2());
    EXPECT_FALSE(w2.flat);
    for (int s = 0; s < 2; ++s) {
        for (int o = 0; o < 2; ++o) {
            for (int i = 0; i < 2; ++i) {
                for (int j = 0; j < 2; ++j) EXPECT_EQ(w2(s, o, i, j), -w2(s, o, j, i));
            }
        }
    }

    double worst = 0.0;
    for (const GridPoint& p : Grid(33, 1.0).masked_points()) worst = std::max(worst, at(Builtin::clifford, p.u, p.v).max_abs);
    EXPECT_LE(worst, 1e-8);
}

TEST(Ricci, W2RightHandSide) {
    const VecJet X = builtin(Builtin::w2).evaluate_jet3(0, 0);
    const NormalFrame f = normal_frame(X);
    const auto secs = second_fundamental_form(X, f);
    const NormalCurvature S = normal_curvature_tensor(torsion_coefficients(f));
    const RicciCheck r = ricci_residual(S, secs, first_fundamental_form(X).g_inv);
    // (2*2 - 0) + (0 - (-2)*2) from the matrices L_1 = diag(2,-2), L_2 = [[0,2],[2,0]].
    EXPECT_NEAR(r.rhs(0, 1), 8.0, 1e-14);
    EXPECT_NEAR(r.rhs(1, 0), -8.0, 1e-14);
    EXPECT_LE(r.residual, 1e-8);
}

TEST(Ricci, IndependentRightHandSideOnRandomGraphs) {
    std::mt19937_64 rng(2024);
    std::uniform_real_distribution<double> d(-0.6, 0.6);
    for (int g = 0; g < 5; ++g) {
        const SurfaceSpec s = random_cubic_graph(rng, "g" + std::to_string(g));
        const auto X = [&](double u, double v) { return s.evaluate_point(u, v); };
        for (int k = 0; k < 10; ++k) {
            const double u = d(rng), v = d(rng);
            const PointAnalysis a = analyze_point(s, u, v);
            EXPECT_LE(a.ricci->residual, 1e-7);
            EXPECT_LE(a.weingarten_residual, 1e-8);
            // Oracle: the Ricci right-hand side from difference-quotient L and g.
            const oracle::Geometry G = oracle::geometry(X, u, v);
            EXPECT_NEAR(a.curvature->S_1_12_2(), ricci_rhs(G.L[0], G.L[1], G.g), 1e-5);
        }
    }
}

TEST(RotateFrame, Examples) {
    const VecJet X = builtin(Builtin::z3).evaluate_jet3(0.3, 0.2);
    const NormalFrame f = normal_frame(X);
    const NormalFrame zero = rotate_frame(f, Jet::constant(0.0));
    EXPECT_LE((zero[0].values() - f[0].values()).norm(), 1e-16);
    EXPECT_LE((zero[1].values() + f[1].values()).norm(), 1e-16);
    const NormalFrame quarter = rotate_frame(f, Jet::constant(std::numbers::pi / 2));
    EXPECT_LE((quarter[0].values() - f[1].values()).norm(), 1e-15);
    EXPECT_LE((quarter[1].values() - f[0].values()).norm(), 1e-15);
}

TEST(RotateFrame, StaysOrthonormal) {
    std::mt19937_64 rng(4);
    std::uniform_real_distribution<double> d(-0.6, 0.6), angle(-10, 10);
    for (int k = 0; k < 50; ++k) {
        const SurfaceSpec s = random_cubic_graph(rng, "g");
        const VecJet X = s.evaluate_jet3(d(rng), d(rng));
        const Jet phi = angle(rng) + 0.7 * Jet::variable(Var::u, X.u) * Jet::variable(Var::v, X.v);
        const NormalFrame r = rotate_frame(normal_frame(X), phi);
        const FrameDeviation dev = frame_deviation(X, r);
        EXPECT_LE(dev.orthonormality, 1e-12);
        EXPECT_LE(dev.tangency, 1e-12);
    }
}

TEST(TorsionTransform, PlaneAnyAngle) {
    for (const char* phi : {"u*v", "sin(u) + v^2", "0.5"}) {
        const VecJet X = builtin(Builtin::plane).evaluate_jet3(0.3, -0.1);
        const NormalFrame f = normal_frame(X);
        const Jet p = phi_jet(phi, X.u, X.v);
        const TorsionField after = torsion_coefficients(rotate_frame(f, p));
        EXPECT_NEAR(std::abs(after(0, 1, 0).value()), std::abs(p.du()), 1e-10);
        EXPECT_NEAR(std::abs(after(0, 1, 1).value()), std::abs(p.dv()), 1e-10);
        EXPECT_LE(torsion_transform_check(torsion_coefficients(f), after, p).residual, 1e-10);
    }
}

TEST(TorsionTransform, W2SingleSignOverGrid) {
    std::vector<TorsionSample> samples;
    for (const GridPoint& p : Grid(9, 1.0).masked_points()) {
        const VecJet X = builtin(Builtin::w2).evaluate_jet3(p.u, p.v);
        const NormalFrame f = normal_frame(X);
        const Jet phi = phi_jet("u*v", p.u, p.v);
        samples.push_back({torsion_coefficients(f), torsion_coefficients(rotate_frame(f, phi)), phi});
    }
    const TorsionTransformFit fit = torsion_transform_check(samples);
    EXPECT_LE(fit.residual, 1e-8);
    // The reflecting rotation gives sigma~ = -(sigma + dphi).
    EXPECT_EQ(fit.sign, -1);
}

TEST(TorsionTransform, ConstantAnglePreservesMagnitudes) {
    const VecJet X = builtin(Builtin::z3).evaluate_jet3(-0.2, 0.5);
    const NormalFrame f = normal_frame(X);
    const TorsionField before = torsion_coefficients(f);
    const TorsionField after = torsion_coefficients(rotate_frame(f, Jet::constant(1.234)));
    for (int i = 0; i < 2; ++i) EXPECT_NEAR(std::abs(after(0, 1, i).value()), std::abs(before(0, 1, i).value()), 1e-14);
}

TEST(Flatness, Verdicts) {
    FlatnessOptions o;
    o.nodes = 33;
    const FlatnessReport plane = flatness_test(builtin(Builtin::plane), o);
    EXPECT_TRUE(plane.flat);
    EXPECT_EQ(plane.max_S, 0.0);
    const FlatnessReport clifford = flatness_test(builtin(Builtin::clifford), o);
    EXPECT_TRUE(clifford.flat);
    EXPECT_LE(clifford.max_S, 1e-8);
    const FlatnessReport w2 = flatness_test(builtin(Builtin::w2), o);
    EXPECT_FALSE(w2.flat);
    EXPECT_GE(w2.max_S, 4.0);
    EXPECT_NEAR(w2.max_S, 8.0, 1e-12);  // attained at the origin node
    for (const FlatnessReport* r : {&plane, &clifford, &w2}) {
        EXPECT_LE(r->max_integrability_identity_defect, 1e-9);
        EXPECT_LE(r->max_ricci_residual, 1e-7);
        EXPECT_LE(r->max_torsion_antisymmetry, 1e-12);
        EXPECT_LE(r->max_curvature_antisymmetry, 1e-12);
        EXPECT_EQ(static_cast<std::size_t>(r->points), r->records.size());
    }
    EXPECT_THROW((void)flatness_test(builtin(Builtin::enneper), o), DimensionError);
}

TEST(Flatness, GaugeDoesNotChangeVerdict) {
    for (Builtin id : {Builtin::clifford, Builtin::w2}) {
        FlatnessOptions o;
        o.nodes = 17;
        const bool base = flatness_test(builtin(id), o).flat;
        for (const char* phi : {"0.3*u + 0.2*v", "sin(u*v)", "exp(u) - v^3"}) {
            o.gauge = parse_expression(phi, {"u", "v"});
            EXPECT_EQ(flatness_test(builtin(id), o).flat, base) << phi;
        }
    }
}

TEST(Synthesis, Plane) {
    const SynthesisResult r = synthesize_torsion_free(builtin(Builtin::plane));
    EXPECT_TRUE(r.success);
    EXPECT_EQ(r.max_transformed_torsion, 0.0);
    for (double x : r.field.phi) {
        if (!std::isnan(x)) EXPECT_EQ(x, 0.0);
    }
}

TEST(Synthesis, CliffordSucceeds) {
    const SynthesisResult r = synthesize_torsion_free(builtin(Builtin::clifford), {33, {}, 0.0});
    EXPECT_TRUE(r.success);
    EXPECT_LE(r.max_transformed_torsion, 1e-4);
    EXPECT_LE(r.max_transformed_torsion, r.tol_sync);
}

TEST(Synthesis, CliffordWithGaugeSucceeds) {
    SynthesisOptions o;
    o.nodes = 33;
    o.gauge = parse_expression("u^2 - v^2 + 0.1", {"u", "v"});
    const SynthesisResult r = synthesize_torsion_free(builtin(Builtin::clifford), o);
    EXPECT_TRUE(r.success);
    const double h = r.field.grid.spacing();
    EXPECT_LE(r.max_path_difference, 10 * h * h * 2 * std::numbers::sqrt2);
    EXPECT_LE(r.max_transformed_torsion, r.tol_sync);
}

TEST(Synthesis, W2Fails) {
    const SynthesisResult r = synthesize_torsion_free(builtin(Builtin::w2), {33, {}, 0.0});
    EXPECT_FALSE(r.success);
    EXPECT_NEAR(std::abs(r.origin_integrability_residual), 8.0, 1e-4);
}

TEST(Synthesis, Preconditions) {
    EXPECT_THROW((void)synthesize_torsion_free(builtin(Builtin::w2), {32, {}, 0.0}), GridError);
    EXPECT_THROW((void)synthesize_torsion_free(builtin(Builtin::enneper), {33, {}, 0.0}), DimensionError);
    EXPECT_DOUBLE_EQ(sync_tolerance(1.0 / 16, 2.0), 4.0 / 256 * 2);
    EXPECT_DOUBLE_EQ(sync_tolerance(1e-4, 2.0), 1e-6);
}
