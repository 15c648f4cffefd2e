#include "geo/estimates.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>

#include <json.hpp>

#include "geo/error.hpp"
#include "geo/geometry.hpp"
#include "geo/parallel.hpp"

namespace geo {

MeanCurvatureField MeanCurvatureField::from_expressions(const std::array<std::string, 4>& components, double h0,
                                                        double h1, double h2, double alpha) {
    static const std::vector<std::string> kVars{"x1", "x2", "x3", "x4"};
    if (!(h0 >= 0.0) || !(h1 >= 0.0) || !(h2 >= 0.0)) throw SpecError("h0, h1, h2 must be >= 0");
    if (!(alpha > 0.0 && alpha <= 1.0)) throw SpecError("alpha must lie in (0, 1]");
    MeanCurvatureField f;
    f.sources_ = components;
    for (std::size_t k = 0; k < 4; ++k) {
        try {
            f.exprs_.push_back(parse_expression(components[k], std::span<const std::string>(kVars)));
        } catch (const ParseError& e) {
            throw SpecError("field component " + std::to_string(k + 1) + ": " + e.what());
        }
    }
    f.h0_ = h0;
    f.h1_ = h1;
    f.h2_ = h2;
    f.alpha_ = alpha;
    return f;
}

MeanCurvatureField MeanCurvatureField::zero() { return from_expressions({"0", "0", "0", "0"}); }

Eigen::Vector4d MeanCurvatureField::operator()(const Eigen::Vector4d& X) const {
    const std::array<double, 4> slots{X(0), X(1), X(2), X(3)};
    Eigen::Vector4d out;
    for (int k = 0; k < 4; ++k) out(k) = evaluate(exprs_[static_cast<std::size_t>(k)], slots);
    return out;
}

MeanCurvatureField load_mean_curvature_field(std::string_view document) {
    using nlohmann::json;
    json doc;
    try {
        doc = json::parse(document);
    } catch (const json::parse_error& e) {
        throw SpecError(std::string("malformed JSON: ") + e.what());
    }
    if (!doc.is_object() || !doc.contains("components") || !doc["components"].is_array() ||
        doc["components"].size() != 4) {
        throw SpecError("field document needs 'components': an array of 4 strings");
    }
    std::array<std::string, 4> comps;
    for (std::size_t k = 0; k < 4; ++k) {
        if (!doc["components"][k].is_string()) throw SpecError("field components must be strings");
        comps[k] = doc["components"][k].get<std::string>();
    }
    auto number = [&](const char* key, double fallback) {
        if (!doc.contains(key)) return fallback;
        if (!doc[key].is_number()) throw SpecError(std::string("field '") + key + "' must be a number");
        return doc[key].get<double>();
    };
    return MeanCurvatureField::from_expressions(comps, number("h0", 0.0), number("h1", 0.0), number("h2", 0.0),
                                                number("alpha", 1.0));
}

HeinzQuantity heinz_quantity_r3(const SurfaceSpec& spec, double R) {
    if (spec.n() != 3) throw DimensionError("heinz quantity needs n = 3, got n = " + std::to_string(spec.n()));
    if (!(R > 0.0)) throw ConfigError("R must be positive");
    const VecJet X = spec.evaluate_jet3(0.0, 0.0);
    HeinzQuantity q;
    q.R = R;
    q.conformality_defect = conformality_defect(X);
    if (q.conformality_defect > kConformalTolerance) {
        throw ConformalityError("surface is not conformal at the origin (defect " +
                                format_double(q.conformality_defect) + ")");
    }
    const FundamentalForm fff = first_fundamental_form(X);
    const NormalFrame frame = normal_frame(X);
    const SectionData s = section_data(X, frame[0], fff, 1);
    const UnitNormalR3 N = unit_normal_r3(X);
    q.W = fff.W;
    q.kappa = s.kappa;
    q.quantity = (s.kappa[0] * s.kappa[0] + s.kappa[1] * s.kappa[1]) * R * R;
    q.bound = N.gradient_norm_sq() / fff.W * R * R;
    return q;
}

double sup_norm(const SurfaceSpec& spec, double R, int nodes) {
    const SurfaceSpec disc = spec.with_radius(R);
    const auto pts = Grid(nodes, R).masked_points();
    const auto norms = parallel_map<double>(pts.size(), [&](std::size_t k) {
        return disc.evaluate_point(pts[k].u, pts[k].v).norm();
    });
    double m = 0.0;
    for (double x : norms) m = std::max(m, x);
    return m;
}

KnQuantity kn_quantity_rn(const SurfaceSpec& spec, double R, int nodes) {
    if (!(R > 0.0)) throw ConfigError("R must be positive");
    const SurfaceSpec disc = spec.with_radius(R);
    const VecJet X = disc.evaluate_jet3(0.0, 0.0);
    const FundamentalForm fff = first_fundamental_form(X);
    const NormalFrame frame = normal_frame(X);

    KnQuantity q;
    q.R = R;
    q.sup_norm = sup_norm(spec, R, nodes);
    const double scale = std::pow(R, 4) / (q.sup_norm * q.sup_norm);
    for (std::size_t k = 0; k < frame.size(); ++k) {
        const SectionData s = section_data(X, frame[k], fff, static_cast<int>(k) + 1);
        q.K.push_back(s.K);
        q.quantity.push_back(std::abs(s.K) * scale);
    }
    const Eigen::VectorXd xuu = X.coeff(2, 0), xuv = X.coeff(1, 1), xvv = X.coeff(0, 2);
    q.pointwise_bound = (xuu.norm() * xvv.norm() + xuv.squaredNorm()) / (fff.W * fff.W);
    q.scaled_bound = q.pointwise_bound * scale;
    q.harmonicity_residual = (xuu + xvv).norm();
    return q;
}

GrowthFit growth_exponent_fit(const SurfaceSpec& spec, std::span<const double> R_values, int nodes) {
    std::vector<double> Rs(R_values.begin(), R_values.end());
    for (double R : Rs) {
        if (!(R > 0.0)) throw ConfigError("R values must be positive");
    }
    std::vector<double> distinct = Rs;
    std::sort(distinct.begin(), distinct.end());
    distinct.erase(std::unique(distinct.begin(), distinct.end()), distinct.end());
    if (distinct.size() < 3) throw ConfigError("growth fit needs at least 3 distinct R values");

    GrowthFit fit;
    fit.R = Rs;
    for (double R : Rs) fit.sup_norm.push_back(sup_norm(spec, R, nodes));

    const double first = fit.sup_norm.front();
    if (std::all_of(fit.sup_norm.begin(), fit.sup_norm.end(), [&](double s) { return s == first; })) {
        fit.degenerate = true;
        fit.epsilon = 0.0;
        fit.omega = first;
        return fit;
    }
    const double m = static_cast<double>(Rs.size());
    double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
    for (std::size_t k = 0; k < Rs.size(); ++k) {
        const double x = std::log(Rs[k]);
        const double y = std::log(fit.sup_norm[k]);
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
    }
    fit.epsilon = (m * sxy - sx * sy) / (m * sxx - sx * sx);
    fit.omega = std::exp((sy - fit.epsilon * sx) / m);
    return fit;
}

PmcReport pmc_residual(const SurfaceSpec& spec, const MeanCurvatureField& field, int nodes) {
    if (spec.n() != 4) throw DimensionError("prescribed mean curvature system needs n = 4");
    const auto pts = Grid(nodes, spec.radius()).masked_points();
    struct Sample {
        double residual, defect;
    };
    const auto samples = parallel_map<Sample>(pts.size(), [&](std::size_t k) {
        const VecJet X = spec.evaluate_jet3(pts[k].u, pts[k].v);
        const double defect = conformality_defect(X);
        if (defect > kPmcConformalTolerance) {
            throw ConformalityError("prescribed mean curvature system presumes conformal parameters; defect " +
                                    format_double(defect) + " at (" + format_double(pts[k].u) + ", " +
                                    format_double(pts[k].v) + ")");
        }
        const FundamentalForm fff = first_fundamental_form(X);
        const NormalFrame frame = normal_frame(X);
        const Eigen::Vector4d x = X.values();
        const Eigen::Vector4d HH = field(x);
        Eigen::Vector4d r = X.coeff(2, 0) + X.coeff(0, 2);
        for (std::size_t s = 0; s < frame.size(); ++s) {
            const Eigen::Vector4d N = frame[s].values();
            r -= 2.0 * HH.dot(N) * fff.W * N;
        }
        return Sample{r.norm(), defect};
    });
    PmcReport rep;
    rep.points = static_cast<int>(pts.size());
    for (std::size_t k = 0; k < pts.size(); ++k) {
        if (samples[k].residual > rep.max_residual) {
            rep.max_residual = samples[k].residual;
            rep.argmax_u = pts[k].u;
            rep.argmax_v = pts[k].v;
        }
        rep.max_conformality_defect = std::max(rep.max_conformality_defect, samples[k].defect);
    }
    return rep;
}

StructureReport structure_constant_check(const SurfaceSpec& spec, double h0, int nodes) {
    const auto pts = Grid(nodes, spec.radius()).masked_points();
    const auto ratios = parallel_map<double>(pts.size(), [&](std::size_t k) {
        const VecJet X = spec.evaluate_jet3(pts[k].u, pts[k].v);
        const double lap = (X.coeff(2, 0) + X.coeff(0, 2)).norm();
        const double grad = X.coeff(1, 0).squaredNorm() + X.coeff(0, 1).squaredNorm();
        if (!(grad > 0.0)) throw RegularityError("grad X vanishes; structure ratio undefined");
        return lap / grad;
    });
    StructureReport rep;
    rep.h0 = h0;
    for (std::size_t k = 0; k < pts.size(); ++k) {
        if (ratios[k] > rep.max_ratio) {
            rep.max_ratio = ratios[k];
            rep.argmax_u = pts[k].u;
            rep.argmax_v = pts[k].v;
        }
    }
    rep.pass = rep.max_ratio <= 2.0 * h0 + 1e-10;
    return rep;
}

OssermanReport osserman_angle(const SurfaceSpec& spec, int nodes) {
    if (spec.n() != 4) throw DimensionError("normal angle condition is implemented for n = 4");
    const auto pts = Grid(nodes, spec.radius()).masked_points();
    struct Sample {
        std::array<double, 2> per_section;
        double combined;
    };
    const auto samples = parallel_map<Sample>(pts.size(), [&](std::size_t k) {
        const VecJet X = spec.evaluate_jet3(pts[k].u, pts[k].v);
        const NormalFrame frame = normal_frame(X);
        Sample s{};
        double sq = 0.0;
        for (std::size_t n = 0; n < 2; ++n) {
            const double c = std::abs(frame[n].values()(0));
            s.per_section[n] = std::acos(std::min(c, 1.0));
            sq += c * c;
        }
        s.combined = std::acos(std::min(std::sqrt(sq), 1.0));
        return s;
    });
    OssermanReport rep;
    rep.min_angle_per_section.assign(2, std::numbers::pi);
    rep.min_angle = std::numbers::pi;
    for (std::size_t k = 0; k < pts.size(); ++k) {
        for (std::size_t n = 0; n < 2; ++n) {
            rep.min_angle_per_section[n] = std::min(rep.min_angle_per_section[n], samples[k].per_section[n]);
        }
        if (samples[k].combined < rep.min_angle) {
            rep.min_angle = samples[k].combined;
            rep.argmin_u = pts[k].u;
            rep.argmin_v = pts[k].v;
        }
    }
    rep.sin_omega = std::sin(rep.min_angle);
    return rep;
}

EnergyReport dirichlet_energy_and_geodesic_radius(const SurfaceSpec& spec, int nodes) {
    if (nodes < 3) throw ConfigError("energy quadrature needs at least 3 nodes");
    const double rho = spec.radius();
    EnergyReport rep;
    rep.radial_cells = std::max(1, (nodes - 1) / 2);
    rep.angular_cells = 4 * rep.radial_cells;
    const double dr = rho / rep.radial_cells;
    const double dt = 2.0 * std::numbers::pi / rep.angular_cells;

    const auto rows = parallel_map<double>(static_cast<std::size_t>(rep.radial_cells), [&](std::size_t a) {
        const double r = (static_cast<double>(a) + 0.5) * dr;
        double sum = 0.0;
        for (int b = 0; b < rep.angular_cells; ++b) {
            const double t = (b + 0.5) * dt;
            const VecJet X = spec.evaluate_jet3(r * std::cos(t), r * std::sin(t));
            sum += (X.coeff(1, 0).squaredNorm() + X.coeff(0, 1).squaredNorm()) * r;
        }
        return sum * dr * dt;
    });
    for (double row : rows) rep.energy += row;

    constexpr int kRays = 64;
    const int steps = 2 * rep.radial_cells;  // even, for Simpson
    const double ds = rho / steps;
    const auto lengths = parallel_map<double>(kRays, [&](std::size_t m) {
        const double theta = 2.0 * std::numbers::pi * static_cast<double>(m) / kRays;
        const double c = std::cos(theta), s = std::sin(theta);
        double sum = 0.0;
        for (int k = 0; k <= steps; ++k) {
            const double t = k * ds;
            const VecJet X = spec.evaluate_jet3(t * c, t * s);
            const double speed = (c * X.coeff(1, 0) + s * X.coeff(0, 1)).norm();
            const double w = (k == 0 || k == steps) ? 1.0 : (k % 2 == 1 ? 4.0 : 2.0);
            sum += w * speed;
        }
        return sum * ds / 3.0;
    });
    rep.r_upper = std::numeric_limits<double>::infinity();
    for (std::size_t m = 0; m < lengths.size(); ++m) {
        if (lengths[m] < rep.r_upper) {
            rep.r_upper = lengths[m];
            rep.argmin_theta = 2.0 * std::numbers::pi * static_cast<double>(m) / kRays;
        }
    }
    rep.d0_estimate = rep.energy / (rep.r_upper * rep.r_upper);
    return rep;
}

HolderReport holder_field_check(const MeanCurvatureField& field, int pairs, double box, std::uint64_t seed) {
    if (pairs < 100) throw ConfigError("Holder check needs at least 100 sample pairs");
    if (!(box > 0.0)) throw ConfigError("box bound must be positive");
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> normal(0.0, 1.0);
    std::uniform_real_distribution<double> unit(0.0, 1.0);

    auto direction = [&] {
        Eigen::Vector4d z;
        do {
            for (int k = 0; k < 4; ++k) z(k) = normal(rng);
        } while (z.norm() < 1e-12);
        return Eigen::Vector4d(z.normalized());
    };
    auto in_ball = [&] { return Eigen::Vector4d(direction() * box * std::pow(unit(rng), 0.25)); };

    HolderReport rep;
    rep.pairs = pairs;
    rep.max_ratio = -std::numeric_limits<double>::infinity();
    for (int p = 0; p < pairs; ++p) {
        const Eigen::Vector4d X1 = in_ball();
        const Eigen::Vector4d Z1 = direction();
        Eigen::Vector4d X2 = in_ball();
        // Mix of far pairs, near pairs and pairs sharing Z to expose both terms.
        if (p % 4 == 1 || p % 4 == 3) {
            X2 = X1 + 1e-2 * box * direction();
            if (X2.norm() > box) X2 = X2 * (box / X2.norm());
        }
        const Eigen::Vector4d Z2 = p % 2 == 0 ? direction() : Z1;
        const double dx = (X1 - X2).norm();
        if (dx == 0.0) continue;
        const double numerator = std::abs(field.H(X1, Z1) - field.H(X2, Z2)) - field.h2() * (Z1 - Z2).norm();
        const double ratio = numerator / std::pow(dx, field.alpha());
        if (ratio > rep.max_ratio) {
            rep.max_ratio = ratio;
            rep.witness = {X1, Z1, X2, Z2};
        }
    }
    // 1e-12 absorbs rounding in H when the declared bound is tight (h1 = 0).
    rep.pass = rep.max_ratio <= field.h1() * (1.0 + 1e-6) + 1e-12;
    return rep;
}

}  // namespace geo
