#include "geo/immersion.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <numbers>
#include <sstream>

#include <json.hpp>

#include "geo/error.hpp"
#include "geo/parallel.hpp"

namespace geo {

namespace {

// Closed-form catalog: each component is a sum of coef * U(u) * V(v) with
// U, V monomials or sin/cos, so every partial derivative is explicit.
struct Factor {
    enum class Type { mono, cos, sin } type = Type::mono;
    int power = 0;

    double derivative(int a, double x) const {
        switch (type) {
            case Type::mono: {
                if (a > power) return 0.0;
                double c = 1.0;
                for (int k = 0; k < a; ++k) c *= power - k;
                return c * std::pow(x, power - a);
            }
            case Type::cos: {
                static constexpr int kSign[4] = {1, -1, -1, 1};
                return kSign[a % 4] * (a % 2 == 0 ? std::cos(x) : std::sin(x));
            }
            case Type::sin: {
                static constexpr int kSign[4] = {1, 1, -1, -1};
                return kSign[a % 4] * (a % 2 == 0 ? std::sin(x) : std::cos(x));
            }
        }
        return 0.0;
    }
};

struct Term {
    double coef;
    Factor fu;
    Factor fv;
};

using Component = std::vector<Term>;

Factor mono(int p) { return {Factor::Type::mono, p}; }
Factor cosf() { return {Factor::Type::cos, 0}; }
Factor sinf() { return {Factor::Type::sin, 0}; }

std::vector<Component> builtin_components(Builtin id, int n) {
    const double r2 = 1.0 / std::numbers::sqrt2;
    switch (id) {
        case Builtin::plane: {
            std::vector<Component> comps(static_cast<std::size_t>(n));
            comps[0] = {{1.0, mono(1), mono(0)}};
            comps[1] = {{1.0, mono(0), mono(1)}};
            return comps;
        }
        case Builtin::w2:
            return {{{1.0, mono(1), mono(0)}},
                    {{1.0, mono(0), mono(1)}},
                    {{1.0, mono(2), mono(0)}, {-1.0, mono(0), mono(2)}},
                    {{2.0, mono(1), mono(1)}}};
        case Builtin::z3:
            return {{{1.0, mono(1), mono(0)}},
                    {{1.0, mono(0), mono(1)}},
                    {{1.0, mono(3), mono(0)}, {-3.0, mono(1), mono(2)}},
                    {{3.0, mono(2), mono(1)}, {-1.0, mono(0), mono(3)}}};
        case Builtin::clifford:
            return {{{r2, cosf(), mono(0)}}, {{r2, sinf(), mono(0)}}, {{r2, mono(0), cosf()}}, {{r2, mono(0), sinf()}}};
        case Builtin::sphere:
            return {{{1.0, cosf(), cosf()}}, {{1.0, sinf(), cosf()}}, {{1.0, mono(0), sinf()}}, {}};
        case Builtin::enneper:
            return {{{1.0, mono(1), mono(0)}, {-1.0 / 3.0, mono(3), mono(0)}, {1.0, mono(1), mono(2)}},
                    {{-1.0, mono(0), mono(1)}, {1.0 / 3.0, mono(0), mono(3)}, {-1.0, mono(2), mono(1)}},
                    {{1.0, mono(2), mono(0)}, {-1.0, mono(0), mono(2)}}};
        case Builtin::saddle:
            return {{{1.0, mono(1), mono(0)}}, {{1.0, mono(0), mono(1)}}, {{1.0, mono(1), mono(1)}}};
    }
    return {};
}

int builtin_dimension(Builtin id) {
    switch (id) {
        case Builtin::enneper:
        case Builtin::saddle: return 3;
        default: return 4;
    }
}

Jet component_jet(const Component& comp, double u, double v) {
    std::array<double, Jet::kSize> c{};
    for (int k = 0; k <= Jet::kMaxOrder; ++k) {
        for (int b = 0; b <= k; ++b) {
            const int a = k - b;
            double sum = 0.0;
            for (const Term& t : comp) sum += t.coef * t.fu.derivative(a, u) * t.fv.derivative(b, v);
            c[Jet::index(a, b)] = sum;
        }
    }
    return Jet::from_coeffs(c);
}

const std::vector<std::string>& variables_for(SurfaceKind kind) {
    static const std::vector<std::string> kGraph{"x", "y"};
    static const std::vector<std::string> kParam{"u", "v"};
    return kind == SurfaceKind::graph ? kGraph : kParam;
}

std::string point_text(double u, double v) {
    std::ostringstream os;
    os << "(" << u << ", " << v << ")";
    return os.str();
}

}  // namespace

const char* builtin_name(Builtin id) {
    switch (id) {
        case Builtin::plane: return "plane";
        case Builtin::w2: return "w2";
        case Builtin::z3: return "z3";
        case Builtin::clifford: return "clifford";
        case Builtin::sphere: return "sphere";
        case Builtin::enneper: return "enneper";
        case Builtin::saddle: return "saddle";
    }
    return "?";
}

std::optional<Builtin> builtin_from_name(std::string_view name) {
    for (Builtin id : {Builtin::plane, Builtin::w2, Builtin::z3, Builtin::clifford, Builtin::sphere,
                       Builtin::enneper, Builtin::saddle}) {
        if (name == builtin_name(id)) return id;
    }
    return std::nullopt;
}

SurfaceSpec SurfaceSpec::builtin(Builtin id, int n, double radius) {
    SurfaceSpec s;
    s.kind_ = SurfaceKind::builtin;
    s.builtin_ = id;
    s.name_ = builtin_name(id);
    if (id == Builtin::plane) {
        s.n_ = n == 0 ? 4 : n;
        if (s.n_ < 3) throw SpecError("plane: n must be >= 3");
    } else {
        s.n_ = builtin_dimension(id);
        if (n != 0 && n != s.n_) {
            throw SpecError(std::string("builtin '") + s.name_ + "' lives in R^" + std::to_string(s.n_) +
                            ", not R^" + std::to_string(n));
        }
    }
    if (!(radius > 0.0) || !std::isfinite(radius)) throw SpecError("radius must be positive");
    s.radius_ = radius;
    return s;
}

namespace {

std::vector<Expr> parse_components(const std::vector<std::string>& sources, SurfaceKind kind) {
    std::vector<Expr> out;
    const auto& vars = variables_for(kind);
    for (std::size_t k = 0; k < sources.size(); ++k) {
        try {
            out.push_back(parse_expression(sources[k], std::span<const std::string>(vars)));
        } catch (const ParseError& e) {
            throw SpecError("component " + std::to_string(k + 1) + ": " + e.what());
        }
    }
    return out;
}

}  // namespace

SurfaceSpec SurfaceSpec::graph(std::string name, std::vector<std::string> phis, double radius) {
    SurfaceSpec s;
    s.kind_ = SurfaceKind::graph;
    s.name_ = std::move(name);
    s.n_ = static_cast<int>(phis.size()) + 2;
    if (s.n_ < 3) throw SpecError("graph needs at least one component");
    if (!(radius > 0.0) || !std::isfinite(radius)) throw SpecError("radius must be positive");
    s.radius_ = radius;
    s.exprs_ = parse_components(phis, s.kind_);
    s.sources_ = std::move(phis);
    return s;
}

SurfaceSpec SurfaceSpec::parametric(std::string name, std::vector<std::string> components, double radius) {
    SurfaceSpec s;
    s.kind_ = SurfaceKind::parametric;
    s.name_ = std::move(name);
    s.n_ = static_cast<int>(components.size());
    if (s.n_ < 3) throw SpecError("parametric surface needs n >= 3 components");
    if (!(radius > 0.0) || !std::isfinite(radius)) throw SpecError("radius must be positive");
    s.radius_ = radius;
    s.exprs_ = parse_components(components, s.kind_);
    s.sources_ = std::move(components);
    return s;
}

SurfaceSpec SurfaceSpec::with_radius(double radius) const {
    if (!(radius > 0.0) || !std::isfinite(radius)) throw SpecError("radius must be positive");
    SurfaceSpec s = *this;
    s.radius_ = radius;
    return s;
}

SurfaceSpec SurfaceSpec::with_name(std::string name) const {
    SurfaceSpec s = *this;
    s.name_ = std::move(name);
    return s;
}

SurfaceSpec SurfaceSpec::dilated(double lambda) const {
    if (!(lambda > 0.0) || !std::isfinite(lambda)) throw SpecError("dilation factor must be positive");
    SurfaceSpec s = *this;
    s.scale_ *= lambda;
    s.radius_ *= lambda;
    return s;
}

void SurfaceSpec::check_domain(double u, double v) const {
    if (!std::isfinite(u) || !std::isfinite(v) || !contains(u, v)) {
        std::ostringstream os;
        os << "point " << point_text(u, v) << " lies outside the parameter disc of radius " << radius_;
        throw OutOfDomainError(os.str());
    }
}

VecJet SurfaceSpec::evaluate_unscaled(double u, double v) const {
    VecJet X(static_cast<std::size_t>(n_), u, v);
    if (kind_ == SurfaceKind::builtin) {
        const auto comps = builtin_components(*builtin_, n_);
        for (std::size_t k = 0; k < comps.size(); ++k) X.c[k] = component_jet(comps[k], u, v);
        return X;
    }
    const std::array<Jet, 2> slots{Jet::variable(Var::u, u), Jet::variable(Var::v, v)};
    std::size_t offset = 0;
    if (kind_ == SurfaceKind::graph) {
        X.c[0] = slots[0];
        X.c[1] = slots[1];
        offset = 2;
    }
    for (std::size_t k = 0; k < exprs_.size(); ++k) {
        try {
            X.c[offset + k] = evaluate_on_jets(exprs_[k], slots);
        } catch (const EvaluationError& e) {
            throw EvaluationError("component " + std::to_string(offset + k + 1) + " at " + point_text(u, v) +
                                  ": " + e.what());
        }
    }
    return X;
}

VecJet SurfaceSpec::evaluate_jet3(double u, double v) const {
    check_domain(u, v);
    if (scale_ == 1.0) return evaluate_unscaled(u, v);
    VecJet X = evaluate_unscaled(u / scale_, v / scale_);
    X.u = u;
    X.v = v;
    // d^k/du^k [lambda f(u/lambda)] = lambda^(1-k) f^(k)
    const std::array<double, 4> factor{scale_, 1.0, 1.0 / scale_, 1.0 / (scale_ * scale_)};
    for (Jet& j : X.c) {
        std::array<double, Jet::kSize> c = j.coeffs();
        for (int k = 0; k <= Jet::kMaxOrder; ++k) {
            for (int b = 0; b <= k; ++b) c[Jet::index(k - b, b)] *= factor[static_cast<std::size_t>(k)];
        }
        j = Jet::from_coeffs(c, j.order());
    }
    return X;
}

Eigen::VectorXd SurfaceSpec::evaluate_point(double u, double v) const {
    check_domain(u, v);
    const double pu = u / scale_, pv = v / scale_;
    Eigen::VectorXd x = Eigen::VectorXd::Zero(n_);
    if (kind_ == SurfaceKind::builtin) {
        const auto comps = builtin_components(*builtin_, n_);
        for (std::size_t k = 0; k < comps.size(); ++k) {
            double sum = 0.0;
            for (const Term& t : comps[k]) sum += t.coef * t.fu.derivative(0, pu) * t.fv.derivative(0, pv);
            x(static_cast<Eigen::Index>(k)) = sum;
        }
    } else {
        const std::array<double, 2> slots{pu, pv};
        Eigen::Index offset = 0;
        if (kind_ == SurfaceKind::graph) {
            x(0) = pu;
            x(1) = pv;
            offset = 2;
        }
        for (std::size_t k = 0; k < exprs_.size(); ++k) {
            x(offset + static_cast<Eigen::Index>(k)) = evaluate(exprs_[k], slots);
        }
    }
    return scale_ * x;
}

// ---------------------------------------------------------------------------
// Documents

namespace {

using nlohmann::json;

const json& require(const json& doc, const char* key) {
    auto it = doc.find(key);
    if (it == doc.end()) throw SpecError(std::string("missing field '") + key + "'");
    return *it;
}

double number_field(const json& doc, const char* key, double fallback) {
    auto it = doc.find(key);
    if (it == doc.end()) return fallback;
    if (!it->is_number()) throw SpecError(std::string("field '") + key + "' must be a number");
    return it->get<double>();
}

std::vector<std::string> string_list(const json& value, const char* key) {
    if (!value.is_array()) throw SpecError(std::string("field '") + key + "' must be an array of strings");
    std::vector<std::string> out;
    for (const auto& item : value) {
        if (!item.is_string()) throw SpecError(std::string("field '") + key + "' must be an array of strings");
        out.push_back(item.get<std::string>());
    }
    return out;
}

}  // namespace

SurfaceSpec load_surface_spec(std::string_view document) {
    json doc;
    try {
        doc = json::parse(document);
    } catch (const json::parse_error& e) {
        throw SpecError(std::string("malformed JSON: ") + e.what());
    }
    if (!doc.is_object()) throw SpecError("surface document must be a JSON object");

    static const char* kKnown[] = {"name", "n", "kind", "id", "params", "components", "radius", "scale"};
    for (const auto& [key, value] : doc.items()) {
        if (std::find(std::begin(kKnown), std::end(kKnown), key) == std::end(kKnown)) {
            throw SpecError("unknown field '" + key + "'");
        }
    }

    const json& kind_field = require(doc, "kind");
    if (!kind_field.is_string()) throw SpecError("field 'kind' must be a string");
    const std::string kind = kind_field.get<std::string>();

    std::string name;
    if (auto it = doc.find("name"); it != doc.end()) {
        if (!it->is_string()) throw SpecError("field 'name' must be a string");
        name = it->get<std::string>();
    }
    int n = 0;
    if (auto it = doc.find("n"); it != doc.end()) {
        if (!it->is_number_integer()) throw SpecError("field 'n' must be an integer");
        n = it->get<int>();
        if (n < 3) throw SpecError("field 'n' must be >= 3");
    }
    const double radius = number_field(doc, "radius", 1.0);
    if (!(radius > 0.0) || !std::isfinite(radius)) throw SpecError("field 'radius' must be positive");
    const double scale = number_field(doc, "scale", 1.0);
    if (!(scale > 0.0) || !std::isfinite(scale)) throw SpecError("field 'scale' must be positive");

    SurfaceSpec spec = [&] {
        if (kind == "builtin") {
            const json& id_field = require(doc, "id");
            if (!id_field.is_string()) throw SpecError("field 'id' must be a string");
            const auto id = builtin_from_name(id_field.get<std::string>());
            if (!id) throw SpecError("unknown builtin id '" + id_field.get<std::string>() + "'");
            if (auto it = doc.find("params"); it != doc.end()) {
                if (!it->is_object()) throw SpecError("field 'params' must be an object");
                if (!it->empty()) throw SpecError("builtin '" + id_field.get<std::string>() + "' takes no params");
            }
            if (doc.contains("components")) throw SpecError("builtin surfaces take no 'components'");
            return SurfaceSpec::builtin(*id, n, radius);
        }
        if (kind == "graph" || kind == "parametric") {
            if (n == 0) throw SpecError("field 'n' is required for kind '" + kind + "'");
            auto comps = string_list(require(doc, "components"), "components");
            if (kind == "graph") {
                if (static_cast<int>(comps.size()) != n - 2) {
                    throw SpecError("graph in R^" + std::to_string(n) + " needs " + std::to_string(n - 2) +
                                    " components, got " + std::to_string(comps.size()));
                }
                return SurfaceSpec::graph(name, std::move(comps), radius);
            }
            if (static_cast<int>(comps.size()) != n) {
                throw SpecError("parametric surface in R^" + std::to_string(n) + " needs " + std::to_string(n) +
                                " components, got " + std::to_string(comps.size()));
            }
            return SurfaceSpec::parametric(name, std::move(comps), radius);
        }
        throw SpecError("field 'kind' must be one of builtin, graph, parametric; got '" + kind + "'");
    }();
    if (!name.empty()) spec = spec.with_name(name);
    if (scale != 1.0) spec = spec.with_radius(radius).dilated(scale);
    return spec;
}

SurfaceSpec load_surface_spec_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw SpecError("cannot open surface file '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return load_surface_spec(buf.str());
}

std::string surface_spec_to_json(const SurfaceSpec& spec) {
    json doc;
    doc["name"] = spec.name();
    doc["n"] = spec.n();
    switch (spec.kind()) {
        case SurfaceKind::builtin:
            doc["kind"] = "builtin";
            doc["id"] = builtin_name(*spec.builtin_id());
            break;
        case SurfaceKind::graph:
            doc["kind"] = "graph";
            doc["components"] = spec.component_sources();
            break;
        case SurfaceKind::parametric:
            doc["kind"] = "parametric";
            doc["components"] = spec.component_sources();
            break;
    }
    doc["radius"] = spec.radius() / spec.scale();
    if (spec.scale() != 1.0) doc["scale"] = spec.scale();
    return doc.dump();
}

// ---------------------------------------------------------------------------
// Regularity and conformality

namespace {

struct FirstOrder {
    double E, F, G, W;
};

FirstOrder first_order(const VecJet& X) {
    const Eigen::VectorXd xu = X.coeff(1, 0), xv = X.coeff(0, 1);
    const double E = xu.squaredNorm(), F = xu.dot(xv), G = xv.squaredNorm();
    return {E, F, G, std::sqrt(std::max(E * G - F * F, 0.0))};
}

}  // namespace

double conformality_defect(const VecJet& X) {
    const FirstOrder f = first_order(X);
    if (!(f.W > kRegularityEps)) {
        throw RegularityError("area element W = " + format_double(f.W) + " <= eps_reg at " + point_text(X.u, X.v));
    }
    return std::max(std::abs(f.E - f.G), std::abs(f.F)) / std::max(f.W, kRegularityEps);
}

double conformality_defect(const SurfaceSpec& spec, double u, double v) {
    return conformality_defect(spec.evaluate_jet3(u, v));
}

RegularityReport regularity_check(const SurfaceSpec& spec, int grid_nodes) {
    const Grid grid(grid_nodes, spec.radius());
    const auto pts = grid.masked_points();
    struct Sample {
        double W, defect;
    };
    const auto samples = parallel_map<Sample>(pts.size(), [&](std::size_t k) {
        const VecJet X = spec.evaluate_jet3(pts[k].u, pts[k].v);
        const FirstOrder f = first_order(X);
        const double defect = f.W > kRegularityEps
                                  ? std::max(std::abs(f.E - f.G), std::abs(f.F)) / f.W
                                  : std::numeric_limits<double>::quiet_NaN();
        return Sample{f.W, defect};
    });

    RegularityReport r;
    r.samples = static_cast<int>(pts.size());
    r.min_W = std::numeric_limits<double>::infinity();
    double defect_sum = 0.0;
    int defect_count = 0;
    for (std::size_t k = 0; k < pts.size(); ++k) {
        const Sample& s = samples[k];
        if (s.W < r.min_W) {
            r.min_W = s.W;
            r.argmin_u = pts[k].u;
            r.argmin_v = pts[k].v;
        }
        if (!(s.W > kRegularityEps)) {
            ++r.failures;
            continue;
        }
        r.max_conformality_defect = std::max(r.max_conformality_defect, s.defect);
        defect_sum += s.defect;
        ++defect_count;
    }
    r.regular = r.failures == 0;
    r.mean_conformality_defect = defect_count ? defect_sum / defect_count : 0.0;
    return r;
}

std::vector<SurfaceSpec> catalog() {
    return {SurfaceSpec::builtin(Builtin::plane),    SurfaceSpec::builtin(Builtin::w2),
            SurfaceSpec::builtin(Builtin::z3),       SurfaceSpec::builtin(Builtin::clifford),
            SurfaceSpec::builtin(Builtin::sphere),   SurfaceSpec::builtin(Builtin::enneper),
            SurfaceSpec::builtin(Builtin::saddle)};
}

}  // namespace geo
