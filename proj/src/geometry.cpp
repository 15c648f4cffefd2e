#include "geo/geometry.hpp"

#include <algorithm>
#include <cmath>

#include <Eigen/Geometry>

#include "geo/error.hpp"
#include "geo/expr.hpp"
#include "geo/immersion.hpp"
#include "geo/normal_bundle.hpp"

namespace geo {

namespace {

std::string at(const VecJet& X) {
    return "(" + format_double(X.u) + ", " + format_double(X.v) + ")";
}

constexpr double kSeedThreshold = 1e-8;

}  // namespace

FundamentalForm first_fundamental_form(const VecJet& X) {
    const Eigen::VectorXd xu = X.coeff(1, 0), xv = X.coeff(0, 1);
    FundamentalForm f;
    f.g << xu.dot(xu), xu.dot(xv), xv.dot(xu), xv.dot(xv);
    const double det = f.g(0, 0) * f.g(1, 1) - f.g(0, 1) * f.g(1, 0);
    if (!(det > kRegularityEps * kRegularityEps)) {
        throw RegularityError("det g = " + format_double(det) + " <= eps_reg^2 at " + at(X));
    }
    f.W = std::sqrt(det);
    f.g_inv << f.g(1, 1), -f.g(0, 1), -f.g(1, 0), f.g(0, 0);
    f.g_inv /= det;
    return f;
}

NormalFrame normal_frame(const VecJet& X) {
    const std::size_t n = X.size();
    const double W = first_fundamental_form(X).W;

    const VecJet Xu = X.partial(Var::u);
    const VecJet Xv = X.partial(Var::v);
    const Jet g11 = dot(Xu, Xu), g12 = dot(Xu, Xv), g22 = dot(Xv, Xv);
    const Jet inv_det = 1.0 / (g11 * g22 - g12 * g12);
    const Jet h11 = g22 * inv_det, h12 = -g12 * inv_det, h22 = g11 * inv_det;
    const int order = Xu.order();

    std::vector<std::size_t> seeds;
    for (std::size_t k = 2; k < n; ++k) seeds.push_back(k);
    seeds.push_back(0);
    seeds.push_back(1);

    NormalFrame frame;
    for (std::size_t k : seeds) {
        if (frame.size() == n - 2) break;
        // e_k . X_u is just the k-th component of X_u.
        const Jet a = Xu[k], b = Xv[k];
        const Jet cu = h11 * a + h12 * b;
        const Jet cv = h12 * a + h22 * b;
        VecJet r = basis_vector(n, k, X.u, X.v, order) - (cu * Xu + cv * Xv);
        for (const VecJet& N : frame.normals) r = r - N[k] * N;
        const Jet norm_sq = dot(r, r);
        if (norm_sq.value() < kSeedThreshold * W) continue;
        const Jet inv_norm = 1.0 / sqrt(norm_sq);
        frame.normals.push_back(inv_norm * r);
        frame.seeds.push_back(static_cast<int>(k));
    }
    if (frame.size() != n - 2) {
        throw FrameDegeneracyError("only " + std::to_string(frame.size()) + " of " + std::to_string(n - 2) +
                                   " normals survived Gram-Schmidt at " + at(X));
    }
    return frame;
}

SectionData section_data(const VecJet& X, const VecJet& normal, const FundamentalForm& fff, int index) {
    const Eigen::VectorXd N = normal.values();
    SectionData s;
    s.index = index;
    const double l11 = X.coeff(2, 0).dot(N);
    const double l12 = X.coeff(1, 1).dot(N);
    const double l22 = X.coeff(0, 2).dot(N);
    s.L << l11, l12, l12, l22;
    const Eigen::Matrix2d& g = fff.g;
    const double W2 = fff.W * fff.W;
    s.H = (g(1, 1) * l11 - 2.0 * g(0, 1) * l12 + g(0, 0) * l22) / (2.0 * W2);
    s.K = (l11 * l22 - l12 * l12) / W2;
    const double disc = std::sqrt(std::max(s.H * s.H - s.K, 0.0));
    s.kappa = {s.H + disc, s.H - disc};
    return s;
}

std::vector<SectionData> second_fundamental_form(const VecJet& X, const NormalFrame& frame) {
    const FundamentalForm fff = first_fundamental_form(X);
    std::vector<SectionData> out;
    for (std::size_t k = 0; k < frame.size(); ++k) out.push_back(section_data(X, frame[k], fff, static_cast<int>(k) + 1));
    return out;
}

UnitNormalR3 unit_normal_r3(const VecJet& X) {
    if (X.size() != 3) throw DimensionError("unit_normal_r3 needs n = 3, got n = " + std::to_string(X.size()));
    first_fundamental_form(X);
    const VecJet a = X.partial(Var::u), b = X.partial(Var::v);
    VecJet c(3, X.u, X.v);
    c[0] = a[1] * b[2] - a[2] * b[1];
    c[1] = a[2] * b[0] - a[0] * b[2];
    c[2] = a[0] * b[1] - a[1] * b[0];
    const VecJet N = (1.0 / sqrt(dot(c, c))) * c;
    return {N.coeff(0, 0), N.coeff(1, 0), N.coeff(0, 1)};
}

double weingarten_residual(const VecJet& X, const NormalFrame& frame, const TorsionField& sigma) {
    const FundamentalForm fff = first_fundamental_form(X);
    const Eigen::VectorXd Xu = X.coeff(1, 0), Xv = X.coeff(0, 1);
    double worst = 0.0;
    for (std::size_t s = 0; s < frame.size(); ++s) {
        const SectionData sec = section_data(X, frame[s], fff, static_cast<int>(s) + 1);
        const Eigen::Matrix2d A = sec.L * fff.g_inv;  // A_ik = L_ij g^jk
        for (int i = 0; i < 2; ++i) {
            Eigen::VectorXd r = i == 0 ? frame[s].coeff(1, 0) : frame[s].coeff(0, 1);
            r += A(i, 0) * Xu + A(i, 1) * Xv;
            for (std::size_t o = 0; o < frame.size(); ++o) r -= sigma(s, o, i).value() * frame[o].values();
            worst = std::max(worst, r.norm());
        }
    }
    return worst;
}

FrameDeviation frame_deviation(const VecJet& X, const NormalFrame& frame) {
    const double W = first_fundamental_form(X).W;
    const Eigen::VectorXd Xu = X.coeff(1, 0), Xv = X.coeff(0, 1);
    FrameDeviation d;
    for (std::size_t s = 0; s < frame.size(); ++s) {
        const Eigen::VectorXd Ns = frame[s].values();
        for (std::size_t o = 0; o < frame.size(); ++o) {
            const double delta = s == o ? 1.0 : 0.0;
            d.orthonormality = std::max(d.orthonormality, std::abs(Ns.dot(frame[o].values()) - delta));
        }
        d.tangency = std::max({d.tangency, std::abs(Ns.dot(Xu)) / std::sqrt(W), std::abs(Ns.dot(Xv)) / std::sqrt(W)});
    }
    return d;
}

}  // namespace geo
