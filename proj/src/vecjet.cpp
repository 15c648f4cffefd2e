#include "geo/vecjet.hpp"

#include <algorithm>
#include <cassert>

namespace geo {

VecJet VecJet::partial(Var which) const {
    VecJet r(size(), u, v);
    for (std::size_t k = 0; k < size(); ++k) r.c[k] = c[k].partial(which);
    return r;
}

Eigen::VectorXd VecJet::coeff(int a, int b) const {
    Eigen::VectorXd out(static_cast<Eigen::Index>(size()));
    for (std::size_t k = 0; k < size(); ++k) out(static_cast<Eigen::Index>(k)) = c[k].coeff(a, b);
    return out;
}

int VecJet::order() const {
    int o = Jet::kMaxOrder;
    for (const Jet& j : c) o = std::min(o, j.order());
    return o;
}

Jet dot(const VecJet& a, const VecJet& b) {
    assert(a.size() == b.size());
    Jet sum = Jet::constant(0.0, std::min(a.order(), b.order()));
    for (std::size_t k = 0; k < a.size(); ++k) sum += a.c[k] * b.c[k];
    return sum;
}

VecJet operator+(const VecJet& a, const VecJet& b) {
    VecJet r = a;
    for (std::size_t k = 0; k < a.size(); ++k) r.c[k] += b.c[k];
    return r;
}

VecJet operator-(const VecJet& a, const VecJet& b) {
    VecJet r = a;
    for (std::size_t k = 0; k < a.size(); ++k) r.c[k] -= b.c[k];
    return r;
}

VecJet operator*(const Jet& s, const VecJet& a) {
    VecJet r = a;
    for (auto& x : r.c) x = s * x;
    return r;
}

VecJet operator*(double s, const VecJet& a) {
    VecJet r = a;
    for (auto& x : r.c) x *= s;
    return r;
}

VecJet basis_vector(std::size_t n, std::size_t k, double u, double v, int order) {
    VecJet e(n, u, v);
    for (std::size_t i = 0; i < n; ++i) e.c[i] = Jet::constant(i == k ? 1.0 : 0.0, order);
    return e;
}

}  // namespace geo
