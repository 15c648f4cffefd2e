#pragma once

#include <cstddef>
#include <vector>

#include <Eigen/Core>

#include "geo/jet.hpp"

namespace geo {

/// n component jets sharing one base point (u, v).
struct VecJet {
    std::vector<Jet> c;
    double u = 0.0;
    double v = 0.0;

    VecJet() = default;
    VecJet(std::size_t n, double u_, double v_) : c(n), u(u_), v(v_) {}

    std::size_t size() const { return c.size(); }
    Jet& operator[](std::size_t i) { return c[i]; }
    const Jet& operator[](std::size_t i) const { return c[i]; }

    VecJet partial(Var which) const;
    /// Vector of the derivative coefficient (a, b) of every component.
    Eigen::VectorXd coeff(int a, int b) const;
    Eigen::VectorXd values() const { return coeff(0, 0); }
    int order() const;
};

Jet dot(const VecJet& a, const VecJet& b);
VecJet operator+(const VecJet& a, const VecJet& b);
VecJet operator-(const VecJet& a, const VecJet& b);
VecJet operator*(const Jet& s, const VecJet& a);
VecJet operator*(double s, const VecJet& a);

/// Constant jet vector for the ambient basis vector e_k (0-based k).
VecJet basis_vector(std::size_t n, std::size_t k, double u, double v, int order = Jet::kMaxOrder);

}  // namespace geo
