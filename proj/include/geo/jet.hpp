#pragma once

#include <array>
#include <cstddef>
#include <iosfwd>

namespace geo {

enum class Var { u, v };

/// Truncated Taylor data of a scalar function of (u, v) at one base point.
///
/// The ten coefficients are the partial derivatives themselves (not Taylor
/// coefficients), ordered by total degree:
///
///   0: f    1: f_u   2: f_v   3: f_uu  4: f_uv  5: f_vv
///   6: f_uuu 7: f_uuv 8: f_uvv 9: f_vvv
///
/// A jet also carries the highest order up to which its coefficients are
/// valid. Differentiating a jet (`partial`) lowers that order by one; every
/// arithmetic result takes the minimum order of its operands and keeps the
/// coefficients above it at zero.
class Jet {
public:
    static constexpr int kMaxOrder = 3;
    static constexpr std::size_t kSize = 10;

    constexpr Jet() = default;

    static Jet constant(double value, int order = kMaxOrder);
    static Jet variable(Var which, double base_value);
    static Jet from_coeffs(const std::array<double, kSize>& coeffs, int order = kMaxOrder);

    /// Index of the coefficient for d^a/du^a d^b/dv^b.
    static constexpr std::size_t index(int a, int b) {
        const int k = a + b;
        return static_cast<std::size_t>(k * (k + 1) / 2 + b);
    }

    double operator[](std::size_t i) const { return c_[i]; }
    double coeff(int a, int b) const { return c_[index(a, b)]; }
    const std::array<double, kSize>& coeffs() const { return c_; }
    int order() const { return order_; }

    double value() const { return c_[0]; }
    double du() const { return c_[1]; }
    double dv() const { return c_[2]; }
    double duu() const { return c_[3]; }
    double duv() const { return c_[4]; }
    double dvv() const { return c_[5]; }

    /// Jet of the partial derivative of this function; one order lower.
    Jet partial(Var which) const;

    /// Same function, coefficients above `order` discarded.
    Jet truncated(int order) const;

    bool all_finite() const;

    Jet operator-() const;
    Jet& operator+=(const Jet& o);
    Jet& operator-=(const Jet& o);
    Jet& operator*=(const Jet& o);
    Jet& operator/=(const Jet& o);
    Jet& operator+=(double s);
    Jet& operator-=(double s);
    Jet& operator*=(double s);
    Jet& operator/=(double s);

private:
    friend Jet operator/(const Jet& a, const Jet& b);
    friend Jet operator/(double s, const Jet& a);
    void clear_above_order();

    std::array<double, kSize> c_{};
    int order_ = kMaxOrder;
};

Jet operator+(Jet a, const Jet& b);
Jet operator-(Jet a, const Jet& b);
Jet operator*(const Jet& a, const Jet& b);
Jet operator/(const Jet& a, const Jet& b);
Jet operator+(Jet a, double s);
Jet operator+(double s, Jet a);
Jet operator-(Jet a, double s);
Jet operator-(double s, const Jet& a);
Jet operator*(Jet a, double s);
Jet operator*(double s, Jet a);
Jet operator/(Jet a, double s);
Jet operator/(double s, const Jet& a);

Jet sin(const Jet& a);
Jet cos(const Jet& a);
Jet exp(const Jet& a);
Jet log(const Jet& a);
Jet sqrt(const Jet& a);
Jet reciprocal(const Jet& a);

/// a^n by repeated multiplication; negative n goes through the reciprocal.
Jet pow(const Jet& a, int n);

/// a^e for real e. Integral e is routed to the exact integer power;
/// otherwise a.value() > 0 is required and the result is exp(e log a).
Jet pow(const Jet& a, double e);

/// Jet of F(a) given F and its first three derivatives at a.value().
Jet compose(const Jet& a, const std::array<double, 4>& derivatives);

/// Largest absolute coefficient difference.
double max_abs_diff(const Jet& a, const Jet& b);

std::ostream& operator<<(std::ostream& os, const Jet& j);

}  // namespace geo
