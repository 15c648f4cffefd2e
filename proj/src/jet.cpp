#include "geo/jet.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <sstream>

#include "geo/error.hpp"

namespace geo {

namespace {

constexpr int kBinom[4][4] = {{1, 0, 0, 0}, {1, 1, 0, 0}, {1, 2, 1, 0}, {1, 3, 3, 1}};

std::string describe_domain(const std::string& function, double value) {
    std::ostringstream os;
    os << "domain error in " << function << ": argument " << value;
    return os.str();
}

}  // namespace

DomainError::DomainError(std::string function, double value)
    : Error(describe_domain(function, value)), function_(std::move(function)), value_(value) {}

ParseError::ParseError(std::size_t offset, const std::string& message)
    : Error("at offset " + std::to_string(offset) + ": " + message), offset_(offset) {}

UnknownIdentifierError::UnknownIdentifierError(std::size_t offset, std::string name)
    : ParseError(offset, "unknown identifier '" + name + "'"), name_(std::move(name)) {}

Jet Jet::constant(double value, int order) {
    Jet j;
    j.c_[0] = value;
    j.order_ = order;
    return j;
}

Jet Jet::variable(Var which, double base_value) {
    Jet j;
    j.c_[0] = base_value;
    j.c_[which == Var::u ? 1 : 2] = 1.0;
    return j;
}

Jet Jet::from_coeffs(const std::array<double, kSize>& coeffs, int order) {
    Jet j;
    j.c_ = coeffs;
    j.order_ = order;
    j.clear_above_order();
    return j;
}

void Jet::clear_above_order() {
    for (std::size_t i = index(order_ + 1, 0); i < kSize; ++i) c_[i] = 0.0;
}

Jet Jet::partial(Var which) const {
    Jet r;
    r.order_ = std::max(order_ - 1, 0);
    if (order_ == 0) return r;
    for (int k = 0; k <= r.order_; ++k) {
        for (int b = 0; b <= k; ++b) {
            const int a = k - b;
            r.c_[index(a, b)] = which == Var::u ? coeff(a + 1, b) : coeff(a, b + 1);
        }
    }
    return r;
}

Jet Jet::truncated(int order) const {
    Jet r = *this;
    r.order_ = std::min(order_, order);
    r.clear_above_order();
    return r;
}

bool Jet::all_finite() const {
    return std::all_of(c_.begin(), c_.end(), [](double x) { return std::isfinite(x); });
}

Jet Jet::operator-() const {
    Jet r = *this;
    for (auto& x : r.c_) x = -x;
    return r;
}

Jet& Jet::operator+=(const Jet& o) {
    for (std::size_t i = 0; i < kSize; ++i) c_[i] += o.c_[i];
    order_ = std::min(order_, o.order_);
    clear_above_order();
    return *this;
}

Jet& Jet::operator-=(const Jet& o) {
    for (std::size_t i = 0; i < kSize; ++i) c_[i] -= o.c_[i];
    order_ = std::min(order_, o.order_);
    clear_above_order();
    return *this;
}

Jet& Jet::operator*=(const Jet& o) {
    *this = *this * o;
    return *this;
}

Jet& Jet::operator/=(const Jet& o) {
    *this = *this / o;
    return *this;
}

Jet& Jet::operator+=(double s) {
    c_[0] += s;
    return *this;
}

Jet& Jet::operator-=(double s) {
    c_[0] -= s;
    return *this;
}

Jet& Jet::operator*=(double s) {
    for (auto& x : c_) x *= s;
    return *this;
}

Jet& Jet::operator/=(double s) {
    if (s == 0.0) throw DomainError("division", s);
    for (auto& x : c_) x /= s;
    return *this;
}

// Leibniz rule: d^(a,b)(fg) = sum C(a,i) C(b,j) f_(i,j) g_(a-i,b-j).
Jet operator*(const Jet& x, const Jet& y) {
    const int order = std::min(x.order(), y.order());
    std::array<double, Jet::kSize> r{};
    for (int k = 0; k <= order; ++k) {
        for (int b = 0; b <= k; ++b) {
            const int a = k - b;
            double sum = 0.0;
            for (int i = 0; i <= a; ++i) {
                for (int j = 0; j <= b; ++j) {
                    sum += kBinom[a][i] * kBinom[b][j] * x.coeff(i, j) * y.coeff(a - i, b - j);
                }
            }
            r[Jet::index(a, b)] = sum;
        }
    }
    return Jet::from_coeffs(r, order);
}

Jet compose(const Jet& f, const std::array<double, 4>& d) {
    const double fu = f.du(), fv = f.dv();
    const double fuu = f.duu(), fuv = f.duv(), fvv = f.dvv();
    std::array<double, Jet::kSize> r{};
    r[0] = d[0];
    r[1] = d[1] * fu;
    r[2] = d[1] * fv;
    r[3] = d[2] * fu * fu + d[1] * fuu;
    r[4] = d[2] * fu * fv + d[1] * fuv;
    r[5] = d[2] * fv * fv + d[1] * fvv;
    r[6] = d[3] * fu * fu * fu + 3.0 * d[2] * fu * fuu + d[1] * f[6];
    r[7] = d[3] * fu * fu * fv + d[2] * (fuu * fv + 2.0 * fuv * fu) + d[1] * f[7];
    r[8] = d[3] * fu * fv * fv + d[2] * (fvv * fu + 2.0 * fuv * fv) + d[1] * f[8];
    r[9] = d[3] * fv * fv * fv + 3.0 * d[2] * fv * fvv + d[1] * f[9];
    return Jet::from_coeffs(r, f.order());
}

Jet reciprocal(const Jet& a) {
    const double x = a.value();
    if (x == 0.0) throw DomainError("division", x);
    const double r = 1.0 / x;
    return compose(a, {r, -r * r, 2.0 * r * r * r, -6.0 * r * r * r * r});
}

Jet operator/(const Jet& a, const Jet& b) {
    if (b.value() == 0.0) throw DomainError("division", b.value());
    Jet q = a * reciprocal(b);
    q.c_[0] = a.value() / b.value();
    return q;
}

Jet operator+(Jet a, const Jet& b) { return a += b; }
Jet operator-(Jet a, const Jet& b) { return a -= b; }
Jet operator+(Jet a, double s) { return a += s; }
Jet operator+(double s, Jet a) { return a += s; }
Jet operator-(Jet a, double s) { return a -= s; }
Jet operator-(double s, const Jet& a) { return -a + s; }
Jet operator*(Jet a, double s) { return a *= s; }
Jet operator*(double s, Jet a) { return a *= s; }
Jet operator/(Jet a, double s) { return a /= s; }
Jet operator/(double s, const Jet& a) {
    Jet q = reciprocal(a) * s;
    q.c_[0] = s / a.value();
    return q;
}

Jet sin(const Jet& a) {
    const double s = std::sin(a.value()), c = std::cos(a.value());
    return compose(a, {s, c, -s, -c});
}

Jet cos(const Jet& a) {
    const double s = std::sin(a.value()), c = std::cos(a.value());
    return compose(a, {c, -s, -c, s});
}

Jet exp(const Jet& a) {
    const double e = std::exp(a.value());
    return compose(a, {e, e, e, e});
}

Jet log(const Jet& a) {
    const double x = a.value();
    if (!(x > 0.0)) throw DomainError("log", x);
    const double r = 1.0 / x;
    return compose(a, {std::log(x), r, -r * r, 2.0 * r * r * r});
}

Jet sqrt(const Jet& a) {
    const double x = a.value();
    if (!(x > 0.0)) throw DomainError("sqrt", x);
    const double s = std::sqrt(x);
    // d^k/dx^k x^(1/2) = (1/2)(-1/2)...(3/2-k) x^(1/2-k)
    return compose(a, {s, 0.5 / s, -0.25 / (s * x), 0.375 / (s * x * x)});
}

Jet pow(const Jet& a, int n) {
    if (n < 0) {
        if (a.value() == 0.0) throw DomainError("pow", a.value());
        return reciprocal(pow(a, -n));
    }
    Jet result = Jet::constant(1.0, a.order());
    Jet base = a;
    unsigned e = static_cast<unsigned>(n);
    while (e != 0) {
        if (e & 1u) result *= base;
        e >>= 1;
        if (e != 0) base *= base;
    }
    return result;
}

Jet pow(const Jet& a, double e) {
    if (std::nearbyint(e) == e && std::abs(e) <= 1 << 20) return pow(a, static_cast<int>(e));
    if (!(a.value() > 0.0)) throw DomainError("pow", a.value());
    return exp(log(a) * e);
}

double max_abs_diff(const Jet& a, const Jet& b) {
    double m = 0.0;
    for (std::size_t i = 0; i < Jet::kSize; ++i) m = std::max(m, std::abs(a[i] - b[i]));
    return m;
}

std::ostream& operator<<(std::ostream& os, const Jet& j) {
    os << "Jet(";
    for (std::size_t i = 0; i < Jet::kSize; ++i) os << (i ? ", " : "") << j[i];
    return os << "; order " << j.order() << ")";
}

}  // namespace geo
