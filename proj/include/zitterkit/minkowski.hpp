#pragma once
//
// 4-vector and antisymmetric rank-2 tensor algebra in Minkowski space with
// metric signature (+,-,-,-). Components are always stored contravariant;
// lowering an index is explicit (lower(), metric()).
//

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <ostream>

#include "zitterkit/error.hpp"

namespace zitterkit {

/// Diagonal of the metric tensor g_{mu mu} = g^{mu mu}.
constexpr double metric(std::size_t mu) noexcept { return mu == 0 ? 1.0 : -1.0; }

//---------------------------------------------------------------------------//
// ThreeVector
//---------------------------------------------------------------------------//
struct ThreeVector {
    double x = 0, y = 0, z = 0;

    constexpr double operator[](std::size_t i) const noexcept { return i == 0 ? x : (i == 1 ? y : z); }
    constexpr double& operator[](std::size_t i) noexcept { return i == 0 ? x : (i == 1 ? y : z); }

    constexpr ThreeVector& operator+=(const ThreeVector& o) noexcept {
        x += o.x; y += o.y; z += o.z;
        return *this;
    }
    constexpr ThreeVector& operator-=(const ThreeVector& o) noexcept {
        x -= o.x; y -= o.y; z -= o.z;
        return *this;
    }
    constexpr ThreeVector& operator*=(double s) noexcept {
        x *= s; y *= s; z *= s;
        return *this;
    }

    friend constexpr bool operator==(const ThreeVector&, const ThreeVector&) = default;
};

constexpr ThreeVector operator+(ThreeVector a, const ThreeVector& b) noexcept { return a += b; }
constexpr ThreeVector operator-(ThreeVector a, const ThreeVector& b) noexcept { return a -= b; }
constexpr ThreeVector operator-(const ThreeVector& a) noexcept { return {-a.x, -a.y, -a.z}; }
constexpr ThreeVector operator*(double s, ThreeVector a) noexcept { return a *= s; }
constexpr ThreeVector operator*(ThreeVector a, double s) noexcept { return a *= s; }
constexpr ThreeVector operator/(ThreeVector a, double s) noexcept { return a *= (1.0 / s); }

constexpr double dot(const ThreeVector& a, const ThreeVector& b) noexcept {
    return a.x * b.x + a.y * b.y + a.z * b.z;
}

constexpr ThreeVector cross(const ThreeVector& a, const ThreeVector& b) noexcept {
    return {a.y * b.z - a.z * b.y, a.z * b.x - a.x * b.z, a.x * b.y - a.y * b.x};
}

inline double norm(const ThreeVector& a) noexcept { return std::sqrt(dot(a, a)); }

inline double max_abs(const ThreeVector& a) noexcept {
    return std::max({std::abs(a.x), std::abs(a.y), std::abs(a.z)});
}

inline bool is_finite(const ThreeVector& a) noexcept {
    return std::isfinite(a.x) && std::isfinite(a.y) && std::isfinite(a.z);
}

inline std::ostream& operator<<(std::ostream& os, const ThreeVector& a) {
    return os << '(' << a.x << ", " << a.y << ", " << a.z << ')';
}

//---------------------------------------------------------------------------//
// FourVector
//---------------------------------------------------------------------------//
/// Contravariant 4-vector u^mu.
struct FourVector {
    std::array<double, 4> c{0, 0, 0, 0};

    constexpr FourVector() = default;
    constexpr FourVector(double c0, double c1, double c2, double c3) noexcept : c{c0, c1, c2, c3} {}
    constexpr FourVector(double t, const ThreeVector& s) noexcept : c{t, s.x, s.y, s.z} {}

    constexpr double operator[](std::size_t mu) const noexcept { return c[mu]; }
    constexpr double& operator[](std::size_t mu) noexcept { return c[mu]; }

    constexpr double time() const noexcept { return c[0]; }
    constexpr ThreeVector space() const noexcept { return {c[1], c[2], c[3]}; }

    /// Covariant components u_mu = g_{mu nu} u^nu.
    constexpr std::array<double, 4> lower() const noexcept { return {c[0], -c[1], -c[2], -c[3]}; }

    constexpr FourVector& operator+=(const FourVector& o) noexcept {
        for (std::size_t i = 0; i < 4; ++i) c[i] += o.c[i];
        return *this;
    }
    constexpr FourVector& operator-=(const FourVector& o) noexcept {
        for (std::size_t i = 0; i < 4; ++i) c[i] -= o.c[i];
        return *this;
    }
    constexpr FourVector& operator*=(double s) noexcept {
        for (auto& x : c) x *= s;
        return *this;
    }

    friend constexpr bool operator==(const FourVector&, const FourVector&) = default;
};

constexpr FourVector operator+(FourVector a, const FourVector& b) noexcept { return a += b; }
constexpr FourVector operator-(FourVector a, const FourVector& b) noexcept { return a -= b; }
constexpr FourVector operator-(FourVector a) noexcept { return a *= -1.0; }
constexpr FourVector operator*(double s, FourVector a) noexcept { return a *= s; }
constexpr FourVector operator*(FourVector a, double s) noexcept { return a *= s; }
constexpr FourVector operator/(FourVector a, double s) noexcept { return a *= (1.0 / s); }

/// Minkowski product u^0 v^0 - u.v
constexpr double dot(const FourVector& u, const FourVector& v) noexcept {
    return u[0] * v[0] - u[1] * v[1] - u[2] * v[2] - u[3] * v[3];
}

inline double max_abs(const FourVector& u) noexcept {
    return std::max({std::abs(u[0]), std::abs(u[1]), std::abs(u[2]), std::abs(u[3])});
}

inline bool is_finite(const FourVector& u) noexcept {
    return std::all_of(u.c.begin(), u.c.end(), [](double x) { return std::isfinite(x); });
}

inline std::ostream& operator<<(std::ostream& os, const FourVector& u) {
    return os << '(' << u[0] << "; " << u[1] << ", " << u[2] << ", " << u[3] << ')';
}

//---------------------------------------------------------------------------//
// AntisymTensor4
//---------------------------------------------------------------------------//
/*!
 * Antisymmetric contravariant tensor S^{mu nu}, stored as its six independent
 * components. The accessor returns -S(nu, mu) for mu > nu and zero on the
 * diagonal, so antisymmetry holds exactly.
 */
class AntisymTensor4 {
public:
    constexpr AntisymTensor4() = default;

    static constexpr AntisymTensor4 from_components(double s01, double s02, double s03, double s12,
                                                    double s13, double s23) noexcept {
        AntisymTensor4 t;
        t.v_ = {s01, s02, s03, s12, s13, s23};
        return t;
    }

    /// u^mu w^nu - u^nu w^mu
    static constexpr AntisymTensor4 wedge(const FourVector& u, const FourVector& w) noexcept {
        AntisymTensor4 t;
        for (std::size_t mu = 0; mu < 4; ++mu)
            for (std::size_t nu = mu + 1; nu < 4; ++nu)
                t.v_[slot(mu, nu)] = u[mu] * w[nu] - u[nu] * w[mu];
        return t;
    }

    constexpr double operator()(std::size_t mu, std::size_t nu) const noexcept {
        if (mu == nu) return 0.0;
        return mu < nu ? v_[slot(mu, nu)] : -v_[slot(nu, mu)];
    }

    /// Sets S^{mu nu} (and implicitly S^{nu mu} = -value). mu != nu.
    constexpr void set(std::size_t mu, std::size_t nu, double value) noexcept {
        if (mu < nu)
            v_[slot(mu, nu)] = value;
        else if (nu < mu)
            v_[slot(nu, mu)] = -value;
    }

    /// S_{mu nu} = g_{mu mu} g_{nu nu} S^{mu nu}
    constexpr double lowered(std::size_t mu, std::size_t nu) const noexcept {
        return metric(mu) * metric(nu) * (*this)(mu, nu);
    }

    constexpr const std::array<double, 6>& components() const noexcept { return v_; }

    constexpr AntisymTensor4& operator+=(const AntisymTensor4& o) noexcept {
        for (std::size_t i = 0; i < 6; ++i) v_[i] += o.v_[i];
        return *this;
    }
    constexpr AntisymTensor4& operator-=(const AntisymTensor4& o) noexcept {
        for (std::size_t i = 0; i < 6; ++i) v_[i] -= o.v_[i];
        return *this;
    }
    constexpr AntisymTensor4& operator*=(double s) noexcept {
        for (auto& x : v_) x *= s;
        return *this;
    }

    friend constexpr bool operator==(const AntisymTensor4&, const AntisymTensor4&) = default;

private:
    // Packed order: 01 02 03 12 13 23.
    static constexpr std::size_t slot(std::size_t mu, std::size_t nu) noexcept {
        constexpr std::size_t table[4][4] = {{0, 0, 1, 2}, {0, 0, 3, 4}, {1, 3, 0, 5}, {2, 4, 5, 0}};
        return table[mu][nu];
    }

    std::array<double, 6> v_{0, 0, 0, 0, 0, 0};
};

constexpr AntisymTensor4 operator+(AntisymTensor4 a, const AntisymTensor4& b) noexcept { return a += b; }
constexpr AntisymTensor4 operator-(AntisymTensor4 a, const AntisymTensor4& b) noexcept { return a -= b; }
constexpr AntisymTensor4 operator*(double s, AntisymTensor4 a) noexcept { return a *= s; }

inline double max_abs(const AntisymTensor4& t) noexcept {
    double r = 0;
    for (double x : t.components()) r = std::max(r, std::abs(x));
    return r;
}

/// T^{mu nu} w_nu with the index of w lowered through the metric.
constexpr FourVector contract(const AntisymTensor4& t, const FourVector& w) noexcept {
    const auto wl = w.lower();
    FourVector r;
    for (std::size_t mu = 0; mu < 4; ++mu)
        for (std::size_t nu = 0; nu < 4; ++nu) r[mu] += t(mu, nu) * wl[nu];
    return r;
}

/*!
 * Totally antisymmetric symbol with upper indices, normalized so that
 * eps_{0123} = +1 and therefore eps^{0123} = -1.
 */
constexpr double levi_civita_upper(std::size_t a, std::size_t b, std::size_t c, std::size_t d) noexcept {
    const std::size_t idx[4] = {a, b, c, d};
    int inversions = 0;
    for (int i = 0; i < 4; ++i)
        for (int j = i + 1; j < 4; ++j) {
            if (idx[i] == idx[j]) return 0.0;
            if (idx[i] > idx[j]) ++inversions;
        }
    return (inversions % 2 == 0) ? -1.0 : 1.0;
}

//---------------------------------------------------------------------------//
// Spin decomposition
//---------------------------------------------------------------------------//

/// S^{mu nu} = k1 (v^mu a^nu - v^nu a^mu)
constexpr AntisymTensor4 spin_tensor_from_va(const FourVector& v, const FourVector& a, double k1) noexcept {
    return k1 * AntisymTensor4::wedge(v, a);
}

/// s^i = 1/2 eps^{ijk} S^{jk} = (S23, -S13, S12)
constexpr ThreeVector spin_vector(const AntisymTensor4& s) noexcept { return {s(2, 3), -s(1, 3), s(1, 2)}; }

/// Lorentz-boost generator k = (S01, S02, S03).
constexpr ThreeVector boost_vector(const AntisymTensor4& s) noexcept { return {s(0, 1), s(0, 2), s(0, 3)}; }

namespace detail {
inline void require_positive_mass(double m) {
    if (!(m > 0)) throw InvalidParameter("mass must be positive");
}
}  // namespace detail

/// W~^mu = S^{mu nu} p_nu / m; reduces to (0, -k) in the centre-of-mass frame.
inline FourVector wtilde(const AntisymTensor4& s, const FourVector& p, double m) {
    detail::require_positive_mass(m);
    return contract(s, p) / m;
}

/// Pauli-Lubanski vector W^mu = eps^{mu nu rho sigma} S_{nu rho} p_sigma / (2m).
inline FourVector pauli_lubanski(const AntisymTensor4& s, const FourVector& p, double m) {
    detail::require_positive_mass(m);
    const auto pl = p.lower();
    FourVector w;
    for (std::size_t mu = 0; mu < 4; ++mu) {
        double acc = 0;
        for (std::size_t nu = 0; nu < 4; ++nu)
            for (std::size_t rho = 0; rho < 4; ++rho) {
                if (nu == rho || nu == mu || rho == mu) continue;
                const double snr = s.lowered(nu, rho);
                for (std::size_t sig = 0; sig < 4; ++sig) acc += levi_civita_upper(mu, nu, rho, sig) * snr * pl[sig];
            }
        w[mu] = acc / (2.0 * m);
    }
    return w;
}

}  // namespace zitterkit
