#pragma once
// First-order jets: a value together with its partials along up to
// kJetDim parameter directions.

#include <array>
#include <cmath>

namespace slantgeo {

inline constexpr int kJetDim = 8;

struct Jet {
    double v = 0.0;
    std::array<double, kJetDim> d{};

    Jet() = default;
    Jet(double x) : v(x) {}  // NOLINT: implicit promotion from constants is intended

    Jet& operator+=(const Jet& o) {
        v += o.v;
        for (int i = 0; i < kJetDim; ++i) d[i] += o.d[i];
        return *this;
    }
    Jet& operator-=(const Jet& o) {
        v -= o.v;
        for (int i = 0; i < kJetDim; ++i) d[i] -= o.d[i];
        return *this;
    }
    Jet& operator*=(const Jet& o) {
        for (int i = 0; i < kJetDim; ++i) d[i] = d[i] * o.v + v * o.d[i];
        v *= o.v;
        return *this;
    }
    Jet& operator/=(const Jet& o) {
        double inv = 1.0 / o.v;
        double q = v * inv;
        for (int i = 0; i < kJetDim; ++i) d[i] = (d[i] - q * o.d[i]) * inv;
        v = q;
        return *this;
    }
};

inline Jet operator+(Jet a, const Jet& b) { return a += b; }
inline Jet operator-(Jet a, const Jet& b) { return a -= b; }
inline Jet operator*(Jet a, const Jet& b) { return a *= b; }
inline Jet operator/(Jet a, const Jet& b) { return a /= b; }
inline Jet operator-(Jet a) {
    a.v = -a.v;
    for (auto& x : a.d) x = -x;
    return a;
}

inline Jet sqrt(const Jet& a) {
    Jet r;
    r.v = std::sqrt(a.v);
    double s = 0.5 / r.v;
    for (int i = 0; i < kJetDim; ++i) r.d[i] = a.d[i] * s;
    return r;
}

inline double sqrt(double x) { return std::sqrt(x); }
inline double value(double x) { return x; }
inline double value(const Jet& x) { return x.v; }

}  // namespace slantgeo
