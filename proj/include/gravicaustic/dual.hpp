#pragma once

#include <cmath>

#include "gravicaustic/error.hpp"

namespace gravicaustic {

// Forward-mode dual number: carries a value and d/dx at the evaluation
// point. Templated on the scalar so Dual<Dual<double>> yields second
// derivatives.
template <typename T>
struct Dual {
    T value{};
    T deriv{};

    constexpr Dual() = default;
    constexpr Dual(T v) : value(v), deriv(T{}) {}
    constexpr Dual(T v, T d) : value(v), deriv(d) {}

    // Seed for the independent variable x.
    static constexpr Dual variable(T v) { return Dual(v, T{1.0}); }
};

using Dual1 = Dual<double>;
using Dual2 = Dual<Dual<double>>;

template <typename T>
constexpr Dual<T> operator+(const Dual<T>& a, const Dual<T>& b) {
    return {a.value + b.value, a.deriv + b.deriv};
}
template <typename T>
constexpr Dual<T> operator-(const Dual<T>& a, const Dual<T>& b) {
    return {a.value - b.value, a.deriv - b.deriv};
}
template <typename T>
constexpr Dual<T> operator-(const Dual<T>& a) {
    return {-a.value, -a.deriv};
}
template <typename T>
constexpr Dual<T> operator*(const Dual<T>& a, const Dual<T>& b) {
    return {a.value * b.value, a.deriv * b.value + a.value * b.deriv};
}
template <typename T>
constexpr Dual<T> operator/(const Dual<T>& a, const Dual<T>& b) {
    return {a.value / b.value,
            (a.deriv * b.value - a.value * b.deriv) / (b.value * b.value)};
}

template <typename T> constexpr Dual<T> operator+(const Dual<T>& a, double b) { return a + Dual<T>(T{b}); }
template <typename T> constexpr Dual<T> operator+(double a, const Dual<T>& b) { return Dual<T>(T{a}) + b; }
template <typename T> constexpr Dual<T> operator-(const Dual<T>& a, double b) { return a - Dual<T>(T{b}); }
template <typename T> constexpr Dual<T> operator-(double a, const Dual<T>& b) { return Dual<T>(T{a}) - b; }
template <typename T> constexpr Dual<T> operator*(const Dual<T>& a, double b) { return a * Dual<T>(T{b}); }
template <typename T> constexpr Dual<T> operator*(double a, const Dual<T>& b) { return Dual<T>(T{a}) * b; }
template <typename T> constexpr Dual<T> operator/(const Dual<T>& a, double b) { return a / Dual<T>(T{b}); }
template <typename T> constexpr Dual<T> operator/(double a, const Dual<T>& b) { return Dual<T>(T{a}) / b; }

// Elementary functions, usable uniformly on double and Dual<...>.
inline double d_sin(double x) { return std::sin(x); }
inline double d_cos(double x) { return std::cos(x); }
inline double d_tan(double x) { return std::tan(x); }
inline double d_sqrt(double x) { return std::sqrt(x); }
inline double d_exp(double x) { return std::exp(x); }
inline double d_log(double x) { return std::log(x); }
inline double d_sinh(double x) { return std::sinh(x); }
inline double d_cosh(double x) { return std::cosh(x); }
inline double d_tanh(double x) { return std::tanh(x); }
inline double d_abs(double x) { return std::abs(x); }
inline double d_pow(double a, double b) { return std::pow(a, b); }

template <typename T> Dual<T> d_sin(const Dual<T>& a) {
    return {d_sin(a.value), a.deriv * d_cos(a.value)};
}
template <typename T> Dual<T> d_cos(const Dual<T>& a) {
    return {d_cos(a.value), -a.deriv * d_sin(a.value)};
}
template <typename T> Dual<T> d_tan(const Dual<T>& a) {
    const T c = d_cos(a.value);
    return {d_tan(a.value), a.deriv / (c * c)};
}
template <typename T> Dual<T> d_sqrt(const Dual<T>& a) {
    const T r = d_sqrt(a.value);
    return {r, a.deriv / (2.0 * r)};
}
template <typename T> Dual<T> d_exp(const Dual<T>& a) {
    const T e = d_exp(a.value);
    return {e, a.deriv * e};
}
template <typename T> Dual<T> d_log(const Dual<T>& a) {
    return {d_log(a.value), a.deriv / a.value};
}
template <typename T> Dual<T> d_sinh(const Dual<T>& a) {
    return {d_sinh(a.value), a.deriv * d_cosh(a.value)};
}
template <typename T> Dual<T> d_cosh(const Dual<T>& a) {
    return {d_cosh(a.value), a.deriv * d_sinh(a.value)};
}
template <typename T> Dual<T> d_tanh(const Dual<T>& a) {
    const T t = d_tanh(a.value);
    return {t, a.deriv * (1.0 - t * t)};
}

inline double scalar_value(double x) { return x; }
template <typename T> double scalar_value(const Dual<T>& a) { return scalar_value(a.value); }

template <typename T> Dual<T> d_abs(const Dual<T>& a) {
    const double v = scalar_value(a.value);
    if (v == 0.0)
        throw EvalError("abs: non-differentiable point at 0");
    return v > 0.0 ? a : -a;
}

template <typename T> Dual<T> d_pow(const Dual<T>& a, const Dual<T>& b);

inline double d_pow_value(double a, double n) { return std::pow(a, n); }
template <typename T> Dual<T> d_pow_value(const Dual<T>& a, double n) {
    return d_pow(a, Dual<T>(T{n}));
}

// a^b via exp(b ln a) for general duals; a constant exponent is handled
// through the power rule so negative bases keep working.
template <typename T> Dual<T> d_pow(const Dual<T>& a, const Dual<T>& b) {
    if (scalar_value(b.deriv * b.deriv) == 0.0) {
        const double n = scalar_value(b.value);
        const T pv = d_pow_value(a.value, n);
        const T pd = d_pow_value(a.value, n - 1.0);
        return {pv, b.value * pd * a.deriv};
    }
    return d_exp(b * d_log(a));
}

template <typename T> Dual<T> d_pow(const Dual<T>& a, double b) { return d_pow(a, Dual<T>(T{b})); }

} // namespace gravicaustic
