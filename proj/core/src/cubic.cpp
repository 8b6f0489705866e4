#include "cfheat/cubic.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace cfheat {

std::string_view to_string(RootCase c) {
    switch (c) {
    case RootCase::three_distinct_real: return "three_distinct_real";
    case RootCase::one_real_conjugate_pair: return "one_real_conjugate_pair";
    case RootCase::double_root: return "double_root";
    case RootCase::triple_root: return "triple_root";
    }
    return "unknown";
}

double cubic_discriminant(double a1, double a2, double a3) {
    return -4.0 * a1 * a1 * a1 * a3 + a1 * a1 * a2 * a2 - 4.0 * a2 * a2 * a2 +
           18.0 * a1 * a2 * a3 - 27.0 * a3 * a3;
}

double cubic_scale(double a1, double a2, double a3) {
    return std::max({1.0, std::abs(a1), std::sqrt(std::abs(a2)), std::cbrt(std::abs(a3))});
}

namespace {

template <class T>
T poly(T mu, double a1, double a2, double a3) {
    return ((mu + a1) * mu + a2) * mu + a3;
}

template <class T>
T dpoly(T mu, double a1, double a2) {
    return (3.0 * mu + 2.0 * a1) * mu + a2;
}

// One Newton step on p, kept only if it lowers the residual.
template <class T>
T polish(T mu, double a1, double a2, double a3) {
    const T d = dpoly(mu, a1, a2);
    if (std::abs(d) == 0.0) {
        return mu;
    }
    const T next = mu - poly(mu, a1, a2, a3) / d;
    return std::abs(poly(next, a1, a2, a3)) < std::abs(poly(mu, a1, a2, a3)) ? next : mu;
}

// One Newton step on p' (a double root of p is a simple root of p').
double polish_double(double mu, double a1, double a2) {
    const double dd = 6.0 * mu + 2.0 * a1;
    if (dd == 0.0) {
        return mu;
    }
    const double next = mu - dpoly(mu, a1, a2) / dd;
    return std::abs(dpoly(next, a1, a2)) < std::abs(dpoly(mu, a1, a2)) ? next : mu;
}

}  // namespace

RootClassification classify_cubic(double a1, double a2, double a3, double tol) {
    RootClassification out;
    out.discriminant = cubic_discriminant(a1, a2, a3);

    const double scale = cubic_scale(a1, a2, a3);
    const double shift = -a1 / 3.0;
    const double p = a2 - a1 * a1 / 3.0;
    const double q = 2.0 * a1 * a1 * a1 / 27.0 - a1 * a2 / 3.0 + a3;

    if (std::abs(out.discriminant) <= tol * std::pow(scale, 6)) {
        // Depressed roots 2u, -u, -u: u = cbrt(-q/2) and u^2 = -p/3 agree when
        // the discriminant vanishes; near a triple root the smaller one wins.
        const double u = std::cbrt(-q / 2.0);
        const double u_p = std::sqrt(std::max(-p / 3.0, 0.0));
        if (3.0 * std::min(std::abs(u), u_p) <= std::cbrt(tol) * scale) {
            out.kind = RootCase::triple_root;
            out.roots = {shift, shift, shift};
        } else {
            out.kind = RootCase::double_root;
            const double dbl = polish_double(shift - u, a1, a2);
            const double simple = polish(shift + 2.0 * u, a1, a2, a3);
            out.roots = {dbl, dbl, simple};
        }
        return out;
    }

    if (out.discriminant > 0.0) {
        out.kind = RootCase::three_distinct_real;
        const double r = 2.0 * std::sqrt(-p / 3.0);
        const double arg = std::clamp(3.0 * q / (2.0 * p) * std::sqrt(-3.0 / p), -1.0, 1.0);
        const double theta = std::acos(arg) / 3.0;
        std::array<double, 3> y{};
        for (int k = 0; k < 3; ++k) {
            y[k] = polish(r * std::cos(theta - 2.0 * std::numbers::pi * k / 3.0) + shift, a1, a2, a3);
        }
        std::sort(y.begin(), y.end());
        out.roots = {y[0], y[1], y[2]};
        return out;
    }

    out.kind = RootCase::one_real_conjugate_pair;
    double y;
    if (p > 0.0) {
        const double r = std::sqrt(p / 3.0);
        y = -2.0 * r * std::sinh(std::asinh(3.0 * q / (2.0 * p) / r) / 3.0);
    } else if (p < 0.0) {
        const double r = std::sqrt(-p / 3.0);
        const double arg = std::max(1.0, -3.0 * std::abs(q) / (2.0 * p) / r);
        y = -2.0 * std::copysign(1.0, q) * r * std::cosh(std::acosh(arg) / 3.0);
    } else {
        y = std::cbrt(-q);
    }
    const double real = polish(polish(y + shift, a1, a2, a3), a1, a2, a3);
    const double b = a1 + real;
    const double c = a2 + b * real;
    const double re = -b / 2.0;
    const double im = std::sqrt(std::max(c - re * re, 0.0));
    const std::complex<double> pair = polish(std::complex<double>(re, im), a1, a2, a3);
    const std::complex<double> upper(pair.real(), std::abs(pair.imag()));
    out.roots = {real, upper, std::conj(upper)};
    return out;
}

double max_root_residual(const RootClassification& c, double a1, double a2, double a3) {
    double worst = 0.0;
    for (const auto& mu : c.roots) {
        worst = std::max(worst, std::abs(poly(mu, a1, a2, a3)));
    }
    return worst;
}

}  // namespace cfheat
