#pragma once

#include <array>
#include <complex>
#include <string_view>

namespace cfheat {

enum class RootCase { three_distinct_real, one_real_conjugate_pair, double_root, triple_root };

std::string_view to_string(RootCase c);

/// Roots of mu^3 + A1 mu^2 + A2 mu + A3.
///
/// Root layout by case:
///   three_distinct_real      ascending real roots
///   one_real_conjugate_pair  roots[0] real, roots[1] = mu21 + i mu22 (mu22 > 0), roots[2] = conj
///   double_root              roots[0] == roots[1] (double), roots[2] simple
///   triple_root              all equal
struct RootClassification {
    double discriminant = 0.0;
    RootCase kind = RootCase::triple_root;
    std::array<std::complex<double>, 3> roots{};
};

/// -4 A1^3 A3 + A1^2 A2^2 - 4 A2^3 + 18 A1 A2 A3 - 27 A3^2
double cubic_discriminant(double a1, double a2, double a3);

/// Root-size scale max(1, |A1|, |A2|^(1/2), |A3|^(1/3)); the discriminant is
/// homogeneous of degree 6 in it.
double cubic_scale(double a1, double a2, double a3);

inline constexpr double kDegeneracyTolerance = 1e-9;

/// Classifies by the sign of the discriminant, treating
/// |disc| <= tol * scale^6 as a repeated root; double vs triple is decided by
/// the distance between the candidate roots. Distinct roots get a Newton polish.
RootClassification classify_cubic(double a1, double a2, double a3,
                                  double tol = kDegeneracyTolerance);

/// |p(mu)| at the worst root.
double max_root_residual(const RootClassification& c, double a1, double a2, double a3);

}  // namespace cfheat
