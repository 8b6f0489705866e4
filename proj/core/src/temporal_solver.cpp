#include "cfheat/temporal_solver.hpp"

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <memory>
#include <string>

namespace cfheat {

using cplx = std::complex<double>;

std::string_view to_string(SolverKind s) {
    switch (s) {
    case SolverKind::closed_form: return "closed-form";
    case SolverKind::companion: return "companion";
    }
    return "unknown";
}

TemporalSolution::TemporalSolution(int m, SolverKind provenance, double horizon,
                                   std::vector<std::vector<double>> levels)
    : m_(m), provenance_(provenance), horizon_(horizon), levels_(std::move(levels)) {
    if (levels_.size() < 2) {
        throw MismatchError("temporal solution needs values and slopes");
    }
    const std::size_t n = levels_.front().size();
    if (n < 2) {
        throw ResolutionError("temporal solution needs at least 2 time nodes");
    }
    for (const auto& l : levels_) {
        if (l.size() != n) {
            throw MismatchError("derivative levels of a temporal solution differ in length");
        }
    }
    if (!(horizon_ > 0.0)) {
        throw DomainError("temporal solution horizon must be positive");
    }
}

double TemporalSolution::derivative(int order, double t) const {
    if (order < 0 || order > max_derivative()) {
        throw DerivativeOrderError("derivative of order " + std::to_string(order) +
                                   " requested, solution provides " +
                                   std::to_string(max_derivative()));
    }
    const double slack = 1e-12 * horizon_;
    if (t < -slack || t > horizon_ + slack) {
        throw DomainError("t = " + std::to_string(t) + " outside [0, q]");
    }
    const auto& v = levels_[static_cast<std::size_t>(order)];
    const auto& d = levels_[static_cast<std::size_t>(order) + 1];
    const std::size_t n = steps();
    const double h = horizon_ / static_cast<double>(n);
    const double s = std::clamp(t / h, 0.0, static_cast<double>(n));
    std::size_t i = std::min(static_cast<std::size_t>(s), n - 1);
    const double u = s - static_cast<double>(i);
    if (u == 0.0) {
        return v[i];
    }
    if (u == 1.0) {
        return v[i + 1];
    }
    const double u2 = u * u;
    const double u3 = u2 * u;
    return (2.0 * u3 - 3.0 * u2 + 1.0) * v[i] + h * (u3 - 2.0 * u2 + u) * d[i] +
           (-2.0 * u3 + 3.0 * u2) * v[i + 1] + h * (u3 - u2) * d[i + 1];
}

std::span<const double> TemporalSolution::nodes(int order) const {
    if (order < 0 || order >= static_cast<int>(levels_.size())) {
        throw DerivativeOrderError("no nodal level " + std::to_string(order));
    }
    return levels_[static_cast<std::size_t>(order)];
}

double TemporalSolution::time(std::size_t i) const {
    return i == steps() ? horizon_ : horizon_ * static_cast<double>(i) / static_cast<double>(steps());
}

double TemporalSolution::sup_norm() const {
    double s = 0.0;
    for (double v : levels_.front()) {
        s = std::max(s, std::abs(v));
    }
    return s;
}

SampledFunction TemporalSolution::as_function(QuadratureOptions quadrature) const {
    auto self = std::make_shared<const TemporalSolution>(*this);
    return SampledFunction(
        0.0, max_derivative(), [self](int order, double t) { return self->derivative(order, t); },
        quadrature);
}

// ---------------------------------------------------------------------------
// Fundamental system

std::vector<FundamentalMember> fundamental_system(const RootClassification& c, double beta) {
    const auto& r = c.roots;
    std::vector<FundamentalMember> out;
    switch (c.kind) {
    case RootCase::three_distinct_real:
        for (const auto& mu : r) {
            out.push_back({cplx(mu.real() - beta, 0.0), 0, false});
        }
        break;
    case RootCase::one_real_conjugate_pair: {
        const cplx pair(r[1].real() - beta, std::abs(r[1].imag()));
        out.push_back({cplx(r[0].real() - beta, 0.0), 0, false});
        out.push_back({pair, 0, false});
        out.push_back({pair, 0, true});
        break;
    }
    case RootCase::double_root:
        out.push_back({cplx(r[0].real() - beta, 0.0), 0, false});
        out.push_back({cplx(r[0].real() - beta, 0.0), 1, false});
        out.push_back({cplx(r[2].real() - beta, 0.0), 0, false});
        break;
    case RootCase::triple_root:
        for (int p = 0; p < 3; ++p) {
            out.push_back({cplx(r[0].real() - beta, 0.0), p, false});
        }
        break;
    }
    return out;
}

namespace {

double binomial(int n, int r) {
    if (r < 0 || r > n) {
        return 0.0;
    }
    double b = 1.0;
    for (int i = 1; i <= r; ++i) {
        b = b * static_cast<double>(n - r + i) / static_cast<double>(i);
    }
    return b;
}

// p! / (p - r)!
double falling(int p, int r) {
    double f = 1.0;
    for (int i = 0; i < r; ++i) {
        f *= static_cast<double>(p - i);
    }
    return f;
}

double part(const FundamentalMember& f, cplx z) { return f.imaginary ? z.imag() : z.real(); }

// d^i/dt^i (t^p e^{lambda t}) at t.
cplx member_derivative(const FundamentalMember& f, int i, double t) {
    cplx sum = 0.0;
    for (int r = 0; r <= std::min(i, f.power); ++r) {
        sum += binomial(i, r) * falling(f.power, r) * std::pow(t, f.power - r) *
               std::pow(f.rate, i - r);
    }
    return sum * std::exp(f.rate * t);
}

Eigen::Matrix3d to_eigen(const std::array<std::array<double, 3>, 3>& w) {
    Eigen::Matrix3d m;
    for (int i = 0; i < 3; ++i) {
        for (int j = 0; j < 3; ++j) {
            m(i, j) = w[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
        }
    }
    return m;
}

Eigen::Vector3d solve_checked(const Eigen::Matrix3d& w, const Eigen::Vector3d& rhs) {
    Eigen::PartialPivLU<Eigen::Matrix3d> lu(w);
    const double rc = lu.rcond();
    if (!(rc > 1e-14)) {
        throw SingularSystemError("fundamental matrix is singular (rcond " + std::to_string(rc) + ")");
    }
    Eigen::Vector3d x = lu.solve(rhs);
    if (!x.allFinite()) {
        throw SingularSystemError("fundamental matrix solve produced non-finite constants");
    }
    return x;
}

}  // namespace

std::array<std::array<double, 3>, 3> fundamental_matrix(std::span<const FundamentalMember> system) {
    if (system.size() != 3) {
        throw MismatchError("fundamental system must have 3 members");
    }
    std::array<std::array<double, 3>, 3> w{};
    for (std::size_t j = 0; j < 3; ++j) {
        for (int i = 0; i < 3; ++i) {
            w[static_cast<std::size_t>(i)][j] = part(system[j], member_derivative(system[j], i, 0.0));
        }
    }
    return w;
}

std::vector<double> solve_constants(const RootClassification& c, double beta,
                                    std::span<const double> initial,
                                    std::span<const double> particular) {
    if (initial.size() != 3 || particular.size() != 3) {
        throw MismatchError("solve_constants needs 3 initial values and 3 particular values");
    }
    const auto system = fundamental_system(c, beta);
    Eigen::Vector3d rhs;
    for (int i = 0; i < 3; ++i) {
        rhs(i) = initial[static_cast<std::size_t>(i)] - particular[static_cast<std::size_t>(i)];
    }
    const Eigen::Vector3d x = solve_checked(to_eigen(fundamental_matrix(system)), rhs);
    return {x(0), x(1), x(2)};
}

// ---------------------------------------------------------------------------
// Closed form

namespace {

// phi_0..phi_6 with phi_n(z) = sum_k z^k / (k + n)!.
std::array<cplx, 7> phi_functions(cplx z) {
    std::array<cplx, 7> phi{};
    if (std::abs(z) < 2.0) {
        for (int n = 0; n < 7; ++n) {
            cplx term = 1.0;
            for (int i = 1; i <= n; ++i) {
                term /= static_cast<double>(i);
            }
            cplx sum = term;
            for (int k = 1; k < 30; ++k) {
                term *= z / static_cast<double>(k + n);
                sum += term;
            }
            phi[static_cast<std::size_t>(n)] = sum;
        }
    } else {
        phi[0] = std::exp(z);
        double fact = 1.0;  // n!
        for (int n = 0; n < 6; ++n) {
            if (n > 0) {
                fact *= static_cast<double>(n);
            }
            phi[static_cast<std::size_t>(n) + 1] = (phi[static_cast<std::size_t>(n)] - 1.0 / fact) / z;
        }
    }
    return phi;
}

// Running convolutions K_q(t) = int_0^t (t - z)^q e^{lambda (t - z)} h(z) dz,
// q = 0..power, advanced step by step with a cubic Hermite model of h.
class Convolution {
public:
    Convolution(cplx lambda, int power, double step)
        : lambda_(lambda), power_(power), step_(step), k_(static_cast<std::size_t>(power) + 1, 0.0) {
        const cplx z = lambda * step;
        growth_ = std::exp(z);
        const auto phi = phi_functions(z);
        double fact = 1.0;
        for (int j = 0; j <= 5; ++j) {
            if (j > 0) {
                fact *= static_cast<double>(j);
            }
            moment_[static_cast<std::size_t>(j)] = fact * phi[static_cast<std::size_t>(j) + 1];
        }
        // weight_[q][j] = int_0^1 (1 - s)^q s^j e^{z (1 - s)} ds
        for (int q = 0; q <= power; ++q) {
            for (int j = 0; j < 4; ++j) {
                cplx w = 0.0;
                double sign = 1.0;
                for (int s = 0; s <= q; ++s) {
                    w += sign * binomial(q, s) * moment_[static_cast<std::size_t>(j + s)];
                    sign = -sign;
                }
                weight_[static_cast<std::size_t>(q)][static_cast<std::size_t>(j)] = w;
            }
        }
    }

    void advance(const std::array<double, 4>& a) {
        std::vector<cplx> next(k_.size());
        const double H = step_;
        for (int q = 0; q <= power_; ++q) {
            cplx carried = 0.0;
            for (int r = 0; r <= q; ++r) {
                carried += binomial(q, r) * std::pow(H, q - r) * k_[static_cast<std::size_t>(r)];
            }
            cplx local = 0.0;
            for (int j = 0; j < 4; ++j) {
                local += a[static_cast<std::size_t>(j)] *
                         weight_[static_cast<std::size_t>(q)][static_cast<std::size_t>(j)];
            }
            next[static_cast<std::size_t>(q)] = growth_ * carried + std::pow(H, q + 1) * local;
        }
        k_ = std::move(next);
    }

    // int_0^t d^i/dt^i[(t-z)^p e^{lambda(t-z)}] h(z) dz for the full power.
    cplx derivative_convolution(int i) const {
        cplx sum = 0.0;
        for (int r = 0; r <= std::min(i, power_); ++r) {
            sum += binomial(i, r) * falling(power_, r) * std::pow(lambda_, i - r) *
                   k_[static_cast<std::size_t>(power_ - r)];
        }
        return sum;
    }

private:
    cplx lambda_;
    int power_;
    double step_;
    cplx growth_;
    std::array<cplx, 6> moment_{};
    std::array<std::array<cplx, 4>, 3> weight_{};
    std::vector<cplx> k_;
};

// Coefficients of q(nu) = p(nu + beta) for a monic ascending cubic p.
std::array<double, 4> taylor_shift(std::span<const double> p, double beta) {
    std::array<double, 4> q{};
    for (int j = 0; j < 4; ++j) {
        for (int i = j; i < 4; ++i) {
            q[static_cast<std::size_t>(j)] +=
                p[static_cast<std::size_t>(i)] * binomial(i, j) * std::pow(beta, i - j);
        }
    }
    return q;
}

}  // namespace

TemporalSolution solve_mode_closed_form(const ModeODE& ode, const RootClassification& c,
                                        const ClosedFormOptions& opts) {
    if (ode.order() != 3) {
        throw MismatchError("closed-form solver handles third-order modes only, got order " +
                            std::to_string(ode.order()));
    }
    if (ode.initial.size() != 3) {
        throw MismatchError("closed-form solver needs 3 initial values");
    }
    if (opts.steps < 16) {
        throw ResolutionError("closed-form solver needs at least 16 steps");
    }
    if (!ode.rhs || !ode.rhs_derivative) {
        throw DerivativeOrderError("closed-form solver needs g and g'");
    }
    const double beta = ode.beta;
    const double q = ode.horizon;
    const std::size_t n = opts.steps;
    const double H = q / static_cast<double>(n);

    const auto system = fundamental_system(c, beta);
    const Eigen::Matrix3d w = to_eigen(fundamental_matrix(system));
    const Eigen::Vector3d impulse = solve_checked(w, Eigen::Vector3d(0.0, 0.0, 1.0));
    const std::array<double, 3> zero{0.0, 0.0, 0.0};
    const auto constants = solve_constants(c, beta, ode.initial, zero);

    // h = e^{-beta t} g and h' on the nodes.
    std::vector<double> h(n + 1), dh(n + 1);
    for (std::size_t i = 0; i <= n; ++i) {
        const double t = i == n ? q : H * static_cast<double>(i);
        const double e = std::exp(-beta * t);
        const double g = ode.rhs(t);
        h[i] = e * g;
        dh[i] = e * (ode.rhs_derivative(t) - beta * g);
    }

    std::vector<Convolution> conv;
    conv.reserve(3);
    for (const auto& f : system) {
        conv.emplace_back(f.rate, f.power, H);
    }

    const auto shifted = taylor_shift(ode.coefficients, beta);
    std::vector<std::vector<double>> levels(5, std::vector<double>(n + 1, 0.0));
    for (std::size_t i = 0; i <= n; ++i) {
        if (i > 0) {
            const double h0 = h[i - 1];
            const double h1 = h[i];
            const double d0 = H * dh[i - 1];
            const double d1 = H * dh[i];
            const std::array<double, 4> a{h0, d0, 3.0 * (h1 - h0) - 2.0 * d0 - d1,
                                          2.0 * (h0 - h1) + d0 + d1};
            for (auto& cv : conv) {
                cv.advance(a);
            }
        }
        const double t = i == n ? q : H * static_cast<double>(i);
        for (int lvl = 0; lvl < 3; ++lvl) {
            double v = 0.0;
            for (std::size_t j = 0; j < 3; ++j) {
                v += constants[j] * part(system[j], member_derivative(system[j], lvl, t));
                v += impulse(static_cast<Eigen::Index>(j)) * part(system[j], conv[j].derivative_convolution(lvl));
            }
            levels[static_cast<std::size_t>(lvl)][i] = v;
        }
        const double t0 = levels[0][i];
        const double t1 = levels[1][i];
        const double t2 = levels[2][i];
        const double t3 = h[i] - shifted[2] * t2 - shifted[1] * t1 - shifted[0] * t0;
        levels[3][i] = t3;
        levels[4][i] = dh[i] - shifted[2] * t3 - shifted[1] * t2 - shifted[0] * t1;
    }

    TemporalSolution sol(ode.m, SolverKind::closed_form, q, std::move(levels));
    sol.set_classification(c);
    sol.set_constants(constants);
    return sol;
}

TemporalSolution solve_mode_closed_form(const ModeODE& ode, const ClosedFormOptions& opts) {
    if (ode.order() != 3) {
        throw MismatchError("closed-form solver handles third-order modes only, got order " +
                            std::to_string(ode.order()));
    }
    const auto& b = ode.coefficients;
    const auto c = classify_cubic(b[2], b[1], b[0], opts.degeneracy_tolerance);
    return solve_mode_closed_form(ode, c, opts);
}

// ---------------------------------------------------------------------------
// Companion system

TemporalSolution solve_mode_companion(const ModeODE& ode, const CompanionOptions& opts) {
    if (opts.steps < 16) {
        throw ResolutionError("companion solver needs at least 16 steps");
    }
    const int K = ode.order();
    if (K < 1) {
        throw MismatchError("companion solver needs an ODE of order >= 1");
    }
    if (ode.initial_transformed.size() != static_cast<std::size_t>(K)) {
        throw MismatchError("companion solver needs " + std::to_string(K) + " initial values");
    }
    if (!ode.rhs || !ode.rhs_derivative) {
        throw DerivativeOrderError("companion solver needs g and g'");
    }
    const auto& b = ode.coefficients;
    const std::size_t n = opts.steps;
    const double q = ode.horizon;
    const double H = q / static_cast<double>(n);
    const auto Ks = static_cast<std::size_t>(K);

    auto top = [&](const std::vector<double>& y, double g) {
        double v = g;
        for (std::size_t j = 0; j < Ks; ++j) {
            v -= b[j] * y[j];
        }
        return v;
    };
    auto field = [&](const std::vector<double>& y, double g, std::vector<double>& out) {
        for (std::size_t j = 0; j + 1 < Ks; ++j) {
            out[j] = y[j + 1];
        }
        out[Ks - 1] = top(y, g);
    };

    // tilde[j][i] = T~^(j)(t_i), j = 0..K+1
    std::vector<std::vector<double>> tilde(Ks + 2, std::vector<double>(n + 1, 0.0));
    std::vector<double> y(ode.initial_transformed.begin(), ode.initial_transformed.end());
    std::vector<double> k1(Ks), k2(Ks), k3(Ks), k4(Ks), tmp(Ks);
    auto record = [&](std::size_t i, double t) {
        const double g = ode.rhs(t);
        for (std::size_t j = 0; j < Ks; ++j) {
            tilde[j][i] = y[j];
        }
        const double yk = top(y, g);
        tilde[Ks][i] = yk;
        double yk1 = ode.rhs_derivative(t);
        for (std::size_t j = 0; j < Ks; ++j) {
            yk1 -= b[j] * (j + 1 < Ks ? y[j + 1] : yk);
        }
        tilde[Ks + 1][i] = yk1;
    };

    record(0, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        const double t = H * static_cast<double>(i);
        const double g0 = ode.rhs(t);
        const double gm = ode.rhs(t + 0.5 * H);
        const double g1 = ode.rhs(i + 1 == n ? q : t + H);
        field(y, g0, k1);
        for (std::size_t j = 0; j < Ks; ++j) tmp[j] = y[j] + 0.5 * H * k1[j];
        field(tmp, gm, k2);
        for (std::size_t j = 0; j < Ks; ++j) tmp[j] = y[j] + 0.5 * H * k2[j];
        field(tmp, gm, k3);
        for (std::size_t j = 0; j < Ks; ++j) tmp[j] = y[j] + H * k3[j];
        field(tmp, g1, k4);
        for (std::size_t j = 0; j < Ks; ++j) {
            y[j] += H / 6.0 * (k1[j] + 2.0 * k2[j] + 2.0 * k3[j] + k4[j]);
        }
        record(i + 1, i + 1 == n ? q : t + H);
    }

    // T^(l) = e^{-beta t} sum_j C(l, j) (-beta)^{l-j} T~^(j)
    const double beta = ode.beta;
    std::vector<std::vector<double>> levels(Ks + 2, std::vector<double>(n + 1, 0.0));
    for (std::size_t i = 0; i <= n; ++i) {
        const double t = i == n ? q : H * static_cast<double>(i);
        const double e = std::exp(-beta * t);
        for (std::size_t l = 0; l < Ks + 2; ++l) {
            double v = 0.0;
            for (std::size_t j = 0; j <= l; ++j) {
                v += binomial(static_cast<int>(l), static_cast<int>(j)) *
                     std::pow(-beta, static_cast<double>(l - j)) * tilde[j][i];
            }
            levels[l][i] = e * v;
        }
    }
    return TemporalSolution(ode.m, SolverKind::companion, q, std::move(levels));
}

std::vector<std::complex<double>> companion_eigenvalues(std::span<const double> monic) {
    if (monic.size() < 2 || monic.back() != 1.0) {
        throw MismatchError("companion_eigenvalues needs a monic polynomial of degree >= 1");
    }
    const auto d = static_cast<Eigen::Index>(monic.size() - 1);
    Eigen::MatrixXd c = Eigen::MatrixXd::Zero(d, d);
    for (Eigen::Index i = 0; i + 1 < d; ++i) {
        c(i, i + 1) = 1.0;
    }
    for (Eigen::Index j = 0; j < d; ++j) {
        c(d - 1, j) = -monic[static_cast<std::size_t>(j)];
    }
    Eigen::EigenSolver<Eigen::MatrixXd> es(c, false);
    std::vector<std::complex<double>> out;
    for (Eigen::Index i = 0; i < d; ++i) {
        out.push_back(es.eigenvalues()(i));
    }
    std::sort(out.begin(), out.end(), [](cplx a, cplx b) {
        return a.real() != b.real() ? a.real() < b.real() : a.imag() < b.imag();
    });
    return out;
}

double sup_difference(const TemporalSolution& a, const TemporalSolution& b, std::size_t samples) {
    if (std::abs(a.horizon() - b.horizon()) > 1e-12 * a.horizon()) {
        throw MismatchError("solutions live on different horizons");
    }
    if (samples < 1) {
        throw ResolutionError("sup_difference needs at least one sample interval");
    }
    double s = 0.0;
    for (std::size_t i = 0; i <= samples; ++i) {
        const double t = i == samples ? a.horizon()
                                      : a.horizon() * static_cast<double>(i) / static_cast<double>(samples);
        s = std::max(s, std::abs(a(t) - b(t)));
    }
    return s;
}

}  // namespace cfheat
