#pragma once

#include <cmath>
#include <stdexcept>
#include <vector>

#include "bihat/grid.hpp"
#include "bihat/semigroup.hpp"

namespace bihat {

/// Finite surrogate for "sup over all balls": centers on a coarse sublattice,
/// dyadic radii nudged off the half-integer-h lattice so open membership
/// never ties.
struct BallFamily {
    std::vector<Ball> balls;

    BallFamily() = default;

    BallFamily(const PeriodicGrid& grid, int stride_divisor = 16) {
        const int N = grid.points_per_axis;
        const int stride = std::max(1, N / stride_divisor);
        const double h = grid.h();
        std::vector<double> radii;
        for (double r = (2.0 + 0.25) * h; r <= grid.period / 4.0; r = 2.0 * r - 0.25 * h)
            radii.push_back(r); // (2^k +  1/4) h
        if (radii.empty()) throw std::invalid_argument("grid too coarse for a ball family");
        for (int i0 = 0; i0 < N; i0 += stride) {
            if (grid.dim == 1) {
                for (double r : radii) balls.push_back({Point{i0 * h, 0.0}, r});
            } else {
                for (int i1 = 0; i1 < N; i1 += stride)
                    for (double r : radii) balls.push_back({Point{i0 * h, i1 * h}, r});
            }
        }
    }
};

/// Exponent bookkeeping under the Sobolev scaling 1/q = 1/p1 + 1/p2 - s/n.
struct ExponentTuple {
    double p1 = 2.0, p2 = 2.0, q = 2.0, s = 0.5;
    int n = 1;

    ExponentTuple() = default;
    ExponentTuple(double p1_, double p2_, double q_, double s_, int n_) : p1(p1_), p2(p2_), q(q_), s(s_), n(n_) {
        if (std::fabs(1.0 / q - (1.0 / p1 + 1.0 / p2 - s / n)) > 1e-12)
            throw std::invalid_argument("exponents do not satisfy 1/q = 1/p1 + 1/p2 - s/n");
    }
};

inline double sobolev_exponent(double p1, double p2, double s, int n) {
    if (!(p1 > 1.0 && p2 > 1.0)) throw std::invalid_argument("need p1, p2 in (1, inf)");
    if (!(s > 0.0)) throw std::invalid_argument("need s > 0");
    const double invq = 1.0 / p1 + 1.0 / p2 - s / n;
    if (!(invq > 1e-12)) throw std::invalid_argument("scaling gives q = infinity or negative");
    return 1.0 / invq;
}

inline double weighted_Lp_norm(const GridFunction& f, const GridFunction& w, double p) {
    if (!(p > 0.0)) throw std::invalid_argument("p must be positive");
    std::vector<double> vals(f.values.size());
    for (std::size_t i = 0; i < vals.size(); ++i) vals[i] = std::pow(std::fabs(f.values[i]), p) * w.values[i];
    return std::pow(f.grid.cell_volume() * pairwise_sum(std::span<const double>(vals)), 1.0 / p);
}

inline double weighted_Lp_norm(const GridFunction& f, const GridFunction& w, double p, const Ball& ball) {
    if (!(p > 0.0)) throw std::invalid_argument("p must be positive");
    const auto idx = ball_indices(f.grid, ball);
    std::vector<double> vals;
    vals.reserve(idx.size());
    for (std::size_t i : idx) vals.push_back(std::pow(std::fabs(f.values[i]), p) * w.values[i]);
    return std::pow(f.grid.cell_volume() * pairwise_sum(std::span<const double>(vals)), 1.0 / p);
}

namespace detail {

inline double ball_average(const GridFunction& f, const std::vector<std::size_t>& idx) {
    std::vector<double> vals;
    vals.reserve(idx.size());
    for (std::size_t i : idx) vals.push_back(f.values[i]);
    return pairwise_sum(std::span<const double>(vals)) / static_cast<double>(idx.size());
}

inline double ball_average_pow(const GridFunction& f, const std::vector<std::size_t>& idx, double e) {
    std::vector<double> vals;
    vals.reserve(idx.size());
    for (std::size_t i : idx) vals.push_back(std::pow(f.values[i], e));
    return pairwise_sum(std::span<const double>(vals)) / static_cast<double>(idx.size());
}

inline double ball_average_abs_pow(const GridFunction& f, const std::vector<std::size_t>& idx, double e) {
    std::vector<double> vals;
    vals.reserve(idx.size());
    for (std::size_t i : idx) vals.push_back(std::pow(std::fabs(f.values[i]), e));
    return pairwise_sum(std::span<const double>(vals)) / static_cast<double>(idx.size());
}

} // namespace detail

/// Muckenhoupt-Wheeden constant: max over the family of
///   (avg_B w^{q/p}) (avg_B w^{1-p'})^{q/p'}.
inline double apq_constant(const GridFunction& w, double p, double q, const BallFamily& family) {
    if (family.balls.empty()) throw std::invalid_argument("empty ball family");
    if (!(p > 1.0 && q > 0.0)) throw std::invalid_argument("apq_constant requires p > 1, q > 0");
    const double pprime = p / (p - 1.0);
    double worst = 0.0;
    for (const Ball& ball : family.balls) {
        const auto idx = ball_indices(w.grid, ball);
        if (idx.empty()) continue;
        const double a = detail::ball_average_pow(w, idx, q / p);
        const double b = detail::ball_average_pow(w, idx, 1.0 - pprime);
        worst = std::max(worst, a * std::pow(b, q / pprime));
    }
    return worst;
}

/// Bilinear weight constant: max over the family of
///   (avg_B w) prod_j (avg_B w_j^{1-p_j'})^{q/p_j'},  w = w1^{q/p1} w2^{q/p2}.
inline double bilinear_weight_constant(const GridFunction& w1, const GridFunction& w2, double p1, double p2,
                                       double q, const BallFamily& family) {
    if (family.balls.empty()) throw std::invalid_argument("empty ball family");
    if (!(p1 > 1.0 && p2 > 1.0 && q > 0.0)) throw std::invalid_argument("need p1, p2 > 1 and q > 0");
    const double pp1 = p1 / (p1 - 1.0), pp2 = p2 / (p2 - 1.0);
    GridFunction w(w1.grid);
    for (std::size_t i = 0; i < w.values.size(); ++i)
        w.values[i] = std::pow(w1.values[i], q / p1) * std::pow(w2.values[i], q / p2);
    double worst = 0.0;
    for (const Ball& ball : family.balls) {
        const auto idx = ball_indices(w.grid, ball);
        if (idx.empty()) continue;
        const double a = detail::ball_average(w, idx);
        const double b1 = detail::ball_average_pow(w1, idx, 1.0 - pp1);
        const double b2 = detail::ball_average_pow(w2, idx, 1.0 - pp2);
        worst = std::max(worst, a * std::pow(b1, q / pp1) * std::pow(b2, q / pp2));
    }
    return worst;
}

/// Campanato-Morrey norm: max over the family of |B|^{-lambda} (avg_B |f|^p)^{1/p}.
inline double campanato_norm(const GridFunction& f, double p, double lambda, const BallFamily& family) {
    if (family.balls.empty()) throw std::invalid_argument("empty ball family");
    if (!(p > 0.0) || lambda < 0.0) throw std::invalid_argument("campanato_norm requires p > 0, lambda >= 0");
    double worst = 0.0;
    for (const Ball& ball : family.balls) {
        const auto idx = ball_indices(f.grid, ball);
        if (idx.empty()) continue;
        const double vol = f.grid.cell_volume() * static_cast<double>(idx.size());
        const double avg = detail::ball_average_abs_pow(f, idx, p);
        worst = std::max(worst, std::pow(vol, -lambda) * std::pow(avg, 1.0 / p));
    }
    return worst;
}

/// Bilinear Campanato-Morrey norm of the semigroup oscillation:
///   max over the family of |B|^{-lambda} (avg_B |fg - S_{r^2}f S_{r^2}g|^p)^{1/p}.
inline double bilinear_campanato_norm(const GridFunction& f, const GridFunction& g, double p, double lambda,
                                      const HeatSemigroup& sg, const BallFamily& family) {
    if (family.balls.empty()) throw std::invalid_argument("empty ball family");
    if (!(p > 0.0) || lambda < 0.0) throw std::invalid_argument("requires p > 0, lambda >= 0");
    double worst = 0.0;
    for (const Ball& ball : family.balls) {
        if (ball.radius < 4.0 * f.grid.h()) continue; // oscillation needs r >= 4h
        const GridFunction osc = bilinear_oscillation(f, g, ball, sg);
        const auto idx = ball_indices(f.grid, ball);
        const double vol = f.grid.cell_volume() * static_cast<double>(idx.size());
        const double avg = detail::ball_average_abs_pow(osc, idx, p);
        worst = std::max(worst, std::pow(vol, -lambda) * std::pow(avg, 1.0 / p));
    }
    return worst;
}

/// Upper bound for the inf-based semigroup Campanato norm, with the candidate
/// h = S_{r^2} f S_{r^2} g (the inf itself is not searched):
///   max over the family of |B|^{-lambda} (avg_B |fg - S_{r^2}[S_{r^2}f S_{r^2}g]|^p)^{1/p}.
inline double semigroup_campanato_tilde(const GridFunction& f, const GridFunction& g, double p, double lambda,
                                        const HeatSemigroup& sg, const BallFamily& family) {
    if (family.balls.empty()) throw std::invalid_argument("empty ball family");
    if (!(p > 0.0) || lambda < 0.0) throw std::invalid_argument("requires p > 0, lambda >= 0");
    double worst = 0.0;
    for (const Ball& ball : family.balls) {
        if (ball.radius < 4.0 * f.grid.h()) continue; // oscillation needs r >= 4h
        const GridFunction osc = double_smoothed_oscillation(f, g, ball, sg);
        const auto idx = ball_indices(f.grid, ball);
        const double vol = f.grid.cell_volume() * static_cast<double>(idx.size());
        const double avg = detail::ball_average_abs_pow(osc, idx, p);
        worst = std::max(worst, std::pow(vol, -lambda) * std::pow(avg, 1.0 / p));
    }
    return worst;
}

/// Two-weight testability constant with phi(B) = r(B)^{phi_exponent} and
/// mu(B) = |B|: the q > 1 form integrates u^{qt}, the q <= 1 form u^q; both
/// carry (avg_B v_j^{-t p_j'})^{1/(t p_j')} factors, t > 1.
inline double testability_constant(const GridFunction& u, const GridFunction& v1, const GridFunction& v2,
                                   double p1, double p2, double q, double phi_exponent, double t,
                                   const BallFamily& family) {
    if (family.balls.empty()) throw std::invalid_argument("empty ball family");
    if (!(t > 1.0)) throw std::invalid_argument("testability_constant requires t > 1");
    if (!(p1 > 1.0 && p2 > 1.0 && q > 0.0)) throw std::invalid_argument("need p1, p2 > 1 and q > 0");
    const double pp1 = p1 / (p1 - 1.0), pp2 = p2 / (p2 - 1.0);
    const double mu_exp = 1.0 / q + 1.0 / pp1 + 1.0 / pp2;
    double worst = 0.0;
    for (const Ball& ball : family.balls) {
        const auto idx = ball_indices(u.grid, ball);
        if (idx.empty()) continue;
        const double vol = u.grid.cell_volume() * static_cast<double>(idx.size());
        double ufac;
        if (q > 1.0)
            ufac = std::pow(detail::ball_average_pow(u, idx, q * t), 1.0 / (q * t));
        else
            ufac = std::pow(detail::ball_average_pow(u, idx, q), 1.0 / q);
        const double f1 = std::pow(detail::ball_average_pow(v1, idx, -t * pp1), 1.0 / (t * pp1));
        const double f2 = std::pow(detail::ball_average_pow(v2, idx, -t * pp2), 1.0 / (t * pp2));
        worst = std::max(worst, std::pow(ball.radius, phi_exponent) * std::pow(vol, mu_exp) * ufac * f1 * f2);
    }
    return worst;
}

} // namespace bihat
