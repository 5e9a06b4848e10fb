#pragma once

#include <cmath>
#include <stdexcept>
#include <vector>

#include "bihat/frac_ops.hpp"
#include "bihat/grid.hpp"

namespace bihat {

/// Spectral heat semigroup on the torus: multiplier e^{-t|xi|^2} (order
/// m = 2). The decay parameter eps tags which off-diagonal decay exponent the
/// experiments weight the kernel with; the Gaussian kernel satisfies all of
/// them.
struct HeatSemigroup {
    PeriodicGrid grid;
    double epsilon = 2.0;
    static constexpr double order_m = 2.0;
};

inline GridFunction apply_St(const GridFunction& f, double t) {
    if (!(t > 0.0)) throw std::invalid_argument("apply_St requires t > 0");
    return apply_multiplier(f, [t](const Point& xi) {
        return std::exp(-t * (xi[0] * xi[0] + xi[1] * xi[1]));
    });
}

inline GridFunction apply_tdtSt(const GridFunction& f, double t) {
    if (!(t > 0.0)) throw std::invalid_argument("apply_tdtSt requires t > 0");
    return apply_multiplier(f, [t](const Point& xi) {
        const double x2 = xi[0] * xi[0] + xi[1] * xi[1];
        return -t * x2 * std::exp(-t * x2);
    });
}

struct PoissonBoundReport {
    double sup_weighted = 0.0;        // sup_y |p_t(0,y)| t^{n/2} (1 + d/sqrt(t))^{2n+eps}
    double center_value_scaled = 0.0; // p_t(0,0) t^{n/2}
};

/// Periodized heat-kernel row p_t(0,.) and its scaled Poisson-bound weight.
inline PoissonBoundReport kernel_poisson_bound_check(const PeriodicGrid& grid, double t, double eps) {
    const double h = grid.h();
    const double tmax = std::pow(grid.period / 8.0, 2.0);
    if (!(t >= h * h && t <= tmax)) throw std::invalid_argument("t out of range [h^2, (L/8)^2]");
    SpectralFunction s(grid);
    const double vol = grid.dim == 1 ? grid.period : grid.period * grid.period;
    for (std::size_t i = 0; i < s.coeffs.size(); ++i) {
        const Point xi = grid.freq(i);
        s.coeffs[i] = std::exp(-t * (xi[0] * xi[0] + xi[1] * xi[1])) / vol;
    }
    const GridFunction row = from_spectral_real(s);
    const double tn2 = std::pow(t, 0.5 * grid.dim);
    const double sqt = std::sqrt(t);
    PoissonBoundReport rep;
    rep.center_value_scaled = row.values[0] * tn2;
    const Point origin{0.0, 0.0};
    for (std::size_t i = 0; i < row.values.size(); ++i) {
        const double d = torus_dist(grid, grid.point(i), origin);
        const double w = std::fabs(row.values[i]) * tn2 * std::pow(1.0 + d / sqt, 2.0 * grid.dim + eps);
        rep.sup_weighted = std::max(rep.sup_weighted, w);
    }
    return rep;
}

/// fg - S_{r(B)^2}(f) S_{r(B)^2}(g), restricted to B (zero outside).
inline GridFunction bilinear_oscillation(const GridFunction& f, const GridFunction& g, const Ball& ball,
                                         const HeatSemigroup& sg) {
    if (!(f.grid == g.grid) || !(f.grid == sg.grid)) throw std::invalid_argument("grid mismatch");
    if (ball.radius < 4.0 * f.grid.h()) throw std::invalid_argument("degenerate ball");
    const double t = ball.radius * ball.radius;
    const GridFunction sf = apply_St(f, t);
    const GridFunction sg_ = apply_St(g, t);
    GridFunction out(f.grid);
    for (std::size_t i : ball_indices(f.grid, ball))
        out.values[i] = f.values[i] * g.values[i] - sf.values[i] * sg_.values[i];
    return out;
}

/// fg - S_{r^2}[ S_{r^2}(f) S_{r^2}(g) ], restricted to B.
inline GridFunction double_smoothed_oscillation(const GridFunction& f, const GridFunction& g, const Ball& ball,
                                                const HeatSemigroup& sg) {
    if (!(f.grid == g.grid) || !(f.grid == sg.grid)) throw std::invalid_argument("grid mismatch");
    if (ball.radius < 4.0 * f.grid.h()) throw std::invalid_argument("degenerate ball");
    const double t = ball.radius * ball.radius;
    const GridFunction prod = pointwise_product(apply_St(f, t), apply_St(g, t));
    const GridFunction smoothed = apply_St(prod, t);
    GridFunction out(f.grid);
    for (std::size_t i : ball_indices(f.grid, ball))
        out.values[i] = f.values[i] * g.values[i] - smoothed.values[i];
    return out;
}

namespace detail {

// Dilated ball 2^{l+1} B capped at the whole torus. Returns the radius to use
// and whether the cap was reached.
inline std::pair<double, bool> dilated_radius(const Ball& ball, int l, double period) {
    const double r = std::ldexp(ball.radius, l + 1); // 2^{l+1} r
    if (r >= 0.5 * period) return {0.5 * period, true};
    return {r, false};
}

inline double lp_norm_region(const GridFunction& f, double p, const Ball& ball, int l) {
    const auto [r, capped] = dilated_radius(ball, l, f.grid.period);
    if (capped) return lp_norm(f, p);
    return lp_norm(f, p, Ball{ball.center, r});
}

} // namespace detail

/// Right-hand side of the bilinear Poincare inequality:
///   r(B)^alpha sum_l 2^{-l(eps-alpha)} [ ||grad f||_{p1, 2^{l+1}B} ||g||_{p2, 2^{l+1}B} + symmetric ],
/// dilated balls capped at the torus; once capped the bracket is constant and
/// the tail is summed as a geometric series.
inline double poincare_rhs_series(const GridFunction& f, const GridFunction& g, const Ball& ball, double p1,
                                  double p2, double alpha, double eps, int l_max) {
    if (!(alpha > 0.0 && alpha < 1.0)) throw std::invalid_argument("require 0 < alpha < 1");
    if (!(alpha < eps)) throw std::invalid_argument("series diverges");
    const GridFunction df = gradient_magnitude(f);
    const GridFunction dg = gradient_magnitude(g);
    const double decay = std::pow(2.0, -(eps - alpha));
    double total = 0.0;
    double weight = 1.0; // 2^{-l(eps-alpha)}
    for (int l = 0; l <= l_max; ++l, weight *= decay) {
        const double term = detail::lp_norm_region(df, p1, ball, l) * detail::lp_norm_region(g, p2, ball, l) +
                            detail::lp_norm_region(f, p1, ball, l) * detail::lp_norm_region(dg, p2, ball, l);
        const bool capped = detail::dilated_radius(ball, l, f.grid.period).second;
        if (capped) {
            total += term * weight / (1.0 - decay); // whole remaining tail
            break;
        }
        total += term * weight;
    }
    return std::pow(ball.radius, alpha) * total;
}

struct RepresentationReport {
    double c_rep = 0.0;      // sup over x in B of LHS/RHS
    std::size_t argmax = 0;
    bool degenerate = false; // LHS > 0 with RHS = 0 somewhere
};

/// Pointwise representation-formula constant: smallest C with
///   |fg - S_{r^2}f S_{r^2}g|(x) <= C sum_l 2^{-l eps} [ J_{2^{l+1}B}(|grad f|,|g|)(x) + J_{2^{l+1}B}(|f|,|grad g|)(x) ]
/// for x in B, dilated balls capped at the torus with a geometric tail.
inline RepresentationReport representation_formula_check(const GridFunction& f, const GridFunction& g,
                                                         const Ball& ball, const HeatSemigroup& sg,
                                                         int l_max = 12) {
    const PeriodicGrid& grid = f.grid;
    const double eps = sg.epsilon;
    const GridFunction osc = bilinear_oscillation(f, g, ball, sg);
    const GridFunction df = gradient_magnitude(f);
    const GridFunction dg = gradient_magnitude(g);
    const GridFunction af = pointwise_abs(f);
    const GridFunction ag = pointwise_abs(g);

    const auto base_idx = ball_indices(grid, ball);
    std::vector<double> rhs(base_idx.size(), 0.0);
    double weight = 1.0; // 2^{-l eps}
    const double decay = std::pow(2.0, -eps);
    for (int l = 0; l <= l_max; ++l, weight *= decay) {
        const auto [r, capped] = detail::dilated_radius(ball, l, grid.period);
        const Ball dil{ball.center, r};
        GridFunction j1, j2;
        if (capped) {
            // whole torus: integrate over every point, log scale at L/2
            const Ball torus{ball.center, 0.5 * grid.period};
            // radius L/2 with open membership misses antipodes; integrate over
            // the full grid instead by using the kernel directly
            j1 = GridFunction(grid);
            j2 = GridFunction(grid);
            const double floor = 0.5 * grid.h();
            const double expo = 1.0 - 2.0 * grid.dim;
            const double logscale = 8.0 * (0.5 * grid.period);
            const double h2n = grid.cell_volume() * grid.cell_volume();
            parallel_for(base_idx.size(), [&](std::size_t xi) {
                const std::size_t x = base_idx[xi];
                double acc1 = 0.0, acc2 = 0.0;
                for (std::size_t a = 0; a < grid.size(); ++a) {
                    const double da = detail::index_dist(grid, x, a);
                    for (std::size_t b = 0; b < grid.size(); ++b) {
                        const double t = std::max(da + detail::index_dist(grid, x, b), floor);
                        const double k = std::pow(t, expo) * std::log(logscale / t);
                        acc1 += df.values[a] * ag.values[b] * k;
                        acc2 += af.values[a] * dg.values[b] * k;
                    }
                }
                acc1 *= h2n;
                acc2 *= h2n;
                // geometric tail: the capped term repeats for every later l
                rhs[xi] += (acc1 + acc2) * weight / (1.0 - decay);
            });
            (void)torus;
            break;
        }
        j1 = log_potential_JB(df, ag, dil);
        j2 = log_potential_JB(af, dg, dil);
        for (std::size_t xi = 0; xi < base_idx.size(); ++xi)
            rhs[xi] += weight * (j1.values[base_idx[xi]] + j2.values[base_idx[xi]]);
    }

    RepresentationReport rep;
    for (std::size_t xi = 0; xi < base_idx.size(); ++xi) {
        const double lhs = std::fabs(osc.values[base_idx[xi]]);
        if (rhs[xi] == 0.0) {
            if (lhs > 0.0) rep.degenerate = true;
            continue;
        }
        const double ratio = lhs / rhs[xi];
        if (ratio > rep.c_rep) {
            rep.c_rep = ratio;
            rep.argmax = base_idx[xi];
        }
    }
    return rep;
}

} // namespace bihat
