#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <stdexcept>
#include <vector>

#include "bihat/common.hpp"
#include "bihat/grid.hpp"

namespace bihat {

/// Fractional order; validity range depends on the operator (checked there).
struct FracOrder {
    double alpha = 0.5;
};

namespace detail {

// Distances between grid points from minimal-image index offsets. Exact in
// the sense that the same offset always yields the same double, which keeps
// the two sides of the discrete Hoelder comparison identical.
inline int min_image(int di, int N) {
    di = ((di % N) + N) % N;
    return di <= N / 2 ? di : N - di;
}

inline double index_dist(const PeriodicGrid& grid, std::size_t i, std::size_t j) {
    const int N = grid.points_per_axis;
    const double h = grid.h();
    if (grid.dim == 1) return h * min_image(static_cast<int>(i) - static_cast<int>(j), N);
    const int d0 = min_image(grid.axis_index(i, 0) - grid.axis_index(j, 0), N);
    const int d1 = min_image(grid.axis_index(i, 1) - grid.axis_index(j, 1), N);
    return std::hypot(h * d0, h * d1);
}

} // namespace detail

/// Linear fractional integral: quadrature of f(y)/d(x,y)^{n-alpha} with the
/// diagonal cell flattened to distance h/2.
inline GridFunction riesz_linear(const GridFunction& f, FracOrder order) {
    const PeriodicGrid& grid = f.grid;
    const double alpha = order.alpha;
    if (!(alpha > 0.0 && alpha < grid.dim)) throw std::invalid_argument("riesz_linear requires 0 < alpha < n");
    const double hn = grid.cell_volume();
    const double floor = 0.5 * grid.h();
    const std::size_t n = grid.size();

    // kernel depends only on the index offset
    std::vector<double> kern(n);
    for (std::size_t d = 0; d < n; ++d)
        kern[d] = hn * std::pow(std::max(detail::index_dist(grid, d, 0), floor), alpha - grid.dim);

    GridFunction out(grid);
    parallel_for(n, [&](std::size_t x) {
        double acc = 0.0;
        if (grid.dim == 1) {
            const int N = grid.points_per_axis;
            for (std::size_t y = 0; y < n; ++y)
                acc += f.values[y] * kern[static_cast<std::size_t>(((static_cast<int>(y) - static_cast<int>(x)) % N + N) % N)];
        } else {
            const int N = grid.points_per_axis;
            const int x0 = grid.axis_index(x, 0), x1 = grid.axis_index(x, 1);
            for (std::size_t y = 0; y < n; ++y) {
                const int o0 = ((grid.axis_index(y, 0) - x0) % N + N) % N;
                const int o1 = ((grid.axis_index(y, 1) - x1) % N + N) % N;
                acc += f.values[y] * kern[static_cast<std::size_t>(o0) * N + o1];
            }
        }
        out.values[x] = acc;
    });
    return out;
}

/// Bilinear Riesz potential: double-sum quadrature of
/// f(y)g(z)/(d(x,y)+d(x,z))^{2n-alpha}, distance sum floored at h/2.
/// For n=2 only N <= 24 is allowed (O(N^6) cost).
inline GridFunction bilinear_I(const GridFunction& f, const GridFunction& g, FracOrder order) {
    if (!(f.grid == g.grid)) throw std::invalid_argument("grid mismatch");
    const PeriodicGrid& grid = f.grid;
    const double alpha = order.alpha;
    if (!(alpha > 0.0 && alpha < 2.0 * grid.dim)) throw std::invalid_argument("bilinear_I requires 0 < alpha < 2n");
    if (grid.dim == 2 && grid.points_per_axis > 24)
        throw std::invalid_argument("bilinear_I in n=2 is limited to N <= 24");
    const double h2n = grid.cell_volume() * grid.cell_volume();
    const double floor = 0.5 * grid.h();
    const double expo = alpha - 2.0 * grid.dim;
    const std::size_t n = grid.size();

    GridFunction out(grid);
    // accumulate over unordered {y,z} pairs so the result is exactly
    // symmetric under swapping f and g
    if (grid.dim == 1) {
        // distance sums are integer multiples of h: table the kernel
        const int N = grid.points_per_axis;
        std::vector<double> table(static_cast<std::size_t>(N) + 1);
        for (int m = 0; m <= N; ++m) table[static_cast<std::size_t>(m)] = std::pow(std::max(m * grid.h(), floor), expo);
        parallel_for(n, [&](std::size_t x) {
            double acc = 0.0;
            for (std::size_t y = 0; y < n; ++y) {
                const int my = detail::min_image(static_cast<int>(y) - static_cast<int>(x), N);
                acc += f.values[y] * g.values[y] * table[static_cast<std::size_t>(2 * my)];
                for (std::size_t z = y + 1; z < n; ++z) {
                    const int mz = detail::min_image(static_cast<int>(z) - static_cast<int>(x), N);
                    acc += (f.values[y] * g.values[z] + f.values[z] * g.values[y]) *
                           table[static_cast<std::size_t>(my + mz)];
                }
            }
            out.values[x] = h2n * acc;
        });
    } else {
        parallel_for(n, [&](std::size_t x) {
            double acc = 0.0;
            for (std::size_t y = 0; y < n; ++y) {
                const double dy = detail::index_dist(grid, y, x);
                acc += f.values[y] * g.values[y] * std::pow(std::max(2.0 * dy, floor), expo);
                for (std::size_t z = y + 1; z < n; ++z) {
                    const double d = dy + detail::index_dist(grid, z, x);
                    acc += (f.values[y] * g.values[z] + f.values[z] * g.values[y]) *
                           std::pow(std::max(d, floor), expo);
                }
            }
            out.values[x] = h2n * acc;
        });
    }
    return out;
}

/// Sheared bilinear fractional integral: quadrature over lattice shifts y of
/// f(x - s1 y) g(x - s2 y)/d(y,0)^{n-alpha}, diagonal cell floored at h/2.
inline GridFunction bilinear_B(const GridFunction& f, const GridFunction& g, FracOrder order, int s1, int s2) {
    if (!(f.grid == g.grid)) throw std::invalid_argument("grid mismatch");
    if (s1 == s2 || s1 == 0 || s2 == 0) throw std::invalid_argument("degenerate shift pair");
    const PeriodicGrid& grid = f.grid;
    const double alpha = order.alpha;
    if (!(alpha > 0.0 && alpha < grid.dim)) throw std::invalid_argument("bilinear_B requires 0 < alpha < n");
    const double hn = grid.cell_volume();
    const double floor = 0.5 * grid.h();
    const std::size_t n = grid.size();
    const int N = grid.points_per_axis;

    std::vector<double> kern(n);
    for (std::size_t d = 0; d < n; ++d)
        kern[d] = hn * std::pow(std::max(detail::index_dist(grid, d, 0), floor), alpha - grid.dim);

    GridFunction out(grid);
    parallel_for(n, [&](std::size_t x) {
        const int x0 = grid.axis_index(x, 0), x1 = grid.axis_index(x, 1);
        double acc = 0.0;
        for (std::size_t y = 0; y < n; ++y) {
            const int y0 = grid.axis_index(y, 0), y1 = grid.axis_index(y, 1);
            const std::size_t if1 = grid.flat_index(x0 - s1 * y0, x1 - s1 * y1);
            const std::size_t if2 = grid.flat_index(x0 - s2 * y0, x1 - s2 * y1);
            acc += f.values[if1] * g.values[if2] * kern[y];
        }
        out.values[x] = acc;
    });
    (void)N;
    return out;
}

struct DominationReport {
    double max_ratio = 0.0;      // sup over grid of LHS/RHS (RHS > 0)
    double max_violation = 0.0;  // max(0, max_ratio - 1)
    std::size_t argmax = 0;
};

/// Pointwise Hoelder domination of B_alpha(|f|,|g|) by
/// I_alpha(|f|^r)^{1/r} I_alpha(|g|^s)^{1/s}, identical kernel on both sides.
inline DominationReport holder_domination_check(const GridFunction& f, const GridFunction& g, FracOrder order,
                                                double p1, double p2) {
    const double invp = 1.0 / p1 + 1.0 / p2;
    if (!(p1 > 1.0 && p2 > 1.0 && invp < 1.0))
        throw std::invalid_argument("holder_domination_check requires 1/p1 + 1/p2 < 1");
    const double p = 1.0 / invp;
    const double r = p1 / p, s = p2 / p;

    const GridFunction lhs = bilinear_B(pointwise_abs(f), pointwise_abs(g), order, 1, -1);

    GridFunction fr(f.grid), gs(g.grid);
    for (std::size_t i = 0; i < f.values.size(); ++i) {
        fr.values[i] = std::pow(std::fabs(f.values[i]), r);
        gs.values[i] = std::pow(std::fabs(g.values[i]), s);
    }
    const GridFunction ifr = riesz_linear(fr, order);
    const GridFunction igs = riesz_linear(gs, order);

    DominationReport rep;
    for (std::size_t i = 0; i < f.values.size(); ++i) {
        const double rhs = std::pow(ifr.values[i], 1.0 / r) * std::pow(igs.values[i], 1.0 / s);
        if (rhs == 0.0) continue;  // positive kernel: rhs = 0 forces lhs = 0
        const double ratio = lhs.values[i] / rhs;
        if (ratio > rep.max_ratio) {
            rep.max_ratio = ratio;
            rep.argmax = i;
        }
    }
    rep.max_violation = std::max(0.0, rep.max_ratio - 1.0);
    return rep;
}

/// Log-perturbed bilinear potential on a ball:
///   quadrature over B x B of f(a)g(b) (d(x,a)+d(x,b))^{1-2n}
///   log(8 r(B)/(d(x,a)+d(x,b))), distance sum floored at h/2.
/// Output vanishes outside B; for x,a,b in B the log factor is >= log 2.
inline GridFunction log_potential_JB(const GridFunction& f, const GridFunction& g, const Ball& ball) {
    if (!(f.grid == g.grid)) throw std::invalid_argument("grid mismatch");
    const PeriodicGrid& grid = f.grid;
    if (ball.radius < 4.0 * grid.h()) throw std::invalid_argument("ball too small");
    const double floor = 0.5 * grid.h();
    const double expo = 1.0 - 2.0 * grid.dim;
    const double logscale = 8.0 * ball.radius;
    const double h2n = grid.cell_volume() * grid.cell_volume();
    const auto idx = ball_indices(grid, ball);

    GridFunction out(grid);
    parallel_for(idx.size(), [&](std::size_t xi) {
        const std::size_t x = idx[xi];
        double acc = 0.0;
        for (std::size_t ai = 0; ai < idx.size(); ++ai) {
            const std::size_t a = idx[ai];
            const double fa = f.values[a];
            if (fa == 0.0) continue;
            const double da = detail::index_dist(grid, x, a);
            for (std::size_t bi = 0; bi < idx.size(); ++bi) {
                const std::size_t b = idx[bi];
                const double t = std::max(da + detail::index_dist(grid, x, b), floor);
                acc += fa * g.values[b] * std::pow(t, expo) * std::log(logscale / t);
            }
        }
        out.values[x] = h2n * acc;
    });
    return out;
}

/// sup over ordered pairs from the family of
///   ||J_B(f,g)||_{L^q(B)} / (r(B)^alpha ||f||_{L^{p1}(B)} ||g||_{L^{p2}(B)}).
inline double jb_operator_ratio(const PeriodicGrid& grid, const Ball& ball,
                                const std::vector<GridFunction>& family, double p1, double p2, double q,
                                double alpha) {
    if (family.empty()) throw std::invalid_argument("empty family");
    if (!(alpha > 0.0 && alpha <= 1.0)) throw std::invalid_argument("jb_operator_ratio requires 0 < alpha <= 1");
    const double want = 1.0 / p1 + 1.0 / p2 - (1.0 - alpha) / grid.dim;
    if (!(want > 0.0) || std::fabs(1.0 / q - want) > 1e-9)
        throw std::invalid_argument("scaling relation violated: need 1/q = 1/p1 + 1/p2 - (1-alpha)/n > 0");

    const double scale = std::pow(ball.radius, alpha);
    double sup = 0.0;
    for (const GridFunction& f : family) {
        const double nf = lp_norm(f, p1, ball);
        if (nf == 0.0) continue;
        for (const GridFunction& g : family) {
            const double ng = lp_norm(g, p2, ball);
            if (ng == 0.0) continue;
            const GridFunction jb = log_potential_JB(f, g, ball);
            sup = std::max(sup, lp_norm(jb, q, ball) / (scale * nf * ng));
        }
    }
    return sup;
}

/// Kernel growth-comparison constant: largest ratio
///   K(x1,x2;a,b) / K(v,w;a,b) over random sextuples in B subject to
///   d(v,a)+d(w,b) <= c (d(x1,a)+d(x2,b)). Monotone in c by inclusion.
inline double jb_growth_constant(const PeriodicGrid& grid, const Ball& ball, double c, std::uint64_t seed,
                                 int samples = 20000) {
    const auto idx = ball_indices(grid, ball);
    if (idx.size() < 2) throw std::invalid_argument("degenerate ball");
    const double floor = 0.5 * grid.h();
    const double expo = 1.0 - 2.0 * grid.dim;
    const double logscale = 8.0 * ball.radius;
    auto kernel = [&](double t) {
        t = std::max(t, floor);
        return std::pow(t, expo) * std::log(logscale / t);
    };
    std::mt19937_64 eng(seed);
    auto pick = [&] { return idx[static_cast<std::size_t>(eng() % idx.size())]; };
    double worst = 0.0;
    for (int s = 0; s < samples; ++s) {
        const std::size_t x1 = pick(), x2 = pick(), a = pick(), b = pick(), v = pick(), w = pick();
        const double t = detail::index_dist(grid, x1, a) + detail::index_dist(grid, x2, b);
        const double tp = detail::index_dist(grid, v, a) + detail::index_dist(grid, w, b);
        if (tp > c * t) continue;
        worst = std::max(worst, kernel(t) / kernel(tp));
    }
    return worst;
}

} // namespace bihat
