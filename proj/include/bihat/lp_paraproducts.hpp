#pragma once

#include <cmath>
#include <stdexcept>
#include <vector>

#include "bihat/grid.hpp"

namespace bihat {

/// Base Littlewood-Paley cutoff: radial, 1 on |xi| <= 1, 0 on |xi| >= 3/2,
/// exp-based smooth transition in between.
inline double lp_phi_hat(double rho) { return smooth_step(3.0 - 2.0 * std::fabs(rho)); }

/// psi_hat(xi) = phi_hat(xi/2) - phi_hat(xi); supported in 1 <= |xi| <= 3.
inline double lp_psi_hat(double rho) { return lp_phi_hat(0.5 * rho) - lp_phi_hat(rho); }

/// Radial annulus window supported exactly on 1 <= |zeta| <= 2, used for the
/// shell decomposition of symbol kernels.
inline double annulus_window(double rho) {
    return smooth_step(2.0 * (rho - 1.0)) * smooth_step(2.0 * (2.0 - rho));
}

/// Inhomogeneous Littlewood-Paley ladder on a fixed grid. The top level is
/// chosen so the partition telescopes exactly on the frequency lattice:
/// phi_hat(2^{-(j_max+1)} xi) = 1 for every grid frequency.
struct LPFamily {
    PeriodicGrid grid;
    int j_max = 0;

    explicit LPFamily(const PeriodicGrid& g) : grid(g) {
        double ximax = 0.0;
        for (std::size_t i = 0; i < g.size(); ++i) {
            const Point xi = g.freq(i);
            ximax = std::max(ximax, std::hypot(xi[0], xi[1]));
        }
        int J = 0;
        while (std::ldexp(1.0, J + 1) < ximax) ++J;
        j_max = J;
    }

    void check_level(int j) const {
        if (j < 0 || j > j_max) throw std::invalid_argument("level out of range");
    }

    GridFunction sj_unchecked(const GridFunction& f, int j) const {
        return apply_multiplier(f, [j](const Point& xi) {
            return lp_phi_hat(std::ldexp(std::hypot(xi[0], xi[1]), -j));
        });
    }

    GridFunction sj(const GridFunction& f, int j) const {
        check_level(j);
        return sj_unchecked(f, j);
    }

    GridFunction delta_j(const GridFunction& f, int j) const {
        check_level(j);
        return apply_multiplier(f, [j](const Point& xi) {
            return lp_psi_hat(std::ldexp(std::hypot(xi[0], xi[1]), -j));
        });
    }
};

/// Inhomogeneous Bony paraproduct:
///   Pi(f,g) = S_0 f S_0 g + sum_{j=0}^{j_max} Delta_j f S_{max(j-1,0)} g.
/// Satisfies Pi(f,1) = f and Pi(c,g) = c S_0 g. The corner S_0 f S_0 g then
/// appears in both Pi(f,g) and Pi(g,f); product reconstruction compensates by
/// assigning -S_0 f S_0 g to R_0.
inline GridFunction bony_paraproduct(const LPFamily& lp, const GridFunction& f, const GridFunction& g) {
    GridFunction acc = pointwise_product(lp.sj(f, 0), lp.sj(g, 0));
    std::vector<GridFunction> sg_low;
    for (int j = 0; j <= lp.j_max; ++j) {
        const GridFunction dj = lp.delta_j(f, j);
        const GridFunction slow = lp.sj(g, std::max(j - 1, 0));
        acc = lin_comb(1.0, acc, 1.0, pointwise_product(dj, slow));
    }
    return acc;
}

struct ReconstructionReport {
    double residual = 0.0;
    bool relative = true; // false when fg == 0 (absolute residual reported)
};

/// fg = Pi(f,g) + Pi(g,f) + R_{-1} + R_0 + R_1 with
/// R_m = sum_j Delta_j f Delta_{j+m} g and R_0 carrying -S_0 f S_0 g.
inline ReconstructionReport reconstruct_product(const LPFamily& lp, const GridFunction& f,
                                                const GridFunction& g) {
    const GridFunction fg = pointwise_product(f, g);
    GridFunction sum = lin_comb(1.0, bony_paraproduct(lp, f, g), 1.0, bony_paraproduct(lp, g, f));

    std::vector<GridFunction> df, dg;
    for (int j = 0; j <= lp.j_max; ++j) {
        df.push_back(lp.delta_j(f, j));
        dg.push_back(lp.delta_j(g, j));
    }
    for (int m = -1; m <= 1; ++m)
        for (int j = 0; j <= lp.j_max; ++j) {
            const int k = j + m;
            if (k < 0 || k > lp.j_max) continue;
            sum = lin_comb(1.0, sum, 1.0, pointwise_product(df[static_cast<std::size_t>(j)], dg[static_cast<std::size_t>(k)]));
        }
    sum = lin_comb(1.0, sum, -1.0, pointwise_product(lp.sj(f, 0), lp.sj(g, 0)));

    ReconstructionReport rep;
    const double denom = sup_norm(fg);
    const double err = sup_norm(lin_comb(1.0, fg, -1.0, sum));
    if (denom == 0.0) {
        rep.residual = err;
        rep.relative = false;
    } else {
        rep.residual = err / denom;
    }
    return rep;
}

/// Bessel multiplier (1+|xi|^2)^{s/2}.
inline GridFunction bessel_Js(const GridFunction& f, double s) {
    return apply_multiplier(f, [s](const Point& xi) {
        return std::pow(1.0 + xi[0] * xi[0] + xi[1] * xi[1], 0.5 * s);
    });
}

/// Riesz multiplier |xi|^s. The zero mode is annihilated for s > 0; for
/// s < 0 the input must have vanishing mean.
inline GridFunction riesz_Ds(const GridFunction& f, double s) {
    if (s == 0.0) return f;
    if (s < 0.0) {
        const double mean = quad_integral(f) / (f.grid.dim == 1 ? f.grid.period : f.grid.period * f.grid.period);
        if (std::fabs(mean) > 1e-12 * std::max(1.0, sup_norm(f)))
            throw std::invalid_argument("zero-frequency singularity");
    }
    return apply_multiplier(f, [s](const Point& xi) {
        const double rho = std::hypot(xi[0], xi[1]);
        return rho == 0.0 ? 0.0 : std::pow(rho, s);
    });
}

enum class SobolevVariant { inhom, hom };

inline double sobolev_norm(const GridFunction& f, double s, double p,
                           SobolevVariant variant = SobolevVariant::inhom) {
    if (!(p > 0.0)) throw std::invalid_argument("p must be positive");
    return variant == SobolevVariant::inhom ? lp_norm(bessel_Js(f, s), p) : lp_norm(riesz_Ds(f, s), p);
}

} // namespace bihat
