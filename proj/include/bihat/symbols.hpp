#pragma once

#include <array>
#include <cmath>
#include <functional>
#include <map>
#include <stdexcept>
#include <string>
#include <tuple>
#include <vector>

#include "bihat/frac_ops.hpp"
#include "bihat/grid.hpp"
#include "bihat/lp_paraproducts.hpp"

namespace bihat {

enum class SymbolClass { BS_inhom, BS_hom, BS_theta_quarter_pi, unclassified };

/// x-independent bilinear symbol sigma(xi, eta) with a declared order and
/// class tag. Homogeneous symbols must define a value at (0,0); the
/// convention used here is 0 (affects only the constant mode of T_sigma).
struct BilinearSymbol {
    std::function<cplx(const Point&, const Point&)> evaluator;
    double order = 0.0;
    SymbolClass tag = SymbolClass::unclassified;

    cplx operator()(const Point& xi, const Point& eta) const { return evaluator(xi, eta); }
};

/// T_sigma(f,g)(x) = sum_{k,l} sigma(xi_k, xi_l) f_hat_k g_hat_l e^{i x (xi_k + xi_l)},
/// grouped over the aliased sum frequency, then one inverse transform. The
/// symbol is evaluated at the true (unaliased) frequency pair.
inline ComplexGridFunction eval_Tsigma(const BilinearSymbol& sigma, const GridFunction& f,
                                       const GridFunction& g) {
    if (!(f.grid == g.grid)) throw std::invalid_argument("grid mismatch");
    const PeriodicGrid& grid = f.grid;
    const SpectralFunction fh = to_spectral(f);
    const SpectralFunction gh = to_spectral(g);
    const std::size_t S = grid.size();
    const int N = grid.points_per_axis;

    SpectralFunction acc(grid);
    // bucket by output frequency: deterministic inner order, parallel outer
    parallel_for(S, [&](std::size_t m) {
        const int m0 = grid.axis_index(m, 0), m1 = grid.axis_index(m, 1);
        cplx sum = 0.0;
        for (std::size_t k = 0; k < S; ++k) {
            const int k0 = grid.axis_index(k, 0), k1 = grid.axis_index(k, 1);
            const std::size_t l = grid.flat_index(m0 - k0, m1 - k1);
            const cplx term = fh.coeffs[k] * gh.coeffs[l];
            if (term == cplx{0.0, 0.0}) continue;
            sum += sigma(grid.freq(k), grid.freq(l)) * term;
        }
        acc.coeffs[m] = sum;
    });
    (void)N;
    return from_spectral(acc);
}

inline GridFunction eval_Tsigma_real(const BilinearSymbol& sigma, const GridFunction& f,
                                     const GridFunction& g) {
    const ComplexGridFunction out = eval_Tsigma(sigma, f, g);
    GridFunction re(out.grid);
    for (std::size_t i = 0; i < re.values.size(); ++i) re.values[i] = out.values[i].real();
    return re;
}

/// 2n-dimensional kernel table k(u,v), the inverse discrete transform of the
/// symbol sampled on the frequency lattice (scaling: sigma == 1 gives a
/// discrete delta of value N^{2n}/L^{2n} at (0,0), so that
/// T_sigma(f,g)(x) = h^{2n} sum_{y,z} k(x-y, x-z) f(y) g(z)).
struct KernelTable {
    PeriodicGrid grid;        // base n-dimensional grid
    std::vector<cplx> values; // index iu * grid.size() + iv

    cplx value(std::size_t iu, std::size_t iv) const { return values[iu * grid.size() + iv]; }
};

inline KernelTable symbol_kernel(const BilinearSymbol& sigma, const PeriodicGrid& grid) {
    const std::size_t S = grid.size();
    KernelTable table{grid, std::vector<cplx>(S * S)};
    for (std::size_t k = 0; k < S; ++k) {
        const Point xi = grid.freq(k);
        for (std::size_t l = 0; l < S; ++l) table.values[k * S + l] = sigma(xi, grid.freq(l));
    }
    // inverse transform over the second block (contiguous), then the first
    std::vector<cplx> line(S);
    for (std::size_t k = 0; k < S; ++k) {
        std::copy(table.values.begin() + static_cast<std::ptrdiff_t>(k * S),
                  table.values.begin() + static_cast<std::ptrdiff_t>((k + 1) * S), line.begin());
        detail::fft_nd(grid, line, +1);
        std::copy(line.begin(), line.end(), table.values.begin() + static_cast<std::ptrdiff_t>(k * S));
    }
    for (std::size_t l = 0; l < S; ++l) {
        for (std::size_t k = 0; k < S; ++k) line[k] = table.values[k * S + l];
        detail::fft_nd(grid, line, +1);
        for (std::size_t k = 0; k < S; ++k) table.values[k * S + l] = line[k];
    }
    const double voln = grid.dim == 1 ? grid.period : grid.period * grid.period;
    const double scale = 1.0 / (voln * voln);
    for (cplx& v : table.values) v *= scale;
    return table;
}

namespace detail {

inline double min_image_norm(const PeriodicGrid& grid, std::size_t flat) {
    return index_dist(grid, flat, 0);
}

} // namespace detail

/// sup over kernel points with h <= |u|+|v| <= L/4 of |k(u,v)| (|u|+|v|)^{2n-s}.
inline double kernel_decay_constant(const BilinearSymbol& sigma, double s, const PeriodicGrid& grid) {
    if (!(s > 0.0 && s < 2.0 * grid.dim)) throw std::invalid_argument("kernel_decay_constant requires 0 < s < 2n");
    const KernelTable table = symbol_kernel(sigma, grid);
    const std::size_t S = grid.size();
    const double h = grid.h();
    const double upper = grid.period / 4.0;
    const double expo = 2.0 * grid.dim - s;
    std::vector<double> norms(S);
    for (std::size_t i = 0; i < S; ++i) norms[i] = detail::min_image_norm(grid, i);
    double sup = 0.0;
    for (std::size_t iu = 0; iu < S; ++iu)
        for (std::size_t iv = 0; iv < S; ++iv) {
            const double d = norms[iu] + norms[iv];
            if (d < h || d > upper) continue;
            sup = std::max(sup, std::abs(table.value(iu, iv)) * std::pow(d, expo));
        }
    return sup;
}

struct ShellDecayEntry {
    double t = 0.0;
    int weight_power = 0;
    double constant = 0.0;
};

/// Littlewood-Paley shell analysis of the kernel: for each scale t the symbol
/// is windowed by the annulus Psi(t |(xi,eta)|) and the transform is weighted
/// by t^{2n-s} (1 + |(u,v)|/t)^N, N in weight_powers.
inline std::vector<ShellDecayEntry> shell_decay_check(const BilinearSymbol& sigma, double s,
                                                      const std::vector<double>& t_list,
                                                      const PeriodicGrid& grid,
                                                      const std::vector<int>& weight_powers = {2, 4}) {
    const std::size_t S = grid.size();
    std::vector<double> norms(S);
    for (std::size_t i = 0; i < S; ++i) norms[i] = detail::min_image_norm(grid, i);
    std::vector<ShellDecayEntry> out;
    for (double t : t_list) {
        BilinearSymbol windowed{
            [&sigma, t](const Point& xi, const Point& eta) {
                const double rho = std::sqrt(xi[0] * xi[0] + xi[1] * xi[1] + eta[0] * eta[0] + eta[1] * eta[1]);
                const double w = annulus_window(t * rho);
                return w == 0.0 ? cplx{0.0, 0.0} : w * sigma(xi, eta);
            },
            sigma.order, sigma.tag};
        const KernelTable table = symbol_kernel(windowed, grid);
        for (int Nw : weight_powers) {
            double sup = 0.0;
            for (std::size_t iu = 0; iu < S; ++iu)
                for (std::size_t iv = 0; iv < S; ++iv) {
                    const double d = std::hypot(norms[iu], norms[iv]);
                    const double w = std::pow(t, 2.0 * grid.dim - s) * std::pow(1.0 + d / t, Nw);
                    sup = std::max(sup, std::abs(table.value(iu, iv)) * w);
                }
            out.push_back({t, Nw, sup});
        }
    }
    return out;
}

struct SeminormEntry {
    std::array<int, 2> beta{0, 0};  // derivative order per xi axis
    std::array<int, 2> gamma{0, 0}; // derivative order per eta axis
    double value = 0.0;
};

namespace detail {

// Iterated central difference along one coordinate of the 2n-dimensional
// frequency argument: (2 delta)^{-k} sum_i (-1)^i C(k,i) f(. + (k-2i) delta).
// The divided difference equals a true derivative at an intermediate point,
// so these estimates honestly track the class seminorms at lattice scale.
inline cplx iterated_difference(const std::function<cplx(std::array<double, 4>)>& eval,
                                std::array<double, 4> base, const std::array<int, 4>& orders, double delta,
                                int axis) {
    int k = orders[static_cast<std::size_t>(axis)];
    while (axis < 4 && k == 0) {
        ++axis;
        if (axis < 4) k = orders[static_cast<std::size_t>(axis)];
    }
    if (axis >= 4) return eval(base);
    double binom = 1.0;
    cplx acc = 0.0;
    auto next = orders;
    next[static_cast<std::size_t>(axis)] = 0;
    for (int i = 0; i <= k; ++i) {
        auto shifted = base;
        shifted[static_cast<std::size_t>(axis)] += (k - 2 * i) * delta;
        const cplx v = iterated_difference(eval, shifted, next, delta, axis + 1);
        acc += ((i % 2 == 0) ? binom : -binom) * v;
        binom = binom * (k - i) / (i + 1);
    }
    return acc / std::pow(2.0 * delta, k);
}

} // namespace detail

/// Finite-difference estimates of the symbol-class seminorms
/// sup |D^beta_xi D^gamma_eta sigma| weight(xi,eta), anchored at the grid
/// frequencies, difference step = frequency spacing. With
/// homogeneous_weight the weight is (|xi|+|eta|)^{|beta|+|gamma|} and anchors
/// with |xi|+|eta| < min_freq_sum are excluded (Coifman-Meyer form);
/// otherwise it is (1+|xi|+|eta|)^{-order+|beta|+|gamma|}.
inline std::vector<SeminormEntry> seminorm_estimate(const BilinearSymbol& sigma, int max_order,
                                                    const PeriodicGrid& grid, bool homogeneous_weight = false,
                                                    double min_freq_sum = 0.0) {
    if (max_order < 0 || max_order > 4) throw std::invalid_argument("max_order must be in [0, 4]");
    const double delta = two_pi / grid.period;
    const int n = grid.dim;
    auto eval4 = [&sigma, n](std::array<double, 4> z) {
        Point xi{z[0], 0.0}, eta{0.0, 0.0};
        if (n == 1) {
            eta[0] = z[2];
        } else {
            xi[1] = z[1];
            eta = {z[2], z[3]};
        }
        return sigma(xi, eta);
    };

    // enumerate multi-orders (beta, gamma) with total <= max_order
    std::vector<std::array<int, 4>> orders;
    const int b1max = max_order, b2max = n == 2 ? max_order : 0;
    for (int b1 = 0; b1 <= b1max; ++b1)
        for (int b2 = 0; b2 <= b2max; ++b2)
            for (int g1 = 0; g1 <= b1max; ++g1)
                for (int g2 = 0; g2 <= b2max; ++g2)
                    if (b1 + b2 + g1 + g2 <= max_order) orders.push_back({b1, b2, g1, g2});

    std::vector<SeminormEntry> table(orders.size());
    parallel_for(orders.size(), [&](std::size_t oi) {
        const auto& ord = orders[oi];
        const int total = ord[0] + ord[1] + ord[2] + ord[3];
        double sup = 0.0;
        for (std::size_t k = 0; k < grid.size(); ++k) {
            const Point xi = grid.freq(k);
            for (std::size_t l = 0; l < grid.size(); ++l) {
                const Point eta = grid.freq(l);
                const double nx = std::hypot(xi[0], xi[1]);
                const double ne = std::hypot(eta[0], eta[1]);
                double w;
                if (homogeneous_weight) {
                    if (nx + ne < min_freq_sum) continue;
                    w = std::pow(nx + ne, total);
                } else {
                    w = std::pow(1.0 + nx + ne, -sigma.order + total);
                }
                const std::array<double, 4> base{xi[0], xi[1], eta[0], eta[1]};
                const double d = std::abs(detail::iterated_difference(eval4, base, ord, delta, 0));
                sup = std::max(sup, d * w);
            }
        }
        table[oi] = SeminormEntry{{ord[0], ord[1]}, {ord[2], ord[3]}, sup};
    });
    return table;
}

namespace detail {

// Two-way cutoff: smooth, 1 on [0,1/2], 0 on [2,inf), phi(r) + phi(1/r) = 1.
inline double cutoff_two_way(double r) {
    if (r <= 0.0) return 1.0;
    return smooth_step(0.5 * std::log2(2.0 / r));
}

// Three-way low cutoff: 1 on [0,1/4], 0 on [1/2,inf).
inline double cutoff_three_low(double r) {
    if (r <= 0.0) return 1.0;
    return smooth_step(-1.0 - std::log2(r));
}

inline double bessel2(const Point& v) { return 1.0 + v[0] * v[0] + v[1] * v[1]; }

inline Point add(const Point& a, const Point& b) { return {a[0] + b[0], a[1] + b[1]}; }

} // namespace detail

/// Frequency-decoupling pair for J^m(fg) = T_{sigma1}(J^{m+s} f, g) + T_{sigma2}(f, J^{m+s} g):
/// sigma1 damps the xi slot (the one that receives J^{m+s}), sigma2 the eta
/// slot, and the cutoff partition phi(r) + phi(1/r) = 1 makes the identity
/// exact on band-limited inputs.
inline std::pair<BilinearSymbol, BilinearSymbol> decompose_frequency(double m, double s) {
    auto sigma1 = [m, s](const Point& xi, const Point& eta) -> cplx {
        const double bx = detail::bessel2(xi), be = detail::bessel2(eta);
        const double cut = detail::cutoff_two_way(be / bx);
        if (cut == 0.0) return 0.0;
        return std::pow(detail::bessel2(detail::add(xi, eta)), 0.5 * m) * cut * std::pow(bx, -0.5 * (m + s));
    };
    auto sigma2 = [m, s](const Point& xi, const Point& eta) -> cplx {
        const double bx = detail::bessel2(xi), be = detail::bessel2(eta);
        const double cut = detail::cutoff_two_way(bx / be);
        if (cut == 0.0) return 0.0;
        return std::pow(detail::bessel2(detail::add(xi, eta)), 0.5 * m) * cut * std::pow(be, -0.5 * (m + s));
    };
    return {BilinearSymbol{sigma1, -s, SymbolClass::BS_inhom}, BilinearSymbol{sigma2, -s, SymbolClass::BS_inhom}};
}

/// Three-way variant with a balanced-frequency remainder sigma3:
/// J^m(fg) = T_{sigma1}(J^{m+s} f, g) + T_{sigma2}(f, J^{m+s} g) + T_{sigma3}(f, g).
/// The low cutoff lives on [0,1/2]; the remainder cutoff on [1/4,4].
inline std::tuple<BilinearSymbol, BilinearSymbol, BilinearSymbol> decompose_three_way(double m, double s) {
    auto sigma1 = [m, s](const Point& xi, const Point& eta) -> cplx {
        const double bx = detail::bessel2(xi), be = detail::bessel2(eta);
        const double cut = detail::cutoff_three_low(be / bx);
        if (cut == 0.0) return 0.0;
        return std::pow(detail::bessel2(detail::add(xi, eta)), 0.5 * m) * cut * std::pow(bx, -0.5 * (m + s));
    };
    auto sigma2 = [m, s](const Point& xi, const Point& eta) -> cplx {
        const double bx = detail::bessel2(xi), be = detail::bessel2(eta);
        const double cut = detail::cutoff_three_low(bx / be);
        if (cut == 0.0) return 0.0;
        return std::pow(detail::bessel2(detail::add(xi, eta)), 0.5 * m) * cut * std::pow(be, -0.5 * (m + s));
    };
    auto sigma3 = [m](const Point& xi, const Point& eta) -> cplx {
        const double r = detail::bessel2(xi) / detail::bessel2(eta);
        const double cut = 1.0 - detail::cutoff_three_low(r) - detail::cutoff_three_low(1.0 / r);
        if (cut == 0.0) return 0.0;
        return std::pow(detail::bessel2(detail::add(xi, eta)), 0.5 * m) * cut;
    };
    return {BilinearSymbol{sigma1, -s, SymbolClass::BS_inhom}, BilinearSymbol{sigma2, -s, SymbolClass::BS_inhom},
            BilinearSymbol{sigma3, m, SymbolClass::BS_inhom}};
}

/// One-variable multiplier sigma0 at theta = pi/4 (tan theta = 1), realized
/// as the kernel sum T(f,g)(x) = h^n sum_y k(y) f(x+y) g(x-y), k the inverse
/// transform of sigma0 on the grid lattice.
inline ComplexGridFunction eval_Ttheta(const std::function<cplx(const Point&)>& sigma0, const GridFunction& f,
                                       const GridFunction& g) {
    if (!(f.grid == g.grid)) throw std::invalid_argument("grid mismatch");
    const PeriodicGrid& grid = f.grid;
    const std::size_t S = grid.size();
    SpectralFunction spec(grid);
    const double voln = grid.dim == 1 ? grid.period : grid.period * grid.period;
    for (std::size_t i = 0; i < S; ++i) spec.coeffs[i] = sigma0(grid.freq(i)) / voln;
    const ComplexGridFunction kern = from_spectral(spec);

    ComplexGridFunction out(grid);
    const double hn = grid.cell_volume();
    parallel_for(S, [&](std::size_t x) {
        const int x0 = grid.axis_index(x, 0), x1 = grid.axis_index(x, 1);
        cplx acc = 0.0;
        for (std::size_t y = 0; y < S; ++y) {
            const int y0 = grid.axis_index(y, 0), y1 = grid.axis_index(y, 1);
            acc += kern.values[y] * f.values[grid.flat_index(x0 + y0, x1 + y1)] *
                   g.values[grid.flat_index(x0 - y0, x1 - y1)];
        }
        out.values[x] = hn * acc;
    });
    return out;
}

/// Decay constant of the one-variable kernel: sup_y |k(y)| max(|y|, h/2)^{n-s}.
/// With this constant |T_theta(f,g)| <= C B_s(|f|,|g|) holds pointwise by the
/// triangle inequality (identical floor on both sides).
inline double ttheta_kernel_constant(const std::function<cplx(const Point&)>& sigma0, double s,
                                     const PeriodicGrid& grid) {
    if (!(s > 0.0 && s < grid.dim)) throw std::invalid_argument("ttheta_kernel_constant requires 0 < s < n");
    const std::size_t S = grid.size();
    SpectralFunction spec(grid);
    const double voln = grid.dim == 1 ? grid.period : grid.period * grid.period;
    for (std::size_t i = 0; i < S; ++i) spec.coeffs[i] = sigma0(grid.freq(i)) / voln;
    const ComplexGridFunction kern = from_spectral(spec);
    const double floor = 0.5 * grid.h();
    double sup = 0.0;
    for (std::size_t y = 0; y < S; ++y) {
        const double d = std::max(detail::min_image_norm(grid, y), floor);
        sup = std::max(sup, std::abs(kern.values[y]) * std::pow(d, grid.dim - s));
    }
    return sup;
}

/// Named symbols usable from experiment configs.
inline BilinearSymbol make_symbol(const std::string& key, const std::map<std::string, double>& params = {}) {
    auto get = [&params](const std::string& name, double fallback) {
        auto it = params.find(name);
        return it == params.end() ? fallback : it->second;
    };
    if (key == "one") return {[](const Point&, const Point&) -> cplx { return 1.0; }, 0.0, SymbolClass::BS_inhom};
    if (key == "bessel") {
        const double s = get("s", 1.0);
        return {[s](const Point& xi, const Point& eta) -> cplx {
                    return std::pow(1.0 + xi[0] * xi[0] + xi[1] * xi[1] + eta[0] * eta[0] + eta[1] * eta[1],
                                    -0.5 * s);
                },
                -s, SymbolClass::BS_inhom};
    }
    if (key == "homogeneous") {
        const double s = get("s", 1.0);
        return {[s](const Point& xi, const Point& eta) -> cplx {
                    const double r2 = xi[0] * xi[0] + xi[1] * xi[1] + eta[0] * eta[0] + eta[1] * eta[1];
                    return r2 == 0.0 ? 0.0 : std::pow(r2, -0.5 * s); // value convention at the origin
                },
                -s, SymbolClass::BS_hom};
    }
    if (key == "gaussian_symbol")
        return {[](const Point& xi, const Point& eta) -> cplx {
                    return std::exp(-(xi[0] * xi[0] + xi[1] * xi[1] + eta[0] * eta[0] + eta[1] * eta[1]));
                },
                0.0, SymbolClass::unclassified};
    if (key == "cm_sigma1") return decompose_frequency(get("m", 0.0), get("s", 0.5)).first;
    if (key == "cm_sigma2") return decompose_frequency(get("m", 0.0), get("s", 0.5)).second;
    throw std::invalid_argument("unknown symbol key: " + key);
}

inline std::vector<std::string> symbol_registry_keys() {
    return {"bessel", "cm_sigma1", "cm_sigma2", "gaussian_symbol", "homogeneous", "one"};
}

} // namespace bihat
