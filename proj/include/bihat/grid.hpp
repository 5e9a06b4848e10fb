#pragma once

#include <array>
#include <cassert>
#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <utility>
#include <vector>

#include "bihat/common.hpp"

namespace bihat {

/// Point on the torus. Coordinate 1 is ignored when the grid is 1-d.
using Point = std::array<double, 2>;

/// Uniform periodic grid on the n-torus, n in {1,2}. Points per axis must be
/// a power of two >= 8 so the spectral transforms stay exact and cheap.
/// Lexicographic flat indexing, axis 0 slowest.
struct PeriodicGrid {
    int dim = 1;
    int points_per_axis = 64;
    double period = two_pi;

    PeriodicGrid() = default;
    PeriodicGrid(int n, int N, double L = two_pi) : dim(n), points_per_axis(N), period(L) {
        if (n != 1 && n != 2) throw std::invalid_argument("grid dimension must be 1 or 2");
        if (N < 8 || (N & (N - 1)) != 0) throw std::invalid_argument("points per axis must be a power of two >= 8");
        if (!(L > 0.0)) throw std::invalid_argument("period must be positive");
    }

    double h() const { return period / points_per_axis; }
    std::size_t size() const {
        std::size_t s = static_cast<std::size_t>(points_per_axis);
        return dim == 1 ? s : s * s;
    }
    double cell_volume() const { return dim == 1 ? h() : h() * h(); }

    int axis_index(std::size_t flat, int axis) const {
        if (dim == 1) return static_cast<int>(flat);
        return axis == 0 ? static_cast<int>(flat / points_per_axis)
                         : static_cast<int>(flat % points_per_axis);
    }
    std::size_t flat_index(int i0, int i1 = 0) const {
        const int N = points_per_axis;
        const int a = ((i0 % N) + N) % N;
        if (dim == 1) return static_cast<std::size_t>(a);
        const int b = ((i1 % N) + N) % N;
        return static_cast<std::size_t>(a) * N + b;
    }

    Point point(std::size_t flat) const {
        Point p{0.0, 0.0};
        for (int ax = 0; ax < dim; ++ax) p[ax] = axis_index(flat, ax) * h();
        return p;
    }

    /// Signed frequency index in [-N/2, N/2).
    int signed_freq_index(int i) const {
        return i < points_per_axis / 2 ? i : i - points_per_axis;
    }

    /// Frequency vector 2*pi*k/L with signed k per axis.
    Point freq(std::size_t flat) const {
        Point xi{0.0, 0.0};
        for (int ax = 0; ax < dim; ++ax)
            xi[ax] = two_pi * signed_freq_index(axis_index(flat, ax)) / period;
        return xi;
    }

    bool operator==(const PeriodicGrid& o) const {
        return dim == o.dim && points_per_axis == o.points_per_axis && period == o.period;
    }
};

/// Sampled function on a periodic grid; immutable by convention after the
/// constructing code hands it off.
template <class T>
struct BasicGridFunction {
    PeriodicGrid grid;
    std::vector<T> values;

    BasicGridFunction() = default;
    BasicGridFunction(PeriodicGrid g, std::vector<T> v) : grid(g), values(std::move(v)) {
        if (values.size() != grid.size()) throw std::invalid_argument("value count must equal grid size");
    }
    explicit BasicGridFunction(PeriodicGrid g, T fill = T{}) : grid(g), values(g.size(), fill) {}

    T operator[](std::size_t i) const { return values[i]; }
    T& operator[](std::size_t i) { return values[i]; }
};

using GridFunction = BasicGridFunction<double>;
using ComplexGridFunction = BasicGridFunction<cplx>;

/// Fourier coefficients on the grid's frequency lattice, stored in DFT index
/// order (index k holds the coefficient of the signed frequency of k).
struct SpectralFunction {
    PeriodicGrid grid;
    std::vector<cplx> coeffs;

    SpectralFunction() = default;
    SpectralFunction(PeriodicGrid g, std::vector<cplx> c) : grid(g), coeffs(std::move(c)) {
        if (coeffs.size() != grid.size()) throw std::invalid_argument("coefficient count must equal grid size");
    }
    explicit SpectralFunction(PeriodicGrid g) : grid(g), coeffs(g.size(), cplx{0.0, 0.0}) {}
};

/// Metric ball on the torus (open membership, torus distance).
struct Ball {
    Point center{0.0, 0.0};
    double radius = 0.0;
};

inline double torus_dist(const PeriodicGrid& grid, const Point& x, const Point& y) {
    double comp[2] = {0.0, 0.0};
    for (int ax = 0; ax < grid.dim; ++ax) {
        double d = std::fabs(x[ax] - y[ax]);
        d = std::fmod(d, grid.period);
        if (d > 0.5 * grid.period) d = grid.period - d;
        comp[ax] = d;
    }
    return grid.dim == 1 ? comp[0] : std::hypot(comp[0], comp[1]);
}

namespace detail {

// Iterative radix-2 transform; sign=-1 forward, sign=+1 inverse
// (unnormalized). Deterministic butterfly order.
inline void fft_radix2(std::vector<cplx>& a, int sign) {
    const std::size_t n = a.size();
    assert((n & (n - 1)) == 0);
    for (std::size_t i = 1, j = 0; i < n; ++i) {
        std::size_t bit = n >> 1;
        for (; j & bit; bit >>= 1) j ^= bit;
        j ^= bit;
        if (i < j) std::swap(a[i], a[j]);
    }
    for (std::size_t len = 2; len <= n; len <<= 1) {
        const double ang = sign * two_pi / static_cast<double>(len);
        const cplx wlen(std::cos(ang), std::sin(ang));
        for (std::size_t i = 0; i < n; i += len) {
            cplx w(1.0, 0.0);
            for (std::size_t j = 0; j < len / 2; ++j) {
                const cplx u = a[i + j];
                const cplx v = a[i + j + len / 2] * w;
                a[i + j] = u + v;
                a[i + j + len / 2] = u - v;
                w *= wlen;
            }
        }
    }
}

// n-dimensional in-place transform over the grid layout.
inline void fft_nd(const PeriodicGrid& grid, std::vector<cplx>& a, int sign) {
    const int N = grid.points_per_axis;
    if (grid.dim == 1) {
        fft_radix2(a, sign);
        return;
    }
    std::vector<cplx> line(static_cast<std::size_t>(N));
    // axis 1 (contiguous rows)
    for (int r = 0; r < N; ++r) {
        std::copy(a.begin() + static_cast<std::ptrdiff_t>(r) * N,
                  a.begin() + static_cast<std::ptrdiff_t>(r + 1) * N, line.begin());
        fft_radix2(line, sign);
        std::copy(line.begin(), line.end(), a.begin() + static_cast<std::ptrdiff_t>(r) * N);
    }
    // axis 0 (strided columns)
    for (int c = 0; c < N; ++c) {
        for (int r = 0; r < N; ++r) line[static_cast<std::size_t>(r)] = a[static_cast<std::size_t>(r) * N + c];
        fft_radix2(line, sign);
        for (int r = 0; r < N; ++r) a[static_cast<std::size_t>(r) * N + c] = line[static_cast<std::size_t>(r)];
    }
}

} // namespace detail

inline SpectralFunction to_spectral(const ComplexGridFunction& f) {
    std::vector<cplx> buf = f.values;
    detail::fft_nd(f.grid, buf, -1);
    const double scale = 1.0 / static_cast<double>(f.grid.size());
    for (cplx& c : buf) c *= scale;
    return SpectralFunction(f.grid, std::move(buf));
}

inline SpectralFunction to_spectral(const GridFunction& f) {
    ComplexGridFunction c(f.grid);
    for (std::size_t i = 0; i < f.values.size(); ++i) c.values[i] = f.values[i];
    return to_spectral(c);
}

inline ComplexGridFunction from_spectral(const SpectralFunction& s) {
    std::vector<cplx> buf = s.coeffs;
    detail::fft_nd(s.grid, buf, +1);
    return ComplexGridFunction(s.grid, std::move(buf));
}

/// Inverse transform of a conjugate-symmetric spectrum; returns the real part.
inline GridFunction from_spectral_real(const SpectralFunction& s) {
    ComplexGridFunction c = from_spectral(s);
    GridFunction out(s.grid);
    for (std::size_t i = 0; i < c.values.size(); ++i) out.values[i] = c.values[i].real();
    return out;
}

/// Grid indices inside the (open) ball, lexicographic order.
inline std::vector<std::size_t> ball_indices(const PeriodicGrid& grid, const Ball& ball) {
    if (!(ball.radius > 0.0) || ball.radius > 0.5 * grid.period)
        throw std::invalid_argument("ball radius must lie in (0, L/2]");
    std::vector<std::size_t> idx;
    for (std::size_t i = 0; i < grid.size(); ++i)
        if (torus_dist(grid, grid.point(i), ball.center) < ball.radius) idx.push_back(i);
    return idx;
}

/// |B| by quadrature of the indicator.
inline double ball_volume(const PeriodicGrid& grid, const Ball& ball) {
    return grid.cell_volume() * static_cast<double>(ball_indices(grid, ball).size());
}

inline double quad_integral(const GridFunction& f) {
    return f.grid.cell_volume() * pairwise_sum(std::span<const double>(f.values));
}

inline double quad_integral(const GridFunction& f, const Ball& ball) {
    if (ball.radius < f.grid.h()) throw std::invalid_argument("degenerate ball");
    const auto idx = ball_indices(f.grid, ball);
    std::vector<double> vals;
    vals.reserve(idx.size());
    for (std::size_t i : idx) vals.push_back(f.values[i]);
    return f.grid.cell_volume() * pairwise_sum(std::span<const double>(vals));
}

/// Apply a scalar Fourier multiplier mult(xi); real part of the inverse
/// transform (the multipliers used here are even in xi, so this is exact for
/// real input up to rounding).
inline GridFunction apply_multiplier(const GridFunction& f, const std::function<double(const Point&)>& mult) {
    SpectralFunction s = to_spectral(f);
    for (std::size_t i = 0; i < s.coeffs.size(); ++i) s.coeffs[i] *= mult(s.grid.freq(i));
    return from_spectral_real(s);
}

/// Spectral gradient: component ax has coefficients i*xi_ax*c_k; the unpaired
/// Nyquist mode is zeroed to keep real output (band-limited inputs have no
/// mass there, so differentiation stays exact for them).
inline std::vector<GridFunction> gradient(const GridFunction& f) {
    const SpectralFunction s = to_spectral(f);
    const int N = f.grid.points_per_axis;
    std::vector<GridFunction> out;
    for (int ax = 0; ax < f.grid.dim; ++ax) {
        SpectralFunction ds(f.grid);
        for (std::size_t i = 0; i < s.coeffs.size(); ++i) {
            const int k = f.grid.signed_freq_index(f.grid.axis_index(i, ax));
            if (k == -N / 2) {
                ds.coeffs[i] = 0.0;
                continue;
            }
            const double xi = two_pi * k / f.grid.period;
            ds.coeffs[i] = cplx(0.0, xi) * s.coeffs[i];
        }
        out.push_back(from_spectral_real(ds));
    }
    return out;
}

/// Hard band-limit: zero every coefficient with any axis index |k| > max_k.
inline GridFunction band_limit(const GridFunction& f, int max_k) {
    SpectralFunction s = to_spectral(f);
    for (std::size_t i = 0; i < s.coeffs.size(); ++i)
        for (int ax = 0; ax < f.grid.dim; ++ax)
            if (std::abs(f.grid.signed_freq_index(f.grid.axis_index(i, ax))) > max_k) {
                s.coeffs[i] = 0.0;
                break;
            }
    return from_spectral_real(s);
}

/// Pointwise Euclidean magnitude of the gradient.
inline GridFunction gradient_magnitude(const GridFunction& f) {
    const auto g = gradient(f);
    GridFunction out(f.grid);
    for (std::size_t i = 0; i < out.values.size(); ++i) {
        double s2 = 0.0;
        for (const auto& comp : g) s2 += comp.values[i] * comp.values[i];
        out.values[i] = std::sqrt(s2);
    }
    return out;
}

// Small pointwise helpers used throughout the experiments.

inline GridFunction pointwise_product(const GridFunction& a, const GridFunction& b) {
    if (!(a.grid == b.grid)) throw std::invalid_argument("grid mismatch");
    GridFunction out(a.grid);
    for (std::size_t i = 0; i < out.values.size(); ++i) out.values[i] = a.values[i] * b.values[i];
    return out;
}

inline GridFunction pointwise_abs(const GridFunction& a) {
    GridFunction out(a.grid);
    for (std::size_t i = 0; i < out.values.size(); ++i) out.values[i] = std::fabs(a.values[i]);
    return out;
}

inline GridFunction scaled(const GridFunction& a, double c) {
    GridFunction out(a.grid);
    for (std::size_t i = 0; i < out.values.size(); ++i) out.values[i] = c * a.values[i];
    return out;
}

inline GridFunction lin_comb(double ca, const GridFunction& a, double cb, const GridFunction& b) {
    if (!(a.grid == b.grid)) throw std::invalid_argument("grid mismatch");
    GridFunction out(a.grid);
    for (std::size_t i = 0; i < out.values.size(); ++i) out.values[i] = ca * a.values[i] + cb * b.values[i];
    return out;
}

inline double sup_norm(const GridFunction& a) {
    double m = 0.0;
    for (double v : a.values) m = std::max(m, std::fabs(v));
    return m;
}

/// Unweighted quadrature L^p norm (p > 0; quasi-norm for p < 1).
inline double lp_norm(const GridFunction& f, double p) {
    if (!(p > 0.0)) throw std::invalid_argument("p must be positive");
    std::vector<double> vals(f.values.size());
    for (std::size_t i = 0; i < vals.size(); ++i) vals[i] = std::pow(std::fabs(f.values[i]), p);
    return std::pow(f.grid.cell_volume() * pairwise_sum(std::span<const double>(vals)), 1.0 / p);
}

inline double lp_norm(const GridFunction& f, double p, const Ball& ball) {
    if (!(p > 0.0)) throw std::invalid_argument("p must be positive");
    const auto idx = ball_indices(f.grid, ball);
    std::vector<double> vals;
    vals.reserve(idx.size());
    for (std::size_t i : idx) vals.push_back(std::pow(std::fabs(f.values[i]), p));
    return std::pow(f.grid.cell_volume() * pairwise_sum(std::span<const double>(vals)), 1.0 / p);
}

inline double sup_norm(const ComplexGridFunction& a) {
    double m = 0.0;
    for (const cplx& v : a.values) m = std::max(m, std::abs(v));
    return m;
}

} // namespace bihat
