#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

#include "bihat/grid.hpp"

namespace bihat {

/// w(x) = max(torus_dist(x, x0), h/2)^a; the floor keeps weighted norms
/// finite while preserving the blow-up trend under refinement.
struct PowerWeight {
    double exponent = 0.0;
    Point center{0.0, 0.0};
};

inline GridFunction make_power_weight(double a, const Point& x0, const PeriodicGrid& grid) {
    GridFunction w(grid);
    const double floor = 0.5 * grid.h();
    for (std::size_t i = 0; i < grid.size(); ++i) {
        const double d = std::max(torus_dist(grid, grid.point(i), x0), floor);
        w.values[i] = std::pow(d, a);
    }
    return w;
}

inline GridFunction make_gaussian(const PeriodicGrid& grid, const Point& center, double width) {
    if (!(width > 0.0)) throw std::invalid_argument("width must be positive");
    if (3.0 * width > grid.period / 4.0) throw std::invalid_argument("support exceeds L/4");
    GridFunction f(grid);
    const double inv = 1.0 / (2.0 * width * width);
    for (std::size_t i = 0; i < grid.size(); ++i) {
        const double d = torus_dist(grid, grid.point(i), center);
        f.values[i] = std::exp(-d * d * inv);
    }
    return f;
}

/// Compactly supported C^inf bump: exp(1 - 1/(1 - (d/w)^2)) inside d < w.
inline GridFunction make_bump(const PeriodicGrid& grid, const Point& center, double width) {
    if (!(width > 0.0)) throw std::invalid_argument("width must be positive");
    if (width > grid.period / 4.0) throw std::invalid_argument("support exceeds L/4");
    GridFunction f(grid);
    for (std::size_t i = 0; i < grid.size(); ++i) {
        const double u = torus_dist(grid, grid.point(i), center) / width;
        f.values[i] = u < 1.0 ? std::exp(1.0 - 1.0 / (1.0 - u * u)) : 0.0;
    }
    return f;
}

/// Gaussian envelope times cos(freq * x[0]); freq must sit on the frequency
/// lattice so the modulation is grid-exact.
inline GridFunction make_modulated_packet(const PeriodicGrid& grid, const Point& center, double width,
                                          double freq) {
    const double unit = two_pi / grid.period;
    const double k = freq / unit;
    if (std::fabs(k - std::round(k)) > 1e-9) throw std::invalid_argument("freq must be an integer multiple of 2*pi/L");
    GridFunction f = make_gaussian(grid, center, width);
    for (std::size_t i = 0; i < grid.size(); ++i) {
        const Point p = grid.point(i);
        // phase relative to the packet center keeps the peak at the center
        double dx = p[0] - center[0];
        f.values[i] *= std::cos(freq * dx);
    }
    return f;
}

namespace detail {

// Uniform double in [-1, 1] from raw mt19937_64 output; the engine sequence
// is pinned by the standard, so members are byte-identical across runs.
inline double unit_symmetric(std::mt19937_64& eng) {
    const std::uint64_t r = eng();
    return 2.0 * (static_cast<double>(r >> 11) * 0x1.0p-53) - 1.0;
}

} // namespace detail

/// Random real trigonometric polynomial with integer wavevectors |k| <= kmax.
inline GridFunction make_trig_poly(const PeriodicGrid& grid, int kmax, int terms, std::uint64_t seed) {
    if (kmax < 1 || terms < 1) throw std::invalid_argument("trig_poly needs kmax >= 1 and terms >= 1");
    std::mt19937_64 eng(seed);
    GridFunction f(grid);
    const double unit = two_pi / grid.period;
    for (int t = 0; t < terms; ++t) {
        double kv[2] = {0.0, 0.0};
        for (int ax = 0; ax < grid.dim; ++ax) {
            const auto raw = static_cast<std::int64_t>(eng() % static_cast<std::uint64_t>(2 * kmax + 1));
            kv[ax] = unit * static_cast<double>(raw - kmax);
        }
        const double amp = detail::unit_symmetric(eng);
        const double phase = two_pi * 0.5 * (detail::unit_symmetric(eng) + 1.0);
        for (std::size_t i = 0; i < grid.size(); ++i) {
            const Point p = grid.point(i);
            f.values[i] += amp * std::cos(kv[0] * p[0] + kv[1] * p[1] + phase);
        }
    }
    return f;
}

enum class FamilyKind { gaussian, bump, modulated_packet, trig_poly };

inline FamilyKind family_kind_from_string(const std::string& s) {
    if (s == "gaussian") return FamilyKind::gaussian;
    if (s == "bump") return FamilyKind::bump;
    if (s == "modulated_packet") return FamilyKind::modulated_packet;
    if (s == "trig_poly") return FamilyKind::trig_poly;
    throw std::invalid_argument("unknown family kind: " + s);
}

inline std::string to_string(FamilyKind k) {
    switch (k) {
        case FamilyKind::gaussian: return "gaussian";
        case FamilyKind::bump: return "bump";
        case FamilyKind::modulated_packet: return "modulated_packet";
        case FamilyKind::trig_poly: return "trig_poly";
    }
    return "?";
}

/// Deterministic family: the member list is the Cartesian product of the
/// declared parameter grids, enumerated in declaration order.
struct FunctionFamily {
    FamilyKind kind = FamilyKind::gaussian;
    std::vector<double> widths;           // gaussian / bump / packet
    std::vector<Point> centers;           // all kinds except trig_poly
    std::vector<double> freqs;            // packet modulation frequencies
    std::vector<double> amplitudes{1.0};  // scalar prefactors
    int kmax = 4;                         // trig_poly wavevector bound
    int terms = 5;                        // trig_poly term count
    int count = 1;                        // trig_poly member count
    std::uint64_t seed = 1;

    std::vector<GridFunction> members(const PeriodicGrid& grid) const {
        std::vector<GridFunction> out;
        const std::vector<double>& amps = amplitudes;
        switch (kind) {
            case FamilyKind::gaussian:
            case FamilyKind::bump:
                for (const Point& c : centers)
                    for (double w : widths)
                        for (double a : amps) {
                            GridFunction f = kind == FamilyKind::gaussian ? make_gaussian(grid, c, w)
                                                                          : make_bump(grid, c, w);
                            out.push_back(scaled(f, a));
                        }
                break;
            case FamilyKind::modulated_packet:
                for (const Point& c : centers)
                    for (double w : widths)
                        for (double q : freqs)
                            for (double a : amps)
                                out.push_back(scaled(make_modulated_packet(grid, c, w, q), a));
                break;
            case FamilyKind::trig_poly:
                for (int i = 0; i < count; ++i)
                    out.push_back(make_trig_poly(grid, kmax, terms, seed + static_cast<std::uint64_t>(i)));
                break;
        }
        if (out.empty()) throw std::invalid_argument("empty family");
        return out;
    }
};

} // namespace bihat
