#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "bihat/frac_ops.hpp"
#include "bihat/symbols.hpp"
#include "bihat/testbed.hpp"

using namespace bihat;

namespace {

GridFunction sample(const PeriodicGrid& grid, const std::function<double(const Point&)>& f) {
    GridFunction out(grid);
    for (std::size_t i = 0; i < grid.size(); ++i) out.values[i] = f(grid.point(i));
    return out;
}

} // namespace

TEST_CASE("T_sigma with sigma = 1 is the pointwise product") {
    const PeriodicGrid grid(1, 128);
    const BilinearSymbol one = make_symbol("one");
    const GridFunction f = band_limit(make_gaussian(grid, {2.0, 0.0}, 0.25), 31);
    const GridFunction g = band_limit(make_modulated_packet(grid, {4.0, 0.0}, 0.3, 5.0), 31);
    const ComplexGridFunction t = eval_Tsigma(one, f, g);
    const GridFunction fg = pointwise_product(f, g);
    double err = 0.0;
    for (std::size_t i = 0; i < grid.size(); ++i) err = std::max(err, std::abs(t.values[i] - fg.values[i]));
    CHECK(err <= 1e-10 * std::max(1.0, sup_norm(fg)));
}

TEST_CASE("T_sigma separable symbol factorizes") {
    const PeriodicGrid grid(1, 64);
    const BilinearSymbol sep{[](const Point& xi, const Point& eta) -> cplx {
                                 return std::exp(-0.1 * xi[0] * xi[0]) * std::pow(1.0 + eta[0] * eta[0], -0.25);
                             },
                             0.0, SymbolClass::unclassified};
    const GridFunction f = make_gaussian(grid, {2.0, 0.0}, 0.3);
    const GridFunction g = make_gaussian(grid, {4.0, 0.0}, 0.25);
    const GridFunction mf = apply_multiplier(f, [](const Point& xi) { return std::exp(-0.1 * xi[0] * xi[0]); });
    const GridFunction mg = apply_multiplier(g, [](const Point& xi) { return std::pow(1.0 + xi[0] * xi[0], -0.25); });
    const GridFunction want = pointwise_product(mf, mg);
    const GridFunction got = eval_Tsigma_real(sep, f, g);
    CHECK(sup_norm(lin_comb(1.0, got, -1.0, want)) <= 1e-10 * sup_norm(want));

    const GridFunction zero(grid);
    CHECK(sup_norm(eval_Tsigma_real(sep, zero, g)) == 0.0);
    CHECK(sup_norm(eval_Tsigma_real(sep, f, zero)) == 0.0);
}

TEST_CASE("T_sigma is bilinear and real for symmetric symbols") {
    const PeriodicGrid grid(1, 64);
    const BilinearSymbol sigma = make_symbol("bessel", {{"s", 0.5}});
    const GridFunction f = make_gaussian(grid, {2.0, 0.0}, 0.3);
    const GridFunction f2 = make_modulated_packet(grid, {3.0, 0.0}, 0.3, 4.0);
    const GridFunction g = make_gaussian(grid, {4.0, 0.0}, 0.25);

    const GridFunction lhs = eval_Tsigma_real(sigma, lin_comb(2.0, f, -0.5, f2), g);
    const GridFunction rhs =
        lin_comb(2.0, eval_Tsigma_real(sigma, f, g), -0.5, eval_Tsigma_real(sigma, f2, g));
    CHECK(sup_norm(lin_comb(1.0, lhs, -1.0, rhs)) <= 1e-12 * std::max(1.0, sup_norm(rhs)));

    const ComplexGridFunction t = eval_Tsigma(sigma, f, g);
    double imag = 0.0, mag = 0.0;
    for (const cplx& v : t.values) {
        imag = std::max(imag, std::fabs(v.imag()));
        mag = std::max(mag, std::abs(v));
    }
    CHECK(imag <= 1e-10 * std::max(1.0, mag));
}

TEST_CASE("symbol_kernel: delta for sigma = 1, gaussian product, realness") {
    const PeriodicGrid grid(1, 64);
    const KernelTable delta = symbol_kernel(make_symbol("one"), grid);
    const double n2 = static_cast<double>(grid.size()) * grid.size();
    const double l2 = grid.period * grid.period;
    CHECK(std::abs(delta.value(0, 0) - n2 / l2) <= 1e-9 * n2 / l2);
    double off = 0.0;
    for (std::size_t u = 0; u < grid.size(); ++u)
        for (std::size_t v = 0; v < grid.size(); ++v)
            if (u != 0 || v != 0) off = std::max(off, std::abs(delta.value(u, v)));
    CHECK(off <= 1e-9 * n2 / l2);

    // gaussian symbol: kernel is a product of periodized gaussians
    const KernelTable kg = symbol_kernel(make_symbol("gaussian_symbol"), grid);
    auto periodized = [&](double x) {
        double val = 0.0;
        for (int m = -5; m <= 5; ++m) {
            const double d = x + m * grid.period;
            val += std::exp(-d * d / 4.0) / (2.0 * std::sqrt(3.141592653589793));
        }
        return val;
    };
    double worst = 0.0;
    for (std::size_t u = 0; u < grid.size(); ++u)
        for (std::size_t v = 0; v < grid.size(); ++v) {
            const double x = grid.point(u)[0], y = grid.point(v)[0];
            worst = std::max(worst, std::abs(kg.value(u, v) - periodized(x) * periodized(y)));
        }
    CHECK(worst < 1e-8);

    // real symmetric symbol gives a real kernel
    double imag = 0.0;
    const KernelTable kb = symbol_kernel(make_symbol("bessel", {{"s", 1.0}}), grid);
    for (const cplx& v : kb.values) imag = std::max(imag, std::fabs(v.imag()));
    CHECK(imag <= 1e-12 * std::abs(kb.value(0, 0)));
}

TEST_CASE("kernel decay constant") {
    const PeriodicGrid grid(1, 128);
    const BilinearSymbol sigma = make_symbol("bessel", {{"s", 1.0}});
    const double c = kernel_decay_constant(sigma, 1.0, grid);
    CHECK(std::isfinite(c));
    CHECK(c > 0.0);

    // two-resolution stability within factor 2
    const PeriodicGrid fine(1, 256);
    const double cf = kernel_decay_constant(sigma, 1.0, fine);
    CHECK(cf <= 2.0 * c);
    CHECK(c <= 2.0 * cf);

    // rescaling the symbol doubles the constant
    BilinearSymbol twice{[&sigma](const Point& xi, const Point& eta) { return 2.0 * sigma(xi, eta); },
                         sigma.order, sigma.tag};
    CHECK(kernel_decay_constant(twice, 1.0, grid) == Catch::Approx(2.0 * c).epsilon(1e-12));

    const BilinearSymbol zero{[](const Point&, const Point&) -> cplx { return 0.0; }, -1.0,
                              SymbolClass::unclassified};
    CHECK(kernel_decay_constant(zero, 1.0, grid) == 0.0);

    CHECK_THROWS(kernel_decay_constant(sigma, 0.0, grid));
    CHECK_THROWS(kernel_decay_constant(sigma, 2.0, grid));
}

TEST_CASE("shell decay check") {
    const PeriodicGrid grid(1, 128);
    const BilinearSymbol zero{[](const Point&, const Point&) -> cplx { return 0.0; }, -0.5,
                              SymbolClass::unclassified};
    for (const auto& e : shell_decay_check(zero, 0.5, {0.25, 0.125}, grid)) CHECK(e.constant == 0.0);

    // homogeneous symbol: constants agree across scales within factor 2
    const BilinearSymbol hom = make_symbol("homogeneous", {{"s", 0.5}});
    const auto entries = shell_decay_check(hom, 0.5, {0.25, 0.125, 0.0625}, grid);
    REQUIRE(entries.size() == 6);
    for (std::size_t i = 0; i + 2 < entries.size(); i += 2) {
        CHECK(entries[i].constant <= 2.0 * entries[i + 2].constant);
        CHECK(entries[i + 2].constant <= 2.0 * entries[i].constant);
    }
    // heavier weight gives larger constants on the same shell
    for (std::size_t i = 0; i < entries.size(); i += 2) CHECK(entries[i + 1].constant >= entries[i].constant);
}

TEST_CASE("seminorm estimates") {
    const PeriodicGrid grid(1, 128);

    // constant symbol of order 0: order-0 seminorm 1, all higher zero
    const auto table1 = seminorm_estimate(make_symbol("one"), 3, grid);
    for (const auto& e : table1) {
        const int total = e.beta[0] + e.beta[1] + e.gamma[0] + e.gamma[1];
        if (total == 0)
            CHECK(e.value == Catch::Approx(1.0).epsilon(1e-12));
        else
            CHECK(e.value <= 1e-8);
    }

    // bessel symbol of order -1. Oracle-computed table (N=128): the lattice
    // step is coarse, so high-order divided differences land away from the
    // anchor and inflate over the true derivative constants; orders <= 2
    // stay below 10, order 3 reaches ~25, order 4 ~145.
    const auto table2 = seminorm_estimate(make_symbol("bessel", {{"s", 1.0}}), 4, grid);
    for (const auto& e : table2) {
        const int total = e.beta[0] + e.beta[1] + e.gamma[0] + e.gamma[1];
        REQUIRE(std::isfinite(e.value));
        if (total == 0)
            CHECK(e.value == Catch::Approx(1.7320508).epsilon(1e-4));
        if (total <= 2)
            CHECK(e.value <= 10.0);
        else if (total == 3)
            CHECK(e.value <= 26.0);
        else
            CHECK(e.value <= 150.0);
    }
    // the table is symmetric in (beta, gamma) for this symmetric symbol
    for (const auto& e : table2)
        for (const auto& o : table2)
            if (e.beta[0] == o.gamma[0] && e.gamma[0] == o.beta[0])
                REQUIRE(e.value == Catch::Approx(o.value).epsilon(1e-10));

    // Coifman-Meyer form for the decoupling symbols, away from the origin
    const auto [s1, s2] = decompose_frequency(1.0, 0.5);
    for (const auto& e : seminorm_estimate(s1, 3, grid, true, 1.0)) {
        REQUIRE(std::isfinite(e.value));
        CHECK(e.value <= 1e3);
    }
}

TEST_CASE("frequency decoupling identity") {
    const PeriodicGrid grid(1, 128);
    const GridFunction f = band_limit(make_gaussian(grid, {2.5, 0.0}, 0.25), 31);
    const GridFunction g = band_limit(make_modulated_packet(grid, {4.0, 0.0}, 0.3, 6.0), 31);

    for (double m : {0.0, 1.0})
        for (double s : {0.25, 0.5, 1.0}) {
            const auto [s1, s2] = decompose_frequency(m, s);
            const GridFunction lhs = bessel_Js(pointwise_product(f, g), m);
            const GridFunction rhs = lin_comb(1.0, eval_Tsigma_real(s1, bessel_Js(f, m + s), g), 1.0,
                                              eval_Tsigma_real(s2, f, bessel_Js(g, m + s)));
            const double resid = sup_norm(lin_comb(1.0, lhs, -1.0, rhs)) / sup_norm(lhs);
            CHECK(resid <= 1e-10);
        }

    // m = 0, s = 0: the pair reduces to a partition of unity
    const auto [p1, p2] = decompose_frequency(0.0, 0.0);
    const GridFunction sum = lin_comb(1.0, eval_Tsigma_real(p1, f, g), 1.0, eval_Tsigma_real(p2, f, g));
    const GridFunction fg = pointwise_product(f, g);
    CHECK(sup_norm(lin_comb(1.0, sum, -1.0, fg)) <= 1e-10 * std::max(1.0, sup_norm(fg)));

    // support: sigma2 vanishes where (1+|xi|^2)/(1+|eta|^2) > 2, sigma1 in
    // the mirrored region
    const auto [q1, q2] = decompose_frequency(1.0, 0.5);
    CHECK(std::abs(q2({3.0, 0.0}, {1.0, 0.0})) == 0.0); // ratio 5
    CHECK(std::abs(q1({1.0, 0.0}, {3.0, 0.0})) == 0.0);
    CHECK(std::abs(q2({1.0, 0.0}, {3.0, 0.0})) > 0.0);
}

TEST_CASE("three-way decoupling") {
    const PeriodicGrid grid(1, 128);
    const auto [s1, s2, s3] = decompose_three_way(1.0, 0.5);

    // partition of the three cutoffs sums to one over sampled pairs
    std::mt19937_64 eng(3);
    for (int trial = 0; trial < 10000; ++trial) {
        const double xi = 60.0 * (static_cast<double>(eng() >> 11) * 0x1.0p-53) - 30.0;
        const double eta = 60.0 * (static_cast<double>(eng() >> 11) * 0x1.0p-53) - 30.0;
        const Point px{xi, 0.0}, pe{eta, 0.0};
        const double bm = std::pow(1.0 + xi * xi + eta * eta + 2.0 * xi * eta, 0.0); // placeholder 1
        (void)bm;
        const cplx total = s1(px, pe) * std::pow(1.0 + xi * xi, 0.75) +
                           s2(px, pe) * std::pow(1.0 + eta * eta, 0.75) + s3(px, pe);
        const double want = std::pow(1.0 + (xi + eta) * (xi + eta), 0.5);
        REQUIRE(std::abs(total - want) <= 1e-12 * want);
    }

    // sigma3 lives on balanced frequencies: ratio in [1/4, 4]
    CHECK(std::abs(s3({4.0, 0.0}, {1.0, 0.0})) == 0.0); // ratio 17/2 > 4
    CHECK(std::abs(s3({1.0, 0.0}, {4.0, 0.0})) == 0.0);
    CHECK(std::abs(s3({2.0, 0.0}, {2.0, 0.0})) > 0.0);

    // identity on band-limited pairs
    const GridFunction f = band_limit(make_modulated_packet(grid, {2.5, 0.0}, 0.3, 4.0), 31);
    const GridFunction g = band_limit(make_modulated_packet(grid, {4.0, 0.0}, 0.35, 7.0), 31);
    const double m = 1.0, s = 0.5;
    const GridFunction lhs = bessel_Js(pointwise_product(f, g), m);
    GridFunction rhs = eval_Tsigma_real(s1, bessel_Js(f, m + s), g);
    rhs = lin_comb(1.0, rhs, 1.0, eval_Tsigma_real(s2, f, bessel_Js(g, m + s)));
    rhs = lin_comb(1.0, rhs, 1.0, eval_Tsigma_real(s3, f, g));
    CHECK(sup_norm(lin_comb(1.0, lhs, -1.0, rhs)) <= 1e-10 * sup_norm(lhs));
}

TEST_CASE("eval_Ttheta") {
    const PeriodicGrid grid(1, 128);
    const GridFunction f = make_gaussian(grid, {2.0, 0.0}, 0.25);
    const GridFunction g = make_gaussian(grid, {4.5, 0.0}, 0.3);
    const GridFunction zero(grid);

    // sigma0 = 1: delta kernel, T(f,g) = fg
    auto one = [](const Point&) -> cplx { return 1.0; };
    const ComplexGridFunction t1 = eval_Ttheta(one, f, g);
    const GridFunction fg = pointwise_product(f, g);
    double err = 0.0;
    for (std::size_t i = 0; i < grid.size(); ++i) err = std::max(err, std::abs(t1.values[i] - fg.values[i]));
    CHECK(err <= 1e-10 * std::max(1.0, sup_norm(fg)));

    CHECK(sup_norm(eval_Ttheta(one, zero, g)) == 0.0);

    // pointwise domination by C * B_s(|f|,|g|)
    const double s = 0.5;
    auto sigma0 = [s](const Point& z) -> cplx { return std::pow(1.0 + z[0] * z[0], -0.5 * s); };
    const double C = ttheta_kernel_constant(sigma0, s, grid);
    CHECK(std::isfinite(C));
    const ComplexGridFunction t = eval_Ttheta(sigma0, f, g);
    const GridFunction bs = bilinear_B(f, g, FracOrder{s}, -1, 1);
    for (std::size_t i = 0; i < grid.size(); ++i)
        REQUIRE(std::abs(t.values[i]) <= C * bs.values[i] * (1.0 + 1e-12) + 1e-300);
}

TEST_CASE("domination chain: |T_sigma| <= C * I_s with quadrature slack") {
    const PeriodicGrid grid(1, 128);
    for (double s : {0.5, 1.0}) {
        const BilinearSymbol sigma = make_symbol("bessel", {{"s", s}});
        const double C = kernel_decay_constant(sigma, s, grid);
        const GridFunction f = make_gaussian(grid, {2.0, 0.0}, 0.25);
        const GridFunction g = make_gaussian(grid, {4.0, 0.0}, 0.3);
        const ComplexGridFunction t = eval_Tsigma(sigma, f, g);
        const GridFunction is = bilinear_I(f, g, FracOrder{s});
        for (std::size_t i = 0; i < grid.size(); ++i)
            REQUIRE(std::abs(t.values[i]) <= 1.05 * C * is.values[i]);
    }
}

TEST_CASE("symbol registry") {
    CHECK_THROWS(make_symbol("nope"));
    const BilinearSymbol hom = make_symbol("homogeneous", {{"s", 1.0}});
    CHECK(std::abs(hom({0.0, 0.0}, {0.0, 0.0})) == 0.0); // origin convention
    CHECK(hom.tag == SymbolClass::BS_hom);
}
