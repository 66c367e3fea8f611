#include "bmhd/initial_data.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <random>
#include <stdexcept>

#include "bmhd/spectral_ops.hpp"

namespace bmhd {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

// u = (d psi / dy, -d psi / dx) from physical stream-function samples.
VectorField from_stream_function_2d(GridPtr grid, const std::vector<double>& psi) {
    auto psi_hat = transform_forward(grid, psi);
    VectorField v(grid);
    v.comp(0) = derivative(psi_hat, 1);
    v.comp(1) = -1.0 * derivative(psi_hat, 0);
    return v;
}

VectorField orszag_tang_velocity(GridPtr grid, double amplitude) {
    const auto& g = *grid;
    std::vector<double> psi(g.size());
    for (std::size_t i = 0; i < g.size(); ++i) {
        const auto idx = g.unflatten(i);
        const double x = kTwoPi * idx[0] / g.n();
        const double y = kTwoPi * idx[1] / g.n();
        psi[i] = amplitude * (std::cos(x) + std::cos(y)) * g.length() / kTwoPi;
    }
    return from_stream_function_2d(grid, psi);  // (-A sin y, A sin x)
}

VectorField orszag_tang_magnetic(GridPtr grid, double amplitude) {
    const auto& g = *grid;
    std::vector<double> a(g.size());
    for (std::size_t i = 0; i < g.size(); ++i) {
        const auto idx = g.unflatten(i);
        const double x = kTwoPi * idx[0] / g.n();
        const double y = kTwoPi * idx[1] / g.n();
        a[i] = amplitude * (std::cos(y) + 0.5 * std::cos(2.0 * x)) * g.length() / kTwoPi;
    }
    return from_stream_function_2d(grid, a);  // (-A sin y, A sin 2x)
}

VectorField abc_like(GridPtr grid, double amplitude, double a, double b, double c, int wavenumber) {
    const auto& g = *grid;
    VectorField v(grid);
    std::vector<double> samples(g.size());
    for (int comp = 0; comp < 3; ++comp) {
        for (std::size_t i = 0; i < g.size(); ++i) {
            const auto idx = g.unflatten(i);
            const double x = kTwoPi * wavenumber * idx[0] / g.n();
            const double y = kTwoPi * wavenumber * idx[1] / g.n();
            const double z = kTwoPi * wavenumber * idx[2] / g.n();
            double val = 0.0;
            if (comp == 0) val = a * std::sin(z) + c * std::cos(y);
            else if (comp == 1) val = b * std::sin(x) + a * std::cos(z);
            else val = c * std::sin(y) + b * std::cos(x);
            samples[i] = amplitude * val;
        }
        v.comp(comp) = transform_forward(grid, samples);
    }
    return v;
}

VectorField random_spectrum(GridPtr grid, double amplitude, double alpha, double cutoff, std::uint64_t seed) {
    const auto& g = *grid;
    VectorField v(grid);
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> uni(0.0, kTwoPi);
    const double cut_sq = cutoff > 0.0 ? cutoff * cutoff : std::numeric_limits<double>::infinity();
    for (int d = 0; d < g.dim(); ++d) {
        auto& f = v.comp(d);
        for (std::size_t i = 1; i < g.size(); ++i) {
            if (g.on_nyquist(i)) continue;
            const double th = uni(rng);  // drawn in a fixed order for every mode
            if (g.xi_sq(i) > cut_sq) continue;
            const double mag = amplitude * std::pow(g.xi_sq(i), -0.5 * alpha);
            f[i] = mag * Complex{std::cos(th), std::sin(th)};
        }
        f.symmetrize();
    }
    return leray_project(v);
}

}  // namespace

ScalarField random_scalar_field(GridPtr grid, double alpha, std::uint64_t seed, double amplitude) {
    const auto& g = *grid;
    ScalarField f(grid);
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> uni(0.0, kTwoPi);
    for (std::size_t i = 1; i < g.size(); ++i) {
        if (g.on_nyquist(i)) continue;
        const double th = uni(rng);
        const double mag = amplitude * std::pow(g.xi_sq(i), -0.5 * alpha);
        f[i] = mag * Complex{std::cos(th), std::sin(th)};
    }
    f.symmetrize();
    return f;
}

InitKind parse_init_kind(const std::string& name) {
    if (name == "orszag_tang") return InitKind::orszag_tang;
    if (name == "abc_like") return InitKind::abc_like;
    if (name == "random_spectrum") return InitKind::random_spectrum;
    throw std::invalid_argument("unknown initial data kind: " + name);
}

InitialData make_initial_data(GridPtr grid, const InitParams& params) {
    const int dim = grid->dim();
    switch (params.kind) {
        case InitKind::orszag_tang: {
            if (dim != 2) throw std::invalid_argument("orszag_tang initial data is 2D");
            return InitialData{orszag_tang_velocity(grid, params.amplitude_u),
                               orszag_tang_magnetic(grid, params.amplitude_B)};
        }
        case InitKind::abc_like: {
            if (dim != 3) throw std::invalid_argument("abc_like initial data is 3D");
            auto u = abc_like(grid, params.amplitude_u, 1.0, 1.0, 1.0, 1);
            auto B = abc_like(grid, params.amplitude_B, 1.0, -0.5, 0.7, 2);
            return InitialData{std::move(u), std::move(B)};
        }
        case InitKind::random_spectrum: {
            auto u = random_spectrum(grid, params.amplitude_u, params.alpha_u, params.cutoff, params.seed);
            auto B = random_spectrum(grid, params.amplitude_B, params.alpha_B, params.cutoff,
                                     params.seed + 0x9e3779b97f4a7c15ULL);
            return InitialData{std::move(u), std::move(B)};
        }
    }
    throw std::logic_error("unreachable");
}

}  // namespace bmhd
