#include "bmhd/spectral_ops.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cassert>
#include <cmath>
#include <limits>
#include <map>
#include <mutex>
#include <stdexcept>

namespace bmhd {

namespace {

// Global FFTW plan cache.  Plans are created once per (rank, size, sign) with
// FFTW_ESTIMATE | FFTW_UNALIGNED, which keeps the planner deterministic and
// lets us execute on arbitrary caller buffers via the new-array interface.
// Plan creation is serialized; execution on distinct buffers is thread-safe.
class PlanCache {
  public:
    fftw_plan get(int rank, int n, int sign) {
        std::lock_guard<std::mutex> lock(mu_);
        const auto key = std::make_tuple(rank, n, sign);
        auto it = plans_.find(key);
        if (it != plans_.end()) return it->second;

        std::size_t total = 1;
        std::vector<int> dims(static_cast<std::size_t>(rank), n);
        for (int d = 0; d < rank; ++d) total *= static_cast<std::size_t>(n);
        fftw_complex* in = fftw_alloc_complex(total);
        fftw_complex* out = fftw_alloc_complex(total);
        fftw_plan p = fftw_plan_dft(rank, dims.data(), in, out, sign,
                                    FFTW_ESTIMATE | FFTW_UNALIGNED);
        fftw_free(in);
        fftw_free(out);
        if (p == nullptr) throw std::runtime_error("fftw plan creation failed");
        plans_.emplace(key, p);
        return p;
    }

  private:
    std::mutex mu_;
    std::map<std::tuple<int, int, int>, fftw_plan> plans_;
};

PlanCache g_plans;

void run_fft(int rank, int n, int sign, const Complex* in, Complex* out) {
    fftw_plan p = g_plans.get(rank, n, sign);
    // out-of-place c2c transforms preserve the input array
    fftw_execute_dft(p, reinterpret_cast<fftw_complex*>(const_cast<Complex*>(in)),
                     reinterpret_cast<fftw_complex*>(out));
}

// Physical samples of a band-limited field on the fine m^dim grid.
std::vector<double> to_fine_physical_impl(const ScalarField& f, int m) {
    const auto& g = f.grid();
    const int dim = g.dim();
    const int n = g.n();
    std::size_t fine_size = 1;
    for (int d = 0; d < dim; ++d) fine_size *= static_cast<std::size_t>(m);

    std::vector<Complex> padded(fine_size, Complex{0.0, 0.0});
    for (std::size_t i = 0; i < g.size(); ++i) {
        if (f[i] == Complex{0.0, 0.0}) continue;
        // map each axis index to the fine grid, preserving the wavevector
        std::size_t rem = i;
        std::size_t fine_acc = 0;
        std::size_t axis_mult = 1;
        for (int d = dim - 1; d >= 0; --d) {
            const int ai = static_cast<int>(rem % static_cast<std::size_t>(n));
            rem /= static_cast<std::size_t>(n);
            const int k = (ai <= n / 2) ? ai : ai - n;
            const int fi = (k >= 0) ? k : k + m;
            fine_acc += static_cast<std::size_t>(fi) * axis_mult;
            axis_mult *= static_cast<std::size_t>(m);
        }
        padded[fine_acc] = f[i];
    }

    std::vector<Complex> phys(fine_size);
    run_fft(dim, m, FFTW_BACKWARD, padded.data(), phys.data());
    std::vector<double> out(fine_size);
    const double scale = 1.0 / g.volume();
    for (std::size_t i = 0; i < fine_size; ++i) out[i] = phys[i].real() * scale;
    return out;
}

// Forward transform on the fine grid, band coefficients extracted back onto
// the coarse lattice.  Exact for products of band-limited factors.
ScalarField from_fine_physical_impl(GridPtr grid, std::span<const double> fine, int m) {
    const auto& g = *grid;
    const int dim = g.dim();
    const int n = g.n();
    std::size_t fine_size = 1;
    for (int d = 0; d < dim; ++d) fine_size *= static_cast<std::size_t>(m);
    if (fine.size() != fine_size) throw std::invalid_argument("fine sample size mismatch");

    std::vector<Complex> buf(fine_size);
    for (std::size_t i = 0; i < fine_size; ++i) buf[i] = Complex{fine[i], 0.0};
    std::vector<Complex> hat(fine_size);
    run_fft(dim, m, FFTW_FORWARD, buf.data(), hat.data());

    ScalarField out(grid);
    const double w = std::pow(g.length() / m, dim);
    for (std::size_t i = 0; i < g.size(); ++i) {
        if (g.on_nyquist(i)) continue;
        std::size_t rem = i;
        std::size_t fine_acc = 0;
        std::size_t axis_mult = 1;
        for (int d = dim - 1; d >= 0; --d) {
            const int ai = static_cast<int>(rem % static_cast<std::size_t>(n));
            rem /= static_cast<std::size_t>(n);
            const int k = (ai <= n / 2) ? ai : ai - n;
            const int fi = (k >= 0) ? k : k + m;
            fine_acc += static_cast<std::size_t>(fi) * axis_mult;
            axis_mult *= static_cast<std::size_t>(m);
        }
        out[i] = hat[fine_acc] * w;
    }
    out.symmetrize();
    return out;
}

int padded_n(int n) { return detail::padded_size(n); }

std::vector<double> to_fine_physical(const ScalarField& f, int m) { return to_fine_physical_impl(f, m); }

ScalarField from_fine_physical(GridPtr grid, std::span<const double> fine, int m) {
    return from_fine_physical_impl(grid, std::move(fine), m);
}

void check_same_grid(const FourierGrid& a, const FourierGrid& b) {
    if (!a.same_as(b)) throw std::invalid_argument("fields live on different grids");
}

// Debug builds verify that every operator preserves the real-field symmetry.
#ifndef NDEBUG
const ScalarField& debug_hermitian(const ScalarField& f) {
    assert(f.hermitian_error() < 1e-12);
    return f;
}
ScalarField debug_hermitian(ScalarField&& f) {
    assert(f.hermitian_error() < 1e-12);
    return std::move(f);
}
#else
template <typename T>
decltype(auto) debug_hermitian(T&& f) {
    return std::forward<T>(f);
}
#endif

double checked_p(double p) {
    if (p == 1.0 || p == 2.0 || p == 3.0 || p == 6.0 || std::isinf(p)) return p;
    throw std::domain_error("lp_norm: p must be in {1, 2, 3, 6, inf}");
}

}  // namespace

ScalarField transform_forward(GridPtr grid, std::span<const double> samples) {
    const auto& g = *grid;
    if (samples.size() != g.size()) throw std::invalid_argument("sample count does not match grid");
    std::vector<Complex> buf(g.size());
    for (std::size_t i = 0; i < g.size(); ++i) buf[i] = Complex{samples[i], 0.0};
    ScalarField out(grid);
    run_fft(g.dim(), g.n(), FFTW_FORWARD, buf.data(), out.coeffs().data());
    const double w = g.cell_volume();
    for (auto& c : out.coeffs()) c *= w;
    out.symmetrize();
    return out;
}

std::vector<double> transform_inverse(const ScalarField& f) {
    const auto& g = f.grid();
    std::vector<Complex> buf(g.size());
    run_fft(g.dim(), g.n(), FFTW_BACKWARD, f.coeffs().data(), buf.data());
    std::vector<double> out(g.size());
    const double scale = 1.0 / g.volume();
    for (std::size_t i = 0; i < g.size(); ++i) out[i] = buf[i].real() * scale;
    return out;
}

ScalarField derivative(const ScalarField& f, int axis) {
    const auto& g = f.grid();
    ScalarField out(f.grid_ptr());
    for (std::size_t i = 0; i < g.size(); ++i) out[i] = Complex{0.0, g.xi_at(i, axis)} * f[i];
    return debug_hermitian(std::move(out));
}

ScalarField fractional_laplacian(const ScalarField& f, double s) {
    const auto& g = f.grid();
    if (s < 0.0) {
        double max_abs = 0.0;
        for (const auto& c : f.coeffs()) max_abs = std::max(max_abs, std::abs(c));
        if (std::abs(f[0]) > 1e-12 * max_abs && max_abs > 0.0)
            throw std::domain_error("fractional_laplacian: negative order needs zero mean");
    }
    ScalarField out(f.grid_ptr());
    if (s == 0.0) {
        out = f;
        return out;
    }
    for (std::size_t i = 1; i < g.size(); ++i) {
        const double x = g.xi_sq(i);
        if (x > 0.0) out[i] = std::pow(x, 0.5 * s) * f[i];
    }
    return debug_hermitian(std::move(out));
}

VectorField fractional_laplacian(const VectorField& v, double s) {
    VectorField out(v.grid_ptr());
    for (int d = 0; d < v.dim(); ++d) out.comp(d) = fractional_laplacian(v.comp(d), s);
    return out;
}

ScalarField laplacian(const ScalarField& f) {
    const auto& g = f.grid();
    ScalarField out(f.grid_ptr());
    for (std::size_t i = 0; i < g.size(); ++i) out[i] = -g.xi_sq(i) * f[i];
    return out;
}

VectorField laplacian(const VectorField& v) {
    VectorField out(v.grid_ptr());
    for (int d = 0; d < v.dim(); ++d) out.comp(d) = laplacian(v.comp(d));
    return out;
}

std::vector<ScalarField> gradient(const ScalarField& f) {
    std::vector<ScalarField> out;
    const int dim = f.grid().dim();
    out.reserve(static_cast<std::size_t>(dim));
    for (int d = 0; d < dim; ++d) out.push_back(derivative(f, d));
    return out;
}

std::vector<ScalarField> gradient(const VectorField& v) {
    std::vector<ScalarField> out;
    const int dim = v.dim();
    out.reserve(static_cast<std::size_t>(dim * dim));
    for (int i = 0; i < dim; ++i)
        for (int j = 0; j < dim; ++j) out.push_back(derivative(v.comp(j), i));
    return out;
}

VectorField leray_project(const VectorField& v) {
    const auto& g = v.grid();
    const int dim = v.dim();
    VectorField out = v;
    for (std::size_t i = 1; i < g.size(); ++i) {
        const double xs = g.xi_sq(i);
        if (xs == 0.0) continue;
        Complex dot{0.0, 0.0};
        for (int d = 0; d < dim; ++d) dot += g.xi_at(i, d) * v.comp(d)[i];
        dot /= xs;
        for (int d = 0; d < dim; ++d) out.comp(d)[i] -= g.xi_at(i, d) * dot;
    }
    return out;
}

ScalarField fourier_truncate(const ScalarField& f, double radius) {
    if (!(radius > 0.0)) throw std::invalid_argument("fourier_truncate: R must be positive");
    const auto& g = f.grid();
    ScalarField out = f;
    const double r_sq = radius * radius;
    for (std::size_t i = 0; i < g.size(); ++i)
        if (g.xi_sq(i) > r_sq) out[i] = Complex{0.0, 0.0};
    return debug_hermitian(std::move(out));
}

VectorField fourier_truncate(const VectorField& v, double radius) {
    VectorField out(v.grid_ptr());
    for (int d = 0; d < v.dim(); ++d) out.comp(d) = fourier_truncate(v.comp(d), radius);
    return out;
}

ScalarField multiply(const ScalarField& f, const ScalarField& g) {
    check_same_grid(f.grid(), g.grid());
    const int m = padded_n(f.grid().n());
    auto pf = to_fine_physical(f, m);
    auto pg = to_fine_physical(g, m);
    for (std::size_t i = 0; i < pf.size(); ++i) pf[i] *= pg[i];
    return from_fine_physical(f.grid_ptr(), pf, m);
}

ScalarField advect_scalar(const VectorField& u, const ScalarField& f) {
    check_same_grid(u.grid(), f.grid());
    const int dim = u.dim();
    const int m = padded_n(u.grid().n());
    std::vector<double> acc;
    for (int d = 0; d < dim; ++d) {
        auto pu = to_fine_physical(u.comp(d), m);
        auto pdf = to_fine_physical(derivative(f, d), m);
        if (acc.empty()) acc.assign(pu.size(), 0.0);
        for (std::size_t i = 0; i < pu.size(); ++i) acc[i] += pu[i] * pdf[i];
    }
    return from_fine_physical(f.grid_ptr(), acc, m);
}

VectorField advect(const VectorField& u, const VectorField& v) {
    check_same_grid(u.grid(), v.grid());
    const int dim = u.dim();
    const int m = padded_n(u.grid().n());
    std::vector<std::vector<double>> pu(static_cast<std::size_t>(dim));
    for (int d = 0; d < dim; ++d) pu[static_cast<std::size_t>(d)] = to_fine_physical(u.comp(d), m);

    VectorField out(v.grid_ptr());
    for (int j = 0; j < dim; ++j) {
        std::vector<double> acc(pu[0].size(), 0.0);
        for (int i = 0; i < dim; ++i) {
            auto pd = to_fine_physical(derivative(v.comp(j), i), m);
            const auto& ui = pu[static_cast<std::size_t>(i)];
            for (std::size_t x = 0; x < acc.size(); ++x) acc[x] += ui[x] * pd[x];
        }
        out.comp(j) = from_fine_physical(v.grid_ptr(), acc, m);
    }
    return out;
}

VectorField advect_div_form(const VectorField& u, const VectorField& v) {
    check_same_grid(u.grid(), v.grid());
    const int dim = u.dim();
    const int m = padded_n(u.grid().n());
    std::vector<std::vector<double>> pu(static_cast<std::size_t>(dim)), pv(static_cast<std::size_t>(dim));
    for (int d = 0; d < dim; ++d) {
        pu[static_cast<std::size_t>(d)] = to_fine_physical(u.comp(d), m);
        pv[static_cast<std::size_t>(d)] = to_fine_physical(v.comp(d), m);
    }

    VectorField out(v.grid_ptr());
    std::vector<double> prod(pu[0].size());
    for (int i = 0; i < dim; ++i) {
        ScalarField acc(v.grid_ptr());
        for (int j = 0; j < dim; ++j) {
            const auto& uj = pu[static_cast<std::size_t>(j)];
            const auto& vi = pv[static_cast<std::size_t>(i)];
            for (std::size_t x = 0; x < prod.size(); ++x) prod[x] = uj[x] * vi[x];
            acc += derivative(from_fine_physical(v.grid_ptr(), prod, m), j);
        }
        out.comp(i) = acc;
    }
    return out;
}

void apply_two_thirds_mask(ScalarField& f) {
    const auto& grid = f.grid();
    const int n = grid.n();
    for (std::size_t i = 0; i < grid.size(); ++i) {
        for (int d = 0; d < grid.dim(); ++d) {
            if (3 * std::abs(grid.k_at(i, d)) >= n) {
                f[i] = Complex{0.0, 0.0};
                break;
            }
        }
    }
}

void apply_two_thirds_mask(VectorField& v) {
    for (int d = 0; d < v.dim(); ++d) apply_two_thirds_mask(v.comp(d));
}

ScalarField multiply_two_thirds(const ScalarField& f, const ScalarField& g) {
    check_same_grid(f.grid(), g.grid());
    auto pf = transform_inverse(f);
    auto pg = transform_inverse(g);
    for (std::size_t i = 0; i < pf.size(); ++i) pf[i] *= pg[i];
    ScalarField out = transform_forward(f.grid_ptr(), pf);
    apply_two_thirds_mask(out);
    return out;
}

VectorField advect_div_form_two_thirds(const VectorField& u, const VectorField& v) {
    check_same_grid(u.grid(), v.grid());
    const int dim = u.dim();
    VectorField out(v.grid_ptr());
    for (int i = 0; i < dim; ++i) {
        ScalarField acc(v.grid_ptr());
        for (int j = 0; j < dim; ++j) acc += derivative(multiply_two_thirds(u.comp(j), v.comp(i)), j);
        out.comp(i) = acc;
    }
    return out;
}

double l2_norm(const ScalarField& f) {
    double s = 0.0;
    for (const auto& c : f.coeffs()) s += std::norm(c);
    return std::sqrt(s / f.grid().volume());
}

double l2_norm(const VectorField& v) {
    double s = 0.0;
    for (int d = 0; d < v.dim(); ++d)
        for (const auto& c : v.comp(d).coeffs()) s += std::norm(c);
    return std::sqrt(s / v.grid().volume());
}

double l2_norm(std::span<const ScalarField> fs) {
    double s = 0.0;
    for (const auto& f : fs)
        for (const auto& c : f.coeffs()) s += std::norm(c);
    return fs.empty() ? 0.0 : std::sqrt(s / fs.front().grid().volume());
}

double inner_product(const ScalarField& f, const ScalarField& g) {
    check_same_grid(f.grid(), g.grid());
    double s = 0.0;
    for (std::size_t i = 0; i < f.size(); ++i)
        s += f[i].real() * g[i].real() + f[i].imag() * g[i].imag();
    return s / f.grid().volume();
}

double inner_product(const VectorField& v, const VectorField& w) {
    double s = 0.0;
    for (int d = 0; d < v.dim(); ++d) s += inner_product(v.comp(d), w.comp(d));
    return s;
}

namespace {

double sobolev_weight(double xi_sq, double s, bool homogeneous) {
    if (homogeneous) return xi_sq > 0.0 ? std::pow(xi_sq, s) : 0.0;
    return std::pow(1.0 + xi_sq, s);
}

double sobolev_norm_sq(const ScalarField& f, double s, bool homogeneous) {
    const auto& g = f.grid();
    double acc = 0.0;
    for (std::size_t i = 0; i < g.size(); ++i) {
        if (homogeneous && i == 0) continue;
        acc += sobolev_weight(g.xi_sq(i), s, homogeneous) * std::norm(f[i]);
    }
    return acc / g.volume();
}

}  // namespace

double sobolev_norm(const ScalarField& f, double s, bool homogeneous) {
    return std::sqrt(sobolev_norm_sq(f, s, homogeneous));
}

double sobolev_norm(const VectorField& v, double s, bool homogeneous) {
    double acc = 0.0;
    for (int d = 0; d < v.dim(); ++d) acc += sobolev_norm_sq(v.comp(d), s, homogeneous);
    return std::sqrt(acc);
}

double sobolev_norm(std::span<const ScalarField> fs, double s, bool homogeneous) {
    double acc = 0.0;
    for (const auto& f : fs) acc += sobolev_norm_sq(f, s, homogeneous);
    return std::sqrt(acc);
}

double lp_norm(const ScalarField& f, double p) {
    checked_p(p);
    auto phys = transform_inverse(f);
    const double w = f.grid().cell_volume();
    if (std::isinf(p)) {
        double m = 0.0;
        for (double x : phys) m = std::max(m, std::abs(x));
        return m;
    }
    double acc = 0.0;
    for (double x : phys) acc += std::pow(std::abs(x), p);
    return std::pow(acc * w, 1.0 / p);
}

double lp_norm(const VectorField& v, double p) {
    checked_p(p);
    std::vector<std::vector<double>> phys(static_cast<std::size_t>(v.dim()));
    for (int d = 0; d < v.dim(); ++d) phys[static_cast<std::size_t>(d)] = transform_inverse(v.comp(d));
    const double w = v.grid().cell_volume();
    const std::size_t npts = phys[0].size();
    if (std::isinf(p)) {
        double m = 0.0;
        for (std::size_t i = 0; i < npts; ++i) {
            double mag = 0.0;
            for (int d = 0; d < v.dim(); ++d) mag += phys[static_cast<std::size_t>(d)][i] * phys[static_cast<std::size_t>(d)][i];
            m = std::max(m, mag);
        }
        return std::sqrt(m);
    }
    double acc = 0.0;
    for (std::size_t i = 0; i < npts; ++i) {
        double mag = 0.0;
        for (int d = 0; d < v.dim(); ++d) mag += phys[static_cast<std::size_t>(d)][i] * phys[static_cast<std::size_t>(d)][i];
        acc += std::pow(std::sqrt(mag), p);
    }
    return std::pow(acc * w, 1.0 / p);
}

double max_abs(const VectorField& v) { return lp_norm(v, std::numeric_limits<double>::infinity()); }

namespace detail {

int padded_size(int n) {
    int m = (3 * n) / 2;
    if (m % 2 != 0) ++m;
    return m;
}

std::vector<double> to_fine_physical(const ScalarField& f, int m) { return to_fine_physical_impl(f, m); }

ScalarField from_fine_physical(GridPtr grid, std::span<const double> fine, int m) {
    return from_fine_physical_impl(std::move(grid), fine, m);
}

}  // namespace detail

}  // namespace bmhd
