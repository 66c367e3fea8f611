#include "bmhd/calderon.hpp"

#include <cmath>
#include <map>
#include <stdexcept>

namespace bmhd {

HeatSpectrum heat_spectrum(const VectorField& u0, double nu, double radius) {
    const auto& g = u0.grid();
    const double r_sq = std::isfinite(radius) ? radius * radius : std::numeric_limits<double>::infinity();
    std::map<double, double> classes;
    for (std::size_t i = 1; i < g.size(); ++i) {
        const double xs = g.xi_sq(i);
        if (xs > r_sq) continue;
        double w = 0.0;
        for (int d = 0; d < u0.dim(); ++d) w += std::norm(u0.comp(d)[i]);
        if (w > 0.0) classes[xs] += w;
    }
    HeatSpectrum out;
    out.nu = nu;
    out.xi_sq.reserve(classes.size());
    out.weight.reserve(classes.size());
    for (const auto& [xs, w] : classes) {
        out.xi_sq.push_back(xs);
        out.weight.push_back(w / g.volume());
    }
    return out;
}

VectorField solve_heat(const VectorField& u0, double nu, double t, double radius) {
    const auto& g = u0.grid();
    const double r_sq = std::isfinite(radius) ? radius * radius : std::numeric_limits<double>::infinity();
    VectorField h = u0;
    for (int d = 0; d < h.dim(); ++d) {
        auto& c = h.comp(d).coeffs();
        for (std::size_t i = 0; i < c.size(); ++i) {
            if (g.xi_sq(i) > r_sq) c[i] = Complex{0.0, 0.0};
            else c[i] *= std::exp(-nu * g.xi_sq(i) * t);
        }
    }
    return h;
}

double heat_sobolev_sq(const HeatSpectrum& hs, double s, double t) {
    double acc = 0.0;
    for (std::size_t c = 0; c < hs.xi_sq.size(); ++c)
        acc += std::pow(hs.xi_sq[c], s) * hs.weight[c] * std::exp(-2.0 * hs.nu * hs.xi_sq[c] * t);
    return acc;
}

double heat_sobolev_sq_integral(const HeatSpectrum& hs, double s, double t) {
    double acc = 0.0;
    for (std::size_t c = 0; c < hs.xi_sq.size(); ++c) {
        const double rate = 2.0 * hs.nu * hs.xi_sq[c];
        acc += std::pow(hs.xi_sq[c], s) * hs.weight[c] * (-std::expm1(-rate * t)) / rate;
    }
    return acc;
}

namespace {

double simpson(double fa, double fm, double fb, double h) { return h / 6.0 * (fa + 4.0 * fm + fb); }

template <typename F>
double adaptive_simpson(const F& f, double a, double b, double fa, double fm, double fb, double whole,
                        double tol, int depth) {
    const double m = 0.5 * (a + b);
    const double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
    const double flm = f(lm), frm = f(rm);
    const double left = simpson(fa, flm, fm, m - a);
    const double right = simpson(fm, frm, fb, b - m);
    const double delta = left + right - whole;
    if (depth <= 0 || std::abs(delta) <= 15.0 * tol) return left + right + delta / 15.0;
    return adaptive_simpson(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1) +
           adaptive_simpson(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1);
}

template <typename F>
double integrate(const F& f, double a, double b, double rel_tol) {
    if (b <= a) return 0.0;
    const double fa = f(a), fb = f(b), fm = f(0.5 * (a + b));
    const double whole = simpson(fa, fm, fb, b - a);
    const double scale = std::max(std::abs(whole), 1e-300);
    return adaptive_simpson(f, a, b, fa, fm, fb, whole, rel_tol * scale, 48);
}

}  // namespace

double heat_h1_quartic_integral(const HeatSpectrum& hs, double t_end) {
    if (hs.xi_sq.empty() || t_end <= 0.0) return 0.0;
    auto g1 = [&](double t) {
        const double v = heat_sobolev_sq(hs, 1.0, t);
        return v * v;
    };
    return integrate(g1, 0.0, t_end, 1e-9);
}

double heat_h1_quartic_integral_inf(const HeatSpectrum& hs) {
    if (hs.xi_sq.empty()) return 0.0;
    // integrate until the slowest mode dominates, then close analytically
    const double min_rate = 4.0 * hs.nu * hs.xi_sq.front();  // decay rate of g1^2 tail
    const double t_split = 40.0 / min_rate;
    double acc = heat_h1_quartic_integral(hs, t_split);
    const double g_end = heat_sobolev_sq(hs, 1.0, t_split);
    // tail bound: g1(t) <= g_end * exp(-min_rate (t - t_split) / 2) for t >= t_split
    acc += g_end * g_end / min_rate;
    return acc;
}

T1Result find_t1(const VectorField& u0, double nu, double c3, double c4, double radius) {
    if (!(c3 > 0.0) || !(c4 > 0.0)) throw std::invalid_argument("find_t1: constants must be positive");
    const double threshold = nu * nu * nu / (16.0 * c3 * c4);
    const HeatSpectrum hs = heat_spectrum(u0, nu, radius);
    if (hs.xi_sq.empty()) return T1Result{std::numeric_limits<double>::infinity(), true};
    if (heat_h1_quartic_integral_inf(hs) < threshold)
        return T1Result{std::numeric_limits<double>::infinity(), true};

    double hi = 1.0 / (4.0 * nu * hs.xi_sq.front());
    int doublings = 0;
    while (heat_h1_quartic_integral(hs, hi) < threshold) {
        hi *= 2.0;
        if (++doublings > 100) return T1Result{std::numeric_limits<double>::infinity(), true};
    }
    double lo = 0.0;
    for (int it = 0; it < 80; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (heat_h1_quartic_integral(hs, mid) < threshold) lo = mid;
        else hi = mid;
    }
    return T1Result{lo, false};
}

}  // namespace bmhd
