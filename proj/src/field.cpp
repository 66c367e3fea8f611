#include "bmhd/field.hpp"

#include <cmath>
#include <stdexcept>

namespace bmhd {

ScalarField::ScalarField(GridPtr grid) : grid_(std::move(grid)), coeffs_(grid_->size(), Complex{0.0, 0.0}) {}

double ScalarField::mean() const { return coeffs_[0].real() / grid_->volume(); }

void ScalarField::set_mean(double m) { coeffs_[0] = Complex{m * grid_->volume(), 0.0}; }

ScalarField& ScalarField::operator+=(const ScalarField& o) {
    for (std::size_t i = 0; i < coeffs_.size(); ++i) coeffs_[i] += o.coeffs_[i];
    return *this;
}

ScalarField& ScalarField::operator-=(const ScalarField& o) {
    for (std::size_t i = 0; i < coeffs_.size(); ++i) coeffs_[i] -= o.coeffs_[i];
    return *this;
}

ScalarField& ScalarField::operator*=(double a) {
    for (auto& c : coeffs_) c *= a;
    return *this;
}

void ScalarField::symmetrize() {
    const auto& g = *grid_;
    for (std::size_t i = 0; i < coeffs_.size(); ++i) {
        if (g.on_nyquist(i)) {
            coeffs_[i] = Complex{0.0, 0.0};
            continue;
        }
        const std::size_t j = g.conjugate_index(i);
        if (j < i) continue;
        const Complex avg = 0.5 * (coeffs_[i] + std::conj(coeffs_[j]));
        coeffs_[i] = avg;
        coeffs_[j] = std::conj(avg);
    }
    coeffs_[0] = Complex{coeffs_[0].real(), 0.0};
}

double ScalarField::hermitian_error() const {
    const auto& g = *grid_;
    double max_err = 0.0, max_abs = 0.0;
    for (std::size_t i = 0; i < coeffs_.size(); ++i) {
        max_abs = std::max(max_abs, std::abs(coeffs_[i]));
        const std::size_t j = g.conjugate_index(i);
        max_err = std::max(max_err, std::abs(coeffs_[j] - std::conj(coeffs_[i])));
        if (g.on_nyquist(i)) max_err = std::max(max_err, std::abs(coeffs_[i]));
    }
    return max_abs > 0.0 ? max_err / max_abs : 0.0;
}

bool ScalarField::has_nan() const {
    for (const auto& c : coeffs_) {
        if (!std::isfinite(c.real()) || !std::isfinite(c.imag())) return true;
    }
    return false;
}

VectorField::VectorField(GridPtr grid) {
    const int d = grid->dim();
    comps_.reserve(static_cast<std::size_t>(d));
    for (int i = 0; i < d; ++i) comps_.emplace_back(grid);
}

VectorField& VectorField::operator+=(const VectorField& o) {
    for (int i = 0; i < dim(); ++i) comp(i) += o.comp(i);
    return *this;
}

VectorField& VectorField::operator-=(const VectorField& o) {
    for (int i = 0; i < dim(); ++i) comp(i) -= o.comp(i);
    return *this;
}

VectorField& VectorField::operator*=(double a) {
    for (auto& c : comps_) c *= a;
    return *this;
}

void VectorField::symmetrize() {
    for (auto& c : comps_) c.symmetrize();
}

bool VectorField::has_nan() const {
    for (const auto& c : comps_) {
        if (c.has_nan()) return true;
    }
    return false;
}

double VectorField::divergence_error() const {
    const auto& g = grid();
    double max_div = 0.0, max_abs = 0.0;
    for (std::size_t i = 0; i < g.size(); ++i) {
        Complex div{0.0, 0.0};
        double norm_sq = 0.0;
        for (int d = 0; d < dim(); ++d) {
            div += g.xi_at(i, d) * comps_[static_cast<std::size_t>(d)][i];
            norm_sq += std::norm(comps_[static_cast<std::size_t>(d)][i]);
        }
        max_div = std::max(max_div, std::abs(div));
        max_abs = std::max(max_abs, std::sqrt(norm_sq));
    }
    return max_abs > 0.0 ? max_div / max_abs : 0.0;
}

ScalarField operator+(ScalarField a, const ScalarField& b) { a += b; return a; }
ScalarField operator-(ScalarField a, const ScalarField& b) { a -= b; return a; }
ScalarField operator*(double a, ScalarField f) { f *= a; return f; }
VectorField operator+(VectorField a, const VectorField& b) { a += b; return a; }
VectorField operator-(VectorField a, const VectorField& b) { a -= b; return a; }
VectorField operator*(double a, VectorField v) { v *= a; return v; }

}  // namespace bmhd
