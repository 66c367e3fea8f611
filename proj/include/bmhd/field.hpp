#pragma once

#include <complex>
#include <cstdint>
#include <vector>

#include "bmhd/grid.hpp"

namespace bmhd {

using Complex = std::complex<double>;

// Spectral representation of a real scalar field on a periodic box.  The
// forward transform carries a factor (L/N)^dim, so coefficients approximate
// continuum Fourier coefficients: f(x) = L^{-dim} * sum_k coeff(k) e^{i xi.x},
// and ||f||_{L^2}^2 = L^{-dim} * sum_k |coeff(k)|^2.
class ScalarField {
  public:
    explicit ScalarField(GridPtr grid);

    const FourierGrid& grid() const { return *grid_; }
    const GridPtr& grid_ptr() const { return grid_; }

    Complex& operator[](std::size_t i) { return coeffs_[i]; }
    const Complex& operator[](std::size_t i) const { return coeffs_[i]; }
    std::size_t size() const { return coeffs_.size(); }

    std::vector<Complex>& coeffs() { return coeffs_; }
    const std::vector<Complex>& coeffs() const { return coeffs_; }

    // Mean over the box (the k = 0 coefficient divided by L^dim).
    double mean() const;
    void set_mean(double m);

    ScalarField& operator+=(const ScalarField& o);
    ScalarField& operator-=(const ScalarField& o);
    ScalarField& operator*=(double a);

    // Force exact Hermitian symmetry and zero Nyquist lines.
    void symmetrize();
    // Max |coeff(-k) - conj(coeff(k))| relative to max |coeff|.
    double hermitian_error() const;
    bool has_nan() const;

  private:
    GridPtr grid_;
    std::vector<Complex> coeffs_;
};

class VectorField {
  public:
    explicit VectorField(GridPtr grid);

    const FourierGrid& grid() const { return comps_.front().grid(); }
    const GridPtr& grid_ptr() const { return comps_.front().grid_ptr(); }

    int dim() const { return static_cast<int>(comps_.size()); }
    ScalarField& comp(int i) { return comps_[static_cast<std::size_t>(i)]; }
    const ScalarField& comp(int i) const { return comps_[static_cast<std::size_t>(i)]; }

    VectorField& operator+=(const VectorField& o);
    VectorField& operator-=(const VectorField& o);
    VectorField& operator*=(double a);

    void symmetrize();
    bool has_nan() const;
    // max_k |xi . v(k)| / max_k |v(k)|; zero for the zero field.
    double divergence_error() const;

  private:
    std::vector<ScalarField> comps_;
};

ScalarField operator+(ScalarField a, const ScalarField& b);
ScalarField operator-(ScalarField a, const ScalarField& b);
ScalarField operator*(double a, ScalarField f);
VectorField operator+(VectorField a, const VectorField& b);
VectorField operator-(VectorField a, const VectorField& b);
VectorField operator*(double a, VectorField v);

}  // namespace bmhd
