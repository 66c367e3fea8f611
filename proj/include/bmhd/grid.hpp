#pragma once

#include <array>
#include <cstdint>
#include <memory>
#include <vector>

namespace bmhd {

// Periodic box [0,L)^dim sampled on N points per axis.  Spectral coefficients
// are indexed by integer wavevectors k with components in [-N/2, N/2) stored
// in the usual FFT layout (index i <-> k = i for i <= N/2, k = i - N above).
// The physical frequency of a mode is xi = (2*pi/L) * k.  Modes on a Nyquist
// line (some k-component equal to -N/2) are kept identically zero so that the
// lattice is closed under negation.
class FourierGrid {
  public:
    FourierGrid(int dim, int n, double length);

    int dim() const { return dim_; }
    int n() const { return n_; }
    double length() const { return length_; }
    std::size_t size() const { return size_; }

    double volume() const { return volume_; }          // L^dim
    double cell_volume() const { return cell_volume_; }  // (L/N)^dim

    // Smallest/largest nonzero |xi| on the lattice (Nyquist lines excluded).
    double xi_min() const { return xi_min_; }
    double xi_max() const { return xi_max_; }

    // k component along `axis` of the flattened index.
    int k_at(std::size_t flat, int axis) const { return k_of_index_[axis_index(flat, axis)]; }
    double xi_at(std::size_t flat, int axis) const { return freq_of_index_[axis_index(flat, axis)]; }

    double xi_sq(std::size_t flat) const { return xi_sq_[flat]; }
    const std::vector<double>& xi_sq() const { return xi_sq_; }
    bool on_nyquist(std::size_t flat) const { return nyquist_[flat] != 0; }

    // Flattened index of -k.
    std::size_t conjugate_index(std::size_t flat) const;

    std::size_t flat_index(const std::array<int, 3>& idx) const;
    std::array<int, 3> unflatten(std::size_t flat) const;
    // Flattened index for an integer wavevector (components in [-N/2, N/2)),
    // or size() if it falls outside the representable band.
    std::size_t index_of_wavevector(const std::array<int, 3>& k) const;

    bool same_as(const FourierGrid& other) const {
        return dim_ == other.dim_ && n_ == other.n_ && length_ == other.length_;
    }

  private:
    int axis_index(std::size_t flat, int axis) const;

    int dim_;
    int n_;
    double length_;
    std::size_t size_;
    double volume_, cell_volume_, xi_min_, xi_max_;
    std::vector<int> k_of_index_;        // per axis position
    std::vector<double> freq_of_index_;  // 2*pi/L * k per axis position
    std::vector<int> neg_of_index_;      // axis position of -k
    std::vector<double> xi_sq_;          // |xi|^2, flattened
    std::vector<std::uint8_t> nyquist_;  // 1 on Nyquist lines
};

using GridPtr = std::shared_ptr<const FourierGrid>;

GridPtr make_grid(int dim, int n, double length);

}  // namespace bmhd
