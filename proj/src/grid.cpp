#include "bmhd/grid.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace bmhd {

FourierGrid::FourierGrid(int dim, int n, double length)
    : dim_(dim), n_(n), length_(length) {
    if (dim != 2 && dim != 3) throw std::invalid_argument("grid: dim must be 2 or 3");
    if (n < 8 || n % 2 != 0) throw std::invalid_argument("grid: N must be even and >= 8");
    if (!(length > 0.0)) throw std::invalid_argument("grid: box length must be positive");

    size_ = 1;
    for (int d = 0; d < dim_; ++d) size_ *= static_cast<std::size_t>(n_);
    volume_ = std::pow(length_, dim_);
    cell_volume_ = std::pow(length_ / n_, dim_);

    const double base = 2.0 * std::numbers::pi / length_;
    k_of_index_.resize(n_);
    freq_of_index_.resize(n_);
    neg_of_index_.resize(n_);
    for (int i = 0; i < n_; ++i) {
        const int k = (i <= n_ / 2) ? i : i - n_;
        k_of_index_[i] = (i == n_ / 2) ? -n_ / 2 : k;
        freq_of_index_[i] = base * k_of_index_[i];
        neg_of_index_[i] = (n_ - i) % n_;
    }

    xi_sq_.resize(size_);
    nyquist_.resize(size_);
    xi_min_ = base;
    double max_sq = 0.0;
    for (std::size_t flat = 0; flat < size_; ++flat) {
        double s = 0.0;
        bool nyq = false;
        std::size_t rem = flat;
        for (int d = dim_ - 1; d >= 0; --d) {
            const int i = static_cast<int>(rem % n_);
            rem /= n_;
            s += freq_of_index_[i] * freq_of_index_[i];
            nyq = nyq || (i == n_ / 2);
        }
        xi_sq_[flat] = s;
        nyquist_[flat] = nyq ? 1 : 0;
        if (!nyq && s > max_sq) max_sq = s;
    }
    xi_max_ = std::sqrt(max_sq);
}

int FourierGrid::axis_index(std::size_t flat, int axis) const {
    // axis 0 is the slowest-varying (row-major layout)
    std::size_t div = 1;
    for (int d = dim_ - 1; d > axis; --d) div *= static_cast<std::size_t>(n_);
    return static_cast<int>((flat / div) % static_cast<std::size_t>(n_));
}

std::size_t FourierGrid::conjugate_index(std::size_t flat) const {
    std::array<int, 3> idx = unflatten(flat);
    for (int d = 0; d < dim_; ++d) idx[d] = neg_of_index_[idx[d]];
    return flat_index(idx);
}

std::size_t FourierGrid::flat_index(const std::array<int, 3>& idx) const {
    std::size_t flat = 0;
    for (int d = 0; d < dim_; ++d) flat = flat * static_cast<std::size_t>(n_) + static_cast<std::size_t>(idx[d]);
    return flat;
}

std::array<int, 3> FourierGrid::unflatten(std::size_t flat) const {
    std::array<int, 3> idx{0, 0, 0};
    for (int d = dim_ - 1; d >= 0; --d) {
        idx[d] = static_cast<int>(flat % static_cast<std::size_t>(n_));
        flat /= static_cast<std::size_t>(n_);
    }
    return idx;
}

std::size_t FourierGrid::index_of_wavevector(const std::array<int, 3>& k) const {
    std::array<int, 3> idx{0, 0, 0};
    for (int d = 0; d < dim_; ++d) {
        if (k[d] < -n_ / 2 || k[d] > n_ / 2 - 1) return size_;  // outside band
        idx[d] = (k[d] >= 0) ? k[d] : k[d] + n_;
    }
    return flat_index(idx);
}

GridPtr make_grid(int dim, int n, double length) {
    return std::make_shared<const FourierGrid>(dim, n, length);
}

}  // namespace bmhd
