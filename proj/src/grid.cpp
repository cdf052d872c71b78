#include "lamelab/grid.hpp"

#include <cmath>

#include "lamelab/errors.hpp"

namespace lamelab {

PeriodicGrid::PeriodicGrid(std::vector<int> n, std::vector<double> half_length, bool half_offset)
    : n_(std::move(n)), len_(std::move(half_length)), offset_(half_offset) {
  if (n_.empty() || n_.size() != len_.size())
    throw DomainError("grid needs matching per-axis point counts and box sizes");
  for (std::size_t k = 0; k < n_.size(); ++k) {
    int nk = n_[k];
    if (nk < 2 || (nk & (nk - 1)) != 0)
      throw DomainError("grid points per axis must be a power of two >= 2");
    if (!(len_[k] > 0.0)) throw DomainError("grid half-length must be positive");
  }
}

PeriodicGrid PeriodicGrid::isotropic(int d, int n, double half_length, bool half_offset) {
  if (d < 1) throw DomainError("grid dimension must be >= 1");
  return PeriodicGrid(std::vector<int>(static_cast<std::size_t>(d), n),
                      std::vector<double>(static_cast<std::size_t>(d), half_length), half_offset);
}

double PeriodicGrid::freq_spacing(int axis) const {
  return std::acos(-1.0) / half_length(axis);
}

std::int64_t PeriodicGrid::total_points() const {
  std::int64_t t = 1;
  for (int nk : n_) t *= nk;
  return t;
}

double PeriodicGrid::cell_measure() const {
  double m = 1.0;
  for (int k = 0; k < dim(); ++k) m *= spacing(k);
  return m;
}

double PeriodicGrid::freq_cell_measure() const {
  double m = 1.0;
  for (int k = 0; k < dim(); ++k) m *= freq_spacing(k);
  return m;
}

std::int64_t PeriodicGrid::flat_index(const std::vector<int>& idx) const {
  std::int64_t f = 0;
  for (std::size_t k = 0; k < n_.size(); ++k) f = f * n_[k] + idx[k];
  return f;
}

void PeriodicGrid::unflatten(std::int64_t flat, std::vector<int>& idx) const {
  idx.resize(n_.size());
  for (std::size_t k = n_.size(); k-- > 0;) {
    idx[k] = static_cast<int>(flat % n_[k]);
    flat /= n_[k];
  }
}

double PeriodicGrid::coordinate(int axis, int idx) const {
  return -half_length(axis) + spacing(axis) * idx;
}

int PeriodicGrid::freq_integer(int axis, int idx) const {
  int nk = points(axis);
  return idx < nk / 2 ? idx : idx - nk;
}

double PeriodicGrid::frequency(int axis, int idx) const {
  double m = static_cast<double>(freq_integer(axis, idx)) + (offset_ ? 0.5 : 0.0);
  return freq_spacing(axis) * m;
}

}  // namespace lamelab
