#ifndef LAMELAB_GRID_HPP
#define LAMELAB_GRID_HPP

#include <cstdint>
#include <vector>

namespace lamelab {

// Uniform periodic grid on the box prod_k [-L_k, L_k). Space samples sit at
// x_k = -L_k + j h_k, h_k = 2 L_k / n_k; the frequency lattice is
// (pi / L_k) (m + offset) for integer m in [-n_k/2, n_k/2), offset 0 or 1/2.
// The half-cell offset keeps sphere-type singular sets off the lattice.
class PeriodicGrid {
public:
  PeriodicGrid(std::vector<int> n, std::vector<double> half_length, bool half_offset = false);
  static PeriodicGrid isotropic(int d, int n, double half_length, bool half_offset = false);

  int dim() const { return static_cast<int>(n_.size()); }
  int points(int axis) const { return n_[static_cast<std::size_t>(axis)]; }
  double half_length(int axis) const { return len_[static_cast<std::size_t>(axis)]; }
  double spacing(int axis) const { return 2.0 * half_length(axis) / points(axis); }
  double freq_spacing(int axis) const;
  bool half_offset() const { return offset_; }

  std::int64_t total_points() const;
  double cell_measure() const;       // prod h_k
  double freq_cell_measure() const;  // prod (pi / L_k)

  // Storage is row-major with the last axis contiguous (FFT layout).
  std::int64_t flat_index(const std::vector<int>& idx) const;
  void unflatten(std::int64_t flat, std::vector<int>& idx) const;

  double coordinate(int axis, int idx) const;       // space position
  double frequency(int axis, int idx) const;        // frequency in storage order
  int freq_integer(int axis, int idx) const;        // the integer m of the bin

  bool operator==(const PeriodicGrid& o) const {
    return n_ == o.n_ && len_ == o.len_ && offset_ == o.offset_;
  }

private:
  std::vector<int> n_;
  std::vector<double> len_;
  bool offset_;
};

}  // namespace lamelab

#endif
