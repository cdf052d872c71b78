#ifndef LAMELAB_FIELD_IO_HPP
#define LAMELAB_FIELD_IO_HPP

#include <string>

#include "lamelab/field.hpp"

namespace lamelab {

// LAMF binary field container, little-endian:
//   "LAMF" | u32 version | u32 d | u32 n[0..d) | f64 L[0..d)
// followed by c * prod(n) complex128 samples, row-major, component-major.
// Vector fields carry c = d components, potentials c = d^2. The frequency
// offset flag is not part of the container; loaded grids default to the
// exact lattice.
void write_field(const std::string& path, const VectorField& f);
VectorField read_field(const std::string& path);

}  // namespace lamelab

#endif
