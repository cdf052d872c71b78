#include "lamelab/field_io.hpp"

#include <cstdint>
#include <cstring>
#include <fstream>

#include "lamelab/errors.hpp"

namespace lamelab {

namespace {
constexpr char kMagic[4] = {'L', 'A', 'M', 'F'};
constexpr std::uint32_t kVersion = 1;

template <typename T>
void write_raw(std::ofstream& out, const T& v) {
  out.write(reinterpret_cast<const char*>(&v), sizeof(T));
}

template <typename T>
T read_raw(std::ifstream& in) {
  T v{};
  in.read(reinterpret_cast<char*>(&v), sizeof(T));
  if (!in) throw DomainError("truncated LAMF file");
  return v;
}
}  // namespace

void write_field(const std::string& path, const VectorField& f) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DomainError("cannot open " + path + " for writing");
  out.write(kMagic, 4);
  write_raw(out, kVersion);
  write_raw(out, static_cast<std::uint32_t>(f.grid().dim()));
  for (int k = 0; k < f.grid().dim(); ++k)
    write_raw(out, static_cast<std::uint32_t>(f.grid().points(k)));
  for (int k = 0; k < f.grid().dim(); ++k) write_raw(out, f.grid().half_length(k));
  for (int j = 0; j < f.components(); ++j) {
    const auto& comp = f.component(j);
    out.write(reinterpret_cast<const char*>(comp.data()),
              static_cast<std::streamsize>(comp.size() * sizeof(Cplx)));
  }
  if (!out) throw ComputeError("write failed for " + path);
}

VectorField read_field(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DomainError("cannot open " + path);
  char magic[4];
  in.read(magic, 4);
  if (!in || std::memcmp(magic, kMagic, 4) != 0)
    throw DomainError(path + " is not a LAMF field file");
  auto version = read_raw<std::uint32_t>(in);
  if (version != kVersion)
    throw DomainError("unsupported LAMF version " + std::to_string(version));
  auto d = read_raw<std::uint32_t>(in);
  if (d == 0 || d > 8) throw DomainError("implausible LAMF dimension");
  std::vector<int> n(d);
  for (auto& nk : n) nk = static_cast<int>(read_raw<std::uint32_t>(in));
  std::vector<double> L(d);
  for (auto& lk : L) lk = read_raw<double>(in);

  PeriodicGrid grid(n, L);
  const std::int64_t per_comp = grid.total_points();
  auto payload_start = in.tellg();
  in.seekg(0, std::ios::end);
  std::int64_t payload = static_cast<std::int64_t>(in.tellg() - payload_start);
  in.seekg(payload_start);
  if (payload % static_cast<std::int64_t>(sizeof(Cplx)) != 0)
    throw DomainError("LAMF payload is not a whole number of complex samples");
  std::int64_t samples = payload / static_cast<std::int64_t>(sizeof(Cplx));
  if (samples % per_comp != 0)
    throw DomainError("LAMF payload does not match the grid size");
  int comps = static_cast<int>(samples / per_comp);

  VectorField f(grid, comps);
  for (int j = 0; j < comps; ++j) {
    auto& comp = f.component(j);
    in.read(reinterpret_cast<char*>(comp.data()),
            static_cast<std::streamsize>(comp.size() * sizeof(Cplx)));
    if (!in) throw DomainError("truncated LAMF payload");
  }
  return f;
}

}  // namespace lamelab
