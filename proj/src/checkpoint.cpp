#include "acpl/checkpoint.hpp"

#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>
#include <memory>
#include <vector>

#include "acpl/error.hpp"

static_assert(std::endian::native == std::endian::little, "checkpoint io assumes little endian");

namespace acpl {

namespace {

constexpr char kMagic[4] = {'A', 'C', 'P', 'L'};

template <class T>
void put(std::string& buf, T v) {
  char raw[sizeof(T)];
  std::memcpy(raw, &v, sizeof(T));
  buf.append(raw, sizeof(T));
}

struct Cursor {
  const std::string& buf;
  size_t at = 0;
  template <class T>
  T get() {
    if (at + sizeof(T) > buf.size()) fail(Err::IoFailure, "truncated checkpoint");
    T v;
    std::memcpy(&v, buf.data() + at, sizeof(T));
    at += sizeof(T);
    return v;
  }
};

}  // namespace

void save_checkpoint(const GaugeSection& s, const std::string& path) {
  const GridSpec& g = s.grid();
  std::string buf;
  buf.append(kMagic, 4);
  put<uint32_t>(buf, kCheckpointVersion);
  put<uint32_t>(buf, uint32_t(g.n));
  for (int a = 0; a < g.n; ++a) put<uint32_t>(buf, uint32_t(g.dims[a]));
  put<double>(buf, g.h);
  put<double>(buf, s.eps);
  for (double x : s.u) put<double>(buf, x);

  const int64_t N = g.nodes();
  uint8_t acc = 0;
  int nb = 0;
  for (int a = 0; a < g.n; ++a)
    for (NodeId v = 0; v < N; ++v) {
      if (g.coords(v)[a] == g.dims[a] - 1) continue;
      if (s.gauge->sig[size_t(a) * size_t(N) + size_t(v)] < 0) acc |= uint8_t(1u << nb);
      if (++nb == 8) {
        buf.push_back(char(acc));
        acc = 0;
        nb = 0;
      }
    }
  if (nb > 0) buf.push_back(char(acc));

  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f) fail(Err::IoFailure, "cannot open " + path + " for writing");
  f.write(buf.data(), std::streamsize(buf.size()));
  f.flush();
  if (!f) fail(Err::IoFailure, "short write to " + path);
}

GaugeSection load_checkpoint(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) fail(Err::IoFailure, "cannot open " + path);
  std::string buf((std::istreambuf_iterator<char>(f)), std::istreambuf_iterator<char>());
  if (buf.size() < 4 || std::memcmp(buf.data(), kMagic, 4) != 0)
    fail(Err::IoFailure, path + " is not a checkpoint file");

  Cursor c{buf, 4};
  uint32_t version = c.get<uint32_t>();
  if (version != kCheckpointVersion)
    fail(Err::CheckpointVersionMismatch,
         "checkpoint version " + std::to_string(version) + ", expected " +
             std::to_string(kCheckpointVersion));
  uint32_t n = c.get<uint32_t>();
  if (n < 1 || n > 3) fail(Err::IoFailure, "checkpoint has invalid dimension");
  std::array<int64_t, 3> dims{1, 1, 1};
  for (uint32_t a = 0; a < n; ++a) {
    dims[a] = c.get<uint32_t>();
    if (dims[a] < 2 || dims[a] > (int64_t(1) << 24)) fail(Err::IoFailure, "checkpoint dims corrupt");
  }
  double h = c.get<double>();
  double eps = c.get<double>();
  if (!(h > 0) || !(eps > 0)) fail(Err::IoFailure, "checkpoint scales corrupt");

  GridSpec g = centered_grid(int(n), dims, h);
  const int64_t N = g.nodes();
  std::vector<double> u(size_t(N));
  for (int64_t v = 0; v < N; ++v) {
    u[size_t(v)] = c.get<double>();
    if (!std::isfinite(u[size_t(v)])) fail(Err::IoFailure, "checkpoint field is not finite");
  }

  auto gf = std::make_shared<GaugeField>(trivial_gauge(g));
  int64_t nbits = 0;
  for (int a = 0; a < g.n; ++a) nbits += g.edge_count(a);
  if (c.at + size_t((nbits + 7) / 8) > buf.size()) fail(Err::IoFailure, "truncated checkpoint");
  int64_t bit = 0;
  for (int a = 0; a < g.n; ++a)
    for (NodeId v = 0; v < N; ++v) {
      if (g.coords(v)[a] == g.dims[a] - 1) continue;
      uint8_t byte = uint8_t(buf[c.at + size_t(bit >> 3)]);
      if (byte & (1u << (bit & 7))) gf->sig[size_t(a) * size_t(N) + size_t(v)] = -1;
      ++bit;
    }

  GaugeSection s{gf, std::move(u), eps};
  return s;
}

}  // namespace acpl
