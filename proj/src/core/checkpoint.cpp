// Copyright The fsusc Authors.
// SPDX-License-Identifier: Apache-2.0

#include "fsusc/checkpoint.hpp"

#include <algorithm>
#include <bit>
#include <cstring>
#include <fstream>
#include <sstream>
#include <zlib.h>

namespace fsusc
{

namespace
{

constexpr char kMagic[6] = {'F', 'S', 'U', 'S', 'C', '1'};

template <class T>
void put(std::string &out, T value)
{
  unsigned char bytes[sizeof(T)];
  std::memcpy(bytes, &value, sizeof(T));
  if constexpr (std::endian::native == std::endian::big)
    std::reverse(bytes, bytes + sizeof(T));
  out.append(reinterpret_cast<const char *>(bytes), sizeof(T));
}

template <class T>
T take(const std::string &in, std::size_t &pos)
{
  unsigned char bytes[sizeof(T)];
  std::memcpy(bytes, in.data() + pos, sizeof(T));
  if constexpr (std::endian::native == std::endian::big)
    std::reverse(bytes, bytes + sizeof(T));
  pos += sizeof(T);
  T value;
  std::memcpy(&value, bytes, sizeof(T));
  return value;
}

std::uint32_t crc32_of(const char *data, std::size_t n)
{
  uLong crc = crc32(0L, Z_NULL, 0);
  while (n > 0)
  {
    const uInt chunk = static_cast<uInt>(std::min<std::size_t>(n, 1u << 30));
    crc = crc32(crc, reinterpret_cast<const Bytef *>(data), chunk);
    data += chunk;
    n -= chunk;
  }
  return static_cast<std::uint32_t>(crc);
}

}  // namespace

std::string encode_checkpoint(const CheckpointData &d)
{
  const std::size_t cells = d.dims.count();
  if (d.m.size() != 3 * cells || d.beta.size() != cells)
    throw Error(ErrorCode::InvalidArgument, "checkpoint arrays do not match dims");
  std::string out(kMagic, sizeof(kMagic));
  put<std::uint32_t>(out, static_cast<std::uint32_t>(d.dims.nx));
  put<std::uint32_t>(out, static_cast<std::uint32_t>(d.dims.ny));
  put<std::uint32_t>(out, static_cast<std::uint32_t>(d.dims.nz));
  put<double>(out, d.h);
  put<std::uint64_t>(out, d.hash);
  for (double v : d.m)
    put<double>(out, v);
  for (double v : d.beta)
    put<double>(out, v);
  put<std::uint32_t>(out, crc32_of(out.data(), out.size()));
  return out;
}

CheckpointData decode_checkpoint(const std::string &bytes)
{
  constexpr std::size_t header = sizeof(kMagic) + 3 * 4 + 8 + 8;
  if (bytes.size() < header + 4 || std::memcmp(bytes.data(), kMagic, sizeof(kMagic)) != 0)
    throw Error(ErrorCode::CheckpointCorrupt, "checkpoint corrupt: bad magic or truncated header");
  std::size_t end = bytes.size() - 4;
  std::size_t pos = end;
  const auto stored = take<std::uint32_t>(bytes, pos);
  if (stored != crc32_of(bytes.data(), end))
    throw Error(ErrorCode::CheckpointCorrupt, "checkpoint corrupt: CRC32 mismatch");

  CheckpointData d;
  pos = sizeof(kMagic);
  const auto nx = take<std::uint32_t>(bytes, pos);
  const auto ny = take<std::uint32_t>(bytes, pos);
  const auto nz = take<std::uint32_t>(bytes, pos);
  if (nx == 0 || ny == 0 || nz == 0 || nx > 4096 || ny > 4096 || nz > 4096)
    throw Error(ErrorCode::CheckpointCorrupt, "checkpoint corrupt: bad dims");
  d.dims = {static_cast<int>(nx), static_cast<int>(ny), static_cast<int>(nz)};
  d.h = take<double>(bytes, pos);
  d.hash = take<std::uint64_t>(bytes, pos);
  const std::size_t cells = d.dims.count();
  if (end - header != 4 * 8 * cells)
    throw Error(ErrorCode::CheckpointCorrupt, "checkpoint corrupt: payload size mismatch");
  d.m.resize(3 * cells);
  d.beta.resize(cells);
  for (double &v : d.m)
    v = take<double>(bytes, pos);
  for (double &v : d.beta)
    v = take<double>(bytes, pos);
  return d;
}

void write_checkpoint(const std::string &path, const CheckpointData &data)
{
  const std::string bytes = encode_checkpoint(data);
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  if (!out)
    throw Error(ErrorCode::Io, "cannot write checkpoint " + path);
}

CheckpointData read_checkpoint(const std::string &path)
{
  std::ifstream in(path, std::ios::binary);
  if (!in)
    throw Error(ErrorCode::Io, "cannot read checkpoint " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return decode_checkpoint(buf.str());
}

CheckpointData make_checkpoint(const RunConfig &config, const EquilibriumState &state)
{
  CheckpointData d;
  d.dims = state.m.mesh().dims();
  d.h = state.m.mesh().h();
  d.hash = param_hash(config);
  d.m.assign(state.m.values().begin(), state.m.values().end());
  d.beta = state.diagonal.beta;
  return d;
}

EquilibriumState load_equilibrium(const std::string &path, const RunConfig &config,
                                  const EffectiveField &field)
{
  const CheckpointData d = read_checkpoint(path);
  if (d.hash != param_hash(config) || !(d.dims == field.mesh().dims()) || d.h != field.mesh().h())
    throw Error(ErrorCode::StaleCheckpoint,
                "stale checkpoint: written for different mesh or material parameters");
  VectorField m(field.mesh_ptr());
  auto mv = m.values();
  std::copy(d.m.begin(), d.m.end(), mv.begin());
  m.restrict_to_mask();
  return make_equilibrium_state(std::move(m), field, config.equilibrium.tol_eq);
}

}  // namespace fsusc
