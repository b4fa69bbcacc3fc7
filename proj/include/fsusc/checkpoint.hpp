// Copyright The fsusc Authors.
// SPDX-License-Identifier: Apache-2.0

#ifndef FSUSC_CHECKPOINT_HPP
#define FSUSC_CHECKPOINT_HPP

#include <cstdint>
#include <string>
#include <vector>
#include "fsusc/config.hpp"

namespace fsusc
{

//
// Binary layout, little endian:
//   "FSUSC1" | nx ny nz (u32) | h (f64) | param hash (u64)
//   | m (3 * cells f64, box order) | beta (cells f64) | CRC32 of all prior bytes (u32)
//
struct CheckpointData
{
  Dims dims;
  double h = 0.0;
  std::uint64_t hash = 0;
  std::vector<double> m;
  std::vector<double> beta;
};

std::string encode_checkpoint(const CheckpointData &data);
// Throws CheckpointCorrupt on bad magic, size or checksum.
CheckpointData decode_checkpoint(const std::string &bytes);

void write_checkpoint(const std::string &path, const CheckpointData &data);
CheckpointData read_checkpoint(const std::string &path);

CheckpointData make_checkpoint(const RunConfig &config, const EquilibriumState &state);

// Reads a checkpoint for config and rebuilds the equilibrium state, checking
// the residual against config.equilibrium.tol_eq. Throws StaleCheckpoint when
// the checkpoint was written for other mesh or material parameters.
EquilibriumState load_equilibrium(const std::string &path, const RunConfig &config,
                                  const EffectiveField &field);

}  // namespace fsusc

#endif  // FSUSC_CHECKPOINT_HPP
