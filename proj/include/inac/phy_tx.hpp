#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>

#include <Eigen/Core>

#include "inac/model.hpp"
#include "inac/pn.hpp"

namespace inac {

using Symbols = Eigen::VectorXi;

struct SymbolStreams {
  Symbols nav;
  Symbols split_com;
  Symbols uni;
};

struct InacBurst {
  SymbolStreams streams;
  Eigen::VectorXd baseband;
  SystemConfig cfg;
  std::uint64_t seed = 0;
};

SymbolStreams generate_streams(const SystemConfig& cfg, std::uint64_t seed,
                               const std::optional<SymbolStreams>& payload = std::nullopt);

/// nav followed by split_com.
Symbols compose_multicast(const SymbolStreams& streams);

/// Unit-power superposition at one sample per chip; chip n uses pn[n mod K].
Eigen::VectorXd superimpose(const Symbols& multicast, const Symbols& uni, const PnSequence& pn,
                            const SystemConfig& cfg);

InacBurst make_burst(const SystemConfig& cfg, const PnSequence& pn, std::uint64_t seed,
                     const std::optional<SymbolStreams>& payload = std::nullopt);

/// Text header (length, chip_rate, seed) then little-endian float64 samples.
void write_burst(std::ostream& os, const Eigen::VectorXd& samples, double chip_rate, std::uint64_t seed);

struct BurstFile {
  Eigen::VectorXd samples;
  double chip_rate = 0.0;
  std::uint64_t seed = 0;
};
BurstFile read_burst(std::istream& is);

}  // namespace inac
