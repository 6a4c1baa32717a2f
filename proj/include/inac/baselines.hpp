#pragma once

#include <cstdint>
#include <vector>

#include <Eigen/Core>

#include "inac/analytic.hpp"
#include "inac/model.hpp"
#include "inac/phy_tx.hpp"
#include "inac/pn.hpp"
#include "inac/simkit.hpp"

namespace inac {

enum class TdmaPower {
  FullPower,        ///< whole power P in each slot
  StreamAllocated,  ///< beta_x P in the slot of stream x
};

struct TdmaParams {
  double slot_fraction = 0.5;  ///< navigation slot share; the uni-cast slot gets the rest
  TdmaPower power = TdmaPower::FullPower;
};

struct CcskParams {
  int k = 8;
  int shift_offset = 0;        ///< symbol v is sent on shift v + shift_offset
  int periods_per_symbol = 1;  ///< PN periods per CCSK symbol
};

UnifiedBer tdma_ber(const SystemConfig& cfg, double p_s, const TdmaParams& params = {});

/// Slotted unit-power waveform: multi-cast symbols first, then uni-cast symbols.
Eigen::VectorXd tdma_burst(const Symbols& multicast, const Symbols& uni, const PnSequence& pn,
                           const SystemConfig& cfg, const TdmaParams& params = {});

BerReport simulate_tdma(const SystemConfig& cfg, std::uint64_t trials, std::uint64_t seed,
                        const TdmaParams& params = {}, const RunOptions& opts = {});

/// bits hold 0/1, grouped MSB first.
Eigen::VectorXd ccsk_encode(const Eigen::VectorXi& bits, const CcskParams& params, const PnSequence& pn);

struct CcskDecoded {
  Eigen::VectorXi bits;
  std::vector<int> shifts;
  std::uint64_t correlations = 0;
};
CcskDecoded ccsk_decode(const Eigen::VectorXd& samples, const CcskParams& params, const PnSequence& pn);

/// Navigation BPSK on shift 0 plus CCSK uni-cast data on shifts [1, 2^k].
CcskParams ccsk_baseline_params(const SystemConfig& cfg, const PnSequence& pn, int k);

BerReport simulate_ccsk(const SystemConfig& cfg, std::uint64_t trials, std::uint64_t seed, int k = 8,
                        const RunOptions& opts = {});

struct FrameEnergy {
  double nav = 0.0;
  double com = 0.0;
  double total() const { return nav + com; }
};
/// Per-stream component energies of one unit-power frame.
FrameEnergy noma_frame_energy(const SystemConfig& cfg, const PnSequence& pn, std::uint64_t seed);
FrameEnergy tdma_frame_energy(const SystemConfig& cfg, const PnSequence& pn, std::uint64_t seed,
                              const TdmaParams& params = {});
FrameEnergy ccsk_frame_energy(const SystemConfig& cfg, const PnSequence& pn, std::uint64_t seed, int k = 8);

}  // namespace inac
