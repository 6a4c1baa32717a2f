#pragma once

#include <iosfwd>
#include <optional>

#include <Eigen/Core>

#include "inac/model.hpp"
#include "inac/phy_tx.hpp"
#include "inac/pn.hpp"

namespace inac {

struct Decisions {
  Symbols symbols;
  Eigen::VectorXd statistics;
};

struct DecisionTrace {
  Eigen::VectorXd stage1_statistics;
  Symbols stage1_decisions;
  std::optional<double> residual_power;  ///< watts; sample-level receiver only
  Eigen::VectorXd stage2_statistics;
  Symbols stage2_decisions;
};

struct DecodedOutput {
  Symbols nav_bits;
  Symbols com_bits;  ///< split-com then uni-cast
  Symbols multicast;
  Symbols uni;
  DecisionTrace trace;
};

struct SicOptions {
  Eigen::Index delay_chips = 0;
  /// Replaces stage-1 decisions with known symbols.
  std::optional<Symbols> genie_stage1;
};

inline int decide(double statistic) { return statistic >= 0.0 ? 1 : -1; }

/// Span of the first-decoded stream: g_mul in MO, g_uni in UO.
int higher_span(const SystemConfig& cfg);
int lower_span(const SystemConfig& cfg);

Decisions decode_higher(const Eigen::VectorXd& received, const PnSequence& pn, const SystemConfig& cfg);
Eigen::VectorXd reconstruct_and_cancel(const Eigen::VectorXd& received, const Symbols& decisions,
                                       const PnSequence& pn, const SystemConfig& cfg, double p_s);
Decisions decode_lower(const Eigen::VectorXd& residual, const PnSequence& pn, const SystemConfig& cfg);

DecodedOutput decode_burst(const Eigen::VectorXd& received, const PnSequence& pn, const SystemConfig& cfg,
                           double p_s, const SicOptions& opts = {});

/// One correlation per uni-cast span over code-aligned samples.
Eigen::VectorXd span_statistics(const Eigen::VectorXd& aligned, const PnSequence& pn, const SystemConfig& cfg);

/// Same SIC decisions computed from per-span correlations alone.
DecodedOutput decode_spans(const Eigen::VectorXd& spans, const SystemConfig& cfg, double p_s,
                           const std::optional<Symbols>& genie_stage1 = std::nullopt);

/// symbol_index,stage,statistic,decision,truth
void write_trace_csv(std::ostream& os, const DecodedOutput& out, const SymbolStreams& truth, const SystemConfig& cfg);

}  // namespace inac
