#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "inac/model.hpp"
#include "inac/pn.hpp"

namespace inac {

enum class Engine {
  Auto,  ///< Span unless impairments are configured
  Chip,  ///< full sample-level pipeline
  Span,  ///< per-span correlation statistics drawn directly
};

struct RunOptions {
  unsigned workers = 0;  ///< 0 = available parallelism
  Engine engine = Engine::Auto;
  bool genie_stage1 = false;
  std::optional<PnSequence> pn;
};

struct StreamCount {
  std::uint64_t bits = 0;
  std::uint64_t errors = 0;

  double rate() const { return bits ? static_cast<double>(errors) / static_cast<double>(bits) : 0.0; }
  StreamCount& operator+=(const StreamCount& o) {
    bits += o.bits;
    errors += o.errors;
    return *this;
  }
  bool operator==(const StreamCount&) const = default;
};

struct Interval {
  double lo;
  double hi;
};
Interval wilson_interval(std::uint64_t errors, std::uint64_t n, double z);
double wilson_halfwidth(std::uint64_t errors, std::uint64_t n, double z = 1.959963984540054);
bool within_wilson(const StreamCount& c, double p, double z);

struct BerReport {
  double nav_ber = 0.0;
  double com_ber = 0.0;
  double mul_ber = 0.0;
  double uni_ber = 0.0;
  std::uint64_t trials = 0;
  struct Counts {
    StreamCount nav, split, mul, uni;
    bool operator==(const Counts&) const = default;
  } bit_counts;
  struct Halfwidths {
    double nav = 0.0, com = 0.0, mul = 0.0, uni = 0.0;
    bool operator==(const Halfwidths&) const = default;
  } ci95_halfwidth;
  SystemConfig cfg;
  std::uint64_t seed = 0;
  std::uint64_t correlations = 0;
  std::string scheme = "NOMA";

  bool operator==(const BerReport&) const = default;
};

/// Fills the rates and intervals from bit_counts.
void finalize(BerReport& r);

BerReport run_point(const SystemConfig& cfg, std::uint64_t trials, std::uint64_t seed, const RunOptions& opts = {});

unsigned resolve_workers(unsigned requested);

/// Runs trial blocks [begin, end) on `workers` threads and sums the partial counts in block order.
template <typename Partial, typename Fn>
Partial parallel_trials(std::uint64_t trials, unsigned workers, Fn&& block);

enum class SweepAxis { Distance, RCom, Beta1, Xi };
std::string_view to_string(SweepAxis a);
SystemConfig with_axis(SystemConfig cfg, SweepAxis axis, double value);

struct SweepPoint {
  double value = 0.0;
  std::optional<BerReport> report;
  std::string error;
};

std::vector<SweepPoint> sweep(const SystemConfig& cfg_template, SweepAxis axis, const std::vector<double>& values,
                              std::uint64_t trials, std::uint64_t seed, const RunOptions& opts = {});

struct DeltaFit {
  double delta = 1.0;
  double residual_db = 0.0;
  std::vector<double> distances;
  std::vector<double> mc_ber;
  std::vector<double> fitted_ber;
};

std::vector<double> default_distance_grid();

DeltaFit estimate_delta(const SystemConfig& cfg_uo, std::uint64_t trials, std::uint64_t seed,
                        const std::vector<double>& distances = default_distance_grid(), const RunOptions& opts = {});

}  // namespace inac

#include "inac/detail/parallel.hpp"
