#pragma once

#include <cstdint>
#include <iosfwd>
#include <variant>
#include <vector>

#include <Eigen/Core>

#include "inac/error.hpp"
#include "inac/model.hpp"

namespace inac {

/// Characteristic polynomial x^n + sum x^t + 1; `taps` lists the middle exponents.
struct LfsrSpec {
  int stages = 11;
  std::vector<int> taps;
  std::uint32_t fill = 0x7ff;
};

struct MSequence {
  LfsrSpec lfsr;
};

struct GoldTruncated {
  LfsrSpec first;
  LfsrSpec second;
  int phase = 0;  ///< delay applied to the second register output
};

using PnGenerator = std::variant<MSequence, GoldTruncated>;

GoldTruncated default_gold(int phase = 0);
/// Second phase selector with the lowest worst-case cyclic cross-correlation against phase 0 (118 over 2046 chips).
inline constexpr int kCompanionPhase = 242;

/// Raw 0/1 register output, one full period.
std::vector<std::uint8_t> lfsr_period(const LfsrSpec& spec);

class PnSequence {
 public:
  PnSequence(Eigen::VectorXd chips, double chip_rate);

  Eigen::Index length() const { return chips_.size(); }
  const Eigen::VectorXd& chips() const { return chips_; }
  double operator[](Eigen::Index k) const { return chips_[k]; }
  double chip_rate() const { return chip_rate_; }

  /// out[n] = chips[(n - m) mod K]
  Eigen::VectorXd shifted(Eigen::Index m) const;
  /// `count` chips starting at global chip index `start`, wrapping every period.
  Eigen::VectorXd tiled(Eigen::Index start, Eigen::Index count) const;

 private:
  Eigen::VectorXd chips_;
  double chip_rate_;
};

PnSequence generate(Eigen::Index length, const PnGenerator& gen, double chip_rate = 2.046e6);
PnSequence default_pn(const SystemConfig& cfg, int phase = 0);

template <typename Derived>
double correlate(const Eigen::MatrixBase<Derived>& samples, const PnSequence& pn, Eigen::Index start,
                 Eigen::Index span) {
  if (span <= 0 || start < 0 || start + span > samples.size())
    throw Error(ErrorCode::OutOfRange, "correlation window outside samples");
  const Eigen::Index k = pn.length();
  const auto& c = pn.chips();
  double acc = 0.0;
  Eigen::Index n = start;
  Eigen::Index phase = start % k;
  const Eigen::Index end = start + span;
  while (n < end) {
    const Eigen::Index run = std::min(end - n, k - phase);
    acc += samples.derived().segment(n, run).dot(c.segment(phase, run));
    n += run;
    phase = 0;
  }
  return acc;
}

/// out[m] = sum_n samples[n] * pn[(n - m) mod K], m in [first, first + count).
template <typename Derived>
Eigen::VectorXd circular_correlate_shifts(const Eigen::MatrixBase<Derived>& samples, const PnSequence& pn,
                                          Eigen::Index first, Eigen::Index count) {
  const Eigen::Index k = pn.length();
  if (samples.size() != k) throw Error(ErrorCode::LengthMismatch, "samples must span one PN period");
  const auto& c = pn.chips();
  Eigen::VectorXd out(count);
  for (Eigen::Index j = 0; j < count; ++j) {
    const Eigen::Index m = ((first + j) % k + k) % k;
    // samples[n] pairs with c[n - m]; split at the wrap point n = m.
    out[j] = samples.derived().segment(m, k - m).dot(c.head(k - m)) +
             samples.derived().head(m).dot(c.tail(m));
  }
  return out;
}

template <typename Derived>
Eigen::VectorXd circular_correlate_all_shifts(const Eigen::MatrixBase<Derived>& samples, const PnSequence& pn) {
  return circular_correlate_shifts(samples, pn, 0, pn.length());
}

void write_chips(std::ostream& os, const PnSequence& pn);
PnSequence read_chips(std::istream& is, double chip_rate = 2.046e6);

}  // namespace inac
