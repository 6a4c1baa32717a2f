#include "inac/pn.hpp"

#include <istream>
#include <ostream>
#include <string>

namespace inac {

GoldTruncated default_gold(int phase) {
  return GoldTruncated{LfsrSpec{11, {2}, 0x7ff}, LfsrSpec{11, {8, 5, 2}, 0x7ff}, phase};
}

std::vector<std::uint8_t> lfsr_period(const LfsrSpec& spec) {
  const int n = spec.stages;
  if (n < 2 || n > 24) throw Error(ErrorCode::NonPrimitivePolynomial, "unsupported register length");
  for (int t : spec.taps)
    if (t <= 0 || t >= n) throw Error(ErrorCode::NonPrimitivePolynomial, "tap outside (0, n)");
  const std::uint32_t mask = (1U << n) - 1U;
  const std::uint32_t init = spec.fill & mask;
  if (init == 0) throw Error(ErrorCode::NonPrimitivePolynomial, "all-zero fill");
  std::uint32_t feedback = 1U;
  for (int t : spec.taps) feedback ^= 1U << t;

  // bit j of state holds a_{k+j}
  const std::size_t period = (std::size_t{1} << n) - 1;
  std::vector<std::uint8_t> out(period);
  std::uint32_t s = init;
  for (std::size_t k = 0; k < period; ++k) {
    out[k] = static_cast<std::uint8_t>(s & 1U);
    const std::uint32_t fb = static_cast<std::uint32_t>(__builtin_popcount(s & feedback) & 1);
    s = (s >> 1) | (fb << (n - 1));
    if (s == init && k + 1 < period)
      throw Error(ErrorCode::NonPrimitivePolynomial, "period " + std::to_string(k + 1));
  }
  if (s != init) throw Error(ErrorCode::NonPrimitivePolynomial, "state does not recur");
  return out;
}

PnSequence::PnSequence(Eigen::VectorXd chips, double chip_rate) : chips_(std::move(chips)), chip_rate_(chip_rate) {
  if (chips_.size() == 0) throw Error(ErrorCode::LengthMismatch, "empty PN sequence");
  for (Eigen::Index k = 0; k < chips_.size(); ++k)
    if (chips_[k] != 1.0 && chips_[k] != -1.0) throw Error(ErrorCode::OutOfRange, "chip not +-1");
}

Eigen::VectorXd PnSequence::shifted(Eigen::Index m) const {
  const Eigen::Index k = length();
  m = ((m % k) + k) % k;
  Eigen::VectorXd out(k);
  out.tail(k - m) = chips_.head(k - m);
  out.head(m) = chips_.tail(m);
  return out;
}

Eigen::VectorXd PnSequence::tiled(Eigen::Index start, Eigen::Index count) const {
  const Eigen::Index k = length();
  Eigen::VectorXd out(count);
  Eigen::Index n = 0;
  Eigen::Index phase = start % k;
  while (n < count) {
    const Eigen::Index run = std::min(count - n, k - phase);
    out.segment(n, run) = chips_.segment(phase, run);
    n += run;
    phase = 0;
  }
  return out;
}

namespace {

Eigen::VectorXd to_chips(const std::vector<std::uint8_t>& bits, Eigen::Index length) {
  Eigen::VectorXd c(length);
  for (Eigen::Index k = 0; k < length; ++k) c[k] = 1.0 - 2.0 * bits[static_cast<std::size_t>(k)];
  return c;
}

}  // namespace

PnSequence generate(Eigen::Index length, const PnGenerator& gen, double chip_rate) {
  if (length < 1) throw Error(ErrorCode::OutOfRange, "length must be positive");
  if (const auto* m = std::get_if<MSequence>(&gen)) {
    const auto bits = lfsr_period(m->lfsr);
    if (static_cast<std::size_t>(length) > bits.size())
      throw Error(ErrorCode::LengthExceedsPeriod, "length exceeds 2^n - 1");
    return PnSequence(to_chips(bits, length), chip_rate);
  }
  const auto& g = std::get<GoldTruncated>(gen);
  if (g.first.stages != g.second.stages)
    throw Error(ErrorCode::NonPrimitivePolynomial, "Gold registers differ in length");
  const auto a = lfsr_period(g.first);
  const auto b = lfsr_period(g.second);
  const std::size_t period = a.size();
  if (static_cast<std::size_t>(length) > period)
    throw Error(ErrorCode::LengthExceedsPeriod, "length exceeds 2^n - 1");
  const std::size_t ph = static_cast<std::size_t>(((g.phase % static_cast<long>(period)) + period) % period);
  std::vector<std::uint8_t> bits(period);
  for (std::size_t k = 0; k < period; ++k) bits[k] = a[k] ^ b[(k + ph) % period];
  return PnSequence(to_chips(bits, length), chip_rate);
}

PnSequence default_pn(const SystemConfig& cfg, int phase) {
  return generate(cfg.pn_length, default_gold(phase), cfg.chip_rate);
}

void write_chips(std::ostream& os, const PnSequence& pn) {
  for (Eigen::Index k = 0; k < pn.length(); ++k) os << static_cast<int>(pn[k]) << '\n';
}

PnSequence read_chips(std::istream& is, double chip_rate) {
  std::vector<double> v;
  std::string line;
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    int x = 0;
    try {
      x = std::stoi(line);
    } catch (const std::exception&) {
      throw Error(ErrorCode::OutOfRange, "malformed chip line '" + line + "'");
    }
    if (x != 1 && x != -1) throw Error(ErrorCode::OutOfRange, "chip not +-1");
    v.push_back(x);
  }
  return PnSequence(Eigen::Map<Eigen::VectorXd>(v.data(), static_cast<Eigen::Index>(v.size())), chip_rate);
}

}  // namespace inac
