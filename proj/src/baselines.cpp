#include "inac/baselines.hpp"

#include <cmath>

#include "inac/channel.hpp"
#include "inac/rng.hpp"

namespace inac {

namespace {

struct Slots {
  int g_mul;  ///< chips per multi-cast symbol inside its slot
  int g_uni;
  double amp_mul;
  double amp_uni;
};

Slots tdma_slots(const SystemConfig& cfg, const TdmaParams& params) {
  if (!(params.slot_fraction > 0.0 && params.slot_fraction < 1.0))
    throw Error(ErrorCode::ConfigInvalid, "slot fraction outside (0,1)");
  const auto g = spreading_gains(cfg);
  const double gm = g.mul * params.slot_fraction;
  const double gu = g.uni * (1.0 - params.slot_fraction);
  if (std::abs(gm - std::round(gm)) > 1e-9 || std::abs(gu - std::round(gu)) > 1e-9 || gm < 1.0 || gu < 1.0)
    throw Error(ErrorCode::NonIntegerGain, "slotted spreading gain is fractional");
  const bool full = params.power == TdmaPower::FullPower;
  return {static_cast<int>(std::lround(gm)), static_cast<int>(std::lround(gu)), full ? 1.0 : std::sqrt(cfg.beta1),
          full ? 1.0 : std::sqrt(cfg.beta2)};
}

double bpsk(double energy_snr) { return 0.5 * std::erfc(std::sqrt(energy_snr)); }

StreamCount count_errors(const Symbols& truth, const Symbols& decided) {
  return {static_cast<std::uint64_t>(truth.size()),
          static_cast<std::uint64_t>((truth.array() != decided.array()).count())};
}

}  // namespace

UnifiedBer tdma_ber(const SystemConfig& cfg, double p_s, const TdmaParams& params) {
  validate_link(cfg);
  const auto g = nominal_gains(cfg);
  const double sigma2 = noise_power(cfg);
  const bool full = params.power == TdmaPower::FullPower;
  const double pm = full ? p_s : p_s * cfg.beta1;
  const double pu = full ? p_s : p_s * cfg.beta2;
  const double f = params.slot_fraction;
  const double p_mul = bpsk(pm * g.mul * f / sigma2);
  const double p_uni = bpsk(pu * g.uni * (1.0 - f) / sigma2);
  return unified_ber(p_mul, p_uni, cfg.xi);
}

Eigen::VectorXd tdma_burst(const Symbols& multicast, const Symbols& uni, const PnSequence& pn,
                           const SystemConfig& cfg, const TdmaParams& params) {
  const auto s = tdma_slots(cfg, params);
  const int m = rate_ratio(cfg);
  if (uni.size() != multicast.size() * m) throw Error(ErrorCode::LengthMismatch, "stream lengths");
  const Eigen::Index first = multicast.size() * s.g_mul;
  Eigen::VectorXd out = pn.tiled(0, first + uni.size() * s.g_uni);
  for (Eigen::Index k = 0; k < multicast.size(); ++k) out.segment(k * s.g_mul, s.g_mul) *= s.amp_mul * multicast[k];
  for (Eigen::Index j = 0; j < uni.size(); ++j) out.segment(first + j * s.g_uni, s.g_uni) *= s.amp_uni * uni[j];
  return out;
}

BerReport simulate_tdma(const SystemConfig& cfg, std::uint64_t trials, std::uint64_t seed, const TdmaParams& params,
                        const RunOptions& opts) {
  if (trials < 1) throw Error(ErrorCode::OutOfRange, "trials must be >= 1");
  validate(cfg);
  const auto s = tdma_slots(cfg, params);
  const double p_s = received_power(cfg);
  const double sigma = std::sqrt(noise_power(cfg));
  Engine engine = opts.engine == Engine::Auto ? (cfg.impairments ? Engine::Chip : Engine::Span) : opts.engine;
  std::optional<PnSequence> pn = opts.pn;
  if (engine == Engine::Chip && !pn) pn = default_pn(cfg);

  struct Part {
    BerReport::Counts c;
    std::uint64_t corr = 0;
    Part& operator+=(const Part& o) {
      c.nav += o.c.nav;
      c.split += o.c.split;
      c.mul += o.c.mul;
      c.uni += o.c.uni;
      corr += o.corr;
      return *this;
    }
  };

  auto block = [&](std::uint64_t begin, std::uint64_t end) {
    Part part;
    for (std::uint64_t t = begin; t < end; ++t) {
      const std::uint64_t ts = rng::derive(seed, t);
      const SymbolStreams st = generate_streams(cfg, ts);
      const Symbols mul = compose_multicast(st);
      Symbols dm(mul.size()), du(st.uni.size());
      if (engine == Engine::Span) {
        rng::Gaussian z(rng::substream(ts, rng::Stream::Noise));
        const double am = s.g_mul * std::sqrt(2.0 * p_s) * s.amp_mul, nm = std::sqrt(1.0 * s.g_mul) * sigma;
        const double au = s.g_uni * std::sqrt(2.0 * p_s) * s.amp_uni, nu = std::sqrt(1.0 * s.g_uni) * sigma;
        for (Eigen::Index k = 0; k < mul.size(); ++k) dm[k] = am * mul[k] + nm * z() >= 0.0 ? 1 : -1;
        for (Eigen::Index j = 0; j < du.size(); ++j) du[j] = au * st.uni[j] + nu * z() >= 0.0 ? 1 : -1;
      } else {
        const Eigen::VectorXd base = tdma_burst(mul, st.uni, *pn, cfg, params);
        const auto real = realize(cfg, ts, base.size());
        const Eigen::VectorXd rx = apply(base, real, cfg);
        const Eigen::Index len = rx.size(), tau = real.delay_chips;
        Eigen::VectorXd al(len);
        al.head(len - tau) = rx.tail(len - tau);
        al.tail(tau) = rx.head(tau);
        const Eigen::Index first = mul.size() * s.g_mul;
        for (Eigen::Index k = 0; k < mul.size(); ++k) dm[k] = correlate(al, *pn, k * s.g_mul, s.g_mul) >= 0.0 ? 1 : -1;
        for (Eigen::Index j = 0; j < du.size(); ++j)
          du[j] = correlate(al, *pn, first + j * s.g_uni, s.g_uni) >= 0.0 ? 1 : -1;
      }
      const Eigen::Index kn = st.nav.size();
      const auto nav = count_errors(st.nav, dm.head(kn));
      const auto split = count_errors(st.split_com, dm.tail(st.split_com.size()));
      part.c.nav += nav;
      part.c.split += split;
      part.c.mul += nav;
      part.c.mul += split;
      part.c.uni += count_errors(st.uni, du);
      part.corr += static_cast<std::uint64_t>(mul.size() + du.size());
    }
    return part;
  };

  const Part total = parallel_trials<Part>(trials, opts.workers, block);
  BerReport r;
  r.trials = trials;
  r.bit_counts = total.c;
  r.correlations = total.corr;
  r.cfg = cfg;
  r.seed = seed;
  r.scheme = "TDMA";
  finalize(r);
  return r;
}

namespace {

void check_alphabet(const CcskParams& p, const PnSequence& pn) {
  if (p.k < 1 || p.k > 30) throw Error(ErrorCode::ShiftAlphabetTooLarge, "k out of range");
  if (p.shift_offset < 0 || (std::int64_t{1} << p.k) + p.shift_offset > pn.length())
    throw Error(ErrorCode::ShiftAlphabetTooLarge, "2^k shifts exceed the PN length");
  if (p.periods_per_symbol < 1) throw Error(ErrorCode::ConfigInvalid, "periods_per_symbol must be >= 1");
}

}  // namespace

Eigen::VectorXd ccsk_encode(const Eigen::VectorXi& bits, const CcskParams& params, const PnSequence& pn) {
  check_alphabet(params, pn);
  if (bits.size() % params.k != 0) throw Error(ErrorCode::LengthMismatch, "bit count not a multiple of k");
  const Eigen::Index n_sym = bits.size() / params.k;
  const Eigen::Index kp = pn.length();
  const Eigen::Index sym_len = kp * params.periods_per_symbol;
  Eigen::VectorXd out(n_sym * sym_len);
  for (Eigen::Index s = 0; s < n_sym; ++s) {
    int v = 0;
    for (int b = 0; b < params.k; ++b) {
      const int bit = bits[s * params.k + b];
      if (bit != 0 && bit != 1) throw Error(ErrorCode::OutOfRange, "bits must be 0 or 1");
      v = (v << 1) | bit;
    }
    const Eigen::VectorXd code = pn.shifted(v + params.shift_offset);
    for (int p = 0; p < params.periods_per_symbol; ++p) out.segment(s * sym_len + p * kp, kp) = code;
  }
  return out;
}

CcskDecoded ccsk_decode(const Eigen::VectorXd& samples, const CcskParams& params, const PnSequence& pn) {
  check_alphabet(params, pn);
  const Eigen::Index kp = pn.length();
  const Eigen::Index sym_len = kp * params.periods_per_symbol;
  if (samples.size() % sym_len != 0) throw Error(ErrorCode::LengthMismatch, "samples not whole CCSK symbols");
  const Eigen::Index n_sym = samples.size() / sym_len;
  const Eigen::Index alphabet = Eigen::Index{1} << params.k;
  CcskDecoded d;
  d.bits.resize(n_sym * params.k);
  Eigen::VectorXd acc(kp);
  for (Eigen::Index s = 0; s < n_sym; ++s) {
    acc = samples.segment(s * sym_len, kp);
    for (int p = 1; p < params.periods_per_symbol; ++p) acc += samples.segment(s * sym_len + p * kp, kp);
    const Eigen::VectorXd corr = circular_correlate_shifts(acc, pn, params.shift_offset, alphabet);
    Eigen::Index best = 0;
    corr.maxCoeff(&best);
    d.shifts.push_back(static_cast<int>(best) + params.shift_offset);
    d.correlations += static_cast<std::uint64_t>(alphabet);
    for (int b = 0; b < params.k; ++b) d.bits[s * params.k + b] = static_cast<int>((best >> (params.k - 1 - b)) & 1);
  }
  return d;
}

CcskParams ccsk_baseline_params(const SystemConfig& cfg, const PnSequence& pn, int k) {
  const auto f = frame_layout(cfg);
  const Eigen::Index kp = pn.length();
  const std::int64_t sym_chips = static_cast<std::int64_t>(k) * f.g_uni;
  if (sym_chips % kp != 0 || f.g_mul % kp != 0)
    throw Error(ErrorCode::LengthMismatch, "CCSK symbols must span whole PN periods");
  if (f.k_uni % k != 0) throw Error(ErrorCode::LengthMismatch, "uni-cast bits per frame not a multiple of k");
  CcskParams p{k, 1, static_cast<int>(sym_chips / kp)};
  check_alphabet(p, pn);
  return p;
}

BerReport simulate_ccsk(const SystemConfig& cfg, std::uint64_t trials, std::uint64_t seed, int k,
                        const RunOptions& opts) {
  if (trials < 1) throw Error(ErrorCode::OutOfRange, "trials must be >= 1");
  validate(cfg);
  const PnSequence pn = opts.pn ? *opts.pn : default_pn(cfg);
  const auto f = frame_layout(cfg);
  const CcskParams cp = ccsk_baseline_params(cfg, pn, k);
  const double p_s = received_power(cfg);
  const double amp = std::sqrt(2.0 * p_s);
  const double sigma = std::sqrt(noise_power(cfg));

  struct Part {
    BerReport::Counts c;
    std::uint64_t corr = 0;
    Part& operator+=(const Part& o) {
      c.nav += o.c.nav;
      c.split += o.c.split;
      c.mul += o.c.mul;
      c.uni += o.c.uni;
      corr += o.corr;
      return *this;
    }
  };

  auto block = [&](std::uint64_t begin, std::uint64_t end) {
    Part part;
    for (std::uint64_t t = begin; t < end; ++t) {
      const std::uint64_t ts = rng::derive(seed, t);
      const SymbolStreams st = generate_streams(cfg, ts);
      const Symbols mul = compose_multicast(st);
      const Eigen::VectorXi bits = ((1 - st.uni.array()) / 2).matrix();
      const Eigen::VectorXd com = std::sqrt(cfg.beta2) * ccsk_encode(bits, cp, pn);
      Eigen::VectorXd rx = com;
      const Eigen::VectorXd chips = pn.tiled(0, rx.size());
      for (Eigen::Index n = 0; n < rx.size(); ++n) rx[n] += std::sqrt(cfg.beta1) * mul[n / f.g_mul] * chips[n];
      rx *= amp;
      if (sigma > 0.0) {
        rng::Gaussian z(rng::substream(ts, rng::Stream::Noise));
        for (Eigen::Index n = 0; n < rx.size(); ++n) rx[n] += sigma * z();
      }
      Symbols dm(mul.size());
      for (Eigen::Index q = 0; q < mul.size(); ++q) dm[q] = correlate(rx, pn, q * f.g_mul, f.g_mul) >= 0.0 ? 1 : -1;
      const CcskDecoded dc = ccsk_decode(rx, cp, pn);
      Symbols du = (1 - 2 * dc.bits.array()).matrix();
      const auto nav = count_errors(st.nav, dm.head(st.nav.size()));
      const auto split = count_errors(st.split_com, dm.tail(st.split_com.size()));
      part.c.nav += nav;
      part.c.split += split;
      part.c.mul += nav;
      part.c.mul += split;
      part.c.uni += count_errors(st.uni, du);
      part.corr += static_cast<std::uint64_t>(mul.size()) + dc.correlations;
    }
    return part;
  };

  const Part total = parallel_trials<Part>(trials, opts.workers, block);
  BerReport r;
  r.trials = trials;
  r.bit_counts = total.c;
  r.correlations = total.corr;
  r.cfg = cfg;
  r.seed = seed;
  r.scheme = "CCSK";
  finalize(r);
  return r;
}

FrameEnergy noma_frame_energy(const SystemConfig& cfg, const PnSequence& pn, std::uint64_t seed) {
  const SymbolStreams st = generate_streams(cfg, seed);
  const Symbols mul = compose_multicast(st);
  SystemConfig only = cfg;
  only.beta1 = 1.0;
  only.beta2 = 0.0;
  const Eigen::VectorXd nav = std::sqrt(cfg.beta1) * superimpose(mul, st.uni, pn, only);
  only.beta1 = 0.0;
  only.beta2 = 1.0;
  const Eigen::VectorXd com = std::sqrt(cfg.beta2) * superimpose(mul, st.uni, pn, only);
  return {nav.squaredNorm(), com.squaredNorm()};
}

FrameEnergy tdma_frame_energy(const SystemConfig& cfg, const PnSequence& pn, std::uint64_t seed,
                              const TdmaParams& params) {
  const SymbolStreams st = generate_streams(cfg, seed);
  const Symbols mul = compose_multicast(st);
  const Eigen::VectorXd w = tdma_burst(mul, st.uni, pn, cfg, params);
  const Eigen::Index first = mul.size() * tdma_slots(cfg, params).g_mul;
  return {w.head(first).squaredNorm(), w.tail(w.size() - first).squaredNorm()};
}

FrameEnergy ccsk_frame_energy(const SystemConfig& cfg, const PnSequence& pn, std::uint64_t seed, int k) {
  const auto f = frame_layout(cfg);
  const CcskParams cp = ccsk_baseline_params(cfg, pn, k);
  const SymbolStreams st = generate_streams(cfg, seed);
  const Symbols mul = compose_multicast(st);
  const Eigen::VectorXi bits = ((1 - st.uni.array()) / 2).matrix();
  const Eigen::VectorXd com = std::sqrt(cfg.beta2) * ccsk_encode(bits, cp, pn);
  Eigen::VectorXd nav = pn.tiled(0, com.size());
  for (Eigen::Index n = 0; n < nav.size(); ++n) nav[n] *= std::sqrt(cfg.beta1) * mul[n / f.g_mul];
  return {nav.squaredNorm(), com.squaredNorm()};
}

}  // namespace inac
