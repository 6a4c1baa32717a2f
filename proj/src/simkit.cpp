#include "inac/simkit.hpp"

#include <cmath>
#include <thread>

#include <boost/math/special_functions/erf.hpp>
#include <boost/math/tools/minima.hpp>

#include "inac/analytic.hpp"
#include "inac/channel.hpp"
#include "inac/phy_rx.hpp"
#include "inac/phy_tx.hpp"
#include "inac/rng.hpp"

namespace inac {

Interval wilson_interval(std::uint64_t errors, std::uint64_t n, double z) {
  if (n == 0) return {0.0, 1.0};
  const double nn = static_cast<double>(n);
  const double p = static_cast<double>(errors) / nn;
  const double z2 = z * z;
  const double denom = 1.0 + z2 / nn;
  const double centre = (p + z2 / (2.0 * nn)) / denom;
  const double half = z * std::sqrt(p * (1.0 - p) / nn + z2 / (4.0 * nn * nn)) / denom;
  return {std::max(0.0, centre - half), std::min(1.0, centre + half)};
}

double wilson_halfwidth(std::uint64_t errors, std::uint64_t n, double z) {
  const auto iv = wilson_interval(errors, n, z);
  return 0.5 * (iv.hi - iv.lo);
}

bool within_wilson(const StreamCount& c, double p, double z) {
  const auto iv = wilson_interval(c.errors, c.bits, z);
  return p >= iv.lo && p <= iv.hi;
}

void finalize(BerReport& r) {
  auto& c = r.bit_counts;
  const double xi = r.cfg.xi;
  r.mul_ber = c.mul.rate();
  r.uni_ber = c.uni.rate();
  r.nav_ber = r.mul_ber;
  r.com_ber = xi * r.mul_ber + (1.0 - xi) * r.uni_ber;
  auto& h = r.ci95_halfwidth;
  h.mul = wilson_halfwidth(c.mul.errors, c.mul.bits);
  h.uni = wilson_halfwidth(c.uni.errors, c.uni.bits);
  h.nav = h.mul;
  h.com = std::hypot(xi * h.mul, (1.0 - xi) * h.uni);
}

unsigned resolve_workers(unsigned requested) {
  if (requested > 0) return requested;
  const unsigned hw = std::thread::hardware_concurrency();
  return hw > 0 ? hw : 1;
}

namespace {

struct Partial {
  BerReport::Counts counts;
  std::uint64_t correlations = 0;

  Partial& operator+=(const Partial& o) {
    counts.nav += o.counts.nav;
    counts.split += o.counts.split;
    counts.mul += o.counts.mul;
    counts.uni += o.counts.uni;
    correlations += o.correlations;
    return *this;
  }
};

StreamCount compare(const Symbols& truth, const Eigen::Ref<const Symbols>& decided) {
  StreamCount c;
  c.bits = static_cast<std::uint64_t>(truth.size());
  c.errors = static_cast<std::uint64_t>((truth.array() != decided.array()).count());
  return c;
}

void score(Partial& p, const SymbolStreams& s, const DecodedOutput& d) {
  const auto nav = compare(s.nav, d.nav_bits);
  const auto split = compare(s.split_com, d.com_bits.head(s.split_com.size()));
  p.counts.nav += nav;
  p.counts.split += split;
  p.counts.mul += nav;
  p.counts.mul += split;
  p.counts.uni += compare(s.uni, d.com_bits.tail(s.uni.size()));
  p.correlations += static_cast<std::uint64_t>(d.multicast.size() + d.uni.size());
}

}  // namespace

BerReport run_point(const SystemConfig& cfg, std::uint64_t trials, std::uint64_t seed, const RunOptions& opts) {
  if (trials < 1) throw Error(ErrorCode::OutOfRange, "trials must be >= 1");
  validate(cfg);
  const auto f = frame_layout(cfg);
  const double p_s = received_power(cfg);
  const double sigma = std::sqrt(noise_power(cfg));
  const bool mo = cfg.scenario == Scenario::MoInac;
  Engine engine = opts.engine;
  if (engine == Engine::Auto) engine = cfg.impairments ? Engine::Chip : Engine::Span;
  if (engine == Engine::Span && cfg.impairments)
    throw Error(ErrorCode::ConfigInvalid, "impairments need the chip engine");

  std::optional<PnSequence> pn = opts.pn;
  if (engine == Engine::Chip && !pn) pn = default_pn(cfg);

  const double span_amp = f.g_uni * std::sqrt(2.0 * p_s);
  const double span_sigma = std::sqrt(static_cast<double>(f.g_uni)) * sigma;
  const double a1 = std::sqrt(cfg.beta1);
  const double a2 = std::sqrt(cfg.beta2);

  auto block = [&](std::uint64_t begin, std::uint64_t end) {
    Partial part;
    Eigen::VectorXd spans(f.k_uni);
    for (std::uint64_t t = begin; t < end; ++t) {
      const std::uint64_t ts = rng::derive(seed, t);
      const SymbolStreams s = generate_streams(cfg, ts);
      const Symbols mul = compose_multicast(s);
      std::optional<Symbols> genie;
      if (opts.genie_stage1) genie = mo ? mul : s.uni;
      DecodedOutput d;
      if (engine == Engine::Span) {
        rng::Gaussian z(rng::substream(ts, rng::Stream::Noise));
        for (Eigen::Index j = 0; j < f.k_uni; ++j)
          spans[j] = span_amp * (a1 * mul[j / f.m] + a2 * s.uni[j]) + (span_sigma > 0.0 ? span_sigma * z() : 0.0);
        d = decode_spans(spans, cfg, p_s, genie);
      } else {
        const Eigen::VectorXd base = superimpose(mul, s.uni, *pn, cfg);
        const auto real = realize(cfg, ts, base.size());
        const Eigen::VectorXd rx = apply(base, real, cfg);
        SicOptions so;
        so.delay_chips = real.delay_chips;
        so.genie_stage1 = genie;
        d = decode_burst(rx, *pn, cfg, p_s, so);
      }
      score(part, s, d);
    }
    return part;
  };

  const Partial total = parallel_trials<Partial>(trials, opts.workers, block);
  BerReport r;
  r.trials = trials;
  r.bit_counts = total.counts;
  r.correlations = total.correlations;
  r.cfg = cfg;
  r.seed = seed;
  finalize(r);
  return r;
}

std::string_view to_string(SweepAxis a) {
  switch (a) {
    case SweepAxis::Distance: return "distance_m";
    case SweepAxis::RCom: return "r_com_bps";
    case SweepAxis::Beta1: return "beta1";
    case SweepAxis::Xi: return "xi";
  }
  return "value";
}

SystemConfig with_axis(SystemConfig cfg, SweepAxis axis, double value) {
  switch (axis) {
    case SweepAxis::Distance: cfg.distance = value; break;
    case SweepAxis::RCom: cfg.r_com = value; break;
    case SweepAxis::Beta1:
      cfg.beta1 = value;
      cfg.beta2 = 1.0 - value;
      break;
    case SweepAxis::Xi: cfg.xi = value; break;
  }
  return cfg;
}

std::vector<SweepPoint> sweep(const SystemConfig& cfg_template, SweepAxis axis, const std::vector<double>& values,
                              std::uint64_t trials, std::uint64_t seed, const RunOptions& opts) {
  if (values.empty()) throw Error(ErrorCode::OutOfRange, "empty sweep");
  std::vector<SweepPoint> out;
  out.reserve(values.size());
  for (std::size_t i = 0; i < values.size(); ++i) {
    SweepPoint p;
    p.value = values[i];
    try {
      p.report = run_point(with_axis(cfg_template, axis, values[i]), trials, rng::derive(seed, i), opts);
    } catch (const Error& e) {
      p.error = e.what();
    }
    out.push_back(std::move(p));
  }
  return out;
}

std::vector<double> default_distance_grid() {
  std::vector<double> d;
  for (int km = 8000; km <= 20000; km += 2000) d.push_back(km * 1e3);
  return d;
}

DeltaFit estimate_delta(const SystemConfig& cfg_uo, std::uint64_t trials, std::uint64_t seed,
                        const std::vector<double>& distances, const RunOptions& opts) {
  if (cfg_uo.scenario != Scenario::UoInac) throw Error(ErrorCode::WrongScenario, "delta fit needs UO_INAC");
  DeltaFit fit;
  std::vector<double> snr;  // P_s g_mul beta1 / sigma^2
  const auto pts = sweep(cfg_uo, SweepAxis::Distance, distances, trials, seed, opts);
  for (const auto& p : pts) {
    if (!p.report) throw Error(ErrorCode::ConfigInvalid, p.error);
    const double ber = p.report->mul_ber;
    if (!(ber > 0.0 && ber < 0.5)) continue;
    const SystemConfig c = with_axis(cfg_uo, SweepAxis::Distance, p.value);
    fit.distances.push_back(p.value);
    fit.mc_ber.push_back(ber);
    snr.push_back(received_power(c) * nominal_gains(c).mul * c.beta1 / noise_power(c));
  }
  if (fit.mc_ber.size() < 2) throw Error(ErrorCode::FitOutOfRange, "fewer than two usable grid points");

  auto model = [&](double delta, std::size_t i) { return 0.5 * std::erfc(std::sqrt(delta * snr[i])); };
  auto cost = [&](double delta) {
    double s = 0.0;
    for (std::size_t i = 0; i < snr.size(); ++i) {
      const double e = std::log10(model(delta, i)) - std::log10(fit.mc_ber[i]);
      s += e * e;
    }
    return s;
  };
  constexpr double lo = 1e-3, hi = 1.2, accept_hi = 1.05;
  const auto best = boost::math::tools::brent_find_minima(cost, lo, hi, 50);
  fit.delta = best.first;
  if (fit.delta > accept_hi || fit.delta < 2.0 * lo)
    throw Error(ErrorCode::FitOutOfRange, "delta = " + std::to_string(fit.delta));

  double r2 = 0.0;
  for (std::size_t i = 0; i < snr.size(); ++i) {
    fit.fitted_ber.push_back(model(fit.delta, i));
    const double x = boost::math::erfc_inv(2.0 * fit.mc_ber[i]);
    const double delta_i = x * x / snr[i];
    const double db = 10.0 * std::log10(delta_i / fit.delta);
    r2 += db * db;
  }
  fit.residual_db = std::sqrt(r2 / static_cast<double>(snr.size()));
  return fit;
}

}  // namespace inac
