#include "inac/phy_rx.hpp"

#include <cmath>
#include <ostream>

namespace inac {

int higher_span(const SystemConfig& cfg) {
  const auto g = spreading_gains(cfg);
  return cfg.scenario == Scenario::MoInac ? g.mul : g.uni;
}

int lower_span(const SystemConfig& cfg) {
  const auto g = spreading_gains(cfg);
  return cfg.scenario == Scenario::MoInac ? g.uni : g.mul;
}

namespace {

Decisions despread(const Eigen::VectorXd& x, const PnSequence& pn, int span) {
  const Eigen::Index n = x.size() / span;
  Decisions d{Symbols(n), Eigen::VectorXd(n)};
  for (Eigen::Index k = 0; k < n; ++k) {
    d.statistics[k] = correlate(x, pn, k * span, span);
    d.symbols[k] = decide(d.statistics[k]);
  }
  return d;
}

double higher_beta(const SystemConfig& cfg) {
  return cfg.scenario == Scenario::MoInac ? cfg.beta1 : cfg.beta2;
}

void assemble(DecodedOutput& out, const SystemConfig& cfg, Eigen::Index n_mul) {
  const bool mo = cfg.scenario == Scenario::MoInac;
  out.multicast = mo ? out.trace.stage1_decisions : out.trace.stage2_decisions;
  out.uni = mo ? out.trace.stage2_decisions : out.trace.stage1_decisions;
  SystemConfig c = cfg;
  c.frame_symbols = static_cast<int>(n_mul);
  const auto f = frame_layout(c);
  out.nav_bits = out.multicast.head(f.k_nav);
  out.com_bits.resize(f.k_mul + out.uni.size());
  out.com_bits << out.multicast.tail(f.k_mul), out.uni;
}

}  // namespace

Decisions decode_higher(const Eigen::VectorXd& received, const PnSequence& pn, const SystemConfig& cfg) {
  return despread(received, pn, higher_span(cfg));
}

Eigen::VectorXd reconstruct_and_cancel(const Eigen::VectorXd& received, const Symbols& decisions,
                                       const PnSequence& pn, const SystemConfig& cfg, double p_s) {
  const int span = higher_span(cfg);
  if (decisions.size() * span > received.size())
    throw Error(ErrorCode::LengthMismatch, "decisions exceed received samples");
  const double amp = std::sqrt(2.0 * p_s * higher_beta(cfg));
  Eigen::VectorXd residual = received;
  for (Eigen::Index k = 0; k < decisions.size(); ++k)
    residual.segment(k * span, span) -= (amp * decisions[k]) * pn.tiled(k * span, span);
  return residual;
}

Decisions decode_lower(const Eigen::VectorXd& residual, const PnSequence& pn, const SystemConfig& cfg) {
  return despread(residual, pn, lower_span(cfg));
}

DecodedOutput decode_burst(const Eigen::VectorXd& received, const PnSequence& pn, const SystemConfig& cfg,
                           double p_s, const SicOptions& opts) {
  const auto g = spreading_gains(cfg);
  const Eigen::Index len = received.size();
  if (len == 0 || len % g.mul != 0) throw Error(ErrorCode::LengthMismatch, "received length not whole symbols");
  const Eigen::Index tau = ((opts.delay_chips % len) + len) % len;
  Eigen::VectorXd aligned(len);
  aligned.head(len - tau) = received.tail(len - tau);
  aligned.tail(tau) = received.head(tau);

  DecodedOutput out;
  auto s1 = decode_higher(aligned, pn, cfg);
  out.trace.stage1_statistics = s1.statistics;
  out.trace.stage1_decisions = s1.symbols;
  const Symbols& cancel = opts.genie_stage1 ? *opts.genie_stage1 : s1.symbols;
  if (cancel.size() != s1.symbols.size()) throw Error(ErrorCode::LengthMismatch, "genie length");
  const Eigen::VectorXd residual = reconstruct_and_cancel(aligned, cancel, pn, cfg, p_s);
  out.trace.residual_power = residual.squaredNorm() / static_cast<double>(len);
  auto s2 = decode_lower(residual, pn, cfg);
  out.trace.stage2_statistics = s2.statistics;
  out.trace.stage2_decisions = s2.symbols;
  assemble(out, cfg, len / g.mul);
  return out;
}

Eigen::VectorXd span_statistics(const Eigen::VectorXd& aligned, const PnSequence& pn, const SystemConfig& cfg) {
  const auto g = spreading_gains(cfg);
  const Eigen::Index n = aligned.size() / g.uni;
  Eigen::VectorXd x(n);
  for (Eigen::Index j = 0; j < n; ++j) x[j] = correlate(aligned, pn, j * g.uni, g.uni);
  return x;
}

DecodedOutput decode_spans(const Eigen::VectorXd& spans, const SystemConfig& cfg, double p_s,
                           const std::optional<Symbols>& genie_stage1) {
  const auto g = spreading_gains(cfg);
  const int m = g.mul / g.uni;
  const Eigen::Index n_uni = spans.size();
  if (n_uni % m != 0) throw Error(ErrorCode::LengthMismatch, "span count not a multiple of M");
  const Eigen::Index n_mul = n_uni / m;
  DecodedOutput out;
  auto& t = out.trace;
  if (cfg.scenario == Scenario::MoInac) {
    t.stage1_statistics = spans.reshaped(m, n_mul).colwise().sum().transpose();
    t.stage1_decisions = t.stage1_statistics.unaryExpr([](double v) { return decide(v); });
    const Symbols& cancel = genie_stage1 ? *genie_stage1 : t.stage1_decisions;
    const double c = g.uni * std::sqrt(2.0 * p_s * cfg.beta1);
    t.stage2_statistics.resize(n_uni);
    for (Eigen::Index j = 0; j < n_uni; ++j) t.stage2_statistics[j] = spans[j] - c * cancel[j / m];
  } else {
    t.stage1_statistics = spans;
    t.stage1_decisions = spans.unaryExpr([](double v) { return decide(v); });
    const Symbols& cancel = genie_stage1 ? *genie_stage1 : t.stage1_decisions;
    const double c = g.uni * std::sqrt(2.0 * p_s * cfg.beta2);
    const Eigen::VectorXd r = spans - c * cancel.cast<double>();
    t.stage2_statistics = r.reshaped(m, n_mul).colwise().sum().transpose();
  }
  t.stage2_decisions = t.stage2_statistics.unaryExpr([](double v) { return decide(v); });
  assemble(out, cfg, n_mul);
  return out;
}

void write_trace_csv(std::ostream& os, const DecodedOutput& out, const SymbolStreams& truth,
                     const SystemConfig& cfg) {
  const Symbols mul = compose_multicast(truth);
  const bool mo = cfg.scenario == Scenario::MoInac;
  const Symbols& t1 = mo ? mul : truth.uni;
  const Symbols& t2 = mo ? truth.uni : mul;
  os << "symbol_index,stage,statistic,decision,truth\n";
  os.precision(17);
  for (Eigen::Index k = 0; k < out.trace.stage1_decisions.size(); ++k)
    os << k << ",1," << out.trace.stage1_statistics[k] << ',' << out.trace.stage1_decisions[k] << ','
       << (k < t1.size() ? t1[k] : 0) << '\n';
  for (Eigen::Index k = 0; k < out.trace.stage2_decisions.size(); ++k)
    os << k << ",2," << out.trace.stage2_statistics[k] << ',' << out.trace.stage2_decisions[k] << ','
       << (k < t2.size() ? t2[k] : 0) << '\n';
}

}  // namespace inac
