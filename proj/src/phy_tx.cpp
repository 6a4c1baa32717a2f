#include "inac/phy_tx.hpp"

#include <bit>
#include <cmath>
#include <cstring>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>

#include "inac/rng.hpp"

namespace inac {

namespace {

void check_signs(const Symbols& s, const char* name) {
  for (Eigen::Index k = 0; k < s.size(); ++k)
    if (s[k] != 1 && s[k] != -1)
      throw Error(ErrorCode::PayloadLengthMismatch, std::string(name) + " holds a non +-1 symbol");
}

}  // namespace

SymbolStreams generate_streams(const SystemConfig& cfg, std::uint64_t seed,
                               const std::optional<SymbolStreams>& payload) {
  const auto f = frame_layout(cfg);
  if (payload) {
    if (payload->nav.size() != f.k_nav || payload->split_com.size() != f.k_mul || payload->uni.size() != f.k_uni)
      throw Error(ErrorCode::PayloadLengthMismatch,
                  "expected " + std::to_string(f.k_nav) + "/" + std::to_string(f.k_mul) + "/" +
                      std::to_string(f.k_uni) + " symbols");
    check_signs(payload->nav, "nav");
    check_signs(payload->split_com, "split_com");
    check_signs(payload->uni, "uni");
    return *payload;
  }
  rng::Engine eng(rng::substream(seed, rng::Stream::Symbols));
  rng::SignSource sign(eng);
  SymbolStreams s{Symbols(f.k_nav), Symbols(f.k_mul), Symbols(f.k_uni)};
  for (auto* v : {&s.nav, &s.split_com, &s.uni})
    for (Eigen::Index k = 0; k < v->size(); ++k) (*v)[k] = sign();
  return s;
}

Symbols compose_multicast(const SymbolStreams& streams) {
  Symbols m(streams.nav.size() + streams.split_com.size());
  m << streams.nav, streams.split_com;
  return m;
}

Eigen::VectorXd superimpose(const Symbols& multicast, const Symbols& uni, const PnSequence& pn,
                            const SystemConfig& cfg) {
  const auto g = spreading_gains(cfg);
  const int m = g.mul / g.uni;
  if (uni.size() != multicast.size() * m)
    throw Error(ErrorCode::LengthMismatch, "uni-cast length must be M times multi-cast length");
  const double a1 = std::sqrt(cfg.beta1);
  const double a2 = std::sqrt(cfg.beta2);
  Eigen::VectorXd out = pn.tiled(0, multicast.size() * g.mul);
  for (Eigen::Index j = 0; j < uni.size(); ++j) {
    const double v = a1 * multicast[j / m] + a2 * uni[j];
    out.segment(j * g.uni, g.uni) *= v;
  }
  return out;
}

InacBurst make_burst(const SystemConfig& cfg, const PnSequence& pn, std::uint64_t seed,
                     const std::optional<SymbolStreams>& payload) {
  InacBurst b;
  b.streams = generate_streams(cfg, seed, payload);
  b.baseband = superimpose(compose_multicast(b.streams), b.streams.uni, pn, cfg);
  b.cfg = cfg;
  b.seed = seed;
  return b;
}

namespace {

constexpr const char* kMagic = "INACBURST 1";

std::uint64_t to_le(std::uint64_t x) {
  if constexpr (std::endian::native == std::endian::little) return x;
  return __builtin_bswap64(x);
}

}  // namespace

void write_burst(std::ostream& os, const Eigen::VectorXd& samples, double chip_rate, std::uint64_t seed) {
  std::ostringstream hdr;
  hdr.precision(17);
  hdr << kMagic << "\nlength " << samples.size() << "\nchip_rate " << chip_rate << "\nseed " << seed << "\ndata\n";
  os << hdr.str();
  for (Eigen::Index k = 0; k < samples.size(); ++k) {
    std::uint64_t bits = to_le(std::bit_cast<std::uint64_t>(samples[k]));
    os.write(reinterpret_cast<const char*>(&bits), sizeof bits);
  }
}

BurstFile read_burst(std::istream& is) {
  std::string line;
  if (!std::getline(is, line) || line != kMagic) throw Error(ErrorCode::ConfigInvalid, "not a burst file");
  BurstFile f;
  Eigen::Index n = -1;
  while (std::getline(is, line) && line != "data") {
    std::istringstream ls(line);
    std::string key;
    ls >> key;
    if (key == "length") ls >> n;
    else if (key == "chip_rate") ls >> f.chip_rate;
    else if (key == "seed") ls >> f.seed;
  }
  if (n < 0) throw Error(ErrorCode::ConfigInvalid, "burst header lacks length");
  f.samples.resize(n);
  for (Eigen::Index k = 0; k < n; ++k) {
    std::uint64_t bits = 0;
    if (!is.read(reinterpret_cast<char*>(&bits), sizeof bits))
      throw Error(ErrorCode::LengthMismatch, "burst data truncated");
    f.samples[k] = std::bit_cast<double>(to_le(bits));
  }
  return f;
}

}  // namespace inac
