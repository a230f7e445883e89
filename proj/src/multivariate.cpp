#include "critshuffle/multivariate.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <stdexcept>
#include <unordered_map>

#include "critshuffle/special_functions.hpp"

namespace critshuffle {

void ChannelSpec::validate() const {
  const std::size_t d = alphabet.size();
  if (d < 2) throw std::invalid_argument("channel: alphabet needs at least two symbols");
  if (alpha0.size() != d || alpha1.size() != d)
    throw std::invalid_argument("channel: intensity vectors must match the alphabet size");
  for (std::size_t y = 0; y < d; ++y) {
    if (!(alpha0[y] >= 0.0) || !std::isfinite(alpha0[y]) || !(alpha1[y] >= 0.0) || !std::isfinite(alpha1[y]))
      throw std::invalid_argument("channel: intensities must be finite and >= 0");
  }
  if (!(pi >= 0.0 && pi <= 1.0)) throw std::invalid_argument("channel: pi outside [0,1]");
  if (mode == ChannelMode::single_dominant) {
    if (y0 >= d || y1 >= d) throw std::invalid_argument("channel: dominant output outside alphabet");
    if (y0 == y1) throw std::invalid_argument("channel: y0 and y1 must differ");
    return;
  }
  for (auto y : {pair0[0], pair0[1], pair1[0], pair1[1]})
    if (y >= d) throw std::invalid_argument("channel: dominant pair outside alphabet");
  if (pair0[0] == pair0[1] || pair1[0] == pair1[1]) throw std::invalid_argument("channel: a dominant pair needs two distinct outputs");
  for (auto a : pair0)
    for (auto b : pair1)
      if (a == b) throw std::invalid_argument("channel: overlapping dominant pairs are not supported");
  if (!(split0 >= 0.0 && split0 <= 1.0) || !(split1 >= 0.0 && split1 <= 1.0))
    throw std::invalid_argument("channel: splits must lie in [0,1]");
}

bool ChannelSpec::is_dominant(int row, std::size_t y) const {
  if (mode == ChannelMode::single_dominant) return y == (row == 0 ? y0 : y1);
  const auto& pr = row == 0 ? pair0 : pair1;
  return y == pr[0] || y == pr[1];
}

double ChannelSpec::rare_intensity(int row, std::size_t y) const {
  if (is_dominant(row, y)) return 0.0;
  return row == 0 ? alpha0[y] : alpha1[y];
}

double ChannelSpec::total_rare_intensity(int row) const {
  double s = 0.0;
  for (std::size_t y = 0; y < alphabet.size(); ++y) s += rare_intensity(row, y);
  return s;
}

ChannelSpec to_channel_spec(const IntensitySpec& spec) {
  spec.validate();
  ChannelSpec c;
  c.alphabet = spec.alphabet;
  c.mode = ChannelMode::single_dominant;
  c.y0 = spec.y0;
  c.y1 = spec.y1;
  c.alpha0 = spec.alpha0;
  c.alpha1 = spec.alpha1;
  c.pi = spec.pi;
  return c;
}

IntensitySpec to_intensity_spec(const ChannelSpec& spec) {
  if (spec.mode != ChannelMode::single_dominant) throw std::invalid_argument("to_intensity_spec: needs a single-dominant channel");
  IntensitySpec s;
  s.alphabet = spec.alphabet;
  s.y0 = spec.y0;
  s.y1 = spec.y1;
  s.alpha0 = spec.alpha0;
  s.alpha1 = spec.alpha1;
  s.alpha0[s.y0] = 0.0;
  s.alpha1[s.y1] = 0.0;
  s.pi = spec.pi;
  return s;
}

SparseChannel channel_from_intensities(const ChannelSpec& spec, std::int64_t n) {
  spec.validate();
  if (n < 1) throw std::invalid_argument("channel: n must be >= 1");
  SparseChannel ch;
  ch.spec = spec;
  ch.n = n;
  const std::size_t d = spec.alphabet.size();
  const double nd = static_cast<double>(n);
  for (int row = 0; row < 2; ++row) {
    auto& w = row == 0 ? ch.w0 : ch.w1;
    w.assign(d, 0.0);
    const double lam = spec.total_rare_intensity(row);
    if (lam > nd) throw std::invalid_argument("channel: n too small for the intensities");
    for (std::size_t y = 0; y < d; ++y) w[y] = spec.rare_intensity(row, y) / nd;
    const double rest = 1.0 - lam / nd;
    if (spec.mode == ChannelMode::single_dominant) {
      w[row == 0 ? spec.y0 : spec.y1] = rest;
    } else {
      const auto& pr = row == 0 ? spec.pair0 : spec.pair1;
      const double split = row == 0 ? spec.split0 : spec.split1;
      w[pr[0]] = split * rest;
      w[pr[1]] = (1.0 - split) * rest;
    }
  }
  return ch;
}

SparseChannel channel_from_intensities(const IntensitySpec& spec, std::int64_t n) {
  return channel_from_intensities(to_channel_spec(spec), n);
}

namespace {

__extension__ typedef unsigned __int128 Key;
constexpr int kBitsPerCoord = 21;

struct KeyHash {
  std::size_t operator()(Key k) const {
    auto lo = static_cast<std::uint64_t>(k);
    auto hi = static_cast<std::uint64_t>(k >> 64);
    std::uint64_t z = lo ^ (hi * 0x9E3779B97F4A7C15ULL);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return static_cast<std::size_t>(z ^ (z >> 31));
  }
};

Key pack(const std::vector<std::int64_t>& counts) {
  Key k = 0;
  for (std::size_t i = 0; i < counts.size(); ++i) k |= static_cast<Key>(counts[i]) << (kBitsPerCoord * i);
  return k;
}

std::vector<std::int64_t> unpack(Key k, std::size_t d) {
  std::vector<std::int64_t> out(d);
  const Key mask = (Key(1) << kBitsPerCoord) - 1;
  for (std::size_t i = 0; i < d; ++i) out[i] = static_cast<std::int64_t>((k >> (kBitsPerCoord * i)) & mask);
  return out;
}

struct GroupLaw {
  std::vector<std::pair<Key, double>> entries;
  double tail = 0.0;
};

// law of the histogram of m users sharing row `row`
GroupLaw group_law(const SparseChannel& ch, int row, std::int64_t m, int rare_cap) {
  const auto& spec = ch.spec;
  const auto& w = row == 0 ? ch.w0 : ch.w1;
  const std::size_t d = spec.alphabet.size();
  std::vector<std::size_t> rare;
  double p_rare = 0.0;
  for (std::size_t y = 0; y < d; ++y) {
    if (!spec.is_dominant(row, y) && w[y] > 0.0) {
      rare.push_back(y);
      p_rare += w[y];
    }
  }
  GroupLaw law;
  std::vector<std::int64_t> counts(d, 0);
  double total = 0.0;
  const std::int64_t cap = std::min<std::int64_t>(rare_cap, m);

  auto emit_dominant = [&](std::int64_t left, double weight) {
    if (spec.mode == ChannelMode::single_dominant) {
      const std::size_t dom = row == 0 ? spec.y0 : spec.y1;
      counts[dom] = left;
      law.entries.emplace_back(pack(counts), weight);
      total += weight;
      counts[dom] = 0;
      return;
    }
    const auto& pr = row == 0 ? spec.pair0 : spec.pair1;
    const double split = row == 0 ? spec.split0 : spec.split1;
    for (std::int64_t x = 0; x <= left; ++x) {
      const double wx = weight * binomial_pmf(x, left, split);
      if (wx == 0.0) continue;
      counts[pr[0]] = x;
      counts[pr[1]] = left - x;
      law.entries.emplace_back(pack(counts), wx);
      total += wx;
    }
    counts[pr[0]] = 0;
    counts[pr[1]] = 0;
  };

  // recursion over rare letters; log weight carries L!/prod r! prod (w/p)^r
  std::function<void(std::size_t, std::int64_t, double)> rec = [&](std::size_t i, std::int64_t used, double logw) {
    if (i == rare.size()) {
      const double base = binomial_pmf(used, m, p_rare);
      if (base == 0.0) return;
      const double weight = base * std::exp(std::lgamma(static_cast<double>(used) + 1.0) + logw);
      if (weight == 0.0) return;
      emit_dominant(m - used, weight);
      return;
    }
    const std::size_t y = rare[i];
    const double lr = std::log(w[y] / p_rare);
    for (std::int64_t r = 0; r <= cap && used + r <= m; ++r) {
      counts[y] = r;
      rec(i + 1, used + r, logw - std::lgamma(static_cast<double>(r) + 1.0) + static_cast<double>(r) * lr);
    }
    counts[y] = 0;
  };
  rec(0, 0, 0.0);
  law.tail = std::max(0.0, 1.0 - total);
  return law;
}

LatticeDist centred_law(const GroupLaw& a, const GroupLaw& b, std::size_t d, const std::vector<std::int64_t>& centre) {
  std::unordered_map<Key, double, KeyHash> acc;
  acc.reserve(a.entries.size() * 4);
  for (const auto& [ka, wa] : a.entries)
    for (const auto& [kb, wb] : b.entries) acc[ka + kb] += wa * wb;  // coordinates never carry across fields
  LatticeDist::Map out;
  for (const auto& [k, w] : acc) {
    auto counts = unpack(k, d);
    for (std::size_t i = 0; i < d; ++i) counts[i] -= centre[i];
    out.emplace(integer_point(counts), w);
  }
  return LatticeDist(d, std::move(out), std::min(1.0, a.tail + b.tail));
}

}  // namespace

LatticeExperiment exact_histogram_pair(const SparseChannel& channel, std::int64_t k, int rare_cap) {
  const auto& spec = channel.spec;
  const std::size_t d = spec.alphabet.size();
  const std::int64_t n = channel.n;
  if (d > kMaxHistogramAlphabet) throw std::invalid_argument("exact_histogram_pair: alphabet larger than the enumeration guard");
  if (k < 0 || k >= n) throw std::invalid_argument("exact_histogram_pair: k must lie in {0, ..., n-1}");
  if (rare_cap < 1) throw std::invalid_argument("exact_histogram_pair: rare_cap must be >= 1");
  if (spec.mode == ChannelMode::two_dominant && n > kMaxTwoDominantN)
    throw std::invalid_argument("exact_histogram_pair: two-dominant enumeration is limited to n <= 128");
  if (n >= (std::int64_t{1} << kBitsPerCoord)) throw std::invalid_argument("exact_histogram_pair: n too large to enumerate");

  const std::size_t dom0 = spec.mode == ChannelMode::single_dominant ? spec.y0 : spec.pair0[0];
  const std::size_t dom1 = spec.mode == ChannelMode::single_dominant ? spec.y1 : spec.pair1[0];
  std::vector<std::int64_t> centre(d, 0);
  centre[dom0] += n - k;
  centre[dom1] += k;

  LatticeDist p = centred_law(group_law(channel, 0, n - k, rare_cap), group_law(channel, 1, k, rare_cap), d, centre);
  LatticeDist q = centred_law(group_law(channel, 0, n - k - 1, rare_cap), group_law(channel, 1, k + 1, rare_cap), d, centre);
  if (p.tail_mass() > 1e-9 || q.tail_mass() > 1e-9)
    throw std::runtime_error("exact_histogram_pair: truncated mass exceeds 1e-9; raise rare_cap");
  return {std::move(p), std::move(q)};
}

}  // namespace critshuffle
