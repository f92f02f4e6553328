#include "dpl/random.hpp"

#include "dpl/error.hpp"

namespace dpl {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

Rng Rng::derived(std::uint64_t seed, std::uint64_t index) {
  return Rng(splitmix64(splitmix64(seed) ^ splitmix64(index + 0x632be59bd9b4e019ULL)));
}

std::int64_t Rng::uniform(std::int64_t lo, std::int64_t hi) {
  if (hi < lo) throw Error(ErrorKind::kPreconditionViolated, "uniform: empty range");
  auto span = static_cast<std::uint64_t>(hi - lo) + 1;
  if (span == 0) return static_cast<std::int64_t>(next());
  // Rejection sampling keeps the draw exact and portable.
  std::uint64_t limit = UINT64_MAX - UINT64_MAX % span;
  std::uint64_t r;
  do {
    r = next();
  } while (r >= limit);
  return lo + static_cast<std::int64_t>(r % span);
}

double Rng::unit() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

Pmf random_pmf(Rng& rng, const PmfSampler& s) {
  if (s.max_width < 1 || s.resolution < 1) {
    throw Error(ErrorKind::kConfigError, "sampler needs max_width >= 1 and resolution >= 1");
  }
  auto width = rng.uniform(1, s.max_width);
  Point offset = rng.uniform(s.offset_lo, s.offset_hi);
  std::vector<Rational> w(static_cast<std::size_t>(width));
  long total = 0;
  for (std::size_t i = 0; i < w.size(); ++i) {
    long v = rng.uniform(1, s.resolution);
    bool interior = i > 0 && i + 1 < w.size();
    if (interior && s.hole_probability > 0.0 && rng.coin(s.hole_probability)) v = 0;
    w[i] = v;
    total += v;
  }
  for (auto& m : w) m /= total;
  return Pmf::make(offset, std::move(w));
}

Rational random_unit_rational(Rng& rng, std::int64_t resolution) {
  Rational q(mpz_class(rng.uniform(1, resolution)), mpz_class(resolution));
  q.canonicalize();
  return q;
}

}  // namespace dpl
