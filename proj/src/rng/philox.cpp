#include "mzlab/rng/philox.hpp"

#include <cmath>

namespace mzlab::rng {
namespace {

inline void mulhilo(std::uint64_t a, std::uint64_t b, std::uint64_t& hi,
                    std::uint64_t& lo) {
  const unsigned __int128 prod =
      static_cast<unsigned __int128>(a) * static_cast<unsigned __int128>(b);
  hi = static_cast<std::uint64_t>(prod >> 64);
  lo = static_cast<std::uint64_t>(prod);
}

}  // namespace

std::array<std::uint64_t, 4> Philox4x64::block() const {
  std::array<std::uint64_t, 4> c = counter;
  std::array<std::uint64_t, 2> k = key;
  for (int round = 0; round < 10; ++round) {
    std::uint64_t hi0, lo0, hi1, lo1;
    mulhilo(kMul0, c[0], hi0, lo0);
    mulhilo(kMul1, c[2], hi1, lo1);
    c = {hi1 ^ c[1] ^ k[0], lo1, hi0 ^ c[3] ^ k[1], lo0};
    k[0] += kWeyl0;
    k[1] += kWeyl1;
  }
  return c;
}

void Philox4x64::advance() {
  for (auto& word : counter) {
    if (++word != 0) break;  // ripple carry
  }
}

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

Stream::Stream(std::uint64_t seed, std::uint64_t stream) {
  eng_.key = {splitmix64(seed), splitmix64(seed ^ splitmix64(stream))};
}

std::uint64_t Stream::next_u64() {
  if (pos_ == 4) {
    buf_ = eng_.block();
    eng_.advance();
    pos_ = 0;
  }
  return buf_[pos_++];
}

double Stream::next_unit() {
  // 53-bit mantissa shifted into (0,1); +0.5 keeps both endpoints out.
  return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1p-53;
}

double Stream::next_exponential() { return -std::log(next_unit()); }

double Stream::next_symmetric() { return 2.0 * next_unit() - 1.0; }

}  // namespace mzlab::rng
