#include "raopt/rng.hpp"

#include <cmath>
#include <numbers>

namespace raopt {
namespace {

constexpr std::uint32_t kPhiloxM0 = 0xD2511F53u;
constexpr std::uint32_t kPhiloxM1 = 0xCD9E8D57u;
constexpr std::uint32_t kWeyl0 = 0x9E3779B9u;
constexpr std::uint32_t kWeyl1 = 0xBB67AE85u;

inline void philox_round(std::array<std::uint32_t, 4>& ctr, std::uint32_t k0, std::uint32_t k1) {
  const std::uint64_t p0 = static_cast<std::uint64_t>(kPhiloxM0) * ctr[0];
  const std::uint64_t p1 = static_cast<std::uint64_t>(kPhiloxM1) * ctr[2];
  const std::uint32_t hi0 = static_cast<std::uint32_t>(p0 >> 32);
  const std::uint32_t lo0 = static_cast<std::uint32_t>(p0);
  const std::uint32_t hi1 = static_cast<std::uint32_t>(p1 >> 32);
  const std::uint32_t lo1 = static_cast<std::uint32_t>(p1);
  ctr = {hi1 ^ ctr[1] ^ k0, lo1, hi0 ^ ctr[3] ^ k1, lo0};
}

}  // namespace

std::array<std::uint32_t, 4> CounterRng::block(std::uint64_t index) const {
  std::array<std::uint32_t, 4> ctr = {
      static_cast<std::uint32_t>(index), static_cast<std::uint32_t>(index >> 32), 0u, 0u};
  std::uint32_t k0 = static_cast<std::uint32_t>(seed_);
  std::uint32_t k1 = static_cast<std::uint32_t>(seed_ >> 32);
  for (int round = 0; round < 10; ++round) {
    philox_round(ctr, k0, k1);
    k0 += kWeyl0;
    k1 += kWeyl1;
  }
  return ctr;
}

double CounterRng::uniform(std::uint64_t index) const {
  const auto words = block(index);
  const std::uint64_t bits = (static_cast<std::uint64_t>(words[0]) << 32) | words[1];
  return static_cast<double>(bits >> 11) * 0x1.0p-53;
}

double CounterRng::normal(std::uint64_t index) const {
  const auto words = block(index);
  const std::uint64_t bits0 = (static_cast<std::uint64_t>(words[0]) << 32) | words[1];
  const std::uint64_t bits1 = (static_cast<std::uint64_t>(words[2]) << 32) | words[3];
  // u1 in (0, 1] keeps the log argument positive.
  const double u1 = (static_cast<double>(bits0 >> 11) + 1.0) * 0x1.0p-53;
  const double u2 = static_cast<double>(bits1 >> 11) * 0x1.0p-53;
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

std::uint64_t CounterRng::uniform_int(std::uint64_t index, std::uint64_t bound) const {
  const auto words = block(index);
  const std::uint64_t bits = (static_cast<std::uint64_t>(words[0]) << 32) | words[1];
  return static_cast<std::uint64_t>(
      (static_cast<unsigned __int128>(bits) * bound) >> 64);
}

std::vector<int> RngStream::sample_without_replacement(int n, int k) {
  std::vector<int> pool(n);
  for (int i = 0; i < n; ++i) pool[i] = i;
  for (int j = 0; j < k; ++j) {
    const auto pick = j + static_cast<int>(uniform_int(static_cast<std::uint64_t>(n - j)));
    std::swap(pool[j], pool[pick]);
  }
  std::vector<int> chosen(pool.begin(), pool.begin() + k);
  std::sort(chosen.begin(), chosen.end());
  return chosen;
}

}  // namespace raopt
