#include "fpaft/rng.hpp"

namespace fpaft {

std::uint64_t splitmix64(std::uint64_t& state) {
  std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

std::uint64_t substream_seed(std::uint64_t base_seed, std::uint64_t index) {
  std::uint64_t state = base_seed;
  const std::uint64_t mixed = splitmix64(state);
  state = mixed ^ (index * 0xd1b54a32d192ed03ULL);
  return splitmix64(state);
}

}  // namespace fpaft
