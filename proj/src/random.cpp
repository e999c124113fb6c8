#include "zslq/random.hpp"

namespace zslq {

RandomStream::RandomStream(std::uint64_t seed, std::uint64_t stream) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed),
                    static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(stream),
                    static_cast<std::uint32_t>(stream >> 32)};
  engine_.seed(seq);
}

Vector RandomStream::normal(Eigen::Index size) {
  Vector g(size);
  for (Eigen::Index i = 0; i < size; ++i) g(i) = normal();
  return g;
}

}  // namespace zslq
