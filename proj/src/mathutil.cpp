#include "ackmod/mathutil.hpp"

#include <utility>

namespace ackmod {

std::optional<uint64_t> mod_inverse(uint64_t a, uint64_t n) {
  if (n == 1) return 0;
  __int128 t = 0, new_t = 1;
  __int128 r = n, new_r = a % n;
  while (new_r != 0) {
    __int128 q = r / new_r;
    t -= q * new_t;
    std::swap(t, new_t);
    r -= q * new_r;
    std::swap(r, new_r);
  }
  if (r != 1) return std::nullopt;
  if (t < 0) t += n;
  return static_cast<uint64_t>(t);
}

}  // namespace ackmod
