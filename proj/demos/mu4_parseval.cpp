// Frame bounds of the quarter Cantor measure against |mu4'^(k)|^2-weighted
// integers, for growing truncations.

#include <cstdio>

#include "ifsframe/ifsframe.hpp"

int main() {
    using namespace ifsframe;
    AffineIfs mu4(4, {0, 2});
    AffineIfs mu4_prime(4, {0, 1});
    std::printf("%6s %8s %12s %12s\n", "level", "lambda", "A", "B");
    for (std::size_t level = 1; level <= 3; ++level) {
        for (std::int64_t lambda = 64; lambda <= 8192; lambda *= 4) {
            FrameReport rep = frame_bounds(mu4, level, dual_weights(mu4_prime, lambda));
            std::printf("%6zu %8lld %12.8f %12.8f\n", level, static_cast<long long>(lambda), rep.lower,
                        rep.upper);
        }
    }
}
