// Streams draws from a uniform 3-cube and prints the sequential ball every
// few hundred steps next to the Hoeffding radius at the same t.

#include <cmath>
#include <cstdio>

#include "confseq/distributions.hpp"
#include "confseq/engine.hpp"
#include "confseq/rng.hpp"

using namespace confseq;

int main() {
    const auto dist = DistributionSpec::uniform_cube(3);
    const auto space = SpaceSpec::euclidean(3);
    BoundConfig cfg;
    cfg.b_norm_bound = dist.norm_bound();

    Engine engine(space, cfg, Schedule::sequential(cfg));
    CounterRng rng(7, 0);
    const Vec mu = dist.true_mu();

    std::printf("%8s %12s %12s %12s %8s\n", "t", "radius", "hoeffding", "|center|", "covers");
    for (std::uint64_t t = 1; t <= 20000; ++t) {
        const auto ball = engine.observe(dist.sample(rng));
        if (t == 1 || t % 2000 == 0)
            std::printf("%8llu %12.5f %12.5f %12.5f %8s\n", static_cast<unsigned long long>(t), ball.radius,
                        hoeffding_mean_radius(t, cfg, dist.centered_bound()), norm(space, ball.center),
                        engine.contains(ball, mu) ? "yes" : "no");
    }
}
