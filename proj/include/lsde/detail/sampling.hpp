#pragma once

#include <random>

namespace lsde {

template <class Rng>
Vec sample_point(const SampleBox& box, Rng& rng)
{
    Vec x(box.lo.size());
    for (Eigen::Index i = 0; i < x.size(); ++i) {
        std::uniform_real_distribution<double> u(box.lo[i], box.hi[i]);
        x[i] = u(rng);
    }
    return x;
}

}  // namespace lsde
