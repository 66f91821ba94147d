// SPDX-License-Identifier: Apache-2.0
//
// fusecs: fused compressed sensing over fusion frames
// Copyright (C) 2026 The fusecs authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------

#include "fusecs/pipeline.hpp"
#include "fusecs/random.hpp"

#include <cmath>

namespace fusecs
{

SyntheticMeasurements synthesize_measurements(const SignalVector &x, const SensingMatrix &a, const FusionFrame &frame,
                                              const NoiseSpec &noise)
{
    if (x.size() != a.cols() || frame.ambient_dim() != a.cols())
        throw DimensionError("synthesize_measurements: signal, matrix and frame disagree on N");
    const Index n = frame.size();
    const Index m = a.rows();
    if (noise.mode == NoiseSpec::Mode::exact_norm)
    {
        if (noise.levels.size() != 1 && static_cast<Index>(noise.levels.size()) != n)
            throw InvalidArgument("synthesize_measurements: give one noise level or one per subspace");
        for (double eta : noise.levels)
            if (!(eta >= 0.0) || !std::isfinite(eta))
                throw InvalidArgument("synthesize_measurements: noise levels must be finite and nonnegative");
    }
    else if (!(noise.sigma >= 0.0) || !std::isfinite(noise.sigma))
    {
        throw InvalidArgument("synthesize_measurements: sigma must be finite and nonnegative");
    }

    SyntheticMeasurements out;
    for (Index i = 0; i < n; ++i)
    {
        Rng rng(derive_seed(noise.seed, static_cast<std::uint64_t>(i)));
        const Vector g = gaussian_vector(m, rng);
        Vector e;
        double bound = 0.0;
        if (noise.mode == NoiseSpec::Mode::exact_norm)
        {
            bound = noise.levels.size() == 1 ? noise.levels[0] : noise.levels[static_cast<std::size_t>(i)];
            const double gn = g.norm();
            e = gn > 0.0 ? Vector(bound / gn * g) : Vector::Zero(m);
        }
        else
        {
            e = noise.sigma * g;
            bound = e.norm();
        }
        out.set.measurements.push_back(a.entries() * frame.projection(i).apply(x.values()) + e);
        out.set.noise_bounds.push_back(bound);
        out.noise.push_back(std::move(e));
    }
    return out;
}

} // namespace fusecs
