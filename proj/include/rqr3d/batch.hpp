// SPDX-License-Identifier: Apache-2.0
// Batch codec kernels. The parallel versions split work across
// thread_budget() OpenMP threads; each element is computed independently, so
// outputs are bit-identical to the serial references at any thread count.
#pragma once

#include <span>
#include <vector>

#include "rqr3d/codec.hpp"

namespace rqr3d {

std::vector<Rqr3dTargets> encode_batch(std::span<const OrientedBox3D> boxes);
std::vector<Rqr3dTargets> encode_batch_serial(std::span<const OrientedBox3D> boxes);

std::vector<OrientedBox3D> decode_batch(std::span<const Rqr3dTargets> targets);
std::vector<OrientedBox3D> decode_batch_serial(std::span<const Rqr3dTargets> targets);

std::vector<CornerSet3D> reconstruct_batch(std::span<const Rqr3dTargets> targets);
std::vector<CornerSet3D> reconstruct_batch_serial(std::span<const Rqr3dTargets> targets);

}  // namespace rqr3d
