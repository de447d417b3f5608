// SPDX-License-Identifier: Apache-2.0
#pragma once

namespace rqr3d {

// Worker count for parallel kernels: the RQR3D_THREADS environment variable
// when set (clamped to [1, 256]), otherwise the OpenMP default. Always 1
// when built without OpenMP.
int thread_budget();

}  // namespace rqr3d
