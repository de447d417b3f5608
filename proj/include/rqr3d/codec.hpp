// SPDX-License-Identifier: Apache-2.0
// Rotation-robust regression targets for oriented BEV boxes.
//
// A box is encoded as its encapsulating axis-aligned rectangle plus a small
// set of keypoint quantities measured on that rectangle:
//   u, v        shortest distances from the AABB's corners to the box
//               vertices touching the bottom edge (u, along x) and the right
//               edge (v, along y)
//   amin_u/v    which AABB corner each distance is measured from (0 = the
//               min corner, 1 = the max corner); learned as soft scores and
//               binarized at 0.5
//   d_x, d_y    vector from the box center to the midpoint of the front edge
//   z_ctr, h    vertical center and height, copied through
// Everything a detector regresses is either a length or a bounded offset, so
// the representation has no angular wrap-around.
#pragma once

#include "rqr3d/geometry.hpp"

namespace rqr3d {

struct Rqr3dTargets {
  Aabb2D aabb;
  double u = 0.0;
  double v = 0.0;
  double amin_u = 0.0;
  double amin_v = 0.0;
  double d_x = 0.0;
  double d_y = 0.0;
  double z_ctr = 0.0;
  double h = 1.0;
};

// Offsets re-expressed against the AABB's min corner, after applying the
// binarized selector bits.
struct LocalOffsets {
  double u = 0.0;
  double v = 0.0;
};

// Below this, u and v are treated as exactly zero: the box is axis-aligned
// and the selector bits carry no information (vertex ties break arbitrarily).
inline constexpr double kAxisAlignedTol = 1e-12;

Rqr3dTargets encode(const OrientedBox3D& box);
LocalOffsets reassign_offsets(const Rqr3dTargets& t);
OrientedBox3D decode(const Rqr3dTargets& t);
CornerSet3D reconstruct_corners(const Rqr3dTargets& t);

// Swaps w/l (rotating theta by pi/2) so that w <= l; theta stays wrapped.
OrientedBox3D canonicalize_wl(const OrientedBox3D& box);

}  // namespace rqr3d
