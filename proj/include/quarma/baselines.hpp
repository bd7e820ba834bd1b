// Copyright (c) 2026 The quarma Authors. All rights reserved.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include "quarma/learners.hpp"

namespace quarma {

enum class BaselineVariant { ogd, ons };

// Four independent univariate real AR(p+m) learners, one per quaternion
// component; the per-step loss is the sum of the four squared component
// errors, commensurate with the quaternion squared loss. Coefficients are
// clamped to [-c, c].
RunResult run_componentwise(BaselineVariant variant, const QuatVector& series, const HyperParams& params,
                            const DecisionSet& set);

// Vector AR over real 4-vectors: xhat_t = sum M_i x_{t-i} with p+m dense
// 4 x 4 matrices learned jointly (16 (p+m) parameters). Each M_i is projected
// onto the Frobenius ball of radius 2c, the image of the modulus-c quaternion
// ball under the left-multiplication representation.
RunResult run_multichannel(BaselineVariant variant, const QuatVector& series, const HyperParams& params,
                           const DecisionSet& set);

// Real 4 x 4 left-multiplication representation L(q): L(q) r_x = r_{q x}.
// Column order follows the (a, b, c, d) coordinate convention.
void left_mult_matrix(const Quat& q, double out[16]);

}  // namespace quarma
