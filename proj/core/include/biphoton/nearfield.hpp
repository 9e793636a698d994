#pragma once

#include "biphoton/amplitude.hpp"

namespace biphoton {

// Bilinear resampling of an angle-domain amplitude onto uniform transverse-wavevector
// axes (q = k sin theta per photon), renormalized in the q measure.
JointAmplitude resample_to_wavevector(const JointAmplitude& angle_amp);

// Far field -> near field (transverse positions x_i, x_s in um) by a unitary 2D DFT:
//   psi(x_i, x_s) = dq_i dq_s / (2 pi) * sum F(q_i, q_s) exp(i (q_s x_s - q_i x_i)).
// The idler's sign reflects its opposite-side angle convention, so x_i and x_s are
// both physical coordinates and the correlation stripe lies along x_i = x_s.
// Throws ResolutionError for fewer than 64 points per axis.
JointAmplitude to_near_field(const JointAmplitude& far);

// Inverse of to_near_field; returns a far_field_wavevector amplitude.
JointAmplitude to_far_field(const JointAmplitude& near);

}  // namespace biphoton
