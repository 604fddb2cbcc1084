//! Scalar quantizers for the articulation script.
//!
//! Conventions differ on purpose: box coordinates use floor (min) / ceil
//! (max) so the dequantized box always contains the original, while joint
//! origins and limits round to nearest.

use std::f64::consts::PI;

/// Position bins: coordinates in [-1, 1] map to bin indices 0..=128.
pub const POS_BIN_MAX: u32 = 128;
/// Rotation-limit bins: angles in [-2π, 2π] map to 0..=48.
pub const ROT_BIN_MAX: u32 = 48;
/// Translation-limit bins: distances in [-2, 2] map to 0..=64.
pub const TRANS_BIN_MAX: u32 = 64;

fn clamp(v: f64, lo: f64, hi: f64) -> f64 {
    v.max(lo).min(hi)
}

/// True when a coordinate/limit is outside its quantizer domain and will be
/// clamped; callers surface this as a warning.
pub fn pos_out_of_range(c: f64) -> bool {
    !(-1.0..=1.0).contains(&c)
}

pub fn rot_out_of_range(theta: f64) -> bool {
    theta.abs() > 2.0 * PI
}

pub fn trans_out_of_range(d: f64) -> bool {
    d.abs() > 2.0
}

/// Box minimum coordinate: `floor((c + 1)/2 · 128)`.
pub fn quantize_box_min(c: f64) -> u32 {
    let c = clamp(c, -1.0, 1.0);
    (((c + 1.0) / 2.0 * 128.0).floor() as u32).min(POS_BIN_MAX)
}

/// Box maximum coordinate: `ceil((c + 1)/2 · 128)`.
pub fn quantize_box_max(c: f64) -> u32 {
    let c = clamp(c, -1.0, 1.0);
    (((c + 1.0) / 2.0 * 128.0).ceil() as u32).min(POS_BIN_MAX)
}

/// Bin edge `2k/128 - 1`; shared by box coordinates and joint origins.
pub fn dequantize_pos(bin: u32) -> f64 {
    bin as f64 * 2.0 / 128.0 - 1.0
}

/// Joint origin coordinate: round to nearest of the 128-bin grid.
pub fn quantize_origin(c: f64) -> u32 {
    let c = clamp(c, -1.0, 1.0);
    (((c + 1.0) / 2.0 * 128.0).round() as u32).min(POS_BIN_MAX)
}

/// Rotation limit in radians over [-2π, 2π] into 48 bins, round to nearest.
pub fn quantize_rot_limit(theta: f64) -> u32 {
    let theta = clamp(theta, -2.0 * PI, 2.0 * PI);
    (((theta + 2.0 * PI) / (4.0 * PI) * 48.0).round() as u32).min(ROT_BIN_MAX)
}

pub fn dequantize_rot_limit(bin: u32) -> f64 {
    -2.0 * PI + bin as f64 * (4.0 * PI) / 48.0
}

/// Translation limit over [-2, 2] into 64 bins, round to nearest.
pub fn quantize_trans_limit(d: f64) -> u32 {
    let d = clamp(d, -2.0, 2.0);
    (((d + 2.0) / 4.0 * 64.0).round() as u32).min(TRANS_BIN_MAX)
}

pub fn dequantize_trans_limit(bin: u32) -> f64 {
    -2.0 + bin as f64 * 4.0 / 64.0
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn box_min_matches_hand_values() {
        assert_eq!(quantize_box_min(0.39), 88); // floor(88.96)
        assert_eq!(quantize_box_min(-1.0), 0);
        assert_eq!(quantize_box_max(1.0), 128);
        assert_eq!(quantize_box_min(0.0), 64);
        assert_eq!(quantize_box_max(0.0), 64);
    }

    #[test]
    fn pos_dequantize_is_bin_edge() {
        assert!((dequantize_pos(88) - 0.375).abs() < 1e-15);
        assert_eq!(dequantize_pos(0), -1.0);
        assert_eq!(dequantize_pos(128), 1.0);
    }

    #[test]
    fn rot_limit_matches_supplement_bins() {
        use std::f64::consts::{FRAC_PI_2, PI};
        assert_eq!(quantize_rot_limit(0.0), 24);
        assert_eq!(quantize_rot_limit(FRAC_PI_2), 30);
        assert_eq!(quantize_rot_limit(-FRAC_PI_2), 18);
        assert_eq!(quantize_rot_limit(-2.0 * PI), 0);
        assert_eq!(quantize_rot_limit(2.0 * PI), 48);
    }

    #[test]
    fn trans_limit_matches_supplement_bins() {
        assert_eq!(quantize_trans_limit(0.0), 32);
        assert_eq!(quantize_trans_limit(0.3717), 38); // round(37.9472)
        assert!((dequantize_trans_limit(38) - 0.375).abs() < 1e-15);
    }

    #[test]
    fn origin_round_to_nearest() {
        assert_eq!(quantize_origin(0.0), 64);
        assert_eq!(quantize_origin(0.24), 79); // round(79.36)
        assert_eq!(quantize_origin(-1.0), 0);
        assert_eq!(quantize_origin(1.0), 128);
    }

    #[test]
    fn out_of_range_predicates() {
        assert!(pos_out_of_range(1.0001));
        assert!(!pos_out_of_range(-1.0));
        assert!(rot_out_of_range(7.0));
        assert!(trans_out_of_range(-2.5));
    }

    proptest! {
        #[test]
        fn box_round_trip_contains_and_is_fixpoint(c_min in -1.0f64..1.0, span in 0.0f64..0.5) {
            let c_max = (c_min + span).min(1.0);
            let (qmin, qmax) = (quantize_box_min(c_min), quantize_box_max(c_max));
            prop_assert!(qmin <= qmax);
            let (dmin, dmax) = (dequantize_pos(qmin), dequantize_pos(qmax));
            prop_assert!(dmin <= c_min + 1e-12);
            prop_assert!(dmax >= c_max - 1e-12);
            prop_assert!((c_min - dmin).abs() <= 2.0 / 128.0 + 1e-12);
            // quantize ∘ dequantize ∘ quantize is a fixpoint
            prop_assert_eq!(quantize_box_min(dmin), qmin);
            prop_assert_eq!(quantize_box_max(dmax), qmax);
        }

        #[test]
        fn rot_round_trip_half_bin(theta in -6.283f64..6.283) {
            let bin = quantize_rot_limit(theta);
            let back = dequantize_rot_limit(bin);
            prop_assert!((back - theta).abs() <= std::f64::consts::PI / 48.0 + 1e-12);
        }

        #[test]
        fn trans_round_trip_half_bin(d in -2.0f64..2.0) {
            let bin = quantize_trans_limit(d);
            let back = dequantize_trans_limit(bin);
            prop_assert!((back - d).abs() <= 1.0 / 32.0 + 1e-12);
        }

        #[test]
        fn origin_round_trip_half_bin(c in -1.0f64..1.0) {
            let bin = quantize_origin(c);
            let back = dequantize_pos(bin);
            prop_assert!((back - c).abs() <= 1.0 / 128.0 + 1e-12);
        }
    }
}
