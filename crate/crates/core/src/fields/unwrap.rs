use std::f64::consts::PI;

const TWO_PI: f64 = 2.0 * PI;

/// Sequential 1D unwrap starting at `start` and walking outward in both
/// directions. A `2π` correction is applied only between adjacent valid
/// samples; inside invalid stretches the running offset is carried unchanged.
pub fn unwrap_from(raw: &[f64], valid: &[bool], start: usize) -> Vec<f64> {
    debug_assert_eq!(raw.len(), valid.len());
    let n = raw.len();
    let mut out = vec![0.0; n];
    out[start] = raw[start];

    let mut offset = 0.0;
    for j in start + 1..n {
        step(raw, valid, &mut out, &mut offset, j - 1, j);
    }
    offset = 0.0;
    for j in (0..start).rev() {
        step(raw, valid, &mut out, &mut offset, j + 1, j);
    }
    out
}

#[inline]
fn step(raw: &[f64], valid: &[bool], out: &mut [f64], offset: &mut f64, prev: usize, j: usize) {
    if valid[prev] && valid[j] {
        let d = raw[j] + *offset - out[prev];
        *offset -= TWO_PI * (d / TWO_PI).round();
    }
    out[j] = raw[j] + *offset;
}
